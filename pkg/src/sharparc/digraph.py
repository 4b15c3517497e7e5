"""Finite digraphs over dense integer vertices.

Vertices are ``0..n-1``.  Loops and antiparallel arc pairs are allowed; the
arc set has set semantics.  Both out- and in-adjacency are materialized at
construction, and nothing is mutated afterwards.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from sharparc.errors import ConstructionError

Arc = tuple[int, int]
KArc = tuple[int, ...]


class Digraph:
    """Immutable digraph on ``range(vertex_count)``.

    ``labels`` optionally names every vertex with a structured label (e.g. the
    tuple ``(i, x0, ..., xk-1)`` of a quotient vertex); labels play no role in
    equality.
    """

    __slots__ = ("_n", "_arcs", "_arc_set", "_out", "_in", "labels")

    def __init__(self, vertex_count: int, arcs: Iterable[Sequence[int]],
                 labels: Optional[Sequence] = None):
        if vertex_count < 1:
            raise ConstructionError("a digraph needs at least one vertex")
        arc_set = set()
        for arc in arcs:
            u, v = int(arc[0]), int(arc[1])
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ConstructionError(
                    f"arc ({u}, {v}) has an endpoint outside 0..{vertex_count - 1}")
            arc_set.add((u, v))
        if labels is not None and len(labels) != vertex_count:
            raise ConstructionError(
                f"expected {vertex_count} labels, got {len(labels)}")
        out = [[] for _ in range(vertex_count)]
        inc = [[] for _ in range(vertex_count)]
        ordered = tuple(sorted(arc_set))
        for u, v in ordered:
            out[u].append(v)
            inc[v].append(u)
        self._n = vertex_count
        self._arcs = ordered
        self._arc_set = frozenset(arc_set)
        self._out = tuple(tuple(a) for a in out)
        self._in = tuple(tuple(sorted(a)) for a in inc)
        self.labels = tuple(labels) if labels is not None else None

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def arcs(self) -> tuple[Arc, ...]:
        """All arcs in lexicographic order."""
        return self._arcs

    @property
    def arc_set(self) -> frozenset[Arc]:
        return self._arc_set

    def __len__(self) -> int:
        return self._n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self._n == other._n and self._arcs == other._arcs

    def __hash__(self) -> int:
        return hash((self._n, self._arcs))

    def __repr__(self) -> str:
        return f"Digraph(n={self._n}, arcs={len(self._arcs)})"

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self._arc_set

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def out_valency(self, v: int) -> int:
        return len(self._out[v])

    def in_valency(self, v: int) -> int:
        return len(self._in[v])

    def has_loop(self, v: int) -> bool:
        return (v, v) in self._arc_set

    def underlying_neighbors(self, v: int) -> set[int]:
        return set(self._out[v]) | set(self._in[v])

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """The digraph with every vertex ``x`` renamed to ``perm[x]``."""
        return Digraph(self._n, [(perm[u], perm[v]) for u, v in self._arcs])

    def to_json(self) -> dict:
        payload = {"n": self._n, "arcs": [list(a) for a in self._arcs]}
        if self.labels is not None:
            payload["labels"] = [_jsonable_label(lab) for lab in self.labels]
        return payload

    @classmethod
    def from_json(cls, payload: Mapping) -> "Digraph":
        if "n" not in payload or "arcs" not in payload:
            raise ConstructionError("digraph JSON needs 'n' and 'arcs' fields")
        labels = payload.get("labels")
        if labels is not None:
            labels = [tuple(lab) if isinstance(lab, list) else lab for lab in labels]
        return cls(payload["n"], payload["arcs"], labels=labels)

    def to_dot(self, name: str = "G", merge_antiparallel: bool = False) -> str:
        """Graphviz source, one ``->`` edge per arc.

        With ``merge_antiparallel`` each pair of opposite arcs is drawn once
        with ``dir=both``.
        """
        lines = [f"digraph {name} {{"]
        for v in range(self._n):
            if self.labels is not None:
                lines.append(f'  {v} [label="{_label_text(self.labels[v])}"];')
            else:
                lines.append(f"  {v};")
        for u, v in self._arcs:
            if merge_antiparallel and u != v and (v, u) in self._arc_set:
                if u < v:
                    lines.append(f"  {u} -> {v} [dir=both];")
                continue
            lines.append(f"  {u} -> {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _jsonable_label(label):
    if isinstance(label, tuple):
        return [_jsonable_label(x) for x in label]
    return label


def _label_text(label) -> str:
    if isinstance(label, tuple):
        return "(" + ",".join(_label_text(x) for x in label) + ")"
    return str(label)


def build_digraph(vertex_count: int, arcs: Iterable[Sequence[int]]) -> Digraph:
    return Digraph(vertex_count, arcs)


def load_digraph(text: str) -> Digraph:
    return Digraph.from_json(json.loads(text))


def is_connected(g: Digraph) -> bool:
    """True iff the underlying undirected graph is connected."""
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in g.out_neighbors(v) + g.in_neighbors(v):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == g.vertex_count


def components(g: Digraph) -> list[list[int]]:
    """Weakly connected components, each sorted, ordered by smallest vertex."""
    comp = [-1] * g.vertex_count
    result = []
    for start in range(g.vertex_count):
        if comp[start] >= 0:
            continue
        comp[start] = len(result)
        members = [start]
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in g.out_neighbors(v) + g.in_neighbors(v):
                if comp[w] < 0:
                    comp[w] = len(result)
                    members.append(w)
                    queue.append(w)
        result.append(sorted(members))
    return result


def is_bipartite(g: Digraph) -> bool:
    color = [-1] * g.vertex_count
    for start in range(g.vertex_count):
        if color[start] >= 0:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in g.out_neighbors(v) + g.in_neighbors(v):
                if color[w] < 0:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return False
    return True


@dataclass(frozen=True)
class AlternetPartition:
    """Classes of the closure of "shares a tail or shares a head" on arcs."""

    arc_classes: tuple[tuple[Arc, ...], ...]

    @property
    def spanned_subdigraphs(self) -> list[tuple[tuple[int, ...], tuple[Arc, ...]]]:
        """For each class, its sorted vertex set and its arcs."""
        out = []
        for cls in self.arc_classes:
            verts = sorted({x for arc in cls for x in arc})
            out.append((tuple(verts), cls))
        return out

    def __len__(self) -> int:
        return len(self.arc_classes)


def alternets(g: Digraph) -> AlternetPartition:
    arcs = g.arcs
    index = {a: i for i, a in enumerate(arcs)}
    parent = list(range(len(arcs)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb

    for v in range(g.vertex_count):
        outs = [index[(v, w)] for w in g.out_neighbors(v)]
        for i in outs[1:]:
            union(outs[0], i)
        ins = [index[(u, v)] for u in g.in_neighbors(v)]
        for i in ins[1:]:
            union(ins[0], i)

    classes: dict[int, list[Arc]] = {}
    for i, a in enumerate(arcs):
        classes.setdefault(find(i), []).append(a)
    # arcs are visited in sorted order, so dict order is "by smallest arc"
    return AlternetPartition(tuple(tuple(c) for c in classes.values()))


def enumerate_k_arcs(g: Digraph, k: int) -> Iterator[KArc]:
    """Yield every k-arc (directed walk with k arcs) in lexicographic order."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")

    def extend(prefix):
        if len(prefix) == k + 1:
            yield tuple(prefix)
            return
        for w in g.out_neighbors(prefix[-1]):
            prefix.append(w)
            yield from extend(prefix)
            prefix.pop()

    for v in range(g.vertex_count):
        yield from extend([v])


def count_k_arcs(g: Digraph, k: int) -> int:
    """Number of k-arcs, by dynamic programming over walk counts."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    walks = [1] * g.vertex_count
    for _ in range(k):
        walks = [sum(walks[w] for w in g.out_neighbors(v)) for v in range(g.vertex_count)]
    return sum(walks)


def level_map_violation(g: Digraph, levels: Sequence[int] | Mapping[int, int],
                        modulus: Optional[int] = None) -> Optional[Arc]:
    """First arc whose level step is not +1, or ``None`` if the map is valid."""
    for u, v in g.arcs:
        step = levels[v] - levels[u]
        if modulus is None:
            if step != 1:
                return (u, v)
        elif (step - 1) % modulus:
            return (u, v)
    return None


def check_level_map(g: Digraph, levels: Sequence[int] | Mapping[int, int],
                    modulus: Optional[int] = None) -> bool:
    return level_map_violation(g, levels, modulus) is None


def preserves_arcs(g: Digraph, images: Sequence[int]) -> bool:
    """True iff the vertex bijection ``images`` maps the arc set onto itself."""
    if len(images) != g.vertex_count:
        return False
    arc_set = g.arc_set
    return all((images[u], images[v]) in arc_set for u, v in g.arcs)


def is_morphism(source: Digraph, target: Digraph, vertex_map: Sequence[int]) -> bool:
    """True iff every arc of ``source`` maps to an arc of ``target``."""
    return all(target.has_arc(vertex_map[u], vertex_map[v]) for u, v in source.arcs)


@dataclass(frozen=True)
class LeveledDigraph:
    """A digraph together with a level map witnessing Property Z.

    With ``modulus=None`` levels are integers (a finite window of a graph
    mapping onto the directed integer line); otherwise they live in
    ``Z_modulus``.
    """

    graph: Digraph
    levels: tuple[int, ...]
    modulus: Optional[int] = None
    _fibers: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        levels = tuple(int(x) for x in self.levels)
        if len(levels) != self.graph.vertex_count:
            raise ConstructionError("level map must cover every vertex")
        if self.modulus is not None:
            if self.modulus < 1:
                raise ConstructionError("modulus must be positive")
            levels = tuple(x % self.modulus for x in levels)
        object.__setattr__(self, "levels", levels)
        bad = level_map_violation(self.graph, levels, self.modulus)
        if bad is not None:
            raise ConstructionError(
                f"arc {bad} does not step the level by +1 "
                f"(levels {levels[bad[0]]} -> {levels[bad[1]]})")
        fibers: dict[int, list[int]] = {}
        for v, lev in enumerate(levels):
            fibers.setdefault(lev, []).append(v)
        object.__setattr__(self, "_fibers", {lev: tuple(vs) for lev, vs in fibers.items()})

    def fiber(self, level: int) -> tuple[int, ...]:
        if self.modulus is not None:
            level %= self.modulus
        return self._fibers.get(level, ())

    @property
    def level_values(self) -> list[int]:
        return sorted(self._fibers)

    def to_json(self) -> dict:
        payload = self.graph.to_json()
        payload["levels"] = list(self.levels)
        payload["modulus"] = self.modulus
        return payload
