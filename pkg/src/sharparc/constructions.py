"""Digraph families and their named automorphisms.

A vertex ``(i; x_0, ..., x_{k-1})`` of a cyclic quotient or finite window of
the layered construction over a base digraph ``delta`` is stored at a flat
index ``(i - lo) * n**k + sum(x_j * n**(k-1-j))`` (lexicographic order).  The
out-neighbours of ``(i; x)`` are the vertices ``(i+1; y)`` where ``y`` agrees
with ``x`` except in coordinate ``i mod k``, and that coordinate moves along an
arc of ``delta``.

Level arithmetic uses Euclidean remainder and floor division throughout, so
windows at negative levels behave exactly like those at positive ones.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from sharparc.digraph import Digraph, LeveledDigraph, is_morphism, preserves_arcs
from sharparc.errors import ConstructionError, GroupError
from sharparc.perm import Permutation

INFINITY = float("inf")


# ---------------------------------------------------------------- base digraphs

def theta_cycle(n) -> Digraph:
    """Directed n-cycle with a loop at every vertex."""
    if n == INFINITY:
        raise ConstructionError(
            "the infinite loop-line is only available lazily (see growth_ball)")
    if n < 3:
        raise ConstructionError(f"theta_cycle needs n >= 3, got {n}")
    arcs = [(i, i) for i in range(n)] + [(i, (i + 1) % n) for i in range(n)]
    return Digraph(n, arcs)


def complete_digraph(d: int) -> Digraph:
    if d < 2:
        raise ConstructionError(f"complete_digraph needs d >= 2, got {d}")
    return Digraph(d, [(v, w) for v in range(d) for w in range(d) if v != w])


def directed_cycle(n: int) -> Digraph:
    if n < 1:
        raise ConstructionError("directed_cycle needs n >= 1")
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


def directed_path(length: int) -> Digraph:
    return Digraph(length + 1, [(i, i + 1) for i in range(length)])


def complete_with_loops(v: int) -> Digraph:
    if v < 1:
        raise ConstructionError("complete_with_loops needs v >= 1")
    return Digraph(v, [(a, b) for a in range(v) for b in range(v)])


def undirected(vertex_count: int, edges) -> Digraph:
    """Each edge {v, w} becomes the two arcs (v, w) and (w, v)."""
    arcs = []
    for v, w in edges:
        arcs.append((v, w))
        arcs.append((w, v))
    return Digraph(vertex_count, arcs)


def cover_index(x: int, side: int) -> int:
    """Flat index of ``(x, side)`` in a double cover."""
    return 2 * x + side


def _cover_labels(n):
    return [(x, s) for x in range(n) for s in (0, 1)]


def cdc(delta: Digraph) -> Digraph:
    """Canonical double cover on ``V x Z_2``."""
    arcs = []
    for x, y in delta.arcs:
        arcs.append((cover_index(x, 0), cover_index(y, 1)))
        arcs.append((cover_index(x, 1), cover_index(y, 0)))
    return Digraph(2 * delta.vertex_count, arcs, labels=_cover_labels(delta.vertex_count))


def cdhc(delta: Digraph) -> Digraph:
    """Canonical double half-cover: only the arcs from side 0 to side 1."""
    arcs = [(cover_index(x, 0), cover_index(y, 1)) for x, y in delta.arcs]
    return Digraph(2 * delta.vertex_count, arcs, labels=_cover_labels(delta.vertex_count))


# ---------------------------------------------------------------- layered codecs

class _LayerCodec:
    delta: Digraph
    k: int

    @property
    def n(self) -> int:
        return self.delta.vertex_count

    @property
    def fiber_size(self) -> int:
        return self.n ** self.k

    def _coord_index(self, xs: Sequence[int]) -> int:
        idx = 0
        for x in xs:
            idx = idx * self.n + x
        return idx

    def _coords(self, r: int) -> tuple[int, ...]:
        xs = []
        for _ in range(self.k):
            r, x = divmod(r, self.n)
            xs.append(x)
        return tuple(reversed(xs))

    def _fiber_tuples(self):
        return itertools.product(range(self.n), repeat=self.k)

    def _layer_arcs(self, levels: Sequence[int], next_level: Callable[[int], Optional[int]]):
        arcs = []
        for i in levels:
            j = next_level(i)
            if j is None:
                continue
            c = i % self.k
            for xs in self._fiber_tuples():
                src = self.encode(i, xs)
                ys = list(xs)
                for w in self.delta.out_neighbors(xs[c]):
                    ys[c] = w
                    arcs.append((src, self.encode(j, ys)))
        return arcs

    def labels(self) -> list[tuple[int, ...]]:
        return [self.decode(v) for v in range(self.vertex_count)]


@dataclass(frozen=True, eq=False)
class ZQuotientSpec(_LayerCodec):
    """Cyclic quotient with levels in ``Z_q``; also the vertex codec."""

    delta: Digraph
    k: int
    q: int
    leveled: LeveledDigraph = field(default=None, repr=False)

    @property
    def vertex_count(self) -> int:
        return self.q * self.fiber_size

    @property
    def graph(self) -> Digraph:
        return self.leveled.graph

    def encode(self, i: int, xs: Sequence[int]) -> int:
        return (i % self.q) * self.fiber_size + self._coord_index(xs)

    def decode(self, v: int) -> tuple[int, ...]:
        i, r = divmod(v, self.fiber_size)
        return (i,) + self._coords(r)

    def level(self, v: int) -> int:
        return v // self.fiber_size

    def descriptor(self) -> dict:
        return {"family": "z_quotient", "delta": self.delta.to_json(), "k": self.k, "q": self.q}


@dataclass(frozen=True, eq=False)
class ZWindowSpec(_LayerCodec):
    """Finite window on levels ``lo..hi`` (no wraparound)."""

    delta: Digraph
    k: int
    lo: int
    hi: int
    leveled: LeveledDigraph = field(default=None, repr=False)

    @property
    def vertex_count(self) -> int:
        return (self.hi - self.lo + 1) * self.fiber_size

    @property
    def graph(self) -> Digraph:
        return self.leveled.graph

    def encode(self, i: int, xs: Sequence[int]) -> int:
        if not self.lo <= i <= self.hi:
            raise ConstructionError(f"level {i} outside window [{self.lo}, {self.hi}]")
        return (i - self.lo) * self.fiber_size + self._coord_index(xs)

    def decode(self, v: int) -> tuple[int, ...]:
        i, r = divmod(v, self.fiber_size)
        return (i + self.lo,) + self._coords(r)

    def level(self, v: int) -> int:
        return v // self.fiber_size + self.lo

    def descriptor(self) -> dict:
        return {"family": "z_window", "delta": self.delta.to_json(), "k": self.k,
                "lo": self.lo, "hi": self.hi}


def z_quotient(delta: Digraph, k: int, q: int) -> ZQuotientSpec:
    """Quotient of the layered construction by the ``q``-th power of the shift."""
    if k < 1:
        raise ConstructionError(f"k must be positive, got {k}")
    if q < 1 or q % k:
        raise ConstructionError(f"q={q} must be a positive multiple of k={k}")
    if q < k + 2:
        warnings.warn(
            f"q={q} < k+2: the window of k+2 consecutive levels does not embed "
            "in this quotient", stacklevel=2)
    spec = ZQuotientSpec(delta, k, q)
    arcs = spec._layer_arcs(range(q), lambda i: (i + 1) % q)
    graph = Digraph(spec.vertex_count, arcs, labels=spec.labels())
    levels = [spec.level(v) for v in range(spec.vertex_count)]
    object.__setattr__(spec, "leveled", LeveledDigraph(graph, levels, q))
    return spec


def z_window(delta: Digraph, k: int, lo: int, hi: int) -> ZWindowSpec:
    """Levels ``lo..hi`` of the layered construction, spanned subdigraph."""
    if k < 1:
        raise ConstructionError(f"k must be positive, got {k}")
    if lo > hi:
        raise ConstructionError(f"empty window: lo={lo} > hi={hi}")
    spec = ZWindowSpec(delta, k, lo, hi)
    arcs = spec._layer_arcs(range(lo, hi + 1), lambda i: i + 1 if i < hi else None)
    graph = Digraph(spec.vertex_count, arcs, labels=spec.labels())
    levels = [spec.level(v) for v in range(spec.vertex_count)]
    object.__setattr__(spec, "leveled", LeveledDigraph(graph, levels, None))
    return spec


# ---------------------------------------------------------------- shift registers

def shift_register_quotient(delta: Digraph, k: int, q: int) -> LeveledDigraph:
    """Shift-register digraph over ``delta``, levels in ``Z_q``.

    ``(i; x_1..x_k) -> (i+1; y, x_1..x_{k-1})`` whenever ``(x_k, y)`` is an arc
    of ``delta``.  Vertex indices use the same codec as :func:`z_quotient`
    (coordinates listed left to right).
    """
    if k < 1 or q < 1:
        raise ConstructionError("k and q must be positive")
    n = delta.vertex_count
    fiber = n ** k
    arcs = []
    for i in range(q):
        j = (i + 1) % q
        for xs in itertools.product(range(n), repeat=k):
            src = i * fiber + _lex(xs, n)
            for y in delta.out_neighbors(xs[-1]):
                arcs.append((src, j * fiber + _lex((y,) + xs[:-1], n)))
    labels = [(i,) + xs for i in range(q) for xs in itertools.product(range(n), repeat=k)]
    graph = Digraph(q * fiber, arcs, labels=labels)
    return LeveledDigraph(graph, [v // fiber for v in range(q * fiber)], q)


def _lex(xs, n):
    idx = 0
    for x in xs:
        idx = idx * n + x
    return idx


def praeger_tuple_graph(r: int, v: int, m: int) -> LeveledDigraph:
    """Praeger's digraph C_r(v, m) on ``Z_r x Z_v^m``: shift the tuple right
    and insert an arbitrary symbol in front."""
    if r < 1 or v < 2 or m < 1:
        raise ConstructionError(f"praeger_tuple_graph needs r>=1, v>=2, m>=1 (got {r}, {v}, {m})")
    fiber = v ** m
    arcs = []
    for i in range(r):
        j = (i + 1) % r
        for xs in itertools.product(range(v), repeat=m):
            src = i * fiber + _lex(xs, v)
            for y in range(v):
                arcs.append((src, j * fiber + _lex((y,) + xs[:-1], v)))
    labels = [(i,) + xs for i in range(r) for xs in itertools.product(range(v), repeat=m)]
    graph = Digraph(r * fiber, arcs, labels=labels)
    return LeveledDigraph(graph, [u // fiber for u in range(r * fiber)], r)


def theta_isomorphism(spec) -> Permutation:
    """Coordinate-reversal bijection onto the shift-register model.

    At level ``i`` with ``c = i mod k`` the coordinates are listed as
    ``x_{c-1}, x_{c-2}, ..., x_{c-k}`` (indices mod k); it is an involution.
    """
    k = spec.k
    images = []
    for v in range(spec.vertex_count):
        i, *xs = spec.decode(v)
        c = i % k
        images.append(spec.encode(i, [xs[(c - 1 - m) % k] for m in range(k)]))
    return Permutation(images)


# ---------------------------------------------------------------- automorphisms

def is_automorphism_of(delta: Digraph, g: Permutation) -> bool:
    return g.degree == delta.vertex_count and preserves_arcs(delta, g.images)


def shift_automorphism(spec: ZQuotientSpec) -> Permutation:
    """``(i; x_0..x_{k-1}) -> (i+1; x_{k-1}, x_0, ..., x_{k-2})``."""
    images = []
    for v in range(spec.vertex_count):
        i, *xs = spec.decode(v)
        images.append(spec.encode(i + 1, [xs[-1]] + xs[:-1]))
    s = Permutation(images)
    if not preserves_arcs(spec.graph, s.images):
        raise ConstructionError("shift failed the arc-preservation check")
    return s


def _coordinate_map(spec, j: int, perm_at_level: Callable[[int], Sequence[int]]) -> Permutation:
    if not 0 <= j < spec.k:
        raise ConstructionError(f"coordinate j={j} outside 0..{spec.k - 1}")
    images = []
    for v in range(spec.vertex_count):
        i, *xs = spec.decode(v)
        xs[j] = perm_at_level(i)[xs[j]]
        images.append(spec.encode(i, xs))
    return Permutation(images)


def coordinate_automorphism(spec, g: Permutation, j: int) -> Permutation:
    """Apply the automorphism ``g`` of the base digraph to coordinate ``j``."""
    if not is_automorphism_of(spec.delta, g):
        raise ConstructionError("g is not an automorphism of the base digraph")
    result = _coordinate_map(spec, j, lambda i: g.images)
    if not preserves_arcs(spec.graph, result.images):
        raise ConstructionError("coordinate map failed the arc-preservation check")
    return result


def lift_exponent(i: int, j: int, k: int) -> int:
    """Block index ``(i - j + k - 1) div k`` with floor division."""
    return (i - j + k - 1) // k


@dataclass(frozen=True)
class PsiGroup:
    """An explicit permutation group ``H`` on the base vertices together with an
    automorphism ``psi`` of ``H`` given as an element-index map."""

    delta_degree: int
    elements: tuple[Permutation, ...]
    psi: tuple[int, ...]

    def __post_init__(self):
        elements = tuple(self.elements)
        psi = tuple(self.psi)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "psi", psi)
        if len(psi) != len(elements) or sorted(psi) != list(range(len(elements))):
            raise GroupError("psi must be a bijection on element indices")
        index = {g: i for i, g in enumerate(elements)}
        if len(index) != len(elements):
            raise GroupError("duplicate group elements")
        for g in elements:
            if g.degree != self.delta_degree:
                raise GroupError("element degree differs from delta_degree")
            if g.inverse() not in index:
                raise GroupError("element list is not closed under inverses")
        for a, g in enumerate(elements):
            for b, h in enumerate(elements):
                gh = index.get(g * h)
                if gh is None:
                    raise GroupError("element list is not closed under products")
                if elements[psi[gh]] != elements[psi[a]] * elements[psi[b]]:
                    raise GroupError("psi is not a group homomorphism")
        object.__setattr__(self, "_index", index)

    def index(self, g: Permutation) -> int:
        return self._index[g]

    def __len__(self) -> int:
        return len(self.elements)

    def psi_power(self, a: int, t: int) -> int:
        """Index of ``g^(psi^t)`` for ``g = elements[a]``; ``t`` may be negative."""
        period = self.psi_period(a)
        for _ in range(t % period):
            a = self.psi[a]
        return a

    def psi_period(self, a: int) -> int:
        """Length of the psi-orbit of element ``a``."""
        b, length = self.psi[a], 1
        while b != a:
            b, length = self.psi[b], length + 1
        return length

    def psi_order(self) -> int:
        from math import lcm
        result = 1
        for a in range(len(self.elements)):
            result = lcm(result, self.psi_period(a))
        return result

    def to_json(self) -> dict:
        return {"degree": self.delta_degree,
                "elements": [g.to_json() for g in self.elements],
                "psi": list(self.psi)}

    @classmethod
    def from_json(cls, payload: Mapping) -> "PsiGroup":
        return cls(payload["degree"], tuple(Permutation(p) for p in payload["elements"]),
                   tuple(payload["psi"]))


def psi_coordinate_automorphism(spec: ZQuotientSpec, H: PsiGroup, g: int, j: int) -> Permutation:
    """Coordinate ``j`` moved by ``g^(psi^t)`` with ``t = (i-j+k-1) div k``."""
    from sharparc.tfaut import is_psi_stable

    if not is_psi_stable(spec.delta, H):
        raise GroupError("H is not psi-stable for the base digraph")
    blocks = spec.q // spec.k
    period = H.psi_period(g)
    if blocks % period:
        raise ConstructionError(
            f"lift is not well defined: q/k = {blocks} is not a multiple of the "
            f"psi-period {period} of element {g}")
    result = _coordinate_map(
        spec, j, lambda i: H.elements[H.psi_power(g, lift_exponent(i, j, spec.k))].images)
    if not preserves_arcs(spec.graph, result.images):
        raise ConstructionError("lifted map failed the arc-preservation check")
    return result


def family_automorphism(spec: ZWindowSpec, family: Mapping[int, Permutation], j: int) -> Permutation:
    """Coordinate ``j`` moved by ``family[t]`` with ``t = (i-j+k-1) div k``.

    Consecutive family members must form two-fold automorphisms of the base
    digraph.
    """
    from sharparc.tfaut import is_tf_pair

    needed = sorted({lift_exponent(i, j, spec.k) for i in range(spec.lo, spec.hi + 1)})
    missing = [t for t in needed if t not in family]
    if missing:
        raise ConstructionError(f"family lacks members for t in {missing}")
    for t in needed:
        if t + 1 in family and not is_tf_pair(spec.delta, family[t], family[t + 1]):
            raise ConstructionError(f"(g_{t}, g_{t + 1}) is not a two-fold automorphism")
    result = _coordinate_map(spec, j, lambda i: family[lift_exponent(i, j, spec.k)].images)
    if not preserves_arcs(spec.graph, result.images):
        raise ConstructionError("family map failed the arc-preservation check")
    return result


# ---------------------------------------------------------------- fibre products

@dataclass(frozen=True)
class FibreProduct:
    leveled: LeveledDigraph
    pairs: tuple[tuple[int, int], ...]
    pi1: tuple[int, ...]
    pi2: tuple[int, ...]

    @property
    def graph(self) -> Digraph:
        return self.leveled.graph

    def index(self, v1: int, v2: int) -> int:
        return self._index[(v1, v2)]

    def pair_map(self, g1: Permutation, g2: Permutation) -> Permutation:
        """``(v, w) -> (v^g1, w^g2)`` as a permutation of the product."""
        index = self._index
        return Permutation(index[(g1(a), g2(b))] for a, b in self.pairs)

    def __post_init__(self):
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.pairs)})


def fibre_product(g1: LeveledDigraph, g2: LeveledDigraph) -> FibreProduct:
    """Level-synchronized product: pairs on equal levels, componentwise arcs."""
    if g1.modulus != g2.modulus:
        raise ConstructionError(
            f"incompatible level structures: modulus {g1.modulus} vs {g2.modulus}")
    common = sorted(set(g1.level_values) & set(g2.level_values))
    if not common:
        raise ConstructionError("level ranges do not overlap")
    pairs = [(a, b) for lev in common for a in g1.fiber(lev) for b in g2.fiber(lev)]
    pairs.sort()
    index = {p: i for i, p in enumerate(pairs)}
    arcs = []
    for (a, b), src in index.items():
        for a2 in g1.graph.out_neighbors(a):
            for b2 in g2.graph.out_neighbors(b):
                dst = index.get((a2, b2))
                if dst is not None:
                    arcs.append((src, dst))
    graph = Digraph(len(pairs), arcs, labels=pairs)
    levels = [g1.levels[a] for a, _ in pairs]
    leveled = LeveledDigraph(graph, levels, g1.modulus)
    pi1 = tuple(a for a, _ in pairs)
    pi2 = tuple(b for _, b in pairs)
    if not (is_morphism(graph, g1.graph, pi1) and is_morphism(graph, g2.graph, pi2)):
        raise ConstructionError("projection failed the morphism check")
    return FibreProduct(leveled, tuple(pairs), pi1, pi2)


def translation_magnitude(g: Permutation, leveled: LeveledDigraph) -> Optional[int]:
    """The constant level shift of ``g``, or ``None`` if it is not constant."""
    if g.degree != leveled.graph.vertex_count:
        raise ConstructionError("permutation degree differs from the vertex count")
    shifts = set()
    for v in range(g.degree):
        d = leveled.levels[g(v)] - leveled.levels[v]
        if leveled.modulus is not None:
            d %= leveled.modulus
        shifts.add(d)
        if len(shifts) > 1:
            return None
    return shifts.pop()


def out_tree_window(p: int, depth: int) -> LeveledDigraph:
    """Directed tree with in-valency 1 and out-valency ``p``, truncated at
    ``depth`` levels below the root (root on level 0)."""
    if p < 1 or depth < 0:
        raise ConstructionError("out_tree_window needs p >= 1, depth >= 0")
    levels = [0]
    arcs = []
    frontier = [0]
    for lev in range(1, depth + 1):
        nxt = []
        for v in frontier:
            for _ in range(p):
                w = len(levels)
                levels.append(lev)
                arcs.append((v, w))
                nxt.append(w)
        frontier = nxt
    return LeveledDigraph(Digraph(len(levels), arcs), levels)


def in_tree_window(q: int, depth: int) -> LeveledDigraph:
    """Directed tree with out-valency 1 and in-valency ``q``; the sink sits on
    level ``depth`` and the leaves on level 0."""
    tree = out_tree_window(q, depth)
    arcs = [(w, v) for v, w in tree.graph.arcs]
    levels = [depth - lev for lev in tree.levels]
    return LeveledDigraph(Digraph(tree.graph.vertex_count, arcs), levels)


def diestel_leader_window(p: int, q: int, depth: int) -> FibreProduct:
    """Fibre product of a truncated out-p tree and a truncated in-q tree."""
    return fibre_product(out_tree_window(p, depth), in_tree_window(q, depth))
