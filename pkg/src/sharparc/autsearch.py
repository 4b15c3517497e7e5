"""Automorphism groups of finite vertex-colored digraphs.

Individualization-refinement backtracking.  The first path of the search tree
(always individualizing the smallest vertex of the first largest non-singleton
cell) fixes a base; for every level of that path, each vertex of the target
cell not yet known to lie in the orbit of the base point is tried, and its
subtree is searched for a leaf whose labelling differs from the first leaf by
an automorphism.  The generators found form a strong generating set for that
base, so the product of the basic orbit lengths is the group order.

Loops are removed from the arc set during refinement and carried as a color
bit instead.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from sharparc.digraph import Digraph, preserves_arcs
from sharparc.errors import ResourceLimitError
from sharparc.perm import Permutation, PermGroup

log = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 10**7

Partition = list[list[int]]


@dataclass(frozen=True)
class ColoredDigraph:
    graph: Digraph
    colors: tuple = ()

    def __post_init__(self):
        colors = tuple(self.colors) if self.colors else (0,) * self.graph.vertex_count
        if len(colors) != self.graph.vertex_count:
            raise ValueError("one color per vertex required")
        object.__setattr__(self, "colors", colors)


def _as_colored(g) -> ColoredDigraph:
    return g if isinstance(g, ColoredDigraph) else ColoredDigraph(g)


def initial_partition(g: ColoredDigraph) -> Partition:
    """Cells keyed by (color, has loop), ordered by that key."""
    cells: dict = {}
    for v in range(g.graph.vertex_count):
        cells.setdefault((g.colors[v], g.graph.has_loop(v)), []).append(v)
    return [cells[key] for key in sorted(cells, key=repr)]


class _Refiner:
    def __init__(self, graph: Digraph):
        n = graph.vertex_count
        self.n = n
        self.out = [tuple(w for w in graph.out_neighbors(v) if w != v) for v in range(n)]
        self.inn = [tuple(u for u in graph.in_neighbors(v) if u != v) for v in range(n)]

    def refine(self, partition: Partition) -> Partition:
        """Coarsest equitable refinement; the result depends only on the
        ordered partition's structure, never on vertex names."""
        cells = [list(c) for c in partition]
        while True:
            cell_of = [0] * self.n
            for ci, c in enumerate(cells):
                for v in c:
                    cell_of[v] = ci
            new_cells = []
            changed = False
            for c in cells:
                if len(c) == 1:
                    new_cells.append(c)
                    continue
                sigs = {}
                for v in c:
                    outc: dict[int, int] = {}
                    for w in self.out[v]:
                        outc[cell_of[w]] = outc.get(cell_of[w], 0) + 1
                    inc: dict[int, int] = {}
                    for u in self.inn[v]:
                        inc[cell_of[u]] = inc.get(cell_of[u], 0) + 1
                    sigs[v] = (tuple(sorted(outc.items())), tuple(sorted(inc.items())))
                keys = sorted(set(sigs.values()))
                if len(keys) == 1:
                    new_cells.append(c)
                    continue
                changed = True
                for key in keys:
                    new_cells.append([v for v in c if sigs[v] == key])
            cells = new_cells
            if not changed:
                return cells

    def quotient(self, cells: Partition) -> tuple:
        """Cell sizes plus arc counts between cells: a labelling-invariant
        fingerprint of an equitable partition."""
        cell_of = [0] * self.n
        for ci, c in enumerate(cells):
            for v in c:
                cell_of[v] = ci
        rows = []
        for c in cells:
            v = c[0]
            counts: dict[int, int] = {}
            for w in self.out[v]:
                counts[cell_of[w]] = counts.get(cell_of[w], 0) + 1
            rows.append((len(c), tuple(sorted(counts.items()))))
        return tuple(rows)


def _target_cell(cells: Partition) -> Optional[int]:
    best = None
    for i, c in enumerate(cells):
        if len(c) > 1 and (best is None or len(c) > len(cells[best])):
            best = i
    return best


def _individualize(cells: Partition, ci: int, v: int) -> Partition:
    rest = [w for w in cells[ci] if w != v]
    return cells[:ci] + [[v], rest] + cells[ci + 1:]


def refine_partition(g, partition: Sequence[Sequence[int]]) -> Partition:
    """Equitable refinement of an ordered partition of ``g``'s vertices.

    Each cell is first split by (color, has loop), as in the search itself.
    """
    cg = _as_colored(g)
    cells = []
    for c in partition:
        parts: dict = {}
        for v in c:
            parts.setdefault((cg.colors[v], cg.graph.has_loop(v)), []).append(v)
        cells.extend(parts[key] for key in sorted(parts, key=repr))
    return _Refiner(cg.graph).refine(cells)


@dataclass
class AutSearchResult:
    group: PermGroup
    base: list[int]
    orbit_sizes: list[int]
    nodes: int = 0

    @property
    def order(self) -> int:
        result = 1
        for s in self.orbit_sizes:
            result *= s
        return result


@dataclass
class _Search:
    graph: Digraph
    colors: tuple
    refiner: _Refiner
    budget: int
    nodes: int = 0
    gens: list = field(default_factory=list)

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceLimitError(
                f"automorphism search exceeded its budget of {self.budget} nodes")

    def candidate(self, first_leaf: list[int], leaf: list[int]) -> Optional[tuple[int, ...]]:
        images = [0] * len(first_leaf)
        for a, b in zip(first_leaf, leaf):
            images[a] = b
        if any(self.colors[a] != self.colors[images[a]] for a in range(len(images))):
            return None
        if preserves_arcs(self.graph, images):
            return tuple(images)
        return None

    def find_leaf(self, cells: Partition, depth: int, path_fps: list,
                  first_leaf: list[int]) -> Optional[tuple[int, ...]]:
        """DFS below ``cells`` for a leaf equivalent to the first leaf."""
        self.tick()
        if self.refiner.quotient(cells) != path_fps[depth]:
            return None
        ti = _target_cell(cells)
        if ti is None:
            return self.candidate(first_leaf, [c[0] for c in cells])
        for v in cells[ti]:
            child = self.refiner.refine(_individualize(cells, ti, v))
            found = self.find_leaf(child, depth + 1, path_fps, first_leaf)
            if found is not None:
                return found
        return None


def _orbit_of(point: int, gens: list[tuple[int, ...]]) -> set[int]:
    seen = {point}
    stack = [point]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def automorphism_search(g, node_budget: int = DEFAULT_NODE_BUDGET) -> AutSearchResult:
    """Full color- and loop-preserving automorphism group of ``g``."""
    cg = _as_colored(g)
    graph = cg.graph
    refiner = _Refiner(graph)
    search = _Search(graph, cg.colors, refiner, node_budget)

    # first path
    path_cells = [refiner.refine(initial_partition(cg))]
    path_fps = [refiner.quotient(path_cells[0])]
    targets: list[int] = []
    base: list[int] = []
    while True:
        cells = path_cells[-1]
        ti = _target_cell(cells)
        if ti is None:
            break
        v = cells[ti][0]
        targets.append(ti)
        base.append(v)
        child = refiner.refine(_individualize(cells, ti, v))
        path_cells.append(child)
        path_fps.append(refiner.quotient(child))
        search.tick()
    first_leaf = [c[0] for c in path_cells[-1]]

    # levels from deepest to shallowest; gens found at deeper levels fix the
    # longer base prefix, so they stabilize every shallower prefix too
    orbit_sizes = [0] * len(base)
    level_gens: list[list[tuple[int, ...]]] = [[] for _ in base]
    for level in range(len(base) - 1, -1, -1):
        gens_here = [h for lvl in range(level, len(base)) for h in level_gens[lvl]]
        cells = path_cells[level]
        ti = targets[level]
        orb = _orbit_of(base[level], gens_here)
        for w in cells[ti]:
            if w in orb:
                continue
            child = refiner.refine(_individualize(cells, ti, w))
            found = search.find_leaf(child, level + 1, path_fps, first_leaf)
            if found is not None:
                level_gens[level].append(found)
                gens_here.append(found)
                orb = _orbit_of(base[level], gens_here)
        orbit_sizes[level] = len(orb)

    gens = [Permutation(h) for lvl in range(len(base)) for h in level_gens[lvl]]
    group = PermGroup(graph.vertex_count, gens)
    log.debug("aut search: %d nodes, base %s, orbits %s", search.nodes, base, orbit_sizes)
    return AutSearchResult(group, base, orbit_sizes, search.nodes)


def automorphism_generators(g, node_budget: int = DEFAULT_NODE_BUDGET) -> PermGroup:
    return automorphism_search(g, node_budget).group


def brute_force_automorphism_count(g) -> int:
    """Count color-preserving automorphisms by plain backtracking over
    injective vertex assignments.  Independent of the refinement machinery;
    intended for small graphs only."""
    cg = _as_colored(g)
    graph = cg.graph
    n = graph.vertex_count
    arcs = graph.arc_set
    images = [-1] * n
    used = [False] * n
    count = 0

    def consistent(v, w):
        if cg.colors[v] != cg.colors[w]:
            return False
        for u in range(v + 1):
            x = w if u == v else images[u]
            if ((u, v) in arcs) != ((x, w) in arcs):
                return False
            if ((v, u) in arcs) != ((w, x) in arcs):
                return False
        return True

    def assign(v):
        nonlocal count
        if v == n:
            count += 1
            return
        for w in range(n):
            if not used[w] and consistent(v, w):
                images[v] = w
                used[w] = True
                assign(v + 1)
                used[w] = False
        images[v] = -1

    assign(0)
    return count
