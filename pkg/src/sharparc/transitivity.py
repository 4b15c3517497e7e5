"""k-arc orbit analysis and growth of the infinite loop-line construction."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from sharparc.autsearch import DEFAULT_NODE_BUDGET, automorphism_generators
from sharparc.digraph import Digraph, KArc, LeveledDigraph, enumerate_k_arcs
from sharparc.errors import ResourceLimitError
from sharparc.perm import PermGroup, pointwise_stabilizer_order

log = logging.getLogger(__name__)

DEFAULT_ARC_LIMIT = 5_000_000
DEFAULT_BALL_LIMIT = 5_000_000


@dataclass(frozen=True)
class OrbitReport:
    count: int
    representatives: tuple[KArc, ...]
    total_arcs: int
    diagnostic: Optional[str] = None


def k_arc_orbits(g: Digraph, G: PermGroup, k: int,
                 limit: int = DEFAULT_ARC_LIMIT) -> OrbitReport:
    """Partition the k-arcs of ``g`` into orbits of ``G``.

    Representatives are the lexicographically least member of each orbit, in
    increasing order.
    """
    if G.degree != g.vertex_count:
        raise ValueError(f"group degree {G.degree} differs from vertex count {g.vertex_count}")
    if k < 0:
        raise ValueError("k must be non-negative")
    gens = [p.images for p in G.generators]
    seen: set = set()
    reps = []
    total = 0
    # arcs come out in lexicographic order, so the first unseen one is the
    # least member of its orbit
    for arc in enumerate_k_arcs(g, k):
        total += 1
        if arc in seen:
            continue
        reps.append(arc)
        seen.add(arc)
        queue = deque([arc])
        while queue:
            a = queue.popleft()
            for h in gens:
                b = tuple(h[x] for x in a)
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        if len(seen) > limit:
            raise ResourceLimitError(f"more than {limit} k-arcs held in memory")
    diag = None if total else f"the digraph has no {k}-arcs"
    return OrbitReport(len(reps), tuple(reps), total, diag)


@dataclass
class TransitivityProfile:
    orbit_counts: dict[int, int]
    arc_counts: dict[int, int]
    group_order: int
    sharp_k: Optional[int] = None
    verdicts: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "orbit_counts": {str(k): v for k, v in sorted(self.orbit_counts.items())},
            "arc_counts": {str(k): v for k, v in sorted(self.arc_counts.items())},
            "group_order": self.group_order,
            "sharp_k": self.sharp_k,
            "verdicts": self.verdicts,
        }


def profile_from_group(g: Digraph, G: PermGroup, k_max: int) -> TransitivityProfile:
    counts, totals = {}, {}
    for k in range(k_max + 1):
        rep = k_arc_orbits(g, G, k)
        counts[k] = rep.count
        totals[k] = rep.total_arcs
    sharp = None
    for k in range(k_max + 1):
        if counts[k] != 1:
            break
        sharp = k
    verdicts = {
        "k_arc_transitive": {str(k): counts[k] == 1 for k in range(k_max + 1)},
        # sharpness is only established when the failure at sharp_k+1 was observed
        "sharp": sharp is not None and sharp < k_max,
    }
    return TransitivityProfile(counts, totals, G.order(), sharp, verdicts)


def transitivity_profile(g: Digraph, k_max: int,
                         node_budget: int = DEFAULT_NODE_BUDGET) -> TransitivityProfile:
    """Orbit counts of the full automorphism group on k-arcs, k = 0..k_max."""
    G = automorphism_generators(g, node_budget)
    return profile_from_group(g, G, k_max)


def fiber_stabilizer_triviality(leveled: LeveledDigraph, G: PermGroup, level: int) -> bool:
    """True iff only the identity fixes every vertex on ``level``."""
    fiber = leveled.fiber(level)
    if not fiber:
        raise ValueError(f"level {level} has no vertices")
    return pointwise_stabilizer_order(G, fiber) == 1


# ---------------------------------------------------------------- growth

@dataclass(frozen=True)
class GrowthSequence:
    k: int
    values: tuple[int, ...]
    degree_estimate: Optional[float]

    def to_json(self) -> dict:
        return {"k": self.k, "values": list(self.values),
                "degree_estimate": self.degree_estimate}

    def to_csv(self) -> str:
        lines = ["n,b_n"] + [f"{n},{b}" for n, b in enumerate(self.values)]
        return "\n".join(lines) + "\n"


def loop_line_neighbors(vertex: tuple[int, ...], k: int) -> list[tuple[int, ...]]:
    """Undirected neighbours of ``(i; x_0..x_{k-1})`` in the construction over
    the infinite directed line with a loop at every vertex."""
    i = vertex[0]
    xs = vertex[1:]
    out = []
    c = i % k
    for d in (0, 1):
        ys = list(xs)
        ys[c] += d
        out.append((i + 1, *ys))
    c = (i - 1) % k
    for d in (0, -1):
        ys = list(xs)
        ys[c] += d
        out.append((i - 1, *ys))
    return out


def growth_ball(k: int, n_max: int, limit: int = DEFAULT_BALL_LIMIT) -> GrowthSequence:
    """Ball sizes b_0..b_{n_max} around the origin, by breadth-first search."""
    if k < 1:
        raise ValueError("k must be positive")
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    origin = (0,) * (k + 1)
    seen = {origin}
    frontier = [origin]
    values = [1]
    for _ in range(n_max):
        nxt = []
        for v in frontier:
            for w in loop_line_neighbors(v, k):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if len(seen) > limit:
            raise ResourceLimitError(f"ball exceeded {limit} vertices")
        frontier = nxt
        values.append(len(seen))
    estimate = growth_degree_estimate(values) if len(values) >= 8 else None
    return GrowthSequence(k, tuple(values), estimate)


def growth_degree_estimate(values: Sequence[int]) -> float:
    """Least-squares slope of log b_n against log(n+1) over the top half."""
    if len(values) < 8:
        raise ValueError("need at least 8 ball sizes for a degree estimate")
    start = len(values) // 2
    n = np.arange(start, len(values), dtype=float)
    x = np.log(n + 1)
    y = np.log(np.asarray(values[start:], dtype=float))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
