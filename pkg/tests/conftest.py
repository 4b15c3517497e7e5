import random

import pytest
from hypothesis import strategies as st

from sharparc.digraph import Digraph, LeveledDigraph

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_criterion(label: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((label, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{status}  {label}  {detail}".rstrip())


@st.composite
def digraphs(draw, min_vertices=1, max_vertices=6, loops=True):
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = [(u, v) for u in range(n) for v in range(n) if loops or u != v]
    arcs = draw(st.lists(st.sampled_from(pairs), max_size=3 * n)) if pairs else []
    return Digraph(n, arcs)


def random_digraph(rng: random.Random, n: int, density: float, loops: bool = True) -> Digraph:
    arcs = [(u, v) for u in range(n) for v in range(n)
            if (loops or u != v) and rng.random() < density]
    return Digraph(n, arcs)


def random_leveled(rng: random.Random, levels: int, max_fiber: int = 3,
                   density: float = 0.6) -> LeveledDigraph:
    """Random digraph with arcs only between consecutive levels 0..levels-1."""
    sizes = [rng.randint(1, max_fiber) for _ in range(levels)]
    level_of = [lev for lev, size in enumerate(sizes) for _ in range(size)]
    starts = [sum(sizes[:lev]) for lev in range(levels)]
    arcs = []
    for lev in range(levels - 1):
        for a in range(sizes[lev]):
            for b in range(sizes[lev + 1]):
                if rng.random() < density:
                    arcs.append((starts[lev] + a, starts[lev + 1] + b))
    return LeveledDigraph(Digraph(len(level_of), arcs), level_of)


@pytest.fixture
def rng():
    return random.Random(20261016)
