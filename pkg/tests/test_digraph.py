import json

import pytest
from hypothesis import given

from conftest import digraphs
from sharparc.constructions import cdhc, complete_digraph, theta_cycle, z_quotient
from sharparc.digraph import (Digraph, LeveledDigraph, alternets, build_digraph,
                              check_level_map, count_k_arcs, enumerate_k_arcs,
                              is_bipartite, is_connected, level_map_violation)
from sharparc.errors import ConstructionError


def closure_oracle(g):
    """Alternet classes by naive fixed-point iteration over arc pairs."""
    classes = [{a} for a in g.arcs]
    changed = True
    while changed:
        changed = False
        for i in range(len(classes)):
            for j in range(i + 1, len(classes)):
                if any(a[0] == b[0] or a[1] == b[1] for a in classes[i] for b in classes[j]):
                    classes[i] |= classes.pop(j)
                    changed = True
                    break
            if changed:
                break
    return sorted(sorted(c) for c in classes)


def walks_from(g, v, k):
    if k == 0:
        return 1
    return sum(walks_from(g, w, k - 1) for w in g.out_neighbors(v))


class TestBuild:
    def test_three_cycle(self):
        g = build_digraph(3, [(0, 1), (1, 2), (2, 0)])
        assert all(g.in_valency(v) == g.out_valency(v) == 1 for v in range(3))

    def test_loop(self):
        g = build_digraph(1, [(0, 0)])
        assert g.in_valency(0) == g.out_valency(0) == 1
        assert g.has_loop(0)

    def test_digon_keeps_both_arcs(self):
        g = build_digraph(2, [(0, 1), (1, 0)])
        assert g.arcs == ((0, 1), (1, 0))

    def test_duplicates_collapse(self):
        assert len(build_digraph(2, [(0, 1), (0, 1)]).arcs) == 1

    def test_out_of_range_names_arc(self):
        with pytest.raises(ConstructionError, match=r"\(0, 5\)"):
            build_digraph(3, [(0, 1), (0, 5)])

    def test_empty_rejected(self):
        with pytest.raises(ConstructionError):
            build_digraph(0, [])

    def test_json_roundtrip(self):
        g = theta_cycle(4)
        assert Digraph.from_json(json.loads(json.dumps(g.to_json()))) == g

    def test_dot(self):
        dot = build_digraph(2, [(0, 0), (0, 1), (1, 0)]).to_dot()
        assert "0 -> 0;" in dot and "0 -> 1;" in dot and "1 -> 0;" in dot
        merged = build_digraph(2, [(0, 1), (1, 0)]).to_dot(merge_antiparallel=True)
        assert merged.count("->") == 1 and "dir=both" in merged


class TestConnectivity:
    def test_cycle(self):
        assert is_connected(build_digraph(3, [(0, 1), (1, 2), (2, 0)]))

    def test_two_isolated(self):
        assert not is_connected(build_digraph(2, []))

    def test_cdhc_of_digon_disconnected(self):
        g = cdhc(complete_digraph(2))
        assert g.vertex_count == 4
        assert set(g.arcs) == {(0, 3), (2, 1)}
        assert not is_connected(g)

    def test_bipartite(self):
        assert is_bipartite(build_digraph(2, [(0, 1), (1, 0)]))
        assert not is_bipartite(theta_cycle(3))
        assert is_bipartite(build_digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))
        assert not is_bipartite(build_digraph(3, [(0, 1), (1, 2), (2, 0)]))

    @given(digraphs())
    def test_loop_forces_non_bipartite(self, g):
        if any(u == v for u, v in g.arcs):
            assert not is_bipartite(g)


class TestAlternets:
    def test_cycle_singletons(self):
        part = alternets(build_digraph(3, [(0, 1), (1, 2), (2, 0)]))
        assert [len(c) for c in part.arc_classes] == [1, 1, 1]

    def test_complete_single_class(self):
        g = complete_digraph(3)
        assert closure_oracle(g) == [sorted(g.arcs)]
        assert alternets(g).arc_classes == (g.arcs,)

    def test_quotient_alternating_six_cycles(self):
        g = z_quotient(theta_cycle(3), 2, 6).graph
        for verts, arcs in alternets(g).spanned_subdigraphs:
            assert len(verts) == 6 and len(arcs) == 6

    def test_canonical_order(self):
        part = alternets(z_quotient(theta_cycle(3), 2, 6).graph)
        firsts = [c[0] for c in part.arc_classes]
        assert firsts == sorted(firsts)

    @given(digraphs())
    def test_matches_closure_oracle(self, g):
        assert sorted(sorted(c) for c in alternets(g).arc_classes) == closure_oracle(g)

    @given(digraphs())
    def test_fixed_point(self, g):
        for cls in alternets(g).arc_classes:
            cls = set(cls)
            grown = {b for b in g.arcs for a in cls if a[0] == b[0] or a[1] == b[1]}
            assert grown <= cls


class TestKArcs:
    def test_cycle_two_arcs(self):
        assert len(list(enumerate_k_arcs(build_digraph(3, [(0, 1), (1, 2), (2, 0)]), 2))) == 3

    def test_quotient_two_arcs(self):
        g = z_quotient(complete_digraph(3), 2, 4).graph
        arcs = list(enumerate_k_arcs(g, 2))
        assert len(arcs) == 36 * 2**2 == count_k_arcs(g, 2) == 144
        assert len(set(arcs)) == 144

    def test_theta_one_arcs(self):
        assert sorted(enumerate_k_arcs(theta_cycle(3), 1)) == sorted(theta_cycle(3).arcs)

    def test_negative_k(self):
        with pytest.raises(ValueError):
            list(enumerate_k_arcs(theta_cycle(3), -1))

    @given(digraphs(max_vertices=5))
    def test_lexicographic_and_counted(self, g):
        for k in range(4):
            arcs = list(enumerate_k_arcs(g, k))
            assert arcs == sorted(set(arcs))
            assert len(arcs) == sum(walks_from(g, v, k) for v in range(g.vertex_count))
            for a in arcs:
                assert all(g.has_arc(a[i], a[i + 1]) for i in range(k))

    @pytest.mark.parametrize("d", [2, 3])
    def test_constant_valency_count(self, d):
        g = z_quotient(complete_digraph(d + 1), 2, 4).graph
        for k in range(4):
            assert count_k_arcs(g, k) == g.vertex_count * d**k


class TestLevelMap:
    def test_path(self):
        assert check_level_map(build_digraph(3, [(0, 1), (1, 2)]), [0, 1, 2])

    def test_loop_obstruction(self):
        assert not check_level_map(theta_cycle(3), [0, 1, 2])
        assert level_map_violation(theta_cycle(3), [0, 1, 2]) == (0, 0)

    def test_quotient_first_coordinate(self):
        spec = z_quotient(theta_cycle(3), 2, 6)
        levels = [spec.decode(v)[0] for v in range(spec.vertex_count)]
        assert check_level_map(spec.graph, levels, 6)

    def test_leveled_rejects_bad_map(self):
        with pytest.raises(ConstructionError):
            LeveledDigraph(build_digraph(2, [(0, 1)]), [0, 0])

    @given(digraphs(max_vertices=5))
    def test_closed_walks_multiple_of_modulus(self, g):
        for m in (2, 3):
            for levels in _all_level_maps(g.vertex_count, m):
                if check_level_map(g, levels, m):
                    for length in range(1, 7):
                        for walk in enumerate_k_arcs(g, length):
                            if walk[0] == walk[-1]:
                                assert length % m == 0


def _all_level_maps(n, m):
    if n > 4:
        return
    import itertools
    yield from itertools.product(range(m), repeat=n)
