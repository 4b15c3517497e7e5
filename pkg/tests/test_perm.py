import itertools

import pytest
from hypothesis import given, settings, strategies as st

from sharparc.autsearch import automorphism_generators
from sharparc.constructions import complete_digraph, z_quotient
from sharparc.errors import DegreeMismatchError, GroupError
from sharparc.perm import (Permutation, PermGroup, compose, group_order, is_block_system,
                           is_member, minimal_block, orbit, pointwise_stabilizer_order)

cyc = Permutation.from_cycles


def brute_elements(group):
    """Closure of the generators by repeated multiplication."""
    ident = Permutation.identity(group.degree)
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in group.generators:
                y = x * g
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return elems


@st.composite
def small_groups(draw, max_degree=6, max_gens=3):
    n = draw(st.integers(1, max_degree))
    gens = draw(st.lists(st.permutations(list(range(n))), max_size=max_gens))
    return PermGroup(n, [Permutation(g) for g in gens])


class TestCompose:
    def test_transposition_squared(self):
        assert compose(cyc(2, (0, 1)), cyc(2, (0, 1))).is_identity()

    def test_right_action_convention(self):
        a = Permutation([(x + 1) % 3 for x in range(3)])
        b = Permutation([(-x) % 3 for x in range(3)])
        # x^(ab) = -(x+1) mod 3
        assert compose(a, b).images == (2, 1, 0)
        assert (a * b)(0) == b(a(0))

    def test_identity(self):
        p = cyc(4, (0, 2, 3))
        assert p * Permutation.identity(4) == p

    def test_degree_mismatch(self):
        with pytest.raises(DegreeMismatchError):
            compose(Permutation.identity(2), Permutation.identity(3))

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation([0, 0, 1])

    def test_power_and_order(self):
        p = cyc(5, (0, 1, 2), (3, 4))
        assert p.order() == 6
        assert (p ** 6).is_identity()
        assert p ** -1 == p.inverse()


class TestOrbit:
    def test_point(self):
        assert orbit(PermGroup(3, [cyc(3, (0, 1, 2))]), 0) == {0, 1, 2}

    def test_tuple(self):
        assert orbit(PermGroup(2, [cyc(2, (0, 1))]), (0, 1)) == {(0, 1), (1, 0)}

    def test_dihedral(self):
        a = Permutation([(x + 1) % 3 for x in range(3)])
        b = Permutation([(-x) % 3 for x in range(3)])
        assert orbit(PermGroup(3, [a, b]), 0) == {0, 1, 2}


class TestOrder:
    def test_cyclic(self):
        assert group_order(PermGroup(3, [cyc(3, (0, 1, 2))])) == 3

    def test_dihedral_on_three_points(self):
        a = Permutation([(x + 1) % 3 for x in range(3)])
        b = Permutation([(-x) % 3 for x in range(3)])
        assert group_order(PermGroup(3, [a, b])) == 6

    def test_trivial(self):
        assert group_order(PermGroup(4, [])) == 1

    def test_symmetric_group(self):
        g = PermGroup(7, [cyc(7, (0, 1)), cyc(7, tuple(range(7)))])
        assert g.order() == 5040

    def test_identity_generators_pruned(self):
        assert PermGroup(3, [Permutation.identity(3)]).generators == ()

    @settings(max_examples=60)
    @given(small_groups())
    def test_matches_enumeration(self, group):
        elems = brute_elements(group)
        assert group.order() == len(elems)
        for x in range(group.degree):
            assert len(elems) % len(orbit(group, x)) == 0


class TestMembership:
    def test_identity(self):
        assert is_member(PermGroup(3, [cyc(3, (0, 1, 2))]), Permutation.identity(3))

    def test_transposition_not_in_cyclic(self):
        assert not is_member(PermGroup(3, [cyc(3, (0, 1, 2))]), cyc(3, (0, 1)))

    def test_generator(self):
        a = Permutation([(x + 1) % 3 for x in range(3)])
        b = Permutation([(-x) % 3 for x in range(3)])
        assert is_member(PermGroup(3, [a, b]), b)

    def test_degree_mismatch(self):
        with pytest.raises(DegreeMismatchError):
            is_member(PermGroup(3, []), Permutation.identity(4))

    @settings(max_examples=40)
    @given(small_groups(max_degree=5))
    def test_agrees_with_enumeration(self, group):
        elems = brute_elements(group)
        for images in itertools.permutations(range(group.degree)):
            p = Permutation(images)
            assert is_member(group, p) == (p in elems)


class TestBlocks:
    def test_four_cycle(self):
        g = PermGroup(4, [cyc(4, (0, 1, 2, 3))])
        assert minimal_block(g, {0, 2}).blocks == ((0, 2), (1, 3))

    def test_primitive(self):
        g = PermGroup(3, [cyc(3, (0, 1, 2))])
        assert minimal_block(g, {0, 1}).blocks == ((0, 1, 2),)

    def test_whole_domain(self):
        g = PermGroup(6, [cyc(6, tuple(range(6)))])
        assert minimal_block(g, range(6)).blocks == (tuple(range(6)),)

    def test_intransitive_rejected(self):
        with pytest.raises(GroupError):
            minimal_block(PermGroup(4, [cyc(4, (0, 1))]), {0, 1})

    @settings(max_examples=60)
    @given(small_groups(max_degree=6), st.data())
    def test_output_is_block_system_and_minimal(self, group, data):
        if group.degree < 2 or not group.is_transitive():
            return
        seed = data.draw(st.sets(st.integers(0, group.degree - 1), min_size=2))
        blocks = minimal_block(group, seed)
        assert is_block_system(group, blocks.blocks)
        assert any(seed <= set(b) for b in blocks.blocks)
        # every element preserves it, and no finer invariant partition keeps seed together
        elems = brute_elements(group)
        for g in elems:
            images = {tuple(sorted(g(x) for x in b)) for b in blocks.blocks}
            assert images == set(blocks.blocks)
        # smallest block containing seed, by closing over all elements
        block = set(seed)
        changed = True
        while changed:
            changed = False
            for g in elems:
                image = {g(x) for x in block}
                if image & block and image != block:
                    block |= image
                    changed = True
        assert set(blocks.block_of(min(seed))) == block


class TestStabilizers:
    def test_transposition(self):
        assert pointwise_stabilizer_order(PermGroup(2, [cyc(2, (0, 1))]), {0}) == 1

    def test_s3_point(self):
        s3 = PermGroup(3, [cyc(3, (0, 1)), cyc(3, (0, 1, 2))])
        assert pointwise_stabilizer_order(s3, {0}) == 2

    def test_quotient_fiber(self):
        spec = z_quotient(complete_digraph(3), 2, 4)
        group = automorphism_generators(spec.graph)
        assert pointwise_stabilizer_order(group, spec.leveled.fiber(0)) == 1

    @settings(max_examples=60)
    @given(small_groups(), st.data())
    def test_matches_enumeration(self, group, data):
        pts = data.draw(st.sets(st.integers(0, group.degree - 1)))
        elems = brute_elements(group)
        expected = sum(1 for g in elems if all(g(x) == x for x in pts))
        assert pointwise_stabilizer_order(group, pts) == expected

    @settings(max_examples=40)
    @given(small_groups())
    def test_orbit_stabilizer(self, group):
        for x in range(group.degree):
            assert group.order() == len(orbit(group, x)) * pointwise_stabilizer_order(group, {x})
