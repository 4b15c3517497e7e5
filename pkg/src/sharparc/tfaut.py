"""Two-fold automorphisms, psi-stable subgroups and stability.

A pair ``(g, h)`` of permutations of the base vertices is a two-fold (TF)
automorphism when ``(u, v)`` is an arc iff ``(u^g, v^h)`` is.  Such pairs are
exactly the side-preserving automorphisms of the canonical double half-cover,
which is how the full TF group is computed here.
"""

from __future__ import annotations

from dataclasses import dataclass

from sharparc.autsearch import ColoredDigraph, automorphism_generators
from sharparc.constructions import PsiGroup, cdhc, cover_index
from sharparc.digraph import Digraph
from sharparc.errors import ConstructionError, DegreeMismatchError
from sharparc.perm import Permutation, PermGroup, is_block_system, minimal_block


@dataclass(frozen=True)
class TFPair:
    first: Permutation
    second: Permutation

    def __mul__(self, other: "TFPair") -> "TFPair":
        return TFPair(self.first * other.first, self.second * other.second)

    def inverse(self) -> "TFPair":
        return TFPair(self.first.inverse(), self.second.inverse())

    def to_json(self) -> list[list[int]]:
        return [self.first.to_json(), self.second.to_json()]

    def as_cover_permutation(self) -> Permutation:
        """The induced automorphism of the double half-cover."""
        n = self.first.degree
        images = [0] * (2 * n)
        for x in range(n):
            images[cover_index(x, 0)] = cover_index(self.first(x), 0)
            images[cover_index(x, 1)] = cover_index(self.second(x), 1)
        return Permutation(images)


def is_tf_pair(delta: Digraph, g: Permutation, h: Permutation) -> bool:
    n = delta.vertex_count
    if g.degree != n or h.degree != n:
        raise DegreeMismatchError(
            f"pair degrees ({g.degree}, {h.degree}) differ from |V| = {n}")
    # g, h are bijections, so mapping arcs into arcs is enough
    arcs = delta.arc_set
    return all((g(u), h(v)) in arcs for u, v in delta.arcs)


def tf_from_cdhc(delta: Digraph) -> list[TFPair]:
    """Generators of the full TF group, read off the automorphisms of the
    double half-cover with its two sides colored apart."""
    n = delta.vertex_count
    isolated = [x for x in range(n)
                if not delta.out_neighbors(x) and not delta.in_neighbors(x)]
    if isolated:
        raise ConstructionError(
            f"vertices {isolated} have no neighbours; the double half-cover sides "
            "cannot be told apart from the arcs alone - color them explicitly")
    cover = ColoredDigraph(cdhc(delta), tuple(side for _ in range(n) for side in (0, 1)))
    group = automorphism_generators(cover)
    pairs = []
    for sigma in group.generators:
        first = Permutation(sigma(cover_index(x, 0)) // 2 for x in range(n))
        second = Permutation(sigma(cover_index(x, 1)) // 2 for x in range(n))
        pairs.append(TFPair(first, second))
    return pairs


def tf_group(delta: Digraph) -> PermGroup:
    """The TF group as a permutation group on the double half-cover."""
    gens = [p.as_cover_permutation() for p in tf_from_cdhc(delta)]
    return PermGroup(2 * delta.vertex_count, gens)


def is_psi_stable(delta: Digraph, H: PsiGroup) -> bool:
    if H.delta_degree != delta.vertex_count:
        raise DegreeMismatchError("H does not act on the base vertices")
    return all(is_tf_pair(delta, g, H.elements[H.psi[a]])
               for a, g in enumerate(H.elements))


def is_psi_arc_transitive(delta: Digraph, H: PsiGroup) -> bool:
    """Every arc maps to every other arc via ``(x^g, y^(g^psi))``.

    Since the admissible moves form a group action on arcs, it suffices to
    reach every arc from the first one.
    """
    if not is_psi_stable(delta, H):
        return False
    arcs = delta.arcs
    if not arcs:
        return True
    x, y = arcs[0]
    reached = {(g(x), H.elements[H.psi[a]](y)) for a, g in enumerate(H.elements)}
    return reached >= set(arcs)


def dihedral_theta_group(n: int) -> PsiGroup:
    """Dihedral group ``<a, b>`` on ``Z_n`` (``x^a = x+1``, ``x^b = -x``) with
    ``psi`` fixing rotations and sending ``b a^i`` to ``b a^(i+1)``.

    Elements are listed as ``a^0..a^(n-1)`` followed by ``b a^0..b a^(n-1)``.
    """
    if n < 3:
        raise ConstructionError(f"dihedral_theta_group needs n >= 3, got {n}")
    rotations = [Permutation((x + i) % n for x in range(n)) for i in range(n)]
    reflections = [Permutation((i - x) % n for x in range(n)) for i in range(n)]
    psi = list(range(n)) + [n + (i + 1) % n for i in range(n)]
    return PsiGroup(n, tuple(rotations + reflections), tuple(psi))


def theta_tf_pairs(n: int) -> list[TFPair]:
    """The 2n pairs ``(a^i, a^i)`` and ``(b a^i, b a^(i+1))``."""
    H = dihedral_theta_group(n)
    return [TFPair(g, H.elements[H.psi[a]]) for a, g in enumerate(H.elements)]


def cdhc_side_blocks(delta: Digraph) -> list[tuple[int, int]]:
    return [(cover_index(x, 0), cover_index(x, 1)) for x in range(delta.vertex_count)]


def is_stable(delta: Digraph) -> bool:
    """Is every pair ``{(x,0), (x,1)}`` a block of Aut(CDHC(delta))?

    When the automorphism group is transitive each pair is compared with the
    minimal block containing it.  Otherwise the pairs are all blocks exactly
    when together they form a partition preserved by every generator, which is
    checked directly.
    """
    group = automorphism_generators(cdhc(delta))
    pairs = cdhc_side_blocks(delta)
    if group.is_transitive():
        return all(minimal_block(group, pair).block_of(pair[0]) == pair for pair in pairs)
    return is_block_system(group, pairs)


def tf_generated_pairs(delta: Digraph, limit: int = 100_000) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All TF pairs, by enumerating the group the generators span."""
    n = delta.vertex_count
    group = tf_group(delta)
    out = set()
    for sigma in group.elements(limit=limit):
        out.add((tuple(sigma(cover_index(x, 0)) // 2 for x in range(n)),
                 tuple(sigma(cover_index(x, 1)) // 2 for x in range(n))))
    return out
