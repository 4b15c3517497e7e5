"""Permutations and finitely generated permutation groups.

Points are ``0..degree-1`` and groups act on the right: ``x^g`` is written
``g(x)`` and ``p * q`` applies ``p`` first, so ``x^(pq) = (x^p)^q``.

Group orders, membership and pointwise stabilizers come from a deterministic
Schreier-Sims stabilizer chain.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Optional, Sequence

from sharparc.errors import DegreeMismatchError, GroupError


class Permutation:
    """A bijection of ``range(degree)`` stored as its image array."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> "Permutation":
        p = object.__new__(cls)
        object.__setattr__(p, "images", images)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> "Permutation":
        images = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a] = b
        return cls(images)

    @classmethod
    def from_function(cls, degree: int, func) -> "Permutation":
        return cls(func(x) for x in range(degree))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, e: int) -> "Permutation":
        base = self if e >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        e = abs(e)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "Permutation":
        return Permutation._trusted(_inv(self.images))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def conjugate(self, by: "Permutation") -> "Permutation":
        """``by^-1 * self * by``."""
        return by.inverse() * self * by

    def order(self) -> int:
        from math import lcm
        result = 1
        seen = [False] * self.degree
        for start in range(self.degree):
            if seen[start]:
                continue
            length = 0
            x = start
            while not seen[x]:
                seen[x] = True
                x = self.images[x]
                length += 1
            result = lcm(result, length)
        return result

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())
        return f"Permutation({cyc or '()'}, degree={self.degree})"

    def to_json(self) -> list[int]:
        return list(self.images)


def _inv(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(q[x] for x in p)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """The product applying ``p`` first, then ``q``."""
    if p.degree != q.degree:
        raise DegreeMismatchError(f"cannot compose degrees {p.degree} and {q.degree}")
    return Permutation._trusted(_mul(p.images, q.images))


def _act(images: tuple[int, ...], seed):
    if isinstance(seed, tuple):
        return tuple(images[x] for x in seed)
    if isinstance(seed, frozenset):
        return frozenset(images[x] for x in seed)
    return images[seed]


@dataclass(frozen=True)
class BlockSystem:
    """A partition of the domain into blocks, ordered by smallest point."""

    blocks: tuple[tuple[int, ...], ...]

    def block_of(self, x: int) -> tuple[int, ...]:
        for b in self.blocks:
            if x in b:
                return b
        raise KeyError(x)

    def __len__(self) -> int:
        return len(self.blocks)


class _Level:
    __slots__ = ("base", "gens", "trans")

    def __init__(self, base: int):
        self.base = base
        self.gens: list[tuple[int, ...]] = []
        self.trans: dict[int, tuple[int, ...]] = {}

    def rebuild(self, degree: int):
        ident = tuple(range(degree))
        trans = {self.base: ident}
        queue = deque([self.base])
        while queue:
            x = queue.popleft()
            ux = trans[x]
            for g in self.gens:
                y = g[x]
                if y not in trans:
                    trans[y] = _mul(ux, g)
                    queue.append(y)
        self.trans = trans


class StabilizerChain:
    """Base and strong generating set built by deterministic Schreier-Sims.

    ``base_prefix`` forces the first base points (repeats and points that
    turn out to be redundant are kept), which is what pointwise stabilizers
    of a prescribed set need.
    """

    def __init__(self, degree: int, generators: Sequence[tuple[int, ...]],
                 base_prefix: Sequence[int] = ()):
        self.degree = degree
        self._ident = tuple(range(degree))
        prefix = list(dict.fromkeys(base_prefix))
        self.levels: list[_Level] = [_Level(b) for b in prefix]
        gens = [g for g in generators if g != self._ident]
        for g in gens:
            if not any(g[lev.base] != lev.base for lev in self.levels):
                self.levels.append(_Level(self._moved_point(g)))
        for i, lev in enumerate(self.levels):
            fixed = [lev2.base for lev2 in self.levels[:i]]
            lev.gens = [g for g in gens if all(g[b] == b for b in fixed)]
            lev.rebuild(degree)
        self._run()

    def _moved_point(self, g) -> int:
        for x, y in enumerate(g):
            if x != y:
                return x
        raise GroupError("identity moves no point")

    def sift(self, g: tuple[int, ...], start: int = 0) -> tuple[tuple[int, ...], int]:
        """Strip ``g`` through levels ``start..``; returns (residue, failing level)."""
        for i in range(start, len(self.levels)):
            lev = self.levels[i]
            beta = g[lev.base]
            u = lev.trans.get(beta)
            if u is None:
                return g, i
            g = _mul(g, _inv(u))
        return g, len(self.levels)

    def _run(self):
        i = len(self.levels) - 1
        while i >= 0:
            added = self._check_level(i)
            if added is None:
                i -= 1
            else:
                i = added

    def _check_level(self, i: int) -> Optional[int]:
        lev = self.levels[i]
        for beta, u in list(lev.trans.items()):
            for x in lev.gens:
                image = x[beta]
                h = _mul(_mul(u, x), _inv(lev.trans[image]))
                if h == self._ident:
                    continue
                residue, j = self.sift(h, i + 1)
                if residue == self._ident:
                    continue
                if j == len(self.levels):
                    self.levels.append(_Level(self._moved_point(residue)))
                for m in range(i + 1, j + 1):
                    self.levels[m].gens.append(residue)
                    self.levels[m].rebuild(self.degree)
                return j
        return None

    def order(self, from_level: int = 0) -> int:
        result = 1
        for lev in self.levels[from_level:]:
            result *= len(lev.trans)
        return result

    def contains(self, g: tuple[int, ...]) -> bool:
        residue, _ = self.sift(g)
        return residue == self._ident

    @property
    def base(self) -> list[int]:
        return [lev.base for lev in self.levels]

    @property
    def strong_generators(self) -> list[tuple[int, ...]]:
        seen = dict()
        for lev in self.levels:
            for g in lev.gens:
                seen.setdefault(g, None)
        return list(seen)


class PermGroup:
    """A permutation group given by generators.

    Identity generators are pruned.  The stabilizer chain is built lazily on
    first use under a lock; afterwards every query is read-only.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation | Sequence[int]] = ()):
        if degree < 0:
            raise GroupError("degree must be non-negative")
        self.degree = degree
        gens = []
        for g in generators:
            p = g if isinstance(g, Permutation) else Permutation(g)
            if p.degree != degree:
                raise DegreeMismatchError(
                    f"generator of degree {p.degree} in a group of degree {degree}")
            if not p.is_identity() and p not in gens:
                gens.append(p)
        self.generators: tuple[Permutation, ...] = tuple(gens)
        self._chain: Optional[StabilizerChain] = None
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, generators={len(self.generators)})"

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            with self._lock:
                if self._chain is None:
                    self._chain = StabilizerChain(
                        self.degree, [g.images for g in self.generators])
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatchError(
                f"permutation of degree {p.degree} vs group of degree {self.degree}")
        return self.chain.contains(p.images)

    __contains__ = contains

    def orbit(self, seed) -> set:
        return orbit(self, seed)

    def is_transitive(self) -> bool:
        return self.degree <= 1 or len(orbit(self, 0)) == self.degree

    def elements(self, limit: Optional[int] = None) -> Iterator[Permutation]:
        """All group elements, by BFS over the Cayley graph of the generators."""
        ident = tuple(range(self.degree))
        seen = {ident}
        queue = deque([ident])
        count = 0
        while queue:
            x = queue.popleft()
            yield Permutation._trusted(x)
            count += 1
            if limit is not None and count >= limit:
                return
            for g in self.generators:
                y = _mul(x, g.images)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)

    def to_json(self) -> list[list[int]]:
        return [g.to_json() for g in self.generators]

    @classmethod
    def from_json(cls, degree: int, payload: Sequence[Sequence[int]]) -> "PermGroup":
        return cls(degree, [Permutation(p) for p in payload])


def orbit(group: PermGroup, seed: Hashable) -> set:
    """Closure of ``seed`` under the generators.

    ``seed`` may be a point, a tuple (componentwise action) or a frozenset
    (setwise action).
    """
    gens = [g.images for g in group.generators]
    seen = {seed}
    queue = deque([seed])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = _act(g, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def group_order(group: PermGroup) -> int:
    return group.order()


def is_member(group: PermGroup, p: Permutation) -> bool:
    return group.contains(p)


def pointwise_stabilizer_order(group: PermGroup, points: Iterable[int]) -> int:
    """Order of the subgroup fixing every point of ``points``."""
    pts = sorted(set(points))
    for x in pts:
        if not 0 <= x < group.degree:
            raise GroupError(f"point {x} outside the domain")
    chain = StabilizerChain(group.degree, [g.images for g in group.generators],
                            base_prefix=pts)
    return chain.order(from_level=len(pts))


def pointwise_stabilizer(group: PermGroup, points: Iterable[int]) -> PermGroup:
    """Generators of the pointwise stabilizer of ``points``."""
    pts = sorted(set(points))
    chain = StabilizerChain(group.degree, [g.images for g in group.generators],
                            base_prefix=pts)
    gens = chain.levels[len(pts)].gens if len(chain.levels) > len(pts) else []
    return PermGroup(group.degree, [Permutation._trusted(g) for g in gens])


def minimal_block(group: PermGroup, seed: Iterable[int]) -> BlockSystem:
    """Finest block system in which all ``seed`` points share a block.

    Union-find closure over the generators (Atkinson's method); the group
    must be transitive.
    """
    seed = sorted(set(seed))
    if len(seed) < 2:
        raise GroupError("seed must contain at least two points")
    if not group.is_transitive():
        raise GroupError("minimal_block needs a transitive group")
    parent = list(range(group.degree))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = deque()
    for x in seed[1:]:
        ra, rb = find(seed[0]), find(x)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
            queue.append((seed[0], x))
    gens = [g.images for g in group.generators]
    while queue:
        a, b = queue.popleft()
        for g in gens:
            ra, rb = find(g[a]), find(g[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
                queue.append((ra, rb))
    return partition_from_labels([find(x) for x in range(group.degree)])


def partition_from_labels(labels: Sequence[Hashable]) -> BlockSystem:
    blocks: dict = {}
    for x, lab in enumerate(labels):
        blocks.setdefault(lab, []).append(x)
    return BlockSystem(tuple(sorted(tuple(b) for b in blocks.values())))


def is_block_system(group: PermGroup, blocks: Sequence[Sequence[int]]) -> bool:
    """True iff every generator maps every block onto a block."""
    owner = {}
    for i, b in enumerate(blocks):
        for x in b:
            owner[x] = i
    if len(owner) != group.degree:
        return False
    for g in group.generators:
        for b in blocks:
            if len({owner[g.images[x]] for x in b}) != 1:
                return False
    return True
