"""Finite commutative subspace lattices in the diagonal model.

A lattice element is a set of coordinates in ``{1..n}``, standing for the
orthogonal projection onto the span of those standard basis vectors.  Such
projections all commute and the lattice of sets is completely distributive,
so neither property needs checking.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import DimensionError, InputError, MembershipError


@dataclass(frozen=True)
class CoordSet:
    """Sorted, deduplicated subset of ``{1..n}``."""

    n: int
    members: tuple = ()

    def __post_init__(self):
        ms = tuple(sorted(set(self.members)))
        for m in ms:
            if not isinstance(m, int) or not 1 <= m <= self.n:
                raise InputError(f"coordinate {m!r} outside 1..{self.n}")
        object.__setattr__(self, "members", ms)

    @classmethod
    def full(cls, n: int) -> "CoordSet":
        return cls(n, tuple(range(1, n + 1)))

    @classmethod
    def empty(cls, n: int) -> "CoordSet":
        return cls(n, ())

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, k):
        return k in self._set

    def __bool__(self):
        return bool(self.members)

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.members)

    def _check(self, other: "CoordSet"):
        if self.n != other.n:
            raise DimensionError(f"ambient dimensions differ: {self.n} vs {other.n}")

    def __and__(self, other: "CoordSet") -> "CoordSet":
        self._check(other)
        return CoordSet(self.n, tuple(self._set & other._set))

    def __or__(self, other: "CoordSet") -> "CoordSet":
        self._check(other)
        return CoordSet(self.n, tuple(self._set | other._set))

    def __sub__(self, other: "CoordSet") -> "CoordSet":
        self._check(other)
        return CoordSet(self.n, tuple(self._set - other._set))

    def __le__(self, other: "CoordSet") -> bool:
        self._check(other)
        return self._set <= other._set

    def __ge__(self, other: "CoordSet") -> bool:
        return other <= self

    def __lt__(self, other: "CoordSet") -> bool:
        return self <= other and self != other

    def __gt__(self, other: "CoordSet") -> bool:
        return other < self

    def complement(self) -> "CoordSet":
        return CoordSet(self.n, tuple(k for k in range(1, self.n + 1) if k not in self._set))

    def sort_key(self) -> tuple:
        return (len(self.members), self.members)

    def __repr__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


def coords(n: int, *members: int) -> CoordSet:
    return CoordSet(n, members)


def meet(a: CoordSet, b: CoordSet) -> CoordSet:
    return a & b


def join(a: CoordSet, b: CoordSet) -> CoordSet:
    return a | b


def comparable(M: CoordSet, N: CoordSet) -> bool:
    return M <= N or N <= M


@dataclass(frozen=True)
class SubspaceLattice:
    """Family of coordinate sets containing empty and full, closed under union and intersection.

    Elements are kept in canonical order: by size, then lexicographically.
    Build one with :func:`closure`.
    """

    n: int
    elements: tuple

    def __post_init__(self):
        els = tuple(sorted(set(self.elements), key=CoordSet.sort_key))
        object.__setattr__(self, "elements", els)

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, E) -> bool:
        return E in self._members

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    @property
    def full(self) -> CoordSet:
        return CoordSet.full(self.n)

    @property
    def empty(self) -> CoordSet:
        return CoordSet.empty(self.n)

    @cached_property
    def _pred(self) -> dict:
        return {M: _predecessor(self.elements, M) for M in self.elements}

    @cached_property
    def _hull(self) -> dict:
        full = self.full
        out = {}
        for j in range(1, self.n + 1):
            acc = full
            for E in self.elements:
                if j in E:
                    acc = acc & E
            out[j] = acc
        return out

    def predecessor(self, M: CoordSet) -> CoordSet:
        return predecessor(self, M)

    def co(self, M: CoordSet) -> CoordSet:
        """Complement of ``predecessor(M)``: the coordinates carrying the functional side."""
        return self.predecessor(M).complement()

    def __repr__(self):
        return f"SubspaceLattice(n={self.n}, elements={list(self.elements)})"


def _predecessor(elements: Iterable[CoordSet], M: CoordSet) -> CoordSet:
    out = set()
    for N in elements:
        if not N >= M:
            out.update(N.members)
    return CoordSet(M.n, tuple(out))


def closure(n: int, generators: Iterable[Sequence[int] | CoordSet] = ()) -> SubspaceLattice:
    """Smallest lattice on ``{1..n}`` containing ``generators``, empty and full."""
    if n < 0:
        raise InputError("ambient dimension must be nonnegative")
    family = {CoordSet.empty(n), CoordSet.full(n)}
    for g in generators:
        if isinstance(g, CoordSet):
            if g.n != n:
                raise InputError(f"generator {g} lives in dimension {g.n}, not {n}")
            family.add(g)
        else:
            family.add(CoordSet(n, tuple(g)))
    frontier = list(family)
    while frontier:
        fresh = set()
        current = list(family)
        for a in frontier:
            for b in current:
                for c in (a | b, a & b):
                    if c not in family and c not in fresh:
                        fresh.add(c)
        family |= fresh
        frontier = list(fresh)
    return SubspaceLattice(n, tuple(family))


def random_lattice(n: int, rng: random.Random, generators: Optional[int] = None) -> SubspaceLattice:
    """Closure of a few random nonempty coordinate sets."""
    if generators is None:
        generators = rng.randint(1, n + 1)
    gens = []
    for _ in range(generators):
        size = rng.randint(1, n)
        gens.append(rng.sample(range(1, n + 1), size))
    return closure(n, gens)


def predecessor(L: SubspaceLattice, M: CoordSet) -> CoordSet:
    """``M_-``: the union of all members of ``L`` that do not contain ``M``.

    The condition is "not a superset of M", not "different from M"; the
    latter would make ``M_-`` contain ``M`` itself whenever a larger member
    exists, leaving no room for rank-one operators at ``M``.
    """
    if M not in L:
        raise MembershipError(f"{M} is not a lattice member")
    return L._pred[M]


def smallest_containing(L: SubspaceLattice, j: int) -> CoordSet:
    """Intersection of all members containing coordinate ``j``."""
    if not 1 <= j <= L.n:
        raise InputError(f"coordinate {j} outside 1..{L.n}")
    return L._hull[j]


def smallest_containing_set(L: SubspaceLattice, S: Iterable[int]) -> CoordSet:
    """Smallest member containing every coordinate of ``S`` (the join of the hulls)."""
    acc = L.empty
    for j in S:
        acc = acc | smallest_containing(L, j)
    return acc


@dataclass(frozen=True)
class InterestingFamily:
    """Members ``N`` with ``N`` nonempty and ``N_-`` not full, with their predecessors."""

    lattice: SubspaceLattice
    members: tuple
    pred: dict = field(compare=False)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, N) -> bool:
        return N in self.pred

    def co(self, N: CoordSet) -> CoordSet:
        return self.pred[N].complement()


def interesting_family(L: SubspaceLattice) -> InterestingFamily:
    full = L.full
    pred = {}
    for N in L.elements:
        if not N:
            continue
        p = predecessor(L, N)
        if p != full:
            pred[N] = p
    return InterestingFamily(L, tuple(N for N in L.elements if N in pred), pred)


def validate_cdl(L: SubspaceLattice) -> bool:
    """Both covering joins equal the full space.

    The members with ``N_-`` not full must cover every coordinate, and so
    must the complements ``N_-^perp`` over nonzero ``N``.  This holds for
    every finite lattice of sets; a False here means the lattice object is
    corrupt.
    """
    full = L.full
    first = L.empty
    second = L.empty
    for N in L.elements:
        p = predecessor(L, N)
        if p != full:
            first = first | N
        if N:
            second = second | p.complement()
    return first == full and second == full


def direct_sum(*lattices: SubspaceLattice) -> SubspaceLattice:
    """Lattice on the concatenated coordinates whose members are unions of blockwise members."""
    n = sum(L.n for L in lattices)
    gens = []
    offset = 0
    for L in lattices:
        for E in L.elements:
            gens.append(CoordSet(n, tuple(k + offset for k in E)))
        offset += L.n
    return closure(n, gens)


def orthocomplement_lattice(L: SubspaceLattice) -> SubspaceLattice:
    """``{E^perp : E in L}``; its algebra is the transpose of ``Alg L``."""
    return SubspaceLattice(L.n, tuple(E.complement() for E in L.elements))
