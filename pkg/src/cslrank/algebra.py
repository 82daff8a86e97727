"""The algebra ``Alg L`` as a mask of allowed matrix entries.

Coordinates are 1-indexed here, matching lattice members.  ``(i, j)`` is
allowed when every member containing ``j`` also contains ``i``: exactly the
entries a matrix may use and still leave each member invariant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DimensionError, UnachievableRank, ZeroVectorError
from .exactlin import ZERO, Matrix, Scalar, Vector, outer, rank
from .lattice import (
    CoordSet,
    SubspaceLattice,
    closure,
    interesting_family,
    predecessor,
    smallest_containing,
    smallest_containing_set,
)


@dataclass(frozen=True)
class MaskAlgebra:
    n: int
    allowed: frozenset
    lattice: SubspaceLattice

    def __contains__(self, ij) -> bool:
        return ij in self.allowed

    def pairs(self) -> list:
        """Allowed pairs in row-major order."""
        return sorted(self.allowed)

    def star_pattern(self) -> str:
        return star_pattern(self)


@dataclass(frozen=True)
class RankOneWitness:
    x: Vector
    f: Vector
    E: CoordSet


def basis(n: int, k: int) -> Vector:
    """``e_k`` with 1-indexed ``k``."""
    return Vector.basis(n, k - 1)


def unit(n: int, i: int, j: int) -> Matrix:
    """Matrix unit ``E_ij = e_i (x) e_j*`` with 1-indexed ``i, j``."""
    return Matrix.unit(n, n, i - 1, j - 1)


def support(v) -> CoordSet:
    """1-indexed support of a vector, as a coordinate set."""
    return CoordSet(len(v), tuple(k + 1 for k in Vector(v).support()))


def mask(L: SubspaceLattice) -> MaskAlgebra:
    allowed = set()
    for j in range(1, L.n + 1):
        for i in smallest_containing(L, j):
            allowed.add((i, j))
    return MaskAlgebra(L.n, frozenset(allowed), L)


def lattice_from_mask(n: int, allowed) -> SubspaceLattice:
    """Invariant coordinate sets of a star pattern.

    ``E`` is invariant when ``j in E`` and ``(i, j)`` allowed force ``i in E``.
    Each coordinate's reachable set under that rule is invariant, and every
    invariant set is a union of them, so these sets generate the lattice.
    """
    allowed = set(allowed)
    for i, j in allowed:
        if not (1 <= i <= n and 1 <= j <= n):
            raise DimensionError(f"entry {(i, j)} outside a {n}x{n} pattern")
    above = {j: {i for i, jj in allowed if jj == j} for j in range(1, n + 1)}
    gens = []
    for j in range(1, n + 1):
        seen, todo = {j}, [j]
        while todo:
            k = todo.pop()
            for i in above[k] - seen:
                seen.add(i)
                todo.append(i)
        gens.append(CoordSet(n, tuple(seen)))
    return closure(n, gens)


def is_member(A: Matrix, M: MaskAlgebra) -> bool:
    if A.shape != (M.n, M.n):
        raise DimensionError(f"expected a {M.n}x{M.n} matrix, got {A.shape}")
    return all((i + 1, j + 1) in M.allowed for i, j in A.support())


def disallowed_entries(A: Matrix, M: MaskAlgebra) -> list:
    """1-indexed positions where ``A`` is nonzero but the mask forbids it."""
    return [(i + 1, j + 1) for i, j in A.support() if (i + 1, j + 1) not in M.allowed]


def rank_one_member(L: SubspaceLattice, x, f) -> Optional[RankOneWitness]:
    """Decide whether ``x (x) f*`` lies in ``Alg L`` (Longstaff's criterion).

    Only the smallest member ``E`` containing ``supp(x)`` is tried.  Any other
    candidate ``E'`` with ``x`` in ``E'`` contains ``E``, and ``predecessor``
    is monotone, so ``E'_-`` contains ``E_-``: the orthocomplement available
    to ``f`` only shrinks.  Hence a witness exists iff the minimal one works.
    """
    x, f = Vector(x), Vector(f)
    if x.is_zero() or f.is_zero():
        raise ZeroVectorError("rank-one membership needs nonzero x and f")
    if len(x) != L.n or len(f) != L.n:
        raise DimensionError("vector lengths must equal the ambient dimension")
    E = smallest_containing_set(L, (k + 1 for k in x.support()))
    pred = predecessor(L, E)
    if any((k + 1) in pred for k in f.support()):
        return None
    return RankOneWitness(x, f, E)


def span_check(L: SubspaceLattice) -> bool:
    """Rank-one members of ``Alg L`` span the whole mask algebra.

    Every allowed matrix unit must itself be a rank-one member; together
    with ``x (x) f*`` being masked whenever it is a member, the two spans
    coincide.
    """
    M = mask(L)
    for i, j in M.allowed:
        w = rank_one_member(L, basis(L.n, i), basis(L.n, j))
        if w is None or not is_member(outer(w.x, w.f), M):
            return False
    return True


def _random_scalar(rng: random.Random, complex_entries: bool = True) -> Scalar:
    re = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
    im = Fraction(rng.randint(-6, 6), rng.randint(1, 3)) if complex_entries and rng.random() < 0.5 else 0
    return Scalar(re, im)


def random_vector(n: int, coords, rng: random.Random, complex_entries: bool = True) -> Vector:
    """Random exact vector supported inside ``coords`` (1-indexed), never zero."""
    coords = list(coords)
    while True:
        entries = [ZERO] * n
        for k in coords:
            entries[k - 1] = _random_scalar(rng, complex_entries)
        v = Vector(entries)
        if not v.is_zero():
            return v


def random_member(M: MaskAlgebra, target_rank: int, seed=0, complex_entries: bool = True) -> Matrix:
    """A matrix in ``Alg L`` of rank exactly ``target_rank``, as a sum of rank-one members.

    Term ``k`` uses ``x`` in the hull of a chosen coordinate ``c_k`` and ``f``
    orthogonal to that hull's predecessor, which always contains ``e_{c_k}``.
    Distinct coordinates make the sum generically of full rank; should a
    random draw degenerate, a diagonal matrix with ``target_rank`` nonzero
    entries is returned instead (the diagonal is always allowed).
    """
    n = M.n
    if not 0 <= target_rank <= n:
        raise UnachievableRank(f"rank {target_rank} is impossible in dimension {n}")
    if target_rank == 0:
        return Matrix.zeros(n)
    rng = random.Random(seed)
    L = M.lattice
    for _ in range(8):
        chosen = rng.sample(range(1, n + 1), target_rank)
        A = Matrix.zeros(n)
        for c in chosen:
            E = smallest_containing(L, c)
            co = predecessor(L, E).complement()
            x = random_vector(n, E, rng, complex_entries)
            f = random_vector(n, co, rng, complex_entries)
            A = A + outer(x, f)
        if rank(A) == target_rank:
            return A
    chosen = rng.sample(range(1, n + 1), target_rank)
    return Matrix.diag([_nonzero(rng, complex_entries) if k + 1 in chosen else ZERO for k in range(n)])


def _nonzero(rng, complex_entries):
    while True:
        s = _random_scalar(rng, complex_entries)
        if s:
            return s


def random_rank_one(L: SubspaceLattice, N: CoordSet, rng: random.Random, complex_entries: bool = True):
    """Random ``(x, f)`` with ``x`` in ``N`` and ``f`` in ``N_-^perp``."""
    co = predecessor(L, N).complement()
    return random_vector(L.n, N, rng, complex_entries), random_vector(L.n, co, rng, complex_entries)


def random_invertible_member(M: MaskAlgebra, rng: random.Random, complex_entries: bool = True) -> Matrix:
    """Random invertible matrix supported on the mask."""
    n = M.n
    while True:
        rows = [[ZERO] * n for _ in range(n)]
        for i, j in M.allowed:
            rows[i - 1][j - 1] = _nonzero(rng, complex_entries) if i == j else _random_scalar(rng, complex_entries)
        A = Matrix(rows)
        if rank(A) == n:
            return A


def star_pattern(M: MaskAlgebra) -> str:
    lines = []
    for i in range(1, M.n + 1):
        lines.append(" ".join("*" if (i, j) in M.allowed else "." for j in range(1, M.n + 1)))
    return "\n".join(lines)


def algebra_dimension(M: MaskAlgebra) -> int:
    return len(M.allowed)


def family_rank_ones(L: SubspaceLattice) -> list:
    """``(N, i, j)`` for every member ``N`` of the interesting family and basis pair in its rectangle."""
    F = interesting_family(L)
    out = []
    for N in F:
        for i in N:
            for j in F.co(N):
                out.append((N, i, j))
    return out
