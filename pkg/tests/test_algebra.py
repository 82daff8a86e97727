import random

import pytest

from cslrank.algebra import (
    algebra_dimension,
    basis,
    disallowed_entries,
    is_member,
    lattice_from_mask,
    mask,
    random_invertible_member,
    random_member,
    random_vector,
    rank_one_member,
    span_check,
    support,
    unit,
)
from cslrank.demos import a2n_pattern, a4_lattice, ainf_lattice, ainf_pattern, nest
from cslrank.errors import DimensionError, UnachievableRank, ZeroVectorError
from cslrank.exactlin import I, Matrix, Vector, outer, rank
from cslrank.lattice import closure, predecessor

from conftest import lattices

A4_STARS = """\
* * . *
. * . .
. * * *
. . . *"""


def brute_allowed(L):
    return {(i, j) for i in range(1, L.n + 1) for j in range(1, L.n + 1)
            if all(i in E for E in L if j in E)}


def longstaff_any(L, x, f):
    """Try every member, not just the smallest one."""
    xs = set(support(x))
    fs = set(support(f))
    for E in L:
        if xs <= set(E) and not fs & set(predecessor(L, E)):
            return True
    return False


def test_mask_definition():
    for L in lattices(60, seed=20):
        assert mask(L).allowed == brute_allowed(L)


def test_a4_star_pattern():
    assert mask(a4_lattice()).star_pattern() == A4_STARS


def test_trivial_lattice_is_full_matrix_algebra():
    M = mask(closure(3))
    assert M.star_pattern() == "\n".join(["* * *"] * 3)
    assert algebra_dimension(M) == 9


def test_nest_is_upper_triangular():
    M = mask(nest(5))
    assert M.allowed == {(i, j) for i in range(1, 6) for j in range(i, 6)}


def test_ainf_truncation_matches_pattern():
    assert mask(ainf_lattice(6)).allowed == ainf_pattern(6)


def test_lattice_from_mask_roundtrip():
    for L in lattices(60, seed=21):
        assert lattice_from_mask(L.n, mask(L).allowed) == L


def test_a2n_lattice_mask_roundtrip():
    for m in (2, 3, 4):
        L = lattice_from_mask(2 * m, a2n_pattern(m))
        assert mask(L).allowed == a2n_pattern(m)


def test_longstaff_agrees_with_mask_on_units():
    for L in lattices(80, seed=22):
        M = mask(L)
        for i in range(1, L.n + 1):
            for j in range(1, L.n + 1):
                w = rank_one_member(L, basis(L.n, i), basis(L.n, j))
                assert (w is not None) == ((i, j) in M.allowed)


def test_longstaff_agrees_with_mask_on_random_vectors():
    rng = random.Random(23)
    for L in lattices(60, seed=24):
        M = mask(L)
        for _ in range(10):
            xs = rng.sample(range(1, L.n + 1), rng.randint(1, L.n))
            fs = rng.sample(range(1, L.n + 1), rng.randint(1, L.n))
            x, f = random_vector(L.n, xs, rng), random_vector(L.n, fs, rng)
            w = rank_one_member(L, x, f)
            assert (w is not None) == is_member(outer(x, f), M) == longstaff_any(L, x, f)
            if w is not None:
                assert set(support(x)) <= set(w.E)


def test_rank_one_member_errors():
    L = a4_lattice()
    with pytest.raises(ZeroVectorError):
        rank_one_member(L, Vector.zeros(4), basis(4, 1))
    with pytest.raises(DimensionError):
        rank_one_member(L, basis(3, 1), basis(4, 1))


def test_span_check():
    for L in lattices(100, seed=25):
        assert span_check(L)


def test_membership():
    M = mask(a4_lattice())
    assert is_member(unit(4, 1, 4), M)
    assert not is_member(unit(4, 4, 1), M)
    A = unit(4, 2, 1) + unit(4, 1, 1)
    assert disallowed_entries(A, M) == [(2, 1)]
    with pytest.raises(DimensionError):
        is_member(Matrix.identity(3), M)


def test_random_member_rank_and_support():
    for L in lattices(30, seed=26, max_n=6):
        M = mask(L)
        for r in range(L.n + 1):
            A = random_member(M, r, seed=r)
            assert rank(A) == r
            assert is_member(A, M)


def test_random_member_is_seeded():
    M = mask(a4_lattice())
    assert random_member(M, 2, seed=9) == random_member(M, 2, seed=9)


def test_random_member_rejects_impossible_rank():
    with pytest.raises(UnachievableRank):
        random_member(mask(a4_lattice()), 5)


def test_random_invertible_member():
    rng = random.Random(27)
    for L in lattices(20, seed=28):
        M = mask(L)
        A = random_invertible_member(M, rng)
        assert rank(A) == L.n and is_member(A, M)


def test_unit_is_one_indexed():
    E = unit(3, 1, 3)
    assert E[0, 2] == 1 and rank(E) == 1
    assert outer(basis(3, 2), basis(3, 2).scale(I)) == unit(3, 2, 2).scale(-I)
