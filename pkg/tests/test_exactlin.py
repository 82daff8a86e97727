import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cslrank.errors import FactorError, InputError, RankError
from cslrank.exactlin import (
    I,
    ONE,
    ZERO,
    Matrix,
    Scalar,
    Vector,
    collinear,
    format_scalar,
    inverse,
    match_factor,
    outer,
    parse_scalar,
    rank,
    rank_one_factor,
    similar,
)

from conftest import sympy_matrix

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)
scalars = st.builds(Scalar, fractions, fractions)


def rand_scalar(rng, complex_entries=True):
    re = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    im = Fraction(rng.randint(-4, 4), rng.randint(1, 3)) if complex_entries else 0
    return Scalar(re, im)


def rand_matrix(rng, rows, cols, r):
    """Product of random rows x r and r x cols factors: rank at most r."""
    P = Matrix([[rand_scalar(rng) for _ in range(r)] for _ in range(rows)], cols=r)
    Q = Matrix([[rand_scalar(rng) for _ in range(cols)] for _ in range(r)], cols=cols)
    return P @ Q


class TestScalar:
    @given(scalars)
    def test_text_roundtrip(self, s):
        assert parse_scalar(format_scalar(s)) == s

    @given(scalars, scalars, scalars)
    def test_field_laws(self, a, b, c):
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        assert (a * b).conj() == a.conj() * b.conj()
        if b:
            assert (a / b) * b == a

    @given(scalars)
    def test_abs2_is_product_with_conjugate(self, s):
        assert Scalar(s.abs2()) == s * s.conj()

    @pytest.mark.parametrize("text, want", [
        ("3", Scalar(3)),
        ("-1/2", Scalar(Fraction(-1, 2))),
        ("1/2+3/4 i", Scalar(Fraction(1, 2), Fraction(3, 4))),
        ("1/2-3/4 i", Scalar(Fraction(1, 2), Fraction(-3, 4))),
        ("i", I),
        ("-2/3i", Scalar(0, Fraction(-2, 3))),
        ("0+1 i", I),
    ])
    def test_parse_forms(self, text, want):
        assert parse_scalar(text) == want

    def test_format_forms(self):
        assert format_scalar(Scalar(Fraction(1, 2), Fraction(-3, 4))) == "1/2-3/4 i"
        assert format_scalar(Scalar(7)) == "7"

    @pytest.mark.parametrize("bad", ["", "x", "1/0", "1/2+", "i i"])
    def test_parse_rejects(self, bad):
        with pytest.raises(InputError):
            parse_scalar(bad)

    def test_float_complex_rejected(self):
        with pytest.raises(TypeError):
            Vector([1 + 2j])

    def test_scalars_hash_like_equal(self):
        assert hash(Scalar(Fraction(2, 4))) == hash(Scalar(Fraction(1, 2)))
        assert len({Scalar(1), Scalar(Fraction(2, 2)), ONE}) == 1


class TestRank:
    def test_against_sympy(self):
        rng = random.Random(7)
        for _ in range(60):
            rows, cols = rng.randint(1, 6), rng.randint(1, 6)
            r = rng.randint(0, min(rows, cols))
            A = rand_matrix(rng, rows, cols, r) if r else Matrix.zeros(rows, cols)
            assert rank(A) == sympy_matrix(A).rank()

    def test_gaussian_cancellation(self):
        # rows differ by a factor i: rank one over C, rank two over R
        A = Matrix([[1, I], [I, -1]])
        assert rank(A) == 1

    def test_small_cases(self):
        assert rank(Matrix.zeros(3)) == 0
        assert rank(Matrix.identity(4)) == 4
        assert rank(Matrix.zeros(2, 0)) == 0

    def test_inverse_against_sympy(self):
        rng = random.Random(3)
        for _ in range(20):
            n = rng.randint(1, 5)
            A = rand_matrix(rng, n, n, n)
            if rank(A) < n:
                continue
            B = inverse(A)
            assert A @ B == Matrix.identity(n)
            assert same(sympy_matrix(B), sympy_matrix(A).inv())

    def test_inverse_singular(self):
        with pytest.raises(ZeroDivisionError):
            inverse(Matrix([[1, 2], [2, 4]]))


class TestFactor:
    def test_rank_one_factor_reconstructs(self):
        rng = random.Random(11)
        for _ in range(30):
            u = Vector(rand_scalar(rng) for _ in range(4))
            v = Vector(rand_scalar(rng) for _ in range(5))
            if u.is_zero() or v.is_zero():
                continue
            B = outer(u, v)
            a, b = rank_one_factor(B)
            assert outer(a, b) == B
            assert similar(a, u) and similar(b, v)

    def test_rank_one_factor_rejects_rank_two(self):
        with pytest.raises(RankError):
            rank_one_factor(Matrix.identity(2))

    def test_match_factor(self):
        u = Vector([1, I, 0])
        v = Vector([Scalar(2, 1), 0, 3])
        assert match_factor(outer(u, v), v) == u
        with pytest.raises(FactorError):
            match_factor(outer(u, v), Vector([1, 0, 0]))

    def test_outer_is_u_times_v_star(self):
        u = Vector([1, I])
        v = Vector([I, 2])
        B = outer(u, v)
        assert B == Matrix.from_columns([u]) @ Matrix.from_columns([v]).H

    def test_collinear(self):
        a = Vector([2, Scalar(0, 2), 0])
        b = Vector([1, I, 0])
        assert collinear(a, b) == Scalar(2)
        assert collinear(Vector([1, 0]), Vector([0, 1])) is None
        assert collinear(Vector([0, 0]), Vector([0, 0])) == ZERO


def same(X, Y):
    return (X - Y).applyfunc(sympy.expand).is_zero_matrix


def test_matrix_algebra_against_sympy():
    rng = random.Random(5)
    A = rand_matrix(rng, 3, 4, 3)
    B = rand_matrix(rng, 4, 2, 2)
    assert same(sympy_matrix(A @ B), sympy_matrix(A) * sympy_matrix(B))
    assert same(sympy_matrix(A.H), sympy_matrix(A).H)
    assert same(sympy_matrix(A.T), sympy_matrix(A).T)


def test_matrix_is_hashable_and_immutable():
    A = Matrix([[1, 2], [3, 4]])
    assert {A: 1}[Matrix([[1, 2], [3, 4]])] == 1
    with pytest.raises(AttributeError):
        A.rows = 3
