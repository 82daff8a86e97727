"""Exact complex-rational scalars, vectors and matrices.

Everything here is immutable.  Matrices index from 0 like any Python
sequence; the 1-indexed coordinate convention used by lattices and masks
lives in :mod:`cslrank.algebra`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Optional, Sequence

from .errors import DimensionError, FactorError, InputError, RankError


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot build an exact rational from {value!r}")


class Scalar:
    """A Gaussian rational ``re + im*i`` with both parts in lowest terms."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Scalar):
            object.__setattr__(self, "re", re.re)
            object.__setattr__(self, "im", re.im + _frac(im))
            return
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @property
    def re_num(self) -> int:
        return self.re.numerator

    @property
    def re_den(self) -> int:
        return self.re.denominator

    @property
    def im_num(self) -> int:
        return self.im.numerator

    @property
    def im_den(self) -> int:
        return self.im.denominator

    @classmethod
    def _coerce(cls, other) -> Optional["Scalar"]:
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return cls(other)
        return None

    def __add__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __mul__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return Scalar(a * c)
        return Scalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by the zero scalar")
        c, d = o.re, o.im
        if not d:
            return Scalar(self.re / c, self.im / c)
        den = c * c + d * d
        a, b = self.re, self.im
        return Scalar((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im) if self.im else self

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = Scalar._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def format_scalar(s: Scalar) -> str:
    """Text form: ``p/q`` for reals, ``p/q+r/s i`` or ``p/q-r/s i`` otherwise."""
    if not s.im:
        return str(s.re)
    sign = "+" if s.im > 0 else "-"
    return f"{s.re}{sign}{abs(s.im)} i"


def parse_scalar(text) -> Scalar:
    """Inverse of :func:`format_scalar`; also accepts ints, ``i``, ``-2/3i``."""
    if isinstance(text, Scalar):
        return text
    if isinstance(text, (int, Fraction)):
        return Scalar(text)
    if not isinstance(text, str):
        raise InputError(f"not a scalar: {text!r}")
    s = text.replace(" ", "")
    try:
        if not s.endswith("i"):
            return Scalar(Fraction(s))
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut > 0:
            re_part, im_part = body[:cut], body[cut:]
        else:
            re_part, im_part = "0", body
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return Scalar(Fraction(re_part), Fraction(im_part))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed scalar {text!r}") from exc


def as_scalar(value) -> Scalar:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, str):
        return parse_scalar(value)
    if isinstance(value, complex):
        raise TypeError("floating-point complex values are not exact")
    return Scalar(value)


class Vector(tuple):
    """Fixed-length tuple of :class:`Scalar`."""

    def __new__(cls, entries: Iterable = ()):
        return super().__new__(cls, (as_scalar(e) for e in entries))

    @classmethod
    def zeros(cls, n: int) -> "Vector":
        return cls([ZERO] * n)

    @classmethod
    def basis(cls, n: int, k: int) -> "Vector":
        """Standard basis vector with a one at 0-based position ``k``."""
        return cls(ONE if i == k else ZERO for i in range(n))

    def __add__(self, other):
        _same_length(self, other)
        return Vector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        _same_length(self, other)
        return Vector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return Vector(-a for a in self)

    def scale(self, c) -> "Vector":
        c = as_scalar(c)
        return Vector(c * a for a in self)

    def conj(self) -> "Vector":
        return Vector(a.conj() for a in self)

    def inner(self, other) -> Scalar:
        """``<self, other>``, linear in the first slot."""
        _same_length(self, other)
        return sum((a * b.conj() for a, b in zip(self, other)), ZERO)

    def is_zero(self) -> bool:
        return not any(self)

    def support(self) -> tuple:
        """0-based indices of nonzero entries."""
        return tuple(i for i, a in enumerate(self) if a)

    def __repr__(self):
        return "Vector([" + ", ".join(format_scalar(a) for a in self) + "])"


def _same_length(a, b):
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")


class Matrix:
    """Dense immutable matrix of :class:`Scalar` entries, row-major."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, entries: Sequence[Sequence], cols: Optional[int] = None):
        grid = tuple(tuple(as_scalar(e) for e in row) for row in entries)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        for row in grid:
            if len(row) != cols:
                raise DimensionError("ragged matrix rows")
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", grid)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _raw(cls, grid, rows, cols) -> "Matrix":
        m = object.__new__(cls)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "cols", cols)
        object.__setattr__(m, "entries", grid)
        object.__setattr__(m, "_hash", None)
        return m

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None) -> "Matrix":
        cols = rows if cols is None else cols
        row = (ZERO,) * cols
        return cls._raw((row,) * rows, rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(
            tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n, n
        )

    @classmethod
    def unit(cls, rows: int, cols: int, i: int, j: int) -> "Matrix":
        """Matrix unit with a one at 0-based position ``(i, j)``."""
        return cls._raw(
            tuple(
                tuple(ONE if (r == i and c == j) else ZERO for c in range(cols))
                for r in range(rows)
            ),
            rows,
            cols,
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: Optional[int] = None) -> "Matrix":
        columns = [Vector(c) for c in columns]
        if not columns:
            return cls.zeros(rows or 0, 0)
        n = len(columns[0])
        return cls._raw(tuple(tuple(c[r] for c in columns) for r in range(n)), n, len(columns))

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        values = [as_scalar(v) for v in values]
        n = len(values)
        return cls._raw(
            tuple(tuple(values[i] if i == j else ZERO for j in range(n)) for i in range(n)), n, n
        )

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return Vector(self.entries[i])

    def column(self, j: int) -> Vector:
        return Vector(row[j] for row in self.entries)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.entries))
        return self._hash

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.rows,
            self.cols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.rows,
            self.cols,
        )

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = as_scalar(c)
        return Matrix._raw(
            tuple(tuple(c * a for a in r) for r in self.entries), self.rows, self.cols
        )

    def __matmul__(self, other):
        if isinstance(other, Vector):
            if len(other) != self.cols:
                raise DimensionError(f"cannot apply {self.shape} matrix to length {len(other)}")
            return Vector(_dot(r, other) for r in self.entries)
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        tcols = tuple(zip(*other.entries)) if other.rows else ((),) * other.cols
        return Matrix._raw(
            tuple(tuple(_dot(r, c) for c in tcols) for r in self.entries),
            self.rows,
            other.cols,
        )

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self.entries)) if self.rows else (), self.cols, self.rows)

    @property
    def H(self) -> "Matrix":
        """Adjoint: conjugate transpose in the standard basis."""
        return Matrix._raw(
            tuple(tuple(a.conj() for a in col) for col in zip(*self.entries)) if self.rows else (),
            self.cols,
            self.rows,
        )

    def conj(self) -> "Matrix":
        return Matrix._raw(
            tuple(tuple(a.conj() for a in r) for r in self.entries), self.rows, self.cols
        )

    def is_zero(self) -> bool:
        return not any(a for r in self.entries for a in r)

    def support(self) -> list:
        """0-based ``(i, j)`` positions of nonzero entries."""
        return [(i, j) for i, r in enumerate(self.entries) for j, a in enumerate(r) if a]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(
            tuple(tuple(self.entries[i][j] for j in cols) for i in rows), len(rows), len(cols)
        )

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch: {self.shape} vs {other.shape}")

    def tolist(self) -> list:
        return [list(r) for r in self.entries]

    def __repr__(self):
        body = "; ".join(", ".join(format_scalar(a) for a in r) for r in self.entries)
        return f"Matrix[{self.rows}x{self.cols}]({body})"


def _dot(a, b) -> Scalar:
    acc = ZERO
    for x, y in zip(a, b):
        if x and y:
            acc = acc + x * y
    return acc


def outer(u: Sequence, v: Sequence) -> Matrix:
    """The rank-one matrix ``u (x) v*``, i.e. ``g -> <g, v> u``."""
    u = Vector(u)
    vc = [as_scalar(b).conj() for b in v]
    return Matrix._raw(tuple(tuple(a * b for b in vc) for a in u), len(u), len(vc))


# --- rank by fraction-free elimination over the Gaussian integers -----------


def _gauss_int_grid(A: Matrix) -> list:
    dens = [a.re.denominator for r in A.entries for a in r]
    dens += [a.im.denominator for r in A.entries for a in r]
    d = reduce(lcm, dens, 1)
    return [
        [(int(a.re * d), int(a.im * d)) for a in r]
        for r in A.entries
    ]


def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gsub(x, y):
    return (x[0] - y[0], x[1] - y[1])


def _gdiv_exact(x, y):
    # Bareiss guarantees exactness; the remainder check guards that claim
    den = y[0] * y[0] + y[1] * y[1]
    nr = x[0] * y[0] + x[1] * y[1]
    ni = x[1] * y[0] - x[0] * y[1]
    qr, rr = divmod(nr, den)
    qi, ri = divmod(ni, den)
    if rr or ri:
        raise ArithmeticError("inexact Gaussian-integer division in Bareiss step")
    return (qr, qi)


def rank(A: Matrix) -> int:
    """Exact rank via Bareiss fraction-free elimination over Z[i].

    Denominators are cleared first so every intermediate is a Gaussian
    integer; each Bareiss division is exact.
    """
    if A.rows == 0 or A.cols == 0:
        return 0
    M = _gauss_int_grid(A)
    rows, cols = A.rows, A.cols
    prev = (1, 0)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((k for k in range(r, rows) if M[k][c] != (0, 0)), None)
        if piv is None:
            continue
        if piv != r:
            M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        for k in range(r + 1, rows):
            mk = M[k][c]
            row_k = M[k]
            row_r = M[r]
            for j in range(c + 1, cols):
                num = _gsub(_gmul(p, row_k[j]), _gmul(mk, row_r[j]))
                row_k[j] = _gdiv_exact(num, prev)
            row_k[c] = (0, 0)
        prev = p
        r += 1
    return r


def inverse(A: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination; raises ZeroDivisionError if singular."""
    n = A.rows
    if A.cols != n:
        raise DimensionError("only square matrices are invertible")
    M = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(A.entries)]
    for c in range(n):
        piv = next((k for k in range(c, n) if M[k][c]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [a / p for a in M[c]]
        for k in range(n):
            if k != c and M[k][c]:
                f = M[k][c]
                M[k] = [a - f * b for a, b in zip(M[k], M[c])]
    return Matrix(tuple(tuple(r[n:]) for r in M))


# --- collinearity and rank-one factorisation --------------------------------


def collinear(a: Sequence, b: Sequence) -> Optional[Scalar]:
    """Return ``lam`` with ``a == lam * b``, or None when no such scalar exists.

    When ``b`` is zero, only ``a == 0`` succeeds and ``lam`` is 0 by convention.
    """
    _same_length(a, b)
    k = next((i for i, x in enumerate(b) if x), None)
    if k is None:
        return ZERO if not any(a) else None
    lam = as_scalar(a[k]) / b[k]
    for x, y in zip(a, b):
        if x != lam * y:
            return None
    return lam


def similar(a: Sequence, b: Sequence) -> bool:
    """``a ~ b`` for nonzero vectors: linearly dependent."""
    return collinear(a, b) is not None


def rank_one_factor(B: Matrix) -> tuple:
    """Canonical ``(u, v)`` with ``B == outer(u, v)``.

    ``u`` is the first nonzero column of ``B`` (index ``j*``), which forces
    ``v[j*] == 1``; the remaining entries of ``v`` are read off a row where
    ``u`` is nonzero.
    """
    if rank(B) != 1:
        raise RankError(f"expected a rank-one matrix, got rank {rank(B)}")
    jstar = next(j for j in range(B.cols) if any(B.entries[i][j] for i in range(B.rows)))
    u = B.column(jstar)
    a = next(i for i, x in enumerate(u) if x)
    ua = u[a]
    v = Vector((B.entries[a][j] / ua).conj() for j in range(B.cols))
    return u, v


def match_factor(B: Matrix, v: Sequence) -> Vector:
    """The unique ``w`` with ``B == outer(w, v)``; ``w = B v / <v, v>``."""
    v = Vector(v)
    if v.is_zero():
        raise FactorError("cannot match against the zero vector")
    if len(v) != B.cols:
        raise DimensionError(f"vector length {len(v)} does not match {B.cols} columns")
    w = (B @ v).scale(ONE / v.inner(v))
    if outer(w, v) != B:
        raise FactorError("matrix is not of the form w (x) v*")
    return w
