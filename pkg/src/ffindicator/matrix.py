"""Dense exact matrices over the rationals.

Entries are :class:`fractions.Fraction`; nothing here ever rounds.
Linear systems are solved with fraction-free (Bareiss) elimination on an
integer-scaled copy of the augmented system, followed by exact
back-substitution.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence


class SingularMatrixError(ValueError):
    pass


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


class ExactMatrix:
    """Immutable rows x cols grid of Fractions."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(_frac(v) for v in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged matrix rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(((1 if i == j else 0) for j in range(n)) for i in range(n))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "ExactMatrix":
        return cls(((0,) * ncols for _ in range(nrows)), ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self._rows)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self._rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self._rows == other._rows and self.ncols == other.ncols

    def __hash__(self) -> int:
        return hash((self._rows, self.ncols))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.nrows}x{self.ncols})"

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(zip(*self._rows), self.nrows) if self.nrows else ExactMatrix.zeros(self.ncols, 0)

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def matvec(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.ncols:
            raise ValueError(f"dimension mismatch: {self.ncols} columns, vector of length {len(vec)}")
        vec = [_frac(v) for v in vec]
        # skip zero entries: model and contrast matrices are sparse-ish
        nz = [(j, v) for j, v in enumerate(vec) if v]
        return [sum((row[j] * v for j, v in nz), Fraction(0)) for row in self._rows]

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.transpose().rows
        out = []
        for row in self._rows:
            nz = [(k, a) for k, a in enumerate(row) if a]
            out.append([sum((a * col[k] for k, a in nz), Fraction(0)) for col in cols])
        return ExactMatrix(out, other.ncols)

    def determinant(self) -> Fraction:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return Fraction(1)
        scaled, scale = _integer_rows(self._rows)
        a = [list(r) for r in scaled]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if p is None:
                    return Fraction(0)
                a[k], a[p] = a[p], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return Fraction(sign * a[n - 1][n - 1], scale)

    def inverse(self) -> "ExactMatrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        cols = _bareiss_solve(self._rows, ExactMatrix.identity(self.nrows).rows)
        return ExactMatrix(cols)


def _integer_rows(rows) -> tuple[list[list[int]], int]:
    """Scale every row to integers; returns the rows and the product of the row scales."""
    out = []
    total = 1
    for row in rows:
        den = lcm(*(v.denominator for v in row)) if row else 1
        out.append([int(v * den) for v in row])
        total *= den
    return out, total


def _bareiss_solve(a_rows, b_rows) -> list[list[Fraction]]:
    """Solve A X = B exactly. ``b_rows`` is given row-wise (n x k)."""
    n = len(a_rows)
    if any(len(r) != n for r in a_rows):
        raise ValueError("coefficient matrix must be square")
    if len(b_rows) != n:
        raise ValueError(f"dimension mismatch: {n} equations, right-hand side has {len(b_rows)} rows")
    k = len(b_rows[0]) if n else 0
    aug_rows = [tuple(a) + tuple(b) for a, b in zip(a_rows, b_rows)]
    m, _ = _integer_rows(aug_rows)
    width = n + k
    prev = 1
    for p in range(n):
        if m[p][p] == 0:
            q = next((i for i in range(p + 1, n) if m[i][p] != 0), None)
            if q is None:
                raise SingularMatrixError("matrix is singular")
            m[p], m[q] = m[q], m[p]
        piv = m[p][p]
        mp = m[p]
        for i in range(p + 1, n):
            mi = m[i]
            f = mi[p]
            if f == 0:
                for j in range(p + 1, width):
                    mi[j] = (mi[j] * piv) // prev
            else:
                for j in range(p + 1, width):
                    mi[j] = (mi[j] * piv - f * mp[j]) // prev
            mi[p] = 0
        prev = piv
    # back-substitution on the upper-triangular integer system
    x = [[Fraction(0)] * k for _ in range(n)]
    for i in range(n - 1, -1, -1):
        mi = m[i]
        for c in range(k):
            acc = Fraction(mi[n + c])
            for j in range(i + 1, n):
                if mi[j]:
                    acc -= mi[j] * x[j][c]
            x[i][c] = acc / mi[i]
    return x


def solve_exact(a: ExactMatrix, b: Sequence) -> list[Fraction]:
    """Return the unique x with ``a @ x == b``.

    Raises :class:`SingularMatrixError` for singular ``a`` and ``ValueError``
    on a dimension mismatch.
    """
    if a.nrows != a.ncols:
        raise ValueError(f"coefficient matrix must be square, got {a.shape}")
    if len(b) != a.nrows:
        raise ValueError(f"dimension mismatch: {a.nrows} equations, right-hand side of length {len(b)}")
    sol = _bareiss_solve(a.rows, [(_frac(v),) for v in b])
    return [r[0] for r in sol]
