"""Exact dense matrices: elimination, rank, kernel, solve, inverse,
determinant and congruence transforms.

Pivoting is "first nonzero entry" in column order, so every result is a
deterministic function of the input.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from . import _backend
from .errors import DimensionMismatch, MixedFields, NonSquare, Singular
from .exactalg import Field, Scalar


class Mat:
    """Immutable dense matrix over a :class:`Field` (raw entries, row-major)."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: Iterable[Iterable] = (), cols: int | None = None):
        rows = tuple(tuple(field.elem(x) for x in row) for row in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch("ragged matrix rows")
        self.field = field
        self.rows = len(rows)
        self.cols = cols
        self.data = rows

    @classmethod
    def _raw(cls, field: Field, data, rows: int, cols: int) -> "Mat":
        m = cls.__new__(cls)
        m.field = field
        m.rows = rows
        m.cols = cols
        m.data = tuple(tuple(r) for r in data)
        return m

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int | None = None) -> "Mat":
        cols = rows if cols is None else cols
        z = field.zero
        return cls._raw(field, [[z] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        z, o = field.zero, field.one
        return cls._raw(field, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], nrows: int) -> "Mat":
        cols = [tuple(c) for c in columns]
        return cls._raw(field, [[c[i] for c in cols] for i in range(nrows)], nrows, len(cols))

    @classmethod
    def block_diag(cls, field: Field, mats: Sequence["Mat"]) -> "Mat":
        n = sum(m.rows for m in mats)
        out = [[field.zero] * n for _ in range(n)]
        off = 0
        for m in mats:
            for i in range(m.rows):
                out[off + i][off:off + m.cols] = m.data[i]
            off += m.rows
        return cls._raw(field, out, n, n)

    # -- access -----------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def entry(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self.data[i][j])

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def take_cols(self, idx: Sequence[int]) -> "Mat":
        return Mat._raw(self.field, [[row[j] for j in idx] for row in self.data], self.rows, len(idx))

    def hstack(self, other: "Mat") -> "Mat":
        self._same_field(other)
        if self.rows != other.rows:
            raise DimensionMismatch("hstack needs equal row counts")
        return Mat._raw(self.field, [a + b for a, b in zip(self.data, other.data)],
                        self.rows, self.cols + other.cols)

    def vstack(self, other: "Mat") -> "Mat":
        self._same_field(other)
        if self.cols != other.cols:
            raise DimensionMismatch("vstack needs equal column counts")
        return Mat._raw(self.field, self.data + other.data, self.rows + other.rows, self.cols)

    @property
    def T(self) -> "Mat":
        if self.rows == 0:
            return Mat._raw(self.field, [() for _ in range(self.cols)], self.cols, 0)
        return Mat._raw(self.field, zip(*self.data), self.cols, self.rows)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.data)

    def tolist(self) -> list[list[str]]:
        fmt = self.field.fmt
        return [[fmt(x) for x in row] for row in self.data]

    # -- arithmetic ---------------------------------------------------------

    def _same_field(self, other: "Mat"):
        if other.field != self.field:
            raise MixedFields(f"matrices over {self.field} and {other.field}")

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field == other.field and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.data))

    def __add__(self, other: "Mat") -> "Mat":
        self._same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in addition")
        add = self.field.add
        return Mat._raw(self.field, [[add(x, y) for x, y in zip(a, b)] for a, b in zip(self.data, other.data)],
                        self.rows, self.cols)

    def __neg__(self) -> "Mat":
        neg = self.field.neg
        return Mat._raw(self.field, [[neg(x) for x in row] for row in self.data], self.rows, self.cols)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, c) -> "Mat":
        f = self.field
        c = f.elem(c)
        return Mat._raw(f, [[f.mul(c, x) for x in row] for row in self.data], self.rows, self.cols)

    def __matmul__(self, other: "Mat") -> "Mat":
        self._same_field(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        f = self.field
        bt = [list(c) for c in zip(*other.data)] if other.rows else [[] for _ in range(other.cols)]
        return Mat._raw(f, _product(f, self.data, bt), self.rows, other.cols)

    def apply(self, vec: Sequence) -> tuple:
        """Matrix times a raw column vector."""
        return tuple(r[0] for r in _product(self.field, self.data, [list(vec)]))

    def power(self, k: int) -> "Mat":
        out = Mat.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_skew(self) -> bool:
        neg = self.field.neg
        n = self.rows
        return self.is_square and all(
            self.data[i][j] == neg(self.data[j][i]) for i in range(n) for j in range(i, n))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.fmt(x) for x in row) for row in self.data)
        return f"Mat<{self.field} {self.rows}x{self.cols}>[{body}]"


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------


def _product(field: Field, rows, cols) -> list[list]:
    rows = [list(r) for r in rows]
    if field.p is None:
        return _backend.matmul_fraction(rows, cols)
    return _backend.matmul_modp(rows, cols, field.p)


def _reduce(field: Field, rows: list[list], ncols: int) -> list[int]:
    if field.p is None:
        return _backend.rref_fraction(rows, ncols)
    return _backend.rref_modp(rows, ncols, field.p)


def rref(M: Mat):
    """Reduced row-echelon form ``R = T @ M``; returns ``(R, T, rank, pivots)``."""
    f = M.field
    n = M.rows
    z, o = f.zero, f.one
    rows = [list(row) + [o if i == j else z for j in range(n)] for i, row in enumerate(M.data)]
    pivots = _reduce(f, rows, M.cols)
    R = Mat._raw(f, [row[:M.cols] for row in rows], n, M.cols)
    T = Mat._raw(f, [row[M.cols:] for row in rows], n, n)
    return R, T, len(pivots), tuple(pivots)


def _rref_only(M: Mat):
    rows = [list(row) for row in M.data]
    pivots = _reduce(M.field, rows, M.cols)
    return rows, pivots


def rank(M: Mat) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(_rref_only(M)[1])


def kernel_basis(M: Mat) -> Mat:
    """Columns spanning {x : M x = 0}; one per free column, in increasing
    order, with that free coordinate set to one."""
    f = M.field
    n = M.cols
    if M.rows == 0:
        return Mat.identity(f, n)
    rows, pivots = _rref_only(M)
    pivset = set(pivots)
    basis = []
    for free in range(n):
        if free in pivset:
            continue
        v = [f.zero] * n
        v[free] = f.one
        for r, pc in enumerate(pivots):
            if rows[r][free]:
                v[pc] = f.neg(rows[r][free])
        basis.append(v)
    return Mat.from_columns(f, basis, n)


def solve(M: Mat, b) -> Mat | None:
    """Some x with ``M x = b`` (free variables zero), or None if inconsistent."""
    f = M.field
    bvec = b.column(0) if isinstance(b, Mat) else tuple(f.elem(x) for x in b)
    if len(bvec) != M.rows:
        raise DimensionMismatch(f"right-hand side has length {len(bvec)}, expected {M.rows}")
    rows = [list(row) + [bv] for row, bv in zip(M.data, bvec)]
    pivots = _reduce(f, rows, M.cols) if rows else []
    for r in range(len(pivots), M.rows):
        if rows[r][M.cols]:
            return None
    x = [f.zero] * M.cols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][M.cols]
    return Mat._raw(f, [[v] for v in x], M.cols, 1)


def solve_many(M: Mat, rhs: Mat) -> Mat | None:
    """Column-wise :func:`solve` for a block of right-hand sides."""
    f = M.field
    if rhs.rows != M.rows:
        raise DimensionMismatch("right-hand side row count mismatch")
    rows = [list(a) + list(b) for a, b in zip(M.data, rhs.data)]
    pivots = _reduce(f, rows, M.cols) if rows else []
    for r in range(len(pivots), M.rows):
        if any(rows[r][M.cols:]):
            return None
    out = [[f.zero] * rhs.cols for _ in range(M.cols)]
    for r, pc in enumerate(pivots):
        out[pc] = rows[r][M.cols:]
    return Mat._raw(f, out, M.cols, rhs.cols)


def inverse(M: Mat) -> Mat:
    if not M.is_square:
        raise NonSquare(f"inverse of a {M.rows}x{M.cols} matrix")
    R, T, r, _ = rref(M)
    if r != M.rows:
        raise Singular("matrix is singular")
    return T


def congruence(T: Mat, A: Mat) -> Mat:
    """``T^t A T``."""
    if not A.is_square or T.rows != A.rows:
        raise DimensionMismatch(f"congruence of {A.rows}x{A.cols} form by {T.rows}x{T.cols} basis")
    return T.T @ A @ T


def determinant(M: Mat) -> Scalar:
    """Exact determinant; fraction-free (Bareiss) over Q."""
    if not M.is_square:
        raise NonSquare(f"determinant of a {M.rows}x{M.cols} matrix")
    f = M.field
    n = M.rows
    if n == 0:
        return Scalar(f, f.one)
    if f.p is None:
        scale = 1
        a = []
        for row in M.data:
            l = 1
            for x in row:
                l = l * x.denominator // math.gcd(l, x.denominator)
            scale *= l
            a.append([int(x * l) for x in row])
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return Scalar(f, f.zero)
            akk = a[k][k]
            for i in range(k + 1, n):
                aik = a[i][k]
                row_i, row_k = a[i], a[k]
                for j in range(k + 1, n):
                    row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            prev = akk
        return Scalar(f, Fraction(sign * a[n - 1][n - 1], scale))
    p = f.p
    a = [list(row) for row in M.data]
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return Scalar(f, 0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k] % p
        inv = pow(a[k][k], -1, p)
        for i in range(k + 1, n):
            fac = a[i][k] * inv % p
            if fac:
                for j in range(k, n):
                    a[i][j] = (a[i][j] - fac * a[k][j]) % p
    return Scalar(f, det % p)


def column_basis(M: Mat) -> Mat:
    """Independent columns of M spanning its column space (pivot columns)."""
    if M.rows == 0 or M.cols == 0:
        return M.take_cols([])
    _, pivots = _rref_only(M)
    return M.take_cols(pivots)
