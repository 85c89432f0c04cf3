"""Pencils of skew-symmetric forms, canonical block descriptors and their
materialization as explicit matrix pairs.

Within a block the basis vectors are labelled ``("e", i)`` and ``("f", j)``.
The pairings are

* ``JordanFinite(lam, k)``: e_1..e_k, f_1..f_k with B(e_i, f_j) = delta_ij and
  A(e_i, f_j) = lam * delta_ij + delta_{i+1, j};
* ``JordanInfinite(k)``: e_1..e_k, f_0..f_{k-1} with A(e_i, f_j) = delta_{i, j+1}
  and B(e_i, f_j) = delta_ij;
* ``Kronecker(k)``: e_1..e_k, f_0..f_k with the same pairings as above.

All other pairs of basis vectors are orthogonal for both forms.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import (
    DependentColumns,
    DimensionMismatch,
    InvalidK,
    MixedFields,
    NotSkew,
    NotSquare,
    ParseError,
)
from .exactalg import Q, Field, Scalar
from .matlin import Mat, congruence, kernel_basis, rank


class BasisOrdering(enum.Enum):
    SPLIT = "split"
    INTERLEAVED = "interleaved"


SPLIT = BasisOrdering.SPLIT
INTERLEAVED = BasisOrdering.INTERLEAVED


@dataclass(frozen=True)
class JordanFinite:
    lam: Scalar
    k: int

    def __post_init__(self):
        if not isinstance(self.lam, Scalar):
            raise TypeError("JordanFinite eigenvalue must be a Scalar")
        if self.k < 1:
            raise InvalidK(f"Jordan block needs k >= 1, got {self.k}")

    @property
    def size(self) -> int:
        return 2 * self.k

    def __str__(self):
        return f"J({self.lam},{self.k})"


@dataclass(frozen=True)
class JordanInfinite:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise InvalidK(f"Jordan block needs k >= 1, got {self.k}")

    @property
    def size(self) -> int:
        return 2 * self.k

    def __str__(self):
        return f"Jinf({self.k})"


@dataclass(frozen=True)
class Kronecker:
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise InvalidK(f"Kronecker block needs k >= 0, got {self.k}")

    @property
    def size(self) -> int:
        return 2 * self.k + 1

    def __str__(self):
        return f"K({self.k})"


Block = JordanFinite | JordanInfinite | Kronecker


def block_sort_key(b: Block):
    if isinstance(b, Kronecker):
        return (0, (), b.k)
    if isinstance(b, JordanInfinite):
        return (1, (), b.k)
    return (2, b.lam.sort_key(), b.k)


def canonical_sort(blocks) -> list:
    """Kronecker blocks by k, then infinite Jordan blocks by k, then finite
    Jordan blocks by (eigenvalue, k)."""
    return sorted(blocks, key=block_sort_key)


def block_to_json(b: Block) -> dict:
    if isinstance(b, JordanFinite):
        return {"type": "jordan", "lambda": str(b.lam), "k": b.k}
    if isinstance(b, JordanInfinite):
        return {"type": "jordan_inf", "k": b.k}
    return {"type": "kronecker", "k": b.k}


def block_from_json(obj: dict, field: Field) -> Block:
    try:
        kind = obj["type"]
        k = obj["k"]
        if not isinstance(k, int):
            raise ParseError(f"block size must be an integer, got {k!r}")
        if kind == "jordan":
            return JordanFinite(field.scalar(field.parse(obj["lambda"])), k)
        if kind == "jordan_inf":
            return JordanInfinite(k)
        if kind == "kronecker":
            return Kronecker(k)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed block {obj!r}: {exc}") from None
    raise ParseError(f"unknown block type {kind!r}")


# ---------------------------------------------------------------------------
# pencils
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class Pencil:
    A: Mat
    B: Mat

    @property
    def field(self) -> Field:
        return self.A.field

    @property
    def n(self) -> int:
        return self.A.rows

    def combo(self, mu) -> Mat:
        """The form A + mu B."""
        return self.A + self.B.scale(mu)


def validate_pencil(A: Mat, B: Mat) -> Pencil:
    if A.field != B.field:
        raise MixedFields(f"forms over {A.field} and {B.field}")
    for name, M in (("A", A), ("B", B)):
        if not M.is_square:
            raise NotSquare(f"matrix {name} is {M.rows}x{M.cols}")
    if A.rows != B.rows:
        raise DimensionMismatch(f"A is {A.rows}x{A.rows} but B is {B.rows}x{B.rows}")
    neg = A.field.neg
    for name, M in (("A", A), ("B", B)):
        for i in range(M.rows):
            for j in range(i, M.rows):
                if M[i, j] != neg(M[j, i]) or (i == j and M[i, i]):
                    raise NotSkew(name, i, j)
    return Pencil(A, B)


# ---------------------------------------------------------------------------
# materialization
# ---------------------------------------------------------------------------


def basis_labels(b: Block, ordering: BasisOrdering = SPLIT) -> list[tuple[str, int]]:
    k = b.k
    if isinstance(b, JordanFinite):
        es = [("e", i) for i in range(1, k + 1)]
        fs = [("f", j) for j in range(1, k + 1)]
        if ordering is SPLIT:
            return es + fs
        return [lab for pair in zip(es, fs) for lab in pair]
    es = [("e", i) for i in range(1, k + 1)]
    nf = k if isinstance(b, JordanInfinite) else k + 1
    fs = [("f", j) for j in range(nf)]
    if ordering is SPLIT:
        return es + fs
    out = []
    for j in range(nf):
        out.append(fs[j])
        if j < k:
            out.append(es[j])
    return out


def block_pairings(b: Block, field: Field):
    """Nonzero pairings ``(e_label, f_label, value)`` for A and for B."""
    one = field.one
    k = b.k
    if isinstance(b, JordanFinite):
        lam = field.elem(b.lam)
        a = [(("e", i), ("f", i), lam) for i in range(1, k + 1) if lam]
        a += [(("e", i), ("f", i + 1), one) for i in range(1, k)]
        bb = [(("e", i), ("f", i), one) for i in range(1, k + 1)]
        return a, bb
    nf = k if isinstance(b, JordanInfinite) else k + 1
    a = [(("e", i), ("f", i - 1), one) for i in range(1, k + 1)]
    bb = [(("e", i), ("f", i), one) for i in range(1, k + 1) if i < nf]
    return a, bb


def _block_field(b: Block, field: Field | None) -> Field:
    if isinstance(b, JordanFinite):
        if field is not None and b.lam.field != field:
            raise MixedFields(f"eigenvalue over {b.lam.field} in a pencil over {field}")
        return b.lam.field
    return Q if field is None else field


def materialize_block(b: Block, ordering: BasisOrdering = SPLIT, field: Field | None = None):
    """The pair ``(A_i, B_i)`` of a single canonical block."""
    field = _block_field(b, field)
    labels = basis_labels(b, ordering)
    pos = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    mats = []
    for pairs in block_pairings(b, field):
        m = [[field.zero] * n for _ in range(n)]
        for e, f, v in pairs:
            m[pos[e]][pos[f]] = v
            m[pos[f]][pos[e]] = field.neg(v)
        mats.append(Mat._raw(field, m, n, n))
    return mats[0], mats[1]


def ordering_permutation(b: Block, field: Field = Q) -> Mat:
    """Permutation P with ``P^t X_split P == X_interleaved`` for both forms."""
    split = {lab: i for i, lab in enumerate(basis_labels(b, SPLIT))}
    cols = []
    n = b.size
    for lab in basis_labels(b, INTERLEAVED):
        v = [field.zero] * n
        v[split[lab]] = field.one
        cols.append(v)
    return Mat.from_columns(field, cols, n)


def assemble(blocks, ordering: BasisOrdering = SPLIT, field: Field | None = None) -> Pencil:
    """Block-diagonal direct sum of materialized blocks, in the given order."""
    blocks = list(blocks)
    if field is None:
        field = next((b.lam.field for b in blocks if isinstance(b, JordanFinite)), Q)
    pairs = [materialize_block(b, ordering, field) for b in blocks]
    return Pencil(Mat.block_diag(field, [a for a, _ in pairs]),
                  Mat.block_diag(field, [b for _, b in pairs]))


def restrict(p: Pencil, C: Mat) -> Pencil:
    """Restriction of both forms to the span of the columns of C."""
    if C.rows != p.n:
        raise DimensionMismatch(f"basis has {C.rows} rows, pencil dimension is {p.n}")
    if rank(C) != C.cols:
        raise DependentColumns("restriction basis has dependent columns")
    return Pencil(congruence(C, p.A), congruence(C, p.B))


def biorthogonal_complement(p: Pencil, S: Mat) -> Mat:
    """Basis of {w : A(s, w) = B(s, w) = 0 for every column s of S}."""
    St = S.T
    return kernel_basis((St @ p.A).vstack(St @ p.B))
