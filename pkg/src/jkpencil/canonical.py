"""Jordan-Kronecker decomposition of a pair of skew-symmetric forms.

The decomposition runs in two phases.

Degenerate phase (``B`` singular).  One block at a time is split off, either
a Kronecker block or a Jordan block with eigenvalue infinity.  The block is
built as an alternating chain ``f_0, e_1, f_1, e_2, ...`` with
``f_0 in Ker B``, ``A(e_i, f_{i-1}) = 1`` and ``B(e_i, f_i) = 1``, together with
the nested subspaces ``W_m`` of vectors orthogonal to the chain built so far
(``A``-orthogonal after adding an ``e``, additionally ``B``-orthogonal after
adding an ``f``).  The chain stops when the next vector cannot be found in
``W_m``; the last ``W_m`` is then a complement orthogonal to the block for
both forms.

A greedy choice of the chain vectors does not always lead to a block that
splits off, so the chain is seeded from data that guarantee it:

* Kronecker blocks come from a polynomial vector ``x(mu)`` of minimal degree
  in the kernel of ``A + mu B``; its coefficients are the ``f_j`` and the
  ``e_i`` solve a linear system.
* Infinite Jordan blocks come from the deflating subspace of the infinite
  eigenvalue, on which ``A`` is symplectic and ``A^{-1} B`` is a nilpotent
  self-adjoint operator; the chain is a longest Jordan chain of that operator.

The seeded chain is then replayed through the alternating construction,
checking every membership, pairing, dimension and stopping condition.

Regular phase (``B`` nondegenerate).  ``P = B^{-1} A`` is self-adjoint with
respect to ``B``; its generalized eigenspaces are mutually ``B``-orthogonal
and each one is peeled into Jordan chains of ``P - lam``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import NamedTuple

from .errors import (
    InternalInvariantViolation,
    NotNilpotent,
    NotSelfAdjoint,
    PreconditionBNondegenerate,
    SplitFailure,
)
from .exactalg import Field, Scalar, char_poly, poly_sqrt, roots_in_field
from .matlin import (
    Mat,
    column_basis,
    congruence,
    inverse,
    kernel_basis,
    rank,
    solve,
)
from .pencil import (
    INTERLEAVED,
    SPLIT,
    JordanFinite,
    JordanInfinite,
    Kronecker,
    Pencil,
    assemble,
    basis_labels,
    block_sort_key,
    canonical_sort,
    restrict,
    validate_pencil,
)

__all__ = [
    "Decomposition",
    "DegenerateExtraction",
    "ExtractionTrace",
    "TraceStep",
    "VerifyReport",
    "canonical_sort",
    "decompose",
    "extract_degenerate_block",
    "nilpotent_jordan_block",
    "regular_eigensplit",
    "check_congruence",
    "verify",
    "verify_partial",
]


@dataclass(frozen=True)
class TraceStep:
    step: int
    label: tuple[str, int]
    vector: tuple
    dim_V: int
    dim_W: int


@dataclass
class ExtractionTrace:
    n: int
    steps: list[TraceStep] = dc_field(default_factory=list)

    def render(self, field: Field) -> list[dict]:
        return [
            {
                "step": s.step,
                "vector": f"{s.label[0]}{s.label[1]}",
                "coords": [field.fmt(x) for x in s.vector],
                "dim_V": s.dim_V,
                "dim_W": s.dim_W,
            }
            for s in self.steps
        ]


class DegenerateExtraction(NamedTuple):
    chain: Mat
    block: Kronecker | JordanInfinite
    complement: Mat
    trace: ExtractionTrace


@dataclass
class Decomposition:
    field: Field
    n: int
    T: Mat
    blocks: list
    traces: list[ExtractionTrace] = dc_field(default_factory=list)

    @property
    def ranges(self) -> list[tuple[int, int]]:
        out, start = [], 0
        for b in self.blocks:
            out.append((start, start + b.size))
            start += b.size
        return out


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------


def _form(M: Mat, u, v):
    """u^t M v for raw vectors."""
    f = M.field
    Mv = M.apply(v)
    s = f.zero
    for a, b in zip(u, Mv):
        if a and b:
            s = f.add(s, f.mul(a, b))
    return s


def _row(M: Mat, v) -> tuple:
    """The covector w -> v^t M w as a row."""
    return M.T.apply(v)


def _is_nondegenerate(M: Mat) -> bool:
    return rank(M) == M.rows


def _regular_somewhere(p: Pencil) -> bool:
    """True if some sampled A + mu B is nondegenerate (then no Kronecker blocks).

    Over Q the n + 1 samples are conclusive; over a small F_p a False answer
    only means the polynomial search below has to decide.
    """
    f = p.field
    count = p.n + 1 if f.p is None else min(p.n + 1, f.p)
    return any(_is_nondegenerate(p.combo(mu)) for mu in f.points(count))


# ---------------------------------------------------------------------------
# degenerate phase
# ---------------------------------------------------------------------------


def _minimal_kernel_polynomial(p: Pencil):
    """Coefficients x_0..x_d of a nonzero x(mu) with (A + mu B) x(mu) = 0 and
    d minimal, or None if the pencil is regular."""
    f, n = p.field, p.n
    if _regular_somewhere(p):
        return None
    A, B = p.A.data, p.B.data
    for d in range((n - 1) // 2 + 1):
        nr, nc = (d + 2) * n, (d + 1) * n
        rows = [[f.zero] * nc for _ in range(nr)]
        # row block t: A x_t + B x_{t-1}
        for t in range(d + 2):
            for i in range(n):
                row = rows[t * n + i]
                if t <= d:
                    row[t * n:(t + 1) * n] = A[i]
                if t >= 1:
                    row[(t - 1) * n:t * n] = B[i]
        K = kernel_basis(Mat._raw(f, rows, nr, nc))
        if K.cols:
            x = K.column(0)
            return [x[s * n:(s + 1) * n] for s in range(d + 1)]
    return None


def _kronecker_chain(p: Pencil, xs):
    f, n = p.field, p.n
    k = len(xs) - 1
    fs = [xs[k - j] if j % 2 == 0 else tuple(f.neg(c) for c in xs[k - j]) for j in range(k + 1)]
    if k == 0:
        return fs, []
    # unknowns e_1..e_k stacked; equations: pairings with the f's and
    # B e_i = A e_{i+1} as covectors
    nc = n * k
    rows, rhs = [], []
    Af = [p.A.apply(fj) for fj in fs]  # w -> A(w, f_j)
    Bf = [p.B.apply(fj) for fj in fs]
    for i in range(1, k + 1):
        for j in range(k + 1):
            for cov, target in ((Af[j], i == j + 1), (Bf[j], i == j)):
                r = [f.zero] * nc
                r[(i - 1) * n:i * n] = cov
                rows.append(r)
                rhs.append(f.one if target else f.zero)
    for i in range(1, k):
        for a in range(n):
            r = [f.zero] * nc
            r[(i - 1) * n:i * n] = p.B.data[a]
            r[i * n:(i + 1) * n] = [f.neg(c) for c in p.A.data[a]]
            rows.append(r)
            rhs.append(f.zero)
    sol = solve(Mat._raw(f, rows, len(rows), nc), rhs)
    if sol is None:
        raise InternalInvariantViolation("no e-vectors complete the Kronecker chain")
    x = sol.column(0)
    es = [x[(i - 1) * n:i * n] for i in range(1, k + 1)]
    return fs, es


def _wong_infinite_space(p: Pencil) -> Mat:
    """Deflating subspace of the infinite eigenvalue of a regular pencil:
    the limit of W_0 = 0, W_{i+1} = {x : B x in A W_i}."""
    f, n = p.field, p.n
    W = Mat.zeros(f, n, 0)
    while True:
        K = kernel_basis(p.B.hstack(-(p.A @ W)))
        top = Mat._raw(f, K.data[:n], n, K.cols)
        nxt = column_basis(top)
        if nxt.cols == W.cols:
            return W
        W = nxt


def _infinite_chain(p: Pencil):
    f = p.field
    C = _wong_infinite_space(p)
    if C.cols == 0:
        raise InternalInvariantViolation("singular B but empty infinite deflating subspace")
    sub = restrict(p, C)
    if not _is_nondegenerate(sub.A):
        raise InternalInvariantViolation("A is degenerate on the infinite deflating subspace")
    N = inverse(sub.A) @ sub.B
    E, F = nilpotent_jordan_block(N, sub.A)
    k = E.cols
    # f_j = e_{k-j}, e_i = -f_{k-i+1} of the nilpotent chains
    fs = [C.apply(E.column(k - 1 - j)) for j in range(k)]
    es = [C.apply(tuple(f.neg(c) for c in F.column(k - i))) for i in range(1, k + 1)]
    return fs, es


class _Replay:
    """Alternating chain bookkeeping: V_m spanned by the chain so far, W_m the
    kernel of the accumulated A- and B-constraints."""

    def __init__(self, p: Pencil):
        self.p = p
        self.f = p.field
        self.n = p.n
        self.constraints: list[tuple] = []
        self.chain: list[tuple] = []
        self.trace = ExtractionTrace(p.n)

    def _rank(self, extra=()):
        rows = self.constraints + list(extra)
        if not rows:
            return 0
        return rank(Mat._raw(self.f, rows, len(rows), self.n))

    def in_W(self, v) -> bool:
        return all(not _dot(self.f, c, v) for c in self.constraints)

    def W_dim(self) -> int:
        return self.n - self._rank()

    def log(self, label, v, dim_W):
        m = len(self.chain)
        self.trace.steps.append(TraceStep(m, label, tuple(v), m, dim_W))
        if m + dim_W != self.n:
            raise InternalInvariantViolation(
                f"dim V_{m} + dim W_{m} = {m} + {dim_W} != {self.n}")

    def add_f(self, j, v):
        self.chain.append(v)
        if j == 0:
            # W_1: coordinate complement of f_0
            return self.log(("f", 0), v, self.n - 1)
        self.constraints += [_row(self.p.B, u) for u in self.chain]
        self.log(("f", j), v, self.W_dim())

    def add_e(self, i, v):
        self.chain.append(v)
        self.constraints += [_row(self.p.A, u) for u in self.chain]
        self.log(("e", i), v, self.W_dim())

    def cannot_extend(self, cov) -> bool:
        """No w in W_m pairs nontrivially with the covector ``cov``."""
        return self._rank([cov]) == self._rank()

    def complement(self) -> Mat:
        return kernel_basis(Mat._raw(self.f, self.constraints, len(self.constraints), self.n))


def _dot(f, u, v):
    s = f.zero
    for a, b in zip(u, v):
        if a and b:
            s = f.add(s, f.mul(a, b))
    return s


def extract_degenerate_block(p: Pencil) -> DegenerateExtraction:
    """Split one Kronecker or infinite Jordan block off a pencil with singular B.

    Returns the chain (columns ``f_0, e_1, f_1, ...``), the block, a basis of a
    complement orthogonal to the block for both forms, and the step trace.
    """
    f, n = p.field, p.n
    if _is_nondegenerate(p.B):
        raise PreconditionBNondegenerate("B is nondegenerate; no degenerate block to extract")
    xs = _minimal_kernel_polynomial(p)
    if xs is not None:
        fs, es = _kronecker_chain(p, xs)
        k = len(es)
        block = Kronecker(k)
    else:
        fs, es = _infinite_chain(p)
        k = len(es)
        block = JordanInfinite(k)

    one = f.one
    rp = _Replay(p)
    f0 = fs[0]
    if any(p.B.apply(f0)):
        raise InternalInvariantViolation("f_0 is not in Ker B")
    rp.add_f(0, f0)
    for i in range(1, k + 1):
        e = es[i - 1]
        if i > 1 and not rp.in_W(e):
            raise InternalInvariantViolation(f"e_{i} is not in W_{2 * i - 2}")
        if _form(p.A, e, fs[i - 1]) != one:
            raise InternalInvariantViolation(f"A(e_{i}, f_{i - 1}) != 1")
        rp.add_e(i, e)
        if i < len(fs):
            fv = fs[i]
            if not rp.in_W(fv):
                raise InternalInvariantViolation(f"f_{i} is not in W_{2 * i}")
            if _form(p.B, e, fv) != one:
                raise InternalInvariantViolation(f"B(e_{i}, f_{i}) != 1")
            rp.add_f(i, fv)

    if isinstance(block, JordanInfinite):
        # no f_k in W_2k with B(e_k, f_k) != 0
        stop = _row(p.B, es[-1])
        stopped = rp.cannot_extend(stop)
    else:
        # no e_{k+1} in W_{2k+1} with A(e_{k+1}, f_k) != 0
        stop = tuple(f.neg(c) for c in _row(p.A, fs[-1]))
        stopped = rp.cannot_extend(stop) if k else not any(stop)
    if not stopped:
        raise InternalInvariantViolation(f"chain for {block} does not terminate where expected")

    if k == 0:
        # f_0 lies in the radical of both forms; any complement will do
        piv = next(i for i, c in enumerate(f0) if c)
        comp = Mat.identity(f, n).take_cols([j for j in range(n) if j != piv])
    else:
        comp = rp.complement()
    if comp.cols != n - block.size:
        raise InternalInvariantViolation(
            f"complement has width {comp.cols}, expected {n - block.size}")
    chain = Mat.from_columns(f, rp.chain, n)
    return DegenerateExtraction(chain, block, comp, rp.trace)


# ---------------------------------------------------------------------------
# regular phase
# ---------------------------------------------------------------------------


def _root_free_part(rem, field: Field):
    root = poly_sqrt(rem.monic())
    return root if root is not None else rem


def regular_eigensplit(p: Pencil) -> list[tuple[Scalar, Mat]]:
    """Generalized eigenspaces of ``P = B^{-1} A`` as ``(lam, basis)`` pairs."""
    f, n = p.field, p.n
    if not _is_nondegenerate(p.B):
        raise PreconditionBNondegenerate("B is degenerate")
    P = inverse(p.B) @ p.A
    roots, rem = roots_in_field(char_poly(P))
    if rem.degree > 0:
        offending = _root_free_part(rem, f)
        raise SplitFailure(offending, [offending.degree])
    out = []
    I = Mat.identity(f, n)
    for lam, m in roots:
        V = kernel_basis((P - I.scale(lam.value)).power(m))
        if V.cols != m or m % 2:
            raise InternalInvariantViolation(
                f"generalized eigenspace of {lam} has width {V.cols}, multiplicity {m}")
        out.append((lam, V))
    if sum(V.cols for _, V in out) != n:
        raise InternalInvariantViolation("eigenspaces do not fill the space")
    for a in range(len(out)):
        for b in range(a + 1, len(out)):
            if not _pairing(out[a][1], p.B, out[b][1]).is_zero():
                raise InternalInvariantViolation("generalized eigenspaces are not B-orthogonal")
    return out


def _pairing(U: Mat, M: Mat, V: Mat) -> Mat:
    return U.T @ M @ V


def nilpotent_jordan_block(N: Mat, B: Mat) -> tuple[Mat, Mat]:
    """One longest Jordan chain pair for a nilpotent B-self-adjoint operator.

    ``e_1`` is the first coordinate vector with ``N^(m-1) e_1 != 0``,
    ``e_i = N^(i-1) e_1``; ``f_m`` solves ``B(e_i, f_m) = delta_im`` and
    ``f_i = N^(m-i) f_m``.  Returns the chains as column matrices.
    """
    f, n = B.field, B.rows
    if not _is_nondegenerate(B):
        raise PreconditionBNondegenerate("form is degenerate on the working space")
    if N.T @ B != B @ N:
        raise NotSelfAdjoint("operator is not self-adjoint for the form")
    powers = [Mat.identity(f, n)]
    while not powers[-1].is_zero():
        if len(powers) > n:
            raise NotNilpotent("operator is not nilpotent")
        powers.append(powers[-1] @ N)
    m = len(powers) - 1
    top = powers[m - 1]
    j = next(j for j in range(n) if any(top.column(j)))
    e1 = tuple(f.one if i == j else f.zero for i in range(n))
    es = [powers[i].apply(e1) for i in range(m)]
    rows = [_row(B, e) for e in es]
    rhs = [f.one if i == m - 1 else f.zero for i in range(m)]
    sol = solve(Mat._raw(f, rows, m, n), rhs)
    if sol is None:
        raise InternalInvariantViolation("no vector pairs with the e-chain")
    fm = sol.column(0)
    fs = [powers[m - i].apply(fm) for i in range(1, m + 1)]
    E = Mat.from_columns(f, es, n)
    F = Mat.from_columns(f, fs, n)
    if not congruence(E, B).is_zero() or not congruence(F, B).is_zero():
        raise InternalInvariantViolation("chains are not isotropic")
    if _pairing(E, B, F) != Mat.identity(f, m):
        raise InternalInvariantViolation("B(e_i, f_j) != delta_ij")
    if rank(E.hstack(F)) != 2 * m:
        raise InternalInvariantViolation("chain vectors are dependent")
    return E, F


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------


def _to_split(block, chain_cols: list[tuple]) -> list[tuple]:
    """Reorder interleaved chain columns (f_0, e_1, f_1, ...) to split order."""
    inter = basis_labels(block, INTERLEAVED)
    by_label = dict(zip(inter, chain_cols))
    return [by_label[lab] for lab in basis_labels(block, SPLIT)]


def _sorted_groups(blocks, groups):
    order = sorted(range(len(blocks)), key=lambda i: block_sort_key(blocks[i]))
    return [blocks[i] for i in order], [groups[i] for i in order]


def decompose(A: Mat, B: Mat) -> Decomposition:
    """Canonical basis and block list of the pencil (A, B)."""
    p = validate_pencil(A, B)
    f, n = p.field, p.n
    blocks: list = []
    groups: list[list[tuple]] = []
    traces: list[ExtractionTrace] = []
    basis = Mat.identity(f, n)
    cur = p

    while cur.n and not _is_nondegenerate(cur.B):
        ex = extract_degenerate_block(cur)
        cols = [basis.apply(c) for c in ex.chain.columns()]
        groups.append(_to_split(ex.block, cols))
        blocks.append(ex.block)
        traces.append(ex.trace)
        basis = basis @ ex.complement
        cur = Pencil(congruence(ex.complement, cur.A), congruence(ex.complement, cur.B))

    if cur.n:
        try:
            spaces = regular_eigensplit(cur)
        except SplitFailure as exc:
            sb, sg = _sorted_groups(blocks, groups)
            cols = [c for g in sg for c in g] + basis.columns()
            exc.blocks = sb
            exc.basis = Mat.from_columns(f, cols, n)
            exc.residual = cur
            raise
        for lam, V in spaces:
            work = restrict(cur, V)
            wbasis = basis @ V
            while work.n:
                I = Mat.identity(f, work.n)
                N = inverse(work.B) @ work.A - I.scale(lam.value)
                E, F = nilpotent_jordan_block(N, work.B)
                chain = E.hstack(F)
                groups.append([wbasis.apply(c) for c in chain.columns()])
                blocks.append(JordanFinite(lam, E.cols))
                comp = kernel_basis(chain.T @ work.B)
                wbasis = wbasis @ comp
                work = Pencil(congruence(comp, work.A), congruence(comp, work.B))

    blocks, groups = _sorted_groups(blocks, groups)
    T = Mat.from_columns(f, [c for g in groups for c in g], n)
    d = Decomposition(f, n, T, blocks, traces)
    canon = assemble(blocks, SPLIT, f)
    if congruence(T, p.A) != canon.A or congruence(T, p.B) != canon.B:
        raise InternalInvariantViolation("basis does not bring the pencil to canonical form")
    return d


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass
class VerifyReport:
    ok: bool
    message: str = "ok"
    location: tuple | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "message": self.message,
                "location": list(self.location) if self.location else None}


def _first_mismatch(X: Mat, Y: Mat):
    for i in range(X.rows):
        for j in range(X.cols):
            if X[i, j] != Y[i, j]:
                return i, j
    return None


def check_congruence(A: Mat, B: Mat, T: Mat, target: Pencil) -> VerifyReport:
    if T.rows != A.rows or T.cols != A.rows:
        return VerifyReport(False, f"basis is {T.rows}x{T.cols}, expected {A.rows}x{A.rows}")
    if rank(T) != T.rows:
        return VerifyReport(False, "basis matrix is not invertible")
    for name, M, C in (("A", A, target.A), ("B", B, target.B)):
        got = congruence(T, M)
        loc = _first_mismatch(got, C)
        if loc is not None:
            return VerifyReport(False, f"T^t {name} T differs from canonical form", (name, *loc))
    return VerifyReport(True)


def verify(A: Mat, B: Mat, d: Decomposition) -> VerifyReport:
    """Check that ``d.T`` brings (A, B) exactly to ``assemble(d.blocks)``."""
    total = sum(b.size for b in d.blocks)
    if total != A.rows:
        return VerifyReport(False, f"block sizes sum to {total}, dimension is {A.rows}")
    return check_congruence(A, B, d.T, assemble(d.blocks, SPLIT, A.field))


def verify_partial(A: Mat, B: Mat, exc: SplitFailure) -> VerifyReport:
    """Check the blocks-plus-residual congruence carried by a SplitFailure."""
    canon = assemble(exc.blocks, SPLIT, A.field)
    target = Pencil(Mat.block_diag(A.field, [canon.A, exc.residual.A]),
                    Mat.block_diag(A.field, [canon.B, exc.residual.B]))
    return check_congruence(A, B, exc.basis, target)
