import random

import pytest

from instances import non_split_instance
from jkpencil.canonical import (
    decompose,
    extract_degenerate_block,
    nilpotent_jordan_block,
    regular_eigensplit,
    verify,
    verify_partial,
)
from jkpencil.errors import (
    NotNilpotent,
    NotSelfAdjoint,
    PreconditionBNondegenerate,
    SplitFailure,
)
from jkpencil.exactalg import GF, Q, Poly
from jkpencil.harness import InstanceSpec, generate
from jkpencil.matlin import Mat, congruence, inverse, rank
from jkpencil.pencil import (
    JordanFinite,
    JordanInfinite,
    Kronecker,
    Pencil,
    assemble,
)


def J(lam, k, field=Q):
    return JordanFinite(field.scalar(lam), k)


STD = Mat(Q, [[0, 1], [-1, 0]])


# -- degenerate extraction -------------------------------------------------------


def test_extract_kronecker0():
    ex = extract_degenerate_block(Pencil(Mat(Q, [[0]]), Mat(Q, [[0]])))
    assert ex.block == Kronecker(0)
    assert ex.chain == Mat(Q, [[1]])
    assert ex.complement.cols == 0


def test_extract_infinite_block_by_hand():
    ex = extract_degenerate_block(Pencil(STD, Mat.zeros(Q, 2)))
    assert ex.block == JordanInfinite(1)
    # chain f0, e1
    assert ex.chain.column(0) == (1, 0)
    assert ex.chain.column(1) == (0, -1)
    assert ex.complement.cols == 0


def test_extract_canonical_kronecker1():
    p = assemble([Kronecker(1)])
    ex = extract_degenerate_block(p)
    assert ex.block == Kronecker(1)
    # interleaved chain f0, e1, f1 in the split coordinates e1, f0, f1
    assert ex.chain == Mat(Q, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])


def test_extract_requires_degenerate_b():
    with pytest.raises(PreconditionBNondegenerate):
        extract_degenerate_block(assemble([J(1, 1)]))


def test_extract_trace_bookkeeping():
    A, B, _ = generate(InstanceSpec(Q, (Kronecker(2), JordanInfinite(2), J(1, 1)), 4))
    ex = extract_degenerate_block(Pencil(A, B))
    for step in ex.trace.steps:
        assert step.dim_V + step.dim_W == A.rows
    assert ex.block.size + ex.complement.cols == A.rows


def test_degenerate_loop_consumes_b_corank():
    A, B, truth = generate(InstanceSpec(Q, (Kronecker(1), Kronecker(0), JordanInfinite(2), J(2, 1)), 8))
    cur = Pencil(A, B)
    while rank(cur.B) < cur.n:
        before = cur.n - rank(cur.B)
        ex = extract_degenerate_block(cur)
        cur = Pencil(congruence(ex.complement, cur.A), congruence(ex.complement, cur.B))
        consumed = 1 if isinstance(ex.block, Kronecker) else 2
        assert cur.n - rank(cur.B) == before - consumed


# -- regular phase -----------------------------------------------------------------


def test_eigensplit_single():
    out = regular_eigensplit(assemble([J(3, 1)]))
    assert [(lam.value, V.cols) for lam, V in out] == [(3, 2)]


def test_eigensplit_two_eigenvalues():
    p = assemble([J(1, 1), J(2, 1)])
    out = regular_eigensplit(p)
    assert sorted((lam.value, V.cols) for lam, V in out) == [(1, 2), (2, 2)]
    (_, V1), (_, V2) = out
    assert (V1.T @ p.B @ V2).is_zero()


def test_eigensplit_non_split_over_q():
    A, B = non_split_instance(Q, [-2, 0], [], seed=3)
    with pytest.raises(SplitFailure) as exc:
        regular_eigensplit(Pencil(A, B))
    assert exc.value.remainder == Poly(Q, [-2, 0, 1])
    assert exc.value.kind == "SplitFailure"


def test_eigensplit_requires_nondegenerate():
    with pytest.raises(PreconditionBNondegenerate):
        regular_eigensplit(assemble([Kronecker(0)]))


def test_nilpotent_zero_operator():
    E, F = nilpotent_jordan_block(Mat.zeros(Q, 2), STD)
    assert E == Mat(Q, [[1], [0]])
    assert F == Mat(Q, [[0], [1]])


def test_nilpotent_shift_pair():
    # basis e1, e2, f1, f2; N: e1 -> e2 -> 0, f2 -> f1 -> 0
    B = assemble([J(0, 2)]).B
    N = Mat(Q, [[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]])
    E, F = nilpotent_jordan_block(N, B)
    assert E.cols == 2
    assert E.T @ B @ F == Mat.identity(Q, 2)
    assert N @ E.take_cols([0]) == E.take_cols([1])
    assert N @ F.take_cols([1]) == F.take_cols([0])


def test_nilpotent_rejects():
    B = assemble([J(0, 2)]).B
    N = Mat(Q, [[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    with pytest.raises(NotSelfAdjoint):
        nilpotent_jordan_block(N, B)
    with pytest.raises(NotNilpotent):
        nilpotent_jordan_block(Mat.identity(Q, 2), STD)
    with pytest.raises(PreconditionBNondegenerate):
        nilpotent_jordan_block(Mat.zeros(Q, 2), Mat.zeros(Q, 2))


# -- end to end ---------------------------------------------------------------------


def test_decompose_examples():
    d = decompose(Mat(Q, [[0]]), Mat(Q, [[0]]))
    assert d.blocks == [Kronecker(0)] and d.T == Mat(Q, [[1]])
    d = decompose(Mat(Q, [[0, 2], [-2, 0]]), STD)
    assert d.blocks == [J(2, 1)] and d.T == Mat.identity(Q, 2)
    spec = (Kronecker(1), JordanInfinite(1), J(3, 2))
    A, B, truth = generate(InstanceSpec(Q, spec, 42))
    d = decompose(A, B)
    assert d.blocks == truth
    assert verify(A, B, d).ok
    assert d.ranges == [(0, 3), (3, 5), (5, 9)]


def test_decompose_empty():
    d = decompose(Mat.zeros(Q, 0), Mat.zeros(Q, 0))
    assert d.blocks == [] and d.n == 0


def test_decompose_repeated_eigenvalue_blocks():
    spec = (J(1, 1), J(1, 1), J(1, 2), J(-1, 3))
    A, B, truth = generate(InstanceSpec(Q, spec, 99))
    d = decompose(A, B)
    assert d.blocks == truth and verify(A, B, d).ok


def test_decompose_many_kronecker():
    spec = (Kronecker(0), Kronecker(0), Kronecker(1), Kronecker(2), JordanInfinite(1))
    A, B, truth = generate(InstanceSpec(GF(11), spec, 5))
    d = decompose(A, B)
    assert d.blocks == truth and verify(A, B, d).ok


def test_verify_detects_tampering():
    A, B, _ = generate(InstanceSpec(Q, (Kronecker(1), J(2, 1)), 1))
    d = decompose(A, B)
    assert verify(A, B, d).ok
    rows = [list(r) for r in d.T.data]
    rows[0][0] += 1
    d.T = Mat(Q, rows)
    rep = verify(A, B, d)
    assert not rep.ok and rep.location is not None


def test_verify_canonical_with_identity():
    blocks = [Kronecker(0), JordanInfinite(2), J("1/2", 2)]
    p = assemble(blocks)
    d = decompose(p.A, p.B)
    d.T = Mat.identity(Q, p.n)
    d.blocks = blocks
    assert verify(p.A, p.B, d).ok


def test_verify_rejects_wrong_sizes():
    p = assemble([J(1, 1)])
    d = decompose(p.A, p.B)
    d.blocks = [Kronecker(0)]
    assert not verify(p.A, p.B, d).ok


def test_split_failure_keeps_degenerate_blocks():
    F = GF(7)
    blocks = [JordanInfinite(1), Kronecker(1), J(3, 1, F)]
    A, B = non_split_instance(F, [-1, -1], blocks, seed=12)
    with pytest.raises(SplitFailure) as exc:
        decompose(A, B)
    err = exc.value
    assert err.remainder == Poly(F, [-1, -1, 1])
    assert err.blocks == [Kronecker(1), JordanInfinite(1)]
    assert err.residual.n == 6
    assert verify_partial(A, B, err).ok


def test_self_adjointness_preserved_in_eigenspaces():
    A, B, _ = generate(InstanceSpec(Q, (J(2, 2), J(2, 1), J(-1, 1)), 3))
    p = Pencil(A, B)
    for lam, V in regular_eigensplit(p):
        work_B = congruence(V, B)
        N = inverse(work_B) @ congruence(V, A) - Mat.identity(Q, V.cols).scale(lam.value)
        assert N.T @ work_B == work_B @ N


def test_decomposition_is_deterministic():
    A, B, _ = generate(InstanceSpec(Q, (Kronecker(1), J(1, 2), JordanInfinite(1)), 21))
    d1, d2 = decompose(A, B), decompose(A, B)
    assert d1.T == d2.T and d1.blocks == d2.blocks


@pytest.mark.parametrize("p", [3, 5, 7, 13])
def test_small_fields_round_trip(p):
    from jkpencil.harness import random_blocks

    F = GF(p)
    rng = random.Random(p)
    for trial in range(40):
        blocks = random_blocks(rng, F, 10)
        A, B, truth = generate(InstanceSpec(F, tuple(blocks), trial))
        d = decompose(A, B)
        assert d.blocks == truth
        assert verify(A, B, d).ok

