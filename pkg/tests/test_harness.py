import random

import pytest

from jkpencil.canonical import decompose, verify
from jkpencil.errors import NotEnoughSamplePoints
from jkpencil.exactalg import GF, Q, Poly
from jkpencil.harness import (
    IDENTITY,
    InstanceSpec,
    corank_at,
    cross_check,
    det_pencil,
    eigenvalue_points,
    generate,
    generic_corank,
    invariants,
    random_blocks,
    random_invertible,
)
from jkpencil.matlin import Mat, determinant
from jkpencil.pencil import JordanFinite, JordanInfinite, Kronecker, Pencil, assemble


def J(lam, k, field=Q):
    return JordanFinite(field.scalar(lam), k)


def test_random_invertible():
    assert random_invertible(0, 1).rows == 0
    for seed in range(25):
        S = random_invertible(6, seed)
        assert determinant(S).value in (1, -1)
    assert random_invertible(5, 9) == random_invertible(5, 9)
    assert random_invertible(5, 9) != random_invertible(5, 10)
    S = random_invertible(5, 3, field=GF(7))
    assert determinant(S).value in (1, 6)


def test_generate_examples():
    A, B, truth = generate(InstanceSpec(Q, (Kronecker(0),), 17))
    assert A == Mat(Q, [[0]]) and B == Mat(Q, [[0]]) and truth == [Kronecker(0)]
    A, B, truth = generate(InstanceSpec(Q, (J(3, 1),), IDENTITY))
    assert A == Mat(Q, [[0, 3], [-3, 0]]) and B == Mat(Q, [[0, 1], [-1, 0]])
    A, B, truth = generate(InstanceSpec(Q, (JordanInfinite(1), Kronecker(1)), 7))
    assert A.rows == 5
    d = decompose(A, B)
    assert d.blocks == truth == [Kronecker(1), JordanInfinite(1)]
    assert verify(A, B, d).ok


def test_generate_is_deterministic():
    spec = InstanceSpec(Q, (Kronecker(1), J("1/2", 2)), 123)
    assert generate(spec) == generate(spec)


def test_random_blocks_sizes():
    rng = random.Random(0)
    for max_n in range(1, 14):
        for _ in range(20):
            blocks = random_blocks(rng, Q, max_n)
            assert 1 <= sum(b.size for b in blocks) <= max_n
    assert random_blocks(random.Random(5), Q, 1) == [Kronecker(0)]


def test_corank_at_examples():
    p = assemble([J(2, 1)])
    assert corank_at(p, Q.elem(-2)) == 2
    assert corank_at(p, Q.elem(0)) == 0
    k = assemble([Kronecker(1)])
    for mu in (-5, 0, 3):
        assert corank_at(k, Q.elem(mu)) == 1


def test_generic_corank_examples():
    assert generic_corank(assemble([J(2, 1)])) == 0
    assert generic_corank(assemble([Kronecker(0)])) == 1
    assert generic_corank(assemble([Kronecker(1), Kronecker(1)])) == 2
    with pytest.raises(NotEnoughSamplePoints):
        generic_corank(assemble([Kronecker(1), Kronecker(1)], field=GF(5)))


def test_det_pencil_examples():
    d = det_pencil(Pencil(Mat(Q, [[0, 2], [-2, 0]]), Mat(Q, [[0, 1], [-1, 0]])))
    assert not d.identically_zero and d.poly == Poly(Q, [4, 4, 1])
    assert det_pencil(Pencil(Mat.zeros(Q, 2), Mat.zeros(Q, 2))).identically_zero
    assert det_pencil(assemble([Kronecker(1)])).identically_zero


def test_det_pencil_roots_and_degree():
    blocks = [J(1, 2), J(-3, 1), JordanInfinite(2), JordanInfinite(1)]
    A, B, _ = generate(InstanceSpec(Q, tuple(blocks), 4))
    d = det_pencil(Pencil(A, B))
    assert d.poly.degree == A.rows - 2 * 3
    from jkpencil.exactalg import roots_in_field

    roots, rem = roots_in_field(d.poly)
    assert sorted((r.value, m) for r, m in roots) == [(-1, 4), (3, 2)]
    assert rem.degree == 0


def test_eigenvalue_points_singular_pencil():
    blocks = [Kronecker(1), J(2, 1), J("1/2", 1)]
    A, B, _ = generate(InstanceSpec(Q, tuple(blocks), 6))
    pts = set(eigenvalue_points(Pencil(A, B)))
    assert {Q.elem(-2), Q.elem("-1/2")} <= pts


def test_invariants_report():
    blocks = [Kronecker(1), JordanInfinite(1), J(2, 1), J(2, 2), J(-1, 1)]
    A, B, _ = generate(InstanceSpec(Q, tuple(blocks), 2))
    rep = invariants(Pencil(A, B))
    assert rep.generic_corank == 1
    assert rep.n_kronecker == 1 and rep.n_jordan_infinite == 1
    assert rep.det.identically_zero
    assert rep.jordan_counts == {Q.elem(-1): 1, Q.elem(2): 2}
    js = rep.to_json(Q)
    assert list(js) == ["n", "generic_corank", "corank_A", "corank_B", "det_pencil",
                        "sampled_coranks", "implied_counts"]


def test_invariants_empty_pencil():
    rep = invariants(Pencil(Mat.zeros(Q, 0), Mat.zeros(Q, 0)))
    assert rep.n == 0 and rep.sampled == [] and rep.jordan_counts == {}


def test_cross_check_examples():
    A, B, truth = generate(InstanceSpec(Q, (Kronecker(1), JordanInfinite(1), J(3, 2), J(1, 1)), 42))
    p = Pencil(A, B)
    d = decompose(A, B)
    rep = cross_check(p, d)
    assert rep.ok and not rep.failures
    names = [c["check"] for c in rep.checks]
    assert "corank_at(-3)" in names and "corank_at(-1)" in names
    # forced mismatch: drop the eigenvalue-3 block
    tampered = [b for b in d.blocks if not (isinstance(b, JordanFinite) and b.lam == Q.scalar(3))]
    rep = cross_check(p, tampered)
    assert not rep.ok
    assert any(c["check"] == "corank_at(-3)" for c in rep.failures)
    assert cross_check(Pencil(Mat.zeros(Q, 0), Mat.zeros(Q, 0)), []).ok


def test_cross_check_small_field_skips_generic():
    F = GF(3)
    blocks = (Kronecker(1), J(1, 1, F), J(2, 1, F))
    A, B, truth = generate(InstanceSpec(F, blocks, 1))
    rep = cross_check(Pencil(A, B), decompose(A, B))
    assert rep.ok
    assert rep.checks[0]["skipped"]


def test_eigenvalue_points_small_field():
    F = GF(3)
    p = assemble([J(1, 1, F), J(2, 1, F)], field=F)
    assert eigenvalue_points(p) == [0, 1, 2]
