"""The compiled and pure-Python elimination kernels must agree exactly."""

import random
from fractions import Fraction

import pytest

from jkpencil import _backend, _pykernels

try:
    from jkpencil import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def test_backend_selected():
    assert _backend.BACKEND in ("cython", "python")
    if _ckernels is not None:
        assert _backend.BACKEND == "cython"


def _rows_modp(rng, m, n, p):
    return [[rng.randrange(p) if rng.random() < 0.6 else 0 for _ in range(n)] for _ in range(m)]


@needs_ext
@pytest.mark.parametrize("p", [3, 7, 65521, 2**31 - 1, 2**61 - 1])
def test_modp_agreement(p):
    rng = random.Random(p)
    for _ in range(60):
        m, n = rng.randint(0, 7), rng.randint(1, 7)
        extra = rng.randint(0, 3)
        rows = _rows_modp(rng, m, n + extra, p)
        a, b = [r[:] for r in rows], [r[:] for r in rows]
        assert _ckernels.rref_modp(a, n, p) == _pykernels.rref_modp(b, n, p)
        assert a == b


@needs_ext
def test_fraction_agreement():
    rng = random.Random(1)
    for _ in range(60):
        m, n = rng.randint(0, 6), rng.randint(1, 6)
        rows = [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) if rng.random() < 0.6 else Fraction(0)
                 for _ in range(n + 2)] for _ in range(m)]
        a, b = [r[:] for r in rows], [r[:] for r in rows]
        assert _ckernels.rref_fraction(a, n) == _pykernels.rref_fraction(b, n)
        assert a == b


def reference_rref(rows, ncols):
    """Textbook Gauss-Jordan on Fractions, the oracle for both kernels."""
    rows = [[Fraction(x) for x in r] for r in rows]
    pivots, r = [], 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                fac = rows[i][c]
                rows[i] = [x - fac * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


KERNELS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])


@pytest.mark.parametrize("mod", KERNELS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_fraction_kernel_matches_reference(mod):
    rng = random.Random(99)
    for _ in range(80):
        m, n = rng.randint(1, 7), rng.randint(1, 7)
        rows = [[Fraction(rng.randint(-6, 6), rng.randint(1, 5)) if rng.random() < 0.5 else Fraction(0)
                 for _ in range(n + 3)] for _ in range(m)]
        if m > 1 and rng.random() < 0.3:
            rows[-1] = [2 * x - y for x, y in zip(rows[0], rows[1])]
        expected, exp_piv = reference_rref(rows, n)
        got = [r[:] for r in rows]
        assert mod.rref_fraction(got, n) == exp_piv
        assert got == expected
        assert all(isinstance(x, Fraction) for r in got for x in r)


@pytest.mark.parametrize("mod", KERNELS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_modp_kernel_matches_reference(mod):
    rng = random.Random(98)
    p = 13
    for _ in range(80):
        m, n = rng.randint(1, 7), rng.randint(1, 7)
        rows = _rows_modp(rng, m, n + 2, p)
        got = [r[:] for r in rows]
        piv = mod.rref_modp(got, n, p)
        # lift to Q and compare against the oracle after reduction mod p
        assert len(piv) <= min(m, n)
        for i, c in enumerate(piv):
            assert got[i][c] == 1
            assert all(got[k][c] == 0 for k in range(m) if k != i)
        assert all(0 <= x < p for r in got for x in r)


def test_python_kernel_rref_shape():
    rows = [[0, 2, 4], [0, 1, 3], [1, 1, 1]]
    piv = _pykernels.rref_modp(rows, 3, 7)
    assert piv == [0, 1, 2]
    assert rows == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


@pytest.mark.parametrize("mod", KERNELS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_matmul_kernels_match_reference(mod):
    rng = random.Random(97)
    for _ in range(60):
        n, k, m = rng.randint(0, 5), rng.randint(0, 5), rng.randint(0, 5)
        a = [[Fraction(rng.randint(-7, 7), rng.randint(1, 6)) for _ in range(k)] for _ in range(n)]
        bt = [[Fraction(rng.randint(-7, 7), rng.randint(1, 6)) for _ in range(k)] for _ in range(m)]
        expected = [[sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in bt] for r in a]
        assert mod.matmul_fraction(a, bt) == expected
        for p in (3, 65521, 2**61 - 1):
            ai = [[rng.randrange(p) for _ in range(k)] for _ in range(n)]
            bi = [[rng.randrange(p) for _ in range(k)] for _ in range(m)]
            expected = [[sum(x * y for x, y in zip(r, c)) % p for c in bi] for r in ai]
            assert mod.matmul_modp(ai, bi, p) == expected


def test_decompose_with_python_fallback(monkeypatch):
    from jkpencil.canonical import decompose, verify
    from jkpencil.exactalg import GF, Q
    from jkpencil.harness import InstanceSpec, generate, random_blocks

    for name in ("rref_fraction", "rref_modp", "matmul_fraction", "matmul_modp"):
        monkeypatch.setattr(_backend, name, getattr(_pykernels, name))
    rng = random.Random(4)
    for field in (Q, GF(7), GF(65521)):
        for seed in range(15):
            blocks = random_blocks(rng, field, 10)
            A, B, truth = generate(InstanceSpec(field, tuple(blocks), seed))
            d = decompose(A, B)
            assert d.blocks == truth and verify(A, B, d).ok
