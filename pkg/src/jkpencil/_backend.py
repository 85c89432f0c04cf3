"""Selects the elimination and product kernels: compiled if the extension was built,
pure Python otherwise."""

try:
    from ._ckernels import matmul_fraction, matmul_modp, rref_fraction, rref_modp

    BACKEND = "cython"
except ImportError:  # extension not built
    from ._pykernels import matmul_fraction, matmul_modp, rref_fraction, rref_modp

    BACKEND = "python"

__all__ = ["BACKEND", "matmul_fraction", "matmul_modp", "rref_fraction", "rref_modp"]
