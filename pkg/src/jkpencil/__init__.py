"""Exact Jordan-Kronecker canonical form of a pair of skew-symmetric forms
over Q or a prime field F_p (p odd)."""

from ._backend import BACKEND
from .canonical import (
    Decomposition,
    SplitFailure,
    decompose,
    extract_degenerate_block,
    nilpotent_jordan_block,
    regular_eigensplit,
    verify,
    verify_partial,
)
from .errors import PencilError
from .exactalg import GF, Q, Field, Poly, Scalar, char_poly, roots_in_field
from .harness import InstanceSpec, cross_check, generate, invariants
from .matlin import Mat, rank
from .pencil import (
    INTERLEAVED,
    SPLIT,
    JordanFinite,
    JordanInfinite,
    Kronecker,
    Pencil,
    assemble,
    canonical_sort,
    materialize_block,
    validate_pencil,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Decomposition",
    "Field",
    "GF",
    "INTERLEAVED",
    "InstanceSpec",
    "JordanFinite",
    "JordanInfinite",
    "Kronecker",
    "Mat",
    "Pencil",
    "PencilError",
    "Poly",
    "Q",
    "SPLIT",
    "Scalar",
    "SplitFailure",
    "assemble",
    "canonical_sort",
    "char_poly",
    "cross_check",
    "decompose",
    "extract_degenerate_block",
    "generate",
    "invariants",
    "materialize_block",
    "nilpotent_jordan_block",
    "rank",
    "regular_eigensplit",
    "roots_in_field",
    "validate_pencil",
    "verify",
    "verify_partial",
]
