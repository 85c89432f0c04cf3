"""Exception hierarchy.

Every error carries a stable ``kind`` string (the class name) which the CLI
emits in its JSON diagnostics.
"""

from __future__ import annotations


class PencilError(Exception):
    """Base class for all errors raised by this package."""

    @property
    def kind(self) -> str:
        return type(self).__name__

    def detail(self) -> dict:
        return {"message": str(self)}


class MixedFields(PencilError, TypeError):
    pass


class DivisionByZero(PencilError, ZeroDivisionError):
    pass


class InvalidField(PencilError, ValueError):
    pass


class CharTwoField(InvalidField):
    pass


class ParseError(PencilError, ValueError):
    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        super().__init__(message)
        self.row = row
        self.col = col

    def detail(self) -> dict:
        return {"message": str(self), "row": self.row, "col": self.col}


class NonSquare(PencilError, ValueError):
    pass


class NotSquare(NonSquare):
    """A pencil matrix is not square."""


class DimensionMismatch(PencilError, ValueError):
    pass


class Singular(PencilError, ValueError):
    pass


class DependentColumns(PencilError, ValueError):
    pass


class NotSkew(PencilError, ValueError):
    def __init__(self, which: str, i: int, j: int):
        super().__init__(f"matrix {which} is not skew-symmetric at entry ({i}, {j})")
        self.which = which
        self.i = i
        self.j = j

    def detail(self) -> dict:
        return {"message": str(self), "matrix": self.which, "row": self.i, "col": self.j}


class EmptyInput(PencilError, ValueError):
    pass


class DuplicateAbscissa(PencilError, ValueError):
    pass


class ZeroPolynomial(PencilError, ValueError):
    pass


class FieldTooLargeForSearch(PencilError, ValueError):
    pass


class InvalidK(PencilError, ValueError):
    pass


class PreconditionBNondegenerate(PencilError, ValueError):
    pass


class NotNilpotent(PencilError, ValueError):
    pass


class NotSelfAdjoint(PencilError, ValueError):
    pass


class NotEnoughSamplePoints(PencilError, ValueError):
    pass


class InternalInvariantViolation(PencilError, AssertionError):
    pass


class SplitFailure(PencilError):
    """The characteristic polynomial of the regular part does not split.

    ``remainder`` is the root-free part of the Pfaffian polynomial of the
    regular part (the characteristic polynomial is its square).  ``blocks``,
    ``basis`` and ``residual`` are filled in by :func:`decompose` so that the
    degenerate-phase blocks are not lost.
    """

    def __init__(self, remainder, degrees=None, blocks=(), basis=None, residual=None):
        super().__init__(f"characteristic polynomial does not split; remainder {remainder}")
        self.remainder = remainder
        self.degrees = list(degrees) if degrees is not None else [remainder.degree]
        self.blocks = list(blocks)
        self.basis = basis
        self.residual = residual

    def detail(self) -> dict:
        return {
            "message": str(self),
            "remainder": [self.remainder.field.fmt(c) for c in self.remainder.coeffs],
            "degrees": self.degrees,
        }
