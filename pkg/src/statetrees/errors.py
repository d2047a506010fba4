"""Exception types shared across the package."""

from __future__ import annotations


class StateTreesError(Exception):
    """Base class for domain errors raised by this package."""

    code = "domain"


class OversizeError(StateTreesError):
    """An input exceeds the configured desk-scale limits."""

    code = "oversize"


class ParseError(StateTreesError):
    """Text input does not conform to a format grammar."""

    code = "parse"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class InvalidTreeError(StateTreesError):
    """A state tree violates the structural invariants."""

    code = "invalid-tree"


class EmptyCosetError(StateTreesError):
    """The system Ax = b has no solution."""

    code = "empty-coset"


class NonMultilinearError(StateTreesError):
    """A formula computes a polynomial of degree >= 2 in some variable."""

    code = "non-multilinear"


class NonOrthogonalError(StateTreesError):
    """A tree is not (manifestly) orthogonal where the operation needs it."""

    code = "non-orthogonal"


class NonUnitaryError(StateTreesError):
    """A matrix that must be unitary is not, within tolerance."""

    code = "non-unitary"
