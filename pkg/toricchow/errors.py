"""Exception hierarchy for toricchow."""

from __future__ import annotations


class ToricChowError(Exception):
    """Base class for every error raised by toricchow."""


class ExactAlgebraError(ToricChowError):
    """Raised by the exact linear algebra kernel (shapes, dependent rows, zero vectors)."""


class PolyhedronError(ToricChowError):
    """Raised when polyhedral data is invalid (no vertices, contains a line, ...)."""


class ComplexError(ToricChowError):
    """Raised when cells violate the polyhedral complex axioms.

    ``cells`` names the offending pair (or single cell) when one is known.
    """

    def __init__(self, message: str, cells: tuple[str, ...] = ()) -> None:
        super().__init__(message)
        self.cells = cells


class NotCompleteError(ComplexError):
    """Raised when an operation needs a complete complex."""


class NonRegularError(ToricChowError):
    """Raised when a Chow level operation is refused on a non-regular complex."""


class DivisorError(ToricChowError):
    """Raised for inconsistent piecewise affine functions or divisors."""


class DocumentError(ToricChowError):
    """Raised when an input document cannot be parsed; ``location`` points at the bad field."""

    def __init__(self, message: str, location: str = "") -> None:
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class FixtureError(ToricChowError):
    """Raised for unknown fixture names or invalid fixture parameters."""
