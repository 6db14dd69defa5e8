"""Exception hierarchy for :mod:`grfold`.

Every error derives from :class:`GrFoldError` and, where it makes sense, from
the matching builtin so callers can catch ``ValueError`` and friends without
importing this module.
"""
from __future__ import annotations

from typing import Any, Dict, Optional


class GrFoldError(Exception):
    """Base class for all toolkit errors."""

    def to_dict(self) -> Dict[str, Any]:
        """Return a machine-readable description of the error."""

        return {"error": type(self).__name__, "message": str(self)}


class InvalidParametersError(GrFoldError, ValueError):
    """Raised for an invalid ``(k, n)`` pair or an out-of-range position."""


class InvalidMutationError(GrFoldError, ValueError):
    """Raised when mutating at a frozen or unknown vertex."""


class TableauError(GrFoldError, ValueError):
    """Raised for malformed tableaux."""


class ShapeMismatchError(TableauError):
    """Raised when two tableaux have different row counts or shapes."""


class NotAFactorError(TableauError):
    """Raised when dividing a tableau by something that is not a factor."""


class IncomparableError(GrFoldError):
    """Raised when the in- and out-unions of a mutation are incomparable."""


class UnsupportedEvaluationError(GrFoldError):
    """Raised when a multi-column tableau is asked for a numeric value."""


class StructuralError(GrFoldError):
    """Raised when a constructed object violates an expected structure."""


class SchemaError(GrFoldError, ValueError):
    """Raised when a JSON payload cannot be decoded."""


class SequenceError(GrFoldError):
    """Wraps a failure raised at position ``step`` of a mutation sequence."""

    def __init__(self, step: int, vertex: int, cause: GrFoldError) -> None:
        super().__init__(f"step {step} (vertex {vertex}): {cause}")
        self.step = step
        self.vertex = vertex
        self.cause = cause

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload.update({"step": self.step, "vertex": self.vertex, "cause": self.cause.to_dict()})
        return payload


class SamplingError(GrFoldError, RuntimeError):
    """Raised when a sampler exhausts its resample budget."""

    def __init__(self, message: str, attempts: int, reason: Optional[str] = None) -> None:
        super().__init__(message)
        self.attempts = attempts
        self.reason = reason

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload.update({"attempts": self.attempts, "reason": self.reason})
        return payload


class DegenerateSampleError(GrFoldError, ArithmeticError):
    """Raised when a sample has a vanishing bracket or denominator."""


__all__ = [
    "GrFoldError",
    "InvalidParametersError",
    "InvalidMutationError",
    "TableauError",
    "ShapeMismatchError",
    "NotAFactorError",
    "IncomparableError",
    "UnsupportedEvaluationError",
    "StructuralError",
    "SchemaError",
    "SequenceError",
    "SamplingError",
    "DegenerateSampleError",
]
