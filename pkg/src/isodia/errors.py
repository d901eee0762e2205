"""Exception hierarchy shared by all isodia modules."""

from __future__ import annotations


class IsodiaError(Exception):
    """Base class for every error raised by this package."""


class DomainError(IsodiaError, ValueError):
    """An argument lies outside the domain where a formula is defined.

    ``field`` names the offending input when it is known, so aggregated
    reports can say which quantity was rejected.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field

    def __str__(self) -> str:
        msg = super().__str__()
        return f"{self.field}: {msg}" if self.field else msg


class LambdaNotPositive(DomainError):
    """The curvature defect lambda_chi(k) is zero (within tolerance)."""


class ConvergenceFailure(IsodiaError, RuntimeError):
    """An iterative solver exhausted its iteration budget."""


class MeshError(IsodiaError, ValueError):
    """A triangle mesh is malformed or unsuitable for the request."""
