"""Error taxonomy shared by the library, CLI, and HTTP service.

Every error carries a machine-readable ``code`` drawn from a closed enum so
that front ends can branch without parsing messages.
"""

from __future__ import annotations


class CompareKitError(Exception):
    """Base class for all engine errors."""

    code = "INTERNAL"
    #: CLI exit code bucket: 2 = validation/infeasibility, 3 = numeric failure.
    exit_code = 2

    def __init__(self, message: str, *, field: str | None = None):
        super().__init__(message)
        self.message = message
        self.field = field

    def to_payload(self) -> dict:
        payload = {"code": self.code, "message": self.message}
        if self.field is not None:
            payload["field"] = self.field
        return payload


class ValidationFailure(CompareKitError):
    """Input outside its documented domain (types, ranges, missing fields)."""

    code = "VALIDATION"


class InfeasibleAssociation(CompareKitError):
    """Association parameter outside the feasible interval for the margins."""

    code = "INFEASIBLE_ASSOCIATION"

    def __init__(self, message: str, *, lower: float | None = None,
                 upper: float | None = None, field: str | None = None):
        super().__init__(message, field=field)
        self.lower = lower
        self.upper = upper

    def to_payload(self) -> dict:
        payload = super().to_payload()
        if self.lower is not None:
            payload["feasible_lower"] = self.lower
        if self.upper is not None:
            payload["feasible_upper"] = self.upper
        return payload


class UndetectableEffect(CompareKitError):
    """Null treatment effect: the requested quantity is undefined."""

    code = "UNDETECTABLE_EFFECT"


class NumericFailure(CompareKitError):
    """Quadrature or root finding failed to meet its tolerance contract."""

    code = "QUADRATURE_FAILURE"
    exit_code = 3


class QuadratureFailure(NumericFailure):
    """Adaptive integration did not converge; carries the best estimate."""

    def __init__(self, message: str, *, best_estimate: float,
                 error_bound: float):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_bound = error_bound

    def to_payload(self) -> dict:
        payload = super().to_payload()
        payload["best_estimate"] = self.best_estimate
        payload["error_bound"] = self.error_bound
        return payload


class RootNotBracketed(NumericFailure):
    """find_root called with endpoints that do not bracket a sign change."""


class RootConvergenceFailure(NumericFailure):
    """Root finding exceeded its iteration budget; carries the last bracket."""

    def __init__(self, message: str, *, last_bracket: tuple[float, float]):
        super().__init__(message)
        self.last_bracket = last_bracket

    def to_payload(self) -> dict:
        payload = super().to_payload()
        payload["last_bracket"] = list(self.last_bracket)
        return payload
