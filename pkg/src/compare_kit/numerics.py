"""Deterministic quadrature and root finding used by every analytic module.

Thin contracts over scipy's adaptive Gauss-Kronrod integrator and Brent root
finder: explicit tolerance specs, hard failures instead of silent inaccuracy,
and purity (identical inputs give bit-identical outputs).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

from scipy import integrate, optimize

from .errors import (QuadratureFailure, RootConvergenceFailure,
                     RootNotBracketed, ValidationFailure)

__all__ = ["ToleranceSpec", "DEFAULT_TOL", "integrate_1d",
           "integrate_2d_unit_square", "find_root"]


@dataclass(frozen=True)
class ToleranceSpec:
    """Error targets for quadrature and root finding."""

    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    max_iter: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValidationFailure("abs_tol and rel_tol must be strictly positive")
        if self.max_iter < 1:
            raise ValidationFailure("max_iter must be at least 1")

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_TOL = ToleranceSpec()


def integrate_1d(f: Callable[[float], float], a: float, b: float,
                 tol: ToleranceSpec = DEFAULT_TOL) -> float:
    """Adaptively integrate ``f`` over [a, b] to the requested tolerance.

    Raises QuadratureFailure (carrying the best estimate and its error bound)
    when the tolerance cannot be met within the subdivision budget.
    """
    if a > b:
        raise ValidationFailure("integration bounds must satisfy a <= b")
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(f, a, b, epsabs=tol.abs_tol, epsrel=tol.rel_tol,
                             limit=tol.max_iter, full_output=True)
    value, err = res[0], res[1]
    # res gains an explanation message when QUADPACK flags trouble; accept the
    # result anyway if the reported bound still meets the contract (roundoff
    # chatter near integrable singularities), otherwise fail loudly.
    if len(res) > 3 and err > 10.0 * tol.target(value):
        raise QuadratureFailure(
            f"quadrature failure on [{a}, {b}]: {res[3]}",
            best_estimate=value, error_bound=err)
    return value


def integrate_2d_unit_square(f: Callable[[float, float], float],
                             tol: ToleranceSpec = DEFAULT_TOL) -> float:
    """Integrate ``f(u, v)`` over the unit square to the requested tolerance."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, err = integrate.dblquad(lambda v, u: f(u, v), 0.0, 1.0, 0.0, 1.0,
                                       epsabs=tol.abs_tol, epsrel=tol.rel_tol)
    flagged = [w for w in caught if issubclass(w.category, integrate.IntegrationWarning)]
    if flagged and err > 10.0 * tol.target(value):
        raise QuadratureFailure(
            f"quadrature failure on the unit square: {flagged[0].message}",
            best_estimate=value, error_bound=err)
    return value


def find_root(f: Callable[[float], float], lo: float, hi: float,
              tol: ToleranceSpec = DEFAULT_TOL) -> float:
    """Locate the root of a monotone function on a bracketing interval.

    Brent's method (bisection hybridized with inverse-quadratic/secant steps);
    guaranteed to converge on a valid bracket.
    """
    if not lo < hi:
        raise ValidationFailure("root bracket must satisfy lo < hi")
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise RootNotBracketed(
            f"root not bracketed: f({lo}) = {f_lo} and f({hi}) = {f_hi} "
            "have the same sign")
    # xtol tighter than abs_tol so the residual |f(x)| lands within abs_tol
    # even for steep functions (bracket-width-only stopping would not).
    xtol = min(tol.abs_tol, 1e-12)
    try:
        root, info = optimize.brentq(f, lo, hi, xtol=xtol, maxiter=tol.max_iter,
                                     full_output=True)
    except RuntimeError as exc:  # scipy signals iteration exhaustion this way
        raise RootConvergenceFailure(
            f"root finding exceeded {tol.max_iter} iterations on [{lo}, {hi}]",
            last_bracket=(lo, hi)) from exc
    if not info.converged:
        raise RootConvergenceFailure(
            f"root finding exceeded {tol.max_iter} iterations on [{lo}, {hi}]",
            last_bracket=(lo, hi))
    return float(root)
