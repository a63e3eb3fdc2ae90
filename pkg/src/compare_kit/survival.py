"""Time-to-event design engine for a two-component composite endpoint.

Weibull cause-specific margins are tied together by a Gumbel copula whose
parameter is set from an anticipated Spearman correlation. From the joint
law the module derives the composite survival S*(t), density f*(t), hazard,
and time-varying hazard ratio HR*(t) for control and treatment arms, then the
asymptotic relative efficiency (ARE) of the composite versus the relevant
component and the Freedman sample size.

Treatment effects enter as proportional hazards per component margin,
S_j^(1) = (S_j^(0))^HR_j, so any non-proportionality of the composite hazard
ratio is an emergent property measured by ``ph_diagnostic``.

When the relevant endpoint is terminal (``eps1_terminal``), the additional
endpoint can only be observed while the subject is event-free on the relevant
one. The joint law is then built on the component time CDFs (a competing-risks
construction) and the latent margin of the additional endpoint is recalibrated
so that its *observable* incidence by tau matches the anticipated frequency.
Otherwise both components are observable and the copula binds the marginal
survival functions directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UndetectableEffect, ValidationFailure
from .numerics import DEFAULT_TOL, ToleranceSpec, find_root, integrate_1d

__all__ = [
    "WeibullMargin", "SurvivalScenario", "CompositeLaw",
    "weibull_scale_from_event_prob", "gumbel_cdf", "spearman_of_gumbel",
    "gumbel_theta_from_spearman", "build_composite_law", "are_survival",
    "freedman_sample_size", "effective_hr", "ph_diagnostic",
]

# Lower integration limit for integrands with an integrable singularity at
# t = 0 (Weibull shape < 1); the discarded head mass is far below the
# reporting precision of ARE and sample sizes.
SINGULARITY_CUTOFF = 1e-10

# Floor applied to time before forming t**(shape-1), so densities and hazards
# stay finite floats instead of overflowing at t = 0.
_TINY_TIME = 1e-300


def weibull_scale_from_event_prob(event_prob: float, shape: float,
                                  tau: float) -> float:
    """Scale b such that a Weibull(shape, b) event occurs by tau w.p. event_prob."""
    if not (0.0 < event_prob < 1.0):
        raise ValidationFailure(
            f"event_prob must lie strictly between 0 and 1, got {event_prob}",
            field="event_prob")
    if shape <= 0.0:
        raise ValidationFailure(f"shape must be positive, got {shape}",
                                field="shape")
    if tau <= 0.0:
        raise ValidationFailure(f"tau must be positive, got {tau}", field="tau")
    return tau / (-math.log1p(-event_prob)) ** (1.0 / shape)


@dataclass(frozen=True)
class WeibullMargin:
    """One component's time-to-event margin: S(t) = exp(-(t/scale)^shape)."""

    shape: float
    scale: float
    event_prob_tau: float

    def __post_init__(self):
        if self.shape <= 0.0:
            raise ValidationFailure(
                f"shape must be positive, got {self.shape}", field="shape")
        if self.scale <= 0.0:
            raise ValidationFailure(
                f"scale must be positive, got {self.scale}", field="scale")
        if not (0.0 < self.event_prob_tau < 1.0):
            raise ValidationFailure(
                f"event_prob_tau must lie strictly between 0 and 1, "
                f"got {self.event_prob_tau}", field="event_prob_tau")

    @classmethod
    def from_event_prob(cls, event_prob: float, shape: float,
                        tau: float) -> "WeibullMargin":
        scale = weibull_scale_from_event_prob(event_prob, shape, tau)
        return cls(shape=shape, scale=scale, event_prob_tau=event_prob)

    def under_hr(self, hr: float) -> "WeibullMargin":
        """Margin of the treated arm under proportional hazards S^(1) = S^hr."""
        if not (0.0 < hr <= 1.0):
            raise ValidationFailure(
                f"hazard ratio must lie in (0, 1], got {hr}", field="hr")
        return WeibullMargin(
            shape=self.shape,
            scale=self.scale * hr ** (-1.0 / self.shape),
            event_prob_tau=-math.expm1(hr * math.log1p(-self.event_prob_tau)))

    def survival(self, t):
        t = np.maximum(np.asarray(t, dtype=float), 0.0)
        return np.exp(-(t / self.scale) ** self.shape)

    def cdf(self, t):
        t = np.maximum(np.asarray(t, dtype=float), 0.0)
        return -np.expm1(-(t / self.scale) ** self.shape)

    def density(self, t):
        t = np.maximum(np.asarray(t, dtype=float), _TINY_TIME)
        z = t / self.scale
        return (self.shape / self.scale) * z ** (self.shape - 1.0) * np.exp(-z ** self.shape)

    def hazard(self, t):
        t = np.maximum(np.asarray(t, dtype=float), _TINY_TIME)
        return (self.shape / self.scale) * (t / self.scale) ** (self.shape - 1.0)


@dataclass(frozen=True)
class SurvivalScenario:
    """Anticipated design quantities for a two-component time-to-event trial."""

    margin1: WeibullMargin
    margin2: WeibullMargin
    hr1: float
    hr2: float
    spearman_rho: float
    tau: float = 1.0
    eps1_terminal: bool = True

    def __post_init__(self):
        if self.tau <= 0.0:
            raise ValidationFailure(
                f"tau must be positive, got {self.tau}", field="tau")
        for name, hr in (("hr1", self.hr1), ("hr2", self.hr2)):
            if not (0.0 < hr <= 1.0):
                raise ValidationFailure(
                    f"{name} must lie in (0, 1] (beneficial or null effect), "
                    f"got {hr}", field=name)
        if self.spearman_rho < 0.0:
            raise ValidationFailure(
                "Gumbel supports nonnegative association only; negative "
                "Spearman correlation would require a different copula family",
                field="spearman_rho")
        if self.spearman_rho >= 1.0:
            raise ValidationFailure(
                f"spearman_rho must lie in [0, 1), got {self.spearman_rho}",
                field="spearman_rho")
        for name, margin in (("margin1", self.margin1), ("margin2", self.margin2)):
            implied = -math.expm1(-(self.tau / margin.scale) ** margin.shape)
            if abs(implied - margin.event_prob_tau) > 1e-10:
                raise ValidationFailure(
                    f"{name} is inconsistent: scale {margin.scale} implies "
                    f"P(event by tau) = {implied}, not {margin.event_prob_tau}",
                    field=name)


def _check_theta(theta: float) -> None:
    if theta < 1.0:
        raise ValidationFailure(
            f"Gumbel parameter theta must be >= 1, got {theta}", field="theta")


def gumbel_cdf(u, v, theta: float):
    """Gumbel copula C(u, v) = exp(-[(-ln u)^theta + (-ln v)^theta]^(1/theta))."""
    _check_theta(theta)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any((u < 0.0) | (u > 1.0)) or np.any((v < 0.0) | (v > 1.0)):
        raise ValidationFailure("copula arguments must lie in [0, 1]")
    with np.errstate(divide="ignore", over="ignore"):
        x = -np.log(u)
        y = -np.log(v)
        c = np.exp(-(x ** theta + y ** theta) ** (1.0 / theta))
    # Margin axioms hold exactly, not merely to roundoff.
    c = np.where(v == 1.0, u, np.where(u == 1.0, v, c))
    return float(c) if c.ndim == 0 else c


def _gumbel_d1(u, v, theta: float):
    """Partial derivative of the Gumbel copula in its first argument.

    Expects arrays already inside the unit square; edge values are mapped to
    their pointwise limits so grid evaluations touching t = 0 stay finite.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = -np.log(u)
        y = -np.log(v)
        s = x ** theta + y ** theta
        d = np.exp(-s ** (1.0 / theta)) * s ** (1.0 / theta - 1.0) \
            * x ** (theta - 1.0) / u
    d = np.where(s == 0.0, 1.0, d)            # u = v = 1
    d = np.where(u == 0.0, np.where(v > 0.0, 1.0, 0.0), d)
    return d


def _spearman_integrand(z: float, theta: float) -> float:
    # 1-D reduction of the double integral of C over the unit square:
    #   I = (1/theta) * int_0^1 (w(1-w))^(1/theta-1) / (1+h(w))^2 dw
    # with h(w) = w^(1/theta) + (1-w)^(1/theta). Folding the symmetric half
    # and substituting w = z^theta removes the endpoint singularities:
    #   I = 2 * int_0^{2^(-1/theta)} (1-z^theta)^(1/theta-1)
    #       / (1 + z + (1-z^theta)^(1/theta))^2 dz.
    a = 1.0 / theta
    r = 1.0 - z ** theta
    return r ** (a - 1.0) / (1.0 + z + r ** a) ** 2


def spearman_of_gumbel(theta: float, tol: ToleranceSpec = DEFAULT_TOL) -> float:
    """Spearman correlation of the Gumbel copula, 12 * integral of C - 3."""
    _check_theta(theta)
    if theta == 1.0:
        return 0.0
    integral = 2.0 * integrate_1d(lambda z: _spearman_integrand(z, theta),
                                  0.0, 0.5 ** (1.0 / theta), tol)
    return 12.0 * integral - 3.0


@lru_cache(maxsize=512)
def gumbel_theta_from_spearman(rho_s: float) -> float:
    """Copula parameter whose Spearman correlation equals rho_s."""
    if rho_s < 0.0:
        raise ValidationFailure(
            "Gumbel supports nonnegative association only; negative Spearman "
            "correlation would require a different copula family",
            field="spearman_rho")
    if rho_s >= 1.0:
        raise ValidationFailure(
            f"spearman_rho must lie in [0, 1), got {rho_s}",
            field="spearman_rho")
    if rho_s == 0.0:
        return 1.0
    hi = 50.0
    while spearman_of_gumbel(hi) < rho_s:
        hi *= 2.0
        if hi > 1e9:
            raise ValidationFailure(
                f"spearman_rho = {rho_s} is too close to 1 to invert",
                field="spearman_rho")
    return find_root(lambda th: spearman_of_gumbel(th) - rho_s, 1.0, hi)


def _arm_index(arm) -> int:
    if arm in (0, "control"):
        return 0
    if arm in (1, "treatment"):
        return 1
    raise ValidationFailure(
        f"arm must be 0/'control' or 1/'treatment', got {arm!r}", field="arm")


@dataclass(frozen=True)
class CompositeLaw:
    """Evaluable joint law of the composite T* = min(T1, T2) in both arms.

    Margins are the latent component margins actually coupled by the copula;
    under the competing-risks construction margin 2 differs from the
    anticipated observable incidence it was calibrated against.
    """

    theta: float
    tau: float
    eps1_terminal: bool
    control_margins: tuple[WeibullMargin, WeibullMargin]
    treatment_margins: tuple[WeibullMargin, WeibullMargin]

    def margins(self, arm) -> tuple[WeibullMargin, WeibullMargin]:
        return (self.control_margins, self.treatment_margins)[_arm_index(arm)]

    def S_star(self, arm, t):
        """Composite survival P(T* > t)."""
        m1, m2 = self.margins(arm)
        if self.eps1_terminal:
            f1, f2 = m1.cdf(t), m2.cdf(t)
            out = 1.0 - f1 - f2 + gumbel_cdf(f1, f2, self.theta)
        else:
            out = gumbel_cdf(m1.survival(t), m2.survival(t), self.theta)
        return float(out) if np.ndim(out) == 0 else out

    def cause_subdensities(self, arm, t):
        """Densities of observing each component first, summing to f*."""
        m1, m2 = self.margins(arm)
        if self.eps1_terminal:
            f1, f2 = m1.cdf(t), m2.cdf(t)
            g1 = (1.0 - _gumbel_d1(f1, f2, self.theta)) * m1.density(t)
            g2 = (1.0 - _gumbel_d1(f2, f1, self.theta)) * m2.density(t)
        else:
            s1, s2 = m1.survival(t), m2.survival(t)
            g1 = _gumbel_d1(s1, s2, self.theta) * m1.density(t)
            g2 = _gumbel_d1(s2, s1, self.theta) * m2.density(t)
        return g1, g2

    def f_star(self, arm, t):
        """Composite density -dS*/dt."""
        g1, g2 = self.cause_subdensities(arm, t)
        out = g1 + g2
        return float(out) if np.ndim(out) == 0 else out

    def lambda_star(self, arm, t):
        """Composite hazard f*/S*."""
        out = self.f_star(arm, t) / self.S_star(arm, t)
        return float(out) if np.ndim(out) == 0 else out

    def hr_star(self, t):
        """Time-varying composite hazard ratio, treatment over control."""
        out = self.lambda_star(1, t) / self.lambda_star(0, t)
        return float(out) if np.ndim(out) == 0 else out

    def event_prob(self, arm) -> float:
        """Probability of a composite event by the follow-up horizon."""
        return float(1.0 - self.S_star(arm, self.tau))


def _observable_incidence2(margin2: WeibullMargin, margin1: WeibullMargin,
                           theta: float, tau: float,
                           tol: ToleranceSpec) -> float:
    # Incidence of the additional endpoint before the terminal one: integral
    # of the cause-2 subdensity of the competing-risks law.
    def integrand(t: float) -> float:
        return float((1.0 - _gumbel_d1(margin2.cdf(t), margin1.cdf(t), theta))
                     * margin2.density(t))
    return integrate_1d(integrand, 0.0, tau, tol)


@lru_cache(maxsize=512)
def _calibrated_latent_margin2(margin1: WeibullMargin, margin2: WeibullMargin,
                               theta: float, tau: float,
                               tol: ToleranceSpec) -> WeibullMargin:
    """Latent margin 2 whose observable incidence by tau matches the input."""
    target = margin2.event_prob_tau
    shape = margin2.shape

    def gap(latent_prob: float) -> float:
        margin = WeibullMargin.from_event_prob(latent_prob, shape, tau)
        return _observable_incidence2(margin, margin1, theta, tau, tol) - target

    # Competition only removes cause-2 events, so the observable incidence of
    # a latent probability p is below p: the target itself is a lower bracket.
    hi = 0.5 * (1.0 + target)
    while gap(hi) < 0.0:
        hi = 0.5 * (1.0 + hi)
        if 1.0 - hi < 1e-9:
            raise ValidationFailure(
                "margin2.event_prob_tau is unattainable: competition from the "
                "terminal endpoint caps the observable incidence below "
                f"{target}", field="margin2")
    latent = find_root(gap, target, hi, tol)
    return WeibullMargin.from_event_prob(latent, shape, tau)


def build_composite_law(scenario: SurvivalScenario,
                        tol: ToleranceSpec = DEFAULT_TOL) -> CompositeLaw:
    """Joint composite law of a scenario, same copula parameter in both arms."""
    theta = gumbel_theta_from_spearman(scenario.spearman_rho)
    margin1 = scenario.margin1
    if scenario.eps1_terminal:
        margin2 = _calibrated_latent_margin2(margin1, scenario.margin2, theta,
                                             scenario.tau, tol)
    else:
        margin2 = scenario.margin2
    return CompositeLaw(
        theta=theta,
        tau=scenario.tau,
        eps1_terminal=scenario.eps1_terminal,
        control_margins=(margin1, margin2),
        treatment_margins=(margin1.under_hr(scenario.hr1),
                           margin2.under_hr(scenario.hr2)))


def _log_hr_mass_integral(law: CompositeLaw, tau: float,
                          tol: ToleranceSpec) -> float:
    """Integral of ln HR*(t) against the control-arm composite density."""
    def integrand(t: float) -> float:
        return math.log(law.hr_star(t)) * law.f_star(0, t)
    return integrate_1d(integrand, SINGULARITY_CUTOFF, tau, tol)


def are_survival(scenario: SurvivalScenario,
                 tol: ToleranceSpec = DEFAULT_TOL,
                 law: CompositeLaw | None = None) -> float:
    """Asymptotic relative efficiency of the composite versus component 1.

    ARE = (integral of ln HR* against f*^(0))^2
          / ((ln HR1)^2 * p1^(0) * p*^(0));
    values above 1 favor the composite endpoint. A law already built for the
    scenario may be passed to avoid rebuilding it.
    """
    if scenario.hr1 == 1.0:
        raise UndetectableEffect(
            "ARE undefined for null effect on relevant endpoint", field="hr1")
    if law is None:
        law = build_composite_law(scenario, tol)
    numerator = _log_hr_mass_integral(law, scenario.tau, tol) ** 2
    p1_control = scenario.margin1.event_prob_tau
    p_star_control = law.event_prob(0)
    return numerator / (math.log(scenario.hr1) ** 2 * p1_control * p_star_control)


def effective_hr(law: CompositeLaw, tau: float,
                 tol: ToleranceSpec = DEFAULT_TOL) -> float:
    """Geometric average of HR*(t) weighted by the control composite density."""
    p_star_control = float(1.0 - law.S_star(0, tau))
    return math.exp(_log_hr_mass_integral(law, tau, tol) / p_star_control)


def freedman_sample_size(summary_hr: float, event_prob_avg: float,
                         alpha: float = 0.05, power: float = 0.80,
                         sidedness: str = "one") -> int:
    """Total sample size (both arms, 1:1) from the Freedman events formula."""
    if summary_hr == 1.0:
        raise UndetectableEffect(
            "undetectable effect: hazard ratio of 1 requires unbounded "
            "sample size", field="summary_hr")
    if not (0.0 < summary_hr < 1.0):
        raise ValidationFailure(
            f"summary_hr must lie in (0, 1), got {summary_hr}",
            field="summary_hr")
    if not (0.0 < event_prob_avg <= 1.0):
        raise ValidationFailure(
            f"event_prob_avg must lie in (0, 1], got {event_prob_avg}",
            field="event_prob_avg")
    if not (0.0 < alpha < 0.5):
        raise ValidationFailure(
            f"alpha must lie strictly between 0 and 0.5, got {alpha}",
            field="alpha")
    if not (0.5 < power < 1.0):
        raise ValidationFailure(
            f"power must lie strictly between 0.5 and 1, got {power}",
            field="power")
    if sidedness not in ("one", "two"):
        raise ValidationFailure(
            f"sidedness must be 'one' or 'two', got {sidedness!r}",
            field="sidedness")
    from scipy import stats
    level = alpha if sidedness == "one" else alpha / 2.0
    z_sum = float(stats.norm.ppf(1.0 - level) + stats.norm.ppf(power))
    events = ((1.0 + summary_hr) / (1.0 - summary_hr)) ** 2 * z_sum ** 2
    return 2 * math.ceil(events / (2.0 * event_prob_avg))


def ph_diagnostic(law: CompositeLaw, tau: float, grid_size: int = 1000
                  ) -> tuple[list[tuple[float, float]], float]:
    """HR*(t) on a grid over (0, tau] and the spread max - min.

    A zero spread means the composite hazard ratio is constant on the grid,
    i.e. proportional hazards hold for the composite.
    """
    if grid_size < 2:
        raise ValidationFailure(
            f"grid_size must be at least 2, got {grid_size}", field="grid_size")
    ts = tau * np.arange(1, grid_size + 1) / grid_size
    hrs = np.asarray(law.hr_star(ts), dtype=float)
    points = list(zip(ts.tolist(), hrs.tolist()))
    return points, float(hrs.max() - hrs.min())
