"""Design computations for a composite of two correlated binary endpoints.

Everything here is closed form: Fréchet feasibility bounds for the Pearson
correlation between the two event indicators, conversions between correlation
and conditional probabilities, composite event probability and treatment
effect, normal-approximation sample sizes for a two-proportion comparison,
and the asymptotic relative efficiency (ARE) of testing the composite versus
its most relevant component.

Conventions: index 1 is the relevant endpoint, index 2 the additional one;
superscript (0) is the control arm; effects are absolute risk reductions, so
treatment-arm probabilities are p_j - delta_j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import stats

from .errors import InfeasibleAssociation, UndetectableEffect, ValidationFailure

__all__ = [
    "BinaryMarginals", "RiskDifferenceEffect", "PearsonAssociation",
    "BinaryDesignInput", "correlation_bounds", "joint_prob_from_correlation",
    "conditionals_from_correlation", "correlation_from_conditional",
    "composite_probability", "composite_probabilities", "composite_effect",
    "sample_size_binary", "are_binary",
]

SIDEDNESS = ("one", "two")
VARIANCE_VARIANTS = ("pooled", "unpooled")


def _check_prob(value: float, name: str, lo: float = 0.0, hi: float = 1.0) -> None:
    if not (lo < value < hi):
        raise ValidationFailure(
            f"{name} must lie strictly between {lo} and {hi}, got {value}",
            field=name)


@dataclass(frozen=True)
class BinaryMarginals:
    """Control-arm event probabilities of the two components."""

    p1: float
    p2: float

    def __post_init__(self):
        _check_prob(self.p1, "p1")
        _check_prob(self.p2, "p2")


@dataclass(frozen=True)
class RiskDifferenceEffect:
    """Absolute risk reductions on each component (0 = no effect)."""

    delta1: float
    delta2: float

    def __post_init__(self):
        for name, value in (("delta1", self.delta1), ("delta2", self.delta2)):
            if not (0.0 <= value < 1.0):
                raise ValidationFailure(
                    f"{name} must lie in [0, 1), got {value}", field=name)


@dataclass(frozen=True)
class PearsonAssociation:
    """Pearson correlation between the two event indicators.

    Feasibility against the accompanying marginals is validated where both
    are known, at BinaryDesignInput assembly.
    """

    rho: float

    def __post_init__(self):
        if not (-1.0 <= self.rho <= 1.0):
            raise ValidationFailure(
                f"rho must lie in [-1, 1], got {self.rho}", field="rho")


@dataclass(frozen=True)
class BinaryDesignInput:
    """Full specification of a two-component binary design question."""

    marginals: BinaryMarginals
    effect: RiskDifferenceEffect
    association: PearsonAssociation
    alpha: float = 0.05
    power: float = 0.80
    sidedness: str = "one"
    variance_variant: str = "pooled"

    def __post_init__(self):
        _check_prob(self.alpha, "alpha", 0.0, 0.5)
        _check_prob(self.power, "power", 0.5, 1.0)
        if self.sidedness not in SIDEDNESS:
            raise ValidationFailure(
                f"sidedness must be one of {SIDEDNESS}, got {self.sidedness!r}",
                field="sidedness")
        if self.variance_variant not in VARIANCE_VARIANTS:
            raise ValidationFailure(
                f"variance_variant must be one of {VARIANCE_VARIANTS}, "
                f"got {self.variance_variant!r}", field="variance_variant")
        for j, (p, d) in enumerate(
                [(self.marginals.p1, self.effect.delta1),
                 (self.marginals.p2, self.effect.delta2)], start=1):
            if d > p:
                raise ValidationFailure(
                    f"delta{j} = {d} exceeds the control-arm probability "
                    f"p{j} = {p}", field=f"delta{j}")
        # Association must be feasible for the marginals of both arms.
        _require_feasible(self.marginals, self.association.rho, arm="control")
        treated = self.treatment_marginals()
        if treated is not None:
            _require_feasible(treated, self.association.rho, arm="treatment")

    def treatment_marginals(self) -> BinaryMarginals | None:
        """Treatment-arm marginals, or None when a margin degenerates to 0."""
        p1t = self.marginals.p1 - self.effect.delta1
        p2t = self.marginals.p2 - self.effect.delta2
        if p1t <= 0.0 or p2t <= 0.0:
            return None
        return BinaryMarginals(p1t, p2t)


def correlation_bounds(marginals: BinaryMarginals) -> tuple[float, float]:
    """Fréchet feasibility interval for the correlation of two indicators."""
    p1, p2 = marginals.p1, marginals.p2
    q1, q2 = 1.0 - p1, 1.0 - p2
    rho_max = min(math.sqrt(p1 * q2 / (q1 * p2)), math.sqrt(p2 * q1 / (q2 * p1)))
    rho_min = max(-math.sqrt(p1 * p2 / (q1 * q2)), -math.sqrt(q1 * q2 / (p1 * p2)))
    return rho_min, rho_max


def _require_feasible(marginals: BinaryMarginals, rho: float, arm: str = "control") -> None:
    rho_min, rho_max = correlation_bounds(marginals)
    if not (rho_min <= rho <= rho_max):
        suffix = "" if arm == "control" else f" in {arm} arm"
        raise InfeasibleAssociation(
            f"infeasible association{suffix}: rho = {rho} outside "
            f"[{rho_min:.6f}, {rho_max:.6f}] for p1 = {marginals.p1}, "
            f"p2 = {marginals.p2}",
            lower=rho_min, upper=rho_max, field="rho")


def joint_prob_from_correlation(marginals: BinaryMarginals, rho: float) -> float:
    """Probability that both events occur, given their correlation."""
    _require_feasible(marginals, rho)
    p1, p2 = marginals.p1, marginals.p2
    p12 = p1 * p2 + rho * math.sqrt(p1 * (1 - p1) * p2 * (1 - p2))
    # Pin to the exact Fréchet box; the closed form can overshoot by one ulp
    # at the boundary correlations.
    return min(max(p12, max(0.0, p1 + p2 - 1.0)), min(p1, p2))


def conditionals_from_correlation(marginals: BinaryMarginals,
                                  rho: float) -> tuple[float, float]:
    """Conditional probabilities P(eps1 | eps2) and P(eps2 | eps1)."""
    p12 = joint_prob_from_correlation(marginals, rho)
    return p12 / marginals.p2, p12 / marginals.p1


def correlation_from_conditional(marginals: BinaryMarginals,
                                 p_eps1_given_eps2: float) -> float:
    """Invert a conditional probability P(eps1 | eps2) to the correlation."""
    p1, p2 = marginals.p1, marginals.p2
    if not (0.0 <= p_eps1_given_eps2 <= 1.0):
        raise ValidationFailure(
            f"conditional probability must lie in [0, 1], got {p_eps1_given_eps2}",
            field="p_eps1_given_eps2")
    box_lo, box_hi = max(0.0, p1 + p2 - 1.0), min(p1, p2)
    cond_lo, cond_hi = box_lo / p2, box_hi / p2
    p12 = p_eps1_given_eps2 * p2
    if not (box_lo <= p12 <= box_hi):
        raise InfeasibleAssociation(
            f"infeasible conditional probability {p_eps1_given_eps2}: "
            f"P(eps1 | eps2) must lie in [{cond_lo:.6f}, {cond_hi:.6f}] "
            f"for p1 = {p1}, p2 = {p2}",
            lower=cond_lo, upper=cond_hi, field="p_eps1_given_eps2")
    return (p12 - p1 * p2) / math.sqrt(p1 * (1 - p1) * p2 * (1 - p2))


def composite_probability(marginals: BinaryMarginals, rho: float) -> float:
    """Probability that at least one of the two events occurs."""
    p12 = joint_prob_from_correlation(marginals, rho)
    return marginals.p1 + marginals.p2 - p12


def _arm_composite_prob(p1: float, p2: float, rho: float, arm: str) -> float:
    # Degenerate margins force independence in the closed form (the
    # correlation term vanishes), so no feasibility question arises.
    if p1 <= 0.0 or p2 <= 0.0:
        return max(p1, 0.0) + max(p2, 0.0) - max(p1, 0.0) * max(p2, 0.0)
    marg = BinaryMarginals(p1, p2)
    _require_feasible(marg, rho, arm=arm)
    return composite_probability(marg, rho)


def composite_probabilities(design: BinaryDesignInput) -> tuple[float, float]:
    """Composite event probability in the control and treatment arms."""
    m, e, rho = design.marginals, design.effect, design.association.rho
    return (_arm_composite_prob(m.p1, m.p2, rho, "control"),
            _arm_composite_prob(m.p1 - e.delta1, m.p2 - e.delta2, rho,
                                "treatment"))


def composite_effect(design: BinaryDesignInput) -> float:
    """Absolute risk reduction on the composite, same correlation both arms."""
    p_star_control, p_star_treat = composite_probabilities(design)
    return p_star_control - p_star_treat


def _critical_z(alpha: float, sidedness: str) -> float:
    level = alpha if sidedness == "one" else alpha / 2.0
    return float(stats.norm.ppf(1.0 - level))


def _per_arm_size(p_control: float, p_treatment: float, alpha: float,
                  power: float, sidedness: str, variance_variant: str) -> float:
    """Real-valued per-arm size from the normal-approximation formula."""
    delta = p_control - p_treatment
    if delta == 0.0:
        raise UndetectableEffect(
            "undetectable effect: control and treatment probabilities are equal")
    z_a = _critical_z(alpha, sidedness)
    z_b = float(stats.norm.ppf(power))
    var_c = p_control * (1.0 - p_control)
    var_t = p_treatment * (1.0 - p_treatment)
    if variance_variant == "pooled":
        p_bar = 0.5 * (p_control + p_treatment)
        numer = z_a * math.sqrt(2.0 * p_bar * (1.0 - p_bar)) + z_b * math.sqrt(var_c + var_t)
        return (numer / delta) ** 2
    return (z_a + z_b) ** 2 * (var_c + var_t) / delta ** 2


def sample_size_binary(p_control: float, p_treatment: float, alpha: float = 0.05,
                       power: float = 0.80, sidedness: str = "one",
                       variance_variant: str = "pooled") -> int:
    """Total sample size (both arms, 1:1) to compare two proportions."""
    _check_prob(p_control, "p_control")
    if not (0.0 <= p_treatment < 1.0):
        raise ValidationFailure(
            f"p_treatment must lie in [0, 1), got {p_treatment}",
            field="p_treatment")
    _check_prob(alpha, "alpha", 0.0, 0.5)
    _check_prob(power, "power", 0.5, 1.0)
    if sidedness not in SIDEDNESS:
        raise ValidationFailure(
            f"sidedness must be one of {SIDEDNESS}, got {sidedness!r}",
            field="sidedness")
    if variance_variant not in VARIANCE_VARIANTS:
        raise ValidationFailure(
            f"variance_variant must be one of {VARIANCE_VARIANTS}, "
            f"got {variance_variant!r}", field="variance_variant")
    n = _per_arm_size(p_control, p_treatment, alpha, power, sidedness,
                      variance_variant)
    return 2 * math.ceil(n)


def are_binary(design: BinaryDesignInput) -> float:
    """Asymptotic relative efficiency of the composite versus endpoint 1.

    Ratio of the real-valued (unrounded) sample sizes required by the
    relevant endpoint and by the composite at identical alpha, power,
    sidedness, and variance variant; values above 1 favor the composite.
    """
    m, e = design.marginals, design.effect
    if e.delta1 == 0.0:
        raise UndetectableEffect(
            "undetectable effect: delta1 = 0 gives no signal on the relevant "
            "endpoint", field="delta1")
    rho = design.association.rho
    n_relevant = _per_arm_size(m.p1, m.p1 - e.delta1, design.alpha, design.power,
                               design.sidedness, design.variance_variant)
    p_star_control = _arm_composite_prob(m.p1, m.p2, rho, "control")
    p_star_treat = _arm_composite_prob(m.p1 - e.delta1, m.p2 - e.delta2, rho,
                                       "treatment")
    n_composite = _per_arm_size(p_star_control, p_star_treat, design.alpha,
                                design.power, design.sidedness,
                                design.variance_variant)
    return n_relevant / n_composite
