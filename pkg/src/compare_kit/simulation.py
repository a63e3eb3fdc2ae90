"""Monte Carlo oracles for the closed-form design machinery.

Samplers for correlated Bernoulli pairs and Gumbel-copula event-time pairs,
plus empirical power estimators for the binary two-proportion test and the
logrank test. These are intentionally independent realizations of the models
the analytic modules integrate, so agreement between the two is evidence for
both.

Reproducibility: every replication r of a run seeded with s draws from a
counter-based Philox generator keyed (s, r), so results are bit-identical for
identical configurations and independent across replications by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .binary import BinaryDesignInput, BinaryMarginals, \
    composite_probabilities, joint_prob_from_correlation
from .errors import ValidationFailure
from .survival import CompositeLaw, SurvivalScenario, WeibullMargin, \
    build_composite_law

__all__ = [
    "SimConfig", "PowerEstimate", "SampledTimes", "sample_gumbel_uniforms",
    "sample_correlated_binary", "sample_gumbel_times",
    "simulate_power_binary", "simulate_power_survival",
]

_MAX_SEED = 2 ** 64


@dataclass(frozen=True)
class SimConfig:
    """Size and seeding of a simulation run; allocation is fixed 1:1."""

    n_subjects: int
    n_replications: int = 1
    seed: int = 0
    arm_allocation: str = "1:1"

    def __post_init__(self):
        if self.n_subjects < 1:
            raise ValidationFailure(
                f"n_subjects must be at least 1, got {self.n_subjects}",
                field="n_subjects")
        if self.n_replications < 1:
            raise ValidationFailure(
                f"n_replications must be at least 1, got {self.n_replications}",
                field="n_replications")
        if not (0 <= self.seed < _MAX_SEED):
            raise ValidationFailure(
                f"seed must be an unsigned 64-bit integer, got {self.seed}",
                field="seed")
        if self.arm_allocation != "1:1":
            raise ValidationFailure(
                f"only 1:1 allocation is supported, got {self.arm_allocation!r}",
                field="arm_allocation")


@dataclass(frozen=True)
class PowerEstimate:
    """Empirical rejection fraction with its binomial standard error."""

    power_hat: float
    mc_standard_error: float
    n_replications: int

    def __post_init__(self):
        if not (0.0 <= self.power_hat <= 1.0):
            raise ValidationFailure(
                f"power_hat must lie in [0, 1], got {self.power_hat}",
                field="power_hat")
        expected = math.sqrt(self.power_hat * (1.0 - self.power_hat)
                             / self.n_replications)
        if abs(self.mc_standard_error - expected) > 1e-12:
            raise ValidationFailure(
                "mc_standard_error must equal sqrt(p(1-p)/n_replications)",
                field="mc_standard_error")

    @classmethod
    def from_rejections(cls, n_rejections: int,
                        n_replications: int) -> "PowerEstimate":
        p = n_rejections / n_replications
        return cls(power_hat=p,
                   mc_standard_error=math.sqrt(p * (1.0 - p) / n_replications),
                   n_replications=n_replications)


def _rng(seed: int, stream: int) -> np.random.Generator:
    key = np.array([seed, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _stable_positive(rng: np.random.Generator, alpha: float,
                     size: int) -> np.ndarray:
    # Chambers-Mallows-Stuck sampler for the positive stable law with index
    # alpha in (0, 1]; the Laplace transform is exp(-s^alpha).
    w = rng.uniform(0.0, np.pi, size)
    e = rng.standard_exponential(size)
    return np.sin(alpha * w) / np.sin(w) ** (1.0 / alpha) \
        * (np.sin((1.0 - alpha) * w) / e) ** ((1.0 - alpha) / alpha)


def sample_gumbel_uniforms(theta: float, n: int, seed: int = 0,
                           stream: int = 0,
                           rng: np.random.Generator | None = None) -> np.ndarray:
    """(n, 2) uniform pairs from the Gumbel copula with parameter theta.

    Uses the positive-stable frailty construction: for V stable with index
    1/theta and independent unit exponentials E_j, the pair
    U_j = exp(-(E_j / V)^(1/theta)) has copula C_theta.
    """
    if theta < 1.0:
        raise ValidationFailure(
            f"Gumbel parameter theta must be >= 1, got {theta}", field="theta")
    if rng is None:
        rng = _rng(seed, stream)
    if theta == 1.0:
        return rng.random((n, 2))
    v = _stable_positive(rng, 1.0 / theta, n)
    e = rng.standard_exponential((n, 2))
    return np.exp(-(e / v[:, None]) ** (1.0 / theta))


def sample_correlated_binary(marginals: BinaryMarginals, rho: float,
                             config: SimConfig) -> np.ndarray:
    """2x2 outcome counts [[n11, n10], [n01, n00]] from the joint Bernoulli law."""
    p11 = joint_prob_from_correlation(marginals, rho)
    p10 = marginals.p1 - p11
    p01 = marginals.p2 - p11
    p00 = 1.0 - p11 - p10 - p01
    rng = _rng(config.seed, 0)
    counts = rng.multinomial(config.n_subjects, [p11, p10, p01, p00])
    return counts.reshape(2, 2)


@dataclass(frozen=True)
class SampledTimes:
    """Component and composite event times for one simulated arm.

    ``first_cause`` is 1 where the relevant component occurs first and 2
    otherwise; ``eps2_observable`` is False where the additional event is
    censored by follow-up or, under a terminal relevant endpoint, preempted
    by it.
    """

    t1: np.ndarray
    t2: np.ndarray
    composite_time: np.ndarray
    composite_event: np.ndarray
    observed_time: np.ndarray
    first_cause: np.ndarray
    eps2_observable: np.ndarray


def _inverse_cdf(margin: WeibullMargin, u: np.ndarray) -> np.ndarray:
    return margin.scale * (-np.log1p(-u)) ** (1.0 / margin.shape)


def _inverse_survival(margin: WeibullMargin, u: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return margin.scale * (-np.log(u)) ** (1.0 / margin.shape)


def _sample_arm_times(law: CompositeLaw, arm, tau: float, n: int,
                      rng: np.random.Generator) -> SampledTimes:
    uniforms = sample_gumbel_uniforms(law.theta, n, rng=rng)
    m1, m2 = law.margins(arm)
    if law.eps1_terminal:
        # The copula couples the component-time CDFs.
        t1 = _inverse_cdf(m1, uniforms[:, 0])
        t2 = _inverse_cdf(m2, uniforms[:, 1])
    else:
        # The copula couples the component-time survival functions.
        t1 = _inverse_survival(m1, uniforms[:, 0])
        t2 = _inverse_survival(m2, uniforms[:, 1])
    composite_time = np.minimum(t1, t2)
    composite_event = composite_time <= tau
    observed_time = np.minimum(composite_time, tau)
    first_cause = np.where(t1 <= t2, 1, 2)
    eps2_observable = t2 <= tau
    if law.eps1_terminal:
        eps2_observable &= t2 <= t1
    return SampledTimes(t1=t1, t2=t2, composite_time=composite_time,
                        composite_event=composite_event,
                        observed_time=observed_time, first_cause=first_cause,
                        eps2_observable=eps2_observable)


def sample_gumbel_times(scenario: SurvivalScenario, arm,
                        config: SimConfig) -> SampledTimes:
    """Event-time pairs for one arm of a scenario, censored at tau."""
    law = build_composite_law(scenario)
    rng = _rng(config.seed, 0)
    return _sample_arm_times(law, arm, scenario.tau, config.n_subjects, rng)


def simulate_power_binary(design: BinaryDesignInput, endpoint: str,
                          n_total: int, config: SimConfig) -> PowerEstimate:
    """Empirical power of the configured two-proportion test.

    ``endpoint`` selects what is analyzed: the relevant component alone or
    the composite of both.
    """
    if endpoint not in ("relevant", "composite"):
        raise ValidationFailure(
            f"endpoint must be 'relevant' or 'composite', got {endpoint!r}",
            field="endpoint")
    if n_total < 2:
        raise ValidationFailure(
            f"n_total must be at least 2, got {n_total}", field="n_total")
    n_arm = n_total // 2
    if endpoint == "relevant":
        p_control = design.marginals.p1
        p_treat = design.marginals.p1 - design.effect.delta1
    else:
        p_control, p_treat = composite_probabilities(design)
    z_crit = float(stats.norm.ppf(
        1.0 - (design.alpha if design.sidedness == "one" else design.alpha / 2.0)))
    rejections = 0
    for rep in range(config.n_replications):
        rng = _rng(config.seed, rep)
        xc = int(rng.binomial(n_arm, p_control))
        xt = int(rng.binomial(n_arm, p_treat))
        pc, pt = xc / n_arm, xt / n_arm
        if design.variance_variant == "pooled":
            p_bar = 0.5 * (pc + pt)
            se2 = 2.0 * p_bar * (1.0 - p_bar) / n_arm
        else:
            se2 = (pc * (1.0 - pc) + pt * (1.0 - pt)) / n_arm
        if se2 <= 0.0:
            continue
        z = (pc - pt) / math.sqrt(se2)
        if (z >= z_crit) if design.sidedness == "one" else (abs(z) >= z_crit):
            rejections += 1
    return PowerEstimate.from_rejections(rejections, config.n_replications)


def _logrank_z(time: np.ndarray, event: np.ndarray,
               is_treat: np.ndarray) -> float:
    """Logrank statistic; negative values favor the treatment group."""
    order = np.argsort(time, kind="stable")
    ev = event[order]
    g = is_treat[order].astype(float)
    n = time.size
    at_risk = np.arange(n, 0, -1, dtype=float)
    treat_at_risk = np.cumsum(g[::-1])[::-1]
    expected = treat_at_risk / at_risk
    variance = treat_at_risk * (at_risk - treat_at_risk) / at_risk ** 2
    u = float(np.sum((g - expected)[ev]))
    var = float(np.sum(variance[ev]))
    if var <= 0.0:
        return 0.0
    return u / math.sqrt(var)


def simulate_power_survival(scenario: SurvivalScenario, endpoint: str,
                            n_total: int, config: SimConfig,
                            alpha: float = 0.05,
                            sidedness: str = "one") -> PowerEstimate:
    """Empirical power of the logrank test on tau-censored simulated trials."""
    if endpoint not in ("relevant", "composite"):
        raise ValidationFailure(
            f"endpoint must be 'relevant' or 'composite', got {endpoint!r}",
            field="endpoint")
    if n_total < 2:
        raise ValidationFailure(
            f"n_total must be at least 2, got {n_total}", field="n_total")
    if sidedness not in ("one", "two"):
        raise ValidationFailure(
            f"sidedness must be 'one' or 'two', got {sidedness!r}",
            field="sidedness")
    law = build_composite_law(scenario)
    n_arm = n_total // 2
    tau = scenario.tau
    is_treat = np.concatenate([np.zeros(n_arm, bool), np.ones(n_arm, bool)])
    z_crit = float(stats.norm.ppf(
        1.0 - (alpha if sidedness == "one" else alpha / 2.0)))
    rejections = 0
    for rep in range(config.n_replications):
        rng = _rng(config.seed, rep)
        control = _sample_arm_times(law, 0, tau, n_arm, rng)
        treat = _sample_arm_times(law, 1, tau, n_arm, rng)
        if endpoint == "composite":
            time = np.concatenate([control.observed_time, treat.observed_time])
            event = np.concatenate([control.composite_event,
                                    treat.composite_event])
        else:
            t1 = np.concatenate([control.t1, treat.t1])
            time = np.minimum(t1, tau)
            event = t1 <= tau
        z = _logrank_z(time, event, is_treat)
        if (z <= -z_crit) if sidedness == "one" else (abs(z) >= z_crit):
            rejections += 1
    return PowerEstimate.from_rejections(rejections, config.n_replications)
