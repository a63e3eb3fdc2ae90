"""Acceptance gate: one test per operating requirement of the primary component.

Each test prints one pass/fail line for exactly one requirement. Tolerances
are part of the requirement and must not be loosened here.
"""

import json
import math
import pathlib
import subprocess
import sys

import numpy as np
import pytest
from scipy import stats

from compare_kit.binary import (BinaryDesignInput, BinaryMarginals,
                                PearsonAssociation, RiskDifferenceEffect,
                                are_binary, composite_probabilities,
                                correlation_bounds,
                                conditionals_from_correlation,
                                joint_prob_from_correlation)
from compare_kit.engine import Scenario, evaluate
from compare_kit.errors import CompareKitError
from compare_kit.simulation import (SimConfig, sample_correlated_binary,
                                    sample_gumbel_times,
                                    sample_gumbel_uniforms,
                                    simulate_power_binary,
                                    simulate_power_survival)
from compare_kit.survival import (SurvivalScenario, WeibullMargin,
                                  are_survival, build_composite_law,
                                  gumbel_cdf, gumbel_theta_from_spearman,
                                  ph_diagnostic)

TUXEDO = {
    "kind": "binary", "p1": 0.059, "p2": 0.032,
    "delta1": 0.0196, "delta2": 0.0098, "rho": 0.1,
}

OASIS6 = {
    "kind": "survival", "p1": 0.125, "p2": 0.05,
    "shape1": 1.0, "shape2": 1.0, "hr1": 0.83, "hr2": 0.66,
    "spearman_rho": 0.7, "tau": 1.0, "eps1_terminal": True,
}

# (shape1, shape2) -> (published ARE, published total sample size)
HAZARD_SHAPE_ROWS = [
    ((2.0, 0.5), 1.84, 3381),
    ((1.0, 0.5), 1.90, 3278),
    ((1.0, 1.0), 2.02, 3084),
    ((1.0, 2.0), 2.18, 2857),
    ((0.5, 2.0), 2.32, 2682),
]


def tuxedo(**overrides) -> Scenario:
    return Scenario.from_dict({**TUXEDO, **overrides})


def oasis6(**overrides) -> Scenario:
    return Scenario.from_dict({**OASIS6, **overrides})


def test_tuxedo_probabilities_effects_and_conditionals():
    """Published composite probabilities, effects, and conditionals, exact to
    their displayed rounding."""
    expected = {
        0.1: ("0.08", "2.7", "0.19", "0.10"),
        0.4: ("0.07", "2.3", "0.58", "0.31"),
        0.7: ("0.06", "2.0", "0.97", "0.52"),
    }
    mismatches = []
    for rho, (p_star_2dp, effect_pp_1dp, cond12_2dp, cond21_2dp) in \
            expected.items():
        report = evaluate(tuxedo(rho=rho))
        got = (f"{report.p_star_control:.2f}",
               f"{report.effect_star * 100.0:.1f}",
               f"{report.diagnostic('conditional_eps1_given_eps2'):.2f}",
               f"{report.diagnostic('conditional_eps2_given_eps1'):.2f}")
        want = (p_star_2dp, effect_pp_1dp, cond12_2dp, cond21_2dp)
        for name, g, w in zip(
                ("P(eps*|control)", "effect pp", "P(eps1|eps2)",
                 "P(eps2|eps1)"), got, want):
            if g != w:
                mismatches.append(f"rho={rho}: {name} displayed {g}, "
                                  f"published {w}")
    assert not mismatches, "; ".join(mismatches)


def test_tuxedo_sample_sizes_and_simulated_power():
    """Published total sample sizes within +/-5%, and 10^4-replication
    empirical power in [0.75, 0.85] at each published n."""
    published = {0.1: 2187, 0.4: 2561, 0.7: 3076}
    for rho, n_published in published.items():
        report = evaluate(tuxedo(rho=rho))
        assert abs(report.n_total_composite - n_published) <= \
            0.05 * n_published, (
            f"rho={rho}: n={report.n_total_composite} vs {n_published}")
        estimate = simulate_power_binary(
            tuxedo(rho=rho).payload, "composite", n_published,
            SimConfig(n_subjects=n_published, n_replications=10_000,
                      seed=20260815))
        assert 0.75 <= estimate.power_hat <= 0.85, (
            f"rho={rho}: power {estimate.power_hat} at n={n_published}")


def test_oasis6_are_values_across_hazard_shapes():
    """Published ARE for the five hazard-shape rows, within +/-0.05."""
    for (shape1, shape2), are_published, _ in HAZARD_SHAPE_ROWS:
        value = evaluate(oasis6(shape1=shape1, shape2=shape2)).are
        assert value == pytest.approx(are_published, abs=0.05), (
            f"shapes ({shape1}, {shape2}): ARE {value} vs {are_published}")


def test_oasis6_sample_sizes_and_logrank_power():
    """Published total sample sizes within +/-10%, and 5x10^3-replication
    logrank power in [0.72, 0.88] at each published n."""
    for (shape1, shape2), _, n_published in HAZARD_SHAPE_ROWS:
        scenario = oasis6(shape1=shape1, shape2=shape2)
        report = evaluate(scenario)
        assert abs(report.n_total_composite - n_published) <= \
            0.10 * n_published, (
            f"shapes ({shape1}, {shape2}): n={report.n_total_composite} "
            f"vs {n_published}")
        estimate = simulate_power_survival(
            scenario.payload, "composite", n_published,
            SimConfig(n_subjects=n_published, n_replications=5_000,
                      seed=20260815))
        assert 0.72 <= estimate.power_hat <= 0.88, (
            f"shapes ({shape1}, {shape2}): power {estimate.power_hat} "
            f"at n={n_published}")


def test_monotonicity_in_association_and_secondary_effect():
    """ARE strictly decreasing in association (16-point grids, both case
    studies); strictly increasing in the additional-endpoint effect at fixed
    association; composite probability and effect strictly decreasing in
    association."""
    def strictly_decreasing(values):
        return all(a > b for a, b in zip(values, values[1:]))

    binary_grid = np.linspace(0.0, 0.72, 16)
    binary_reports = [evaluate(tuxedo(rho=float(r))) for r in binary_grid]
    assert strictly_decreasing([r.are for r in binary_reports])
    assert strictly_decreasing([r.p_star_control for r in binary_reports])
    assert strictly_decreasing([r.effect_star for r in binary_reports])

    survival_grid = np.linspace(0.0, 0.9, 16)
    survival_ares = [evaluate(oasis6(spearman_rho=float(r))).are
                     for r in survival_grid]
    assert strictly_decreasing(survival_ares)

    delta2_grid = [0.002, 0.004, 0.0065, 0.0098, 0.013, 0.016]
    ares_by_delta2 = [evaluate(tuxedo(rho=0.4, delta2=d)).are
                      for d in delta2_grid]
    assert strictly_decreasing(ares_by_delta2[::-1])  # increasing in delta2

    hr2_grid = [0.60, 0.66, 0.75, 0.85, 0.92]
    ares_by_hr2 = [evaluate(oasis6(hr2=h)).are for h in hr2_grid]
    assert strictly_decreasing(ares_by_hr2)  # increasing in the hr2 effect


def _random_binary_design(rng) -> BinaryDesignInput:
    while True:
        p1 = float(rng.uniform(0.02, 0.5))
        p2 = float(rng.uniform(0.02, 0.5))
        marginals = BinaryMarginals(p1=p1, p2=p2)
        lo, hi = correlation_bounds(marginals)
        rho = float(lo + rng.uniform(0.1, 0.9) * (hi - lo))
        effect = RiskDifferenceEffect(
            delta1=float(p1 * rng.uniform(0.1, 0.6)),
            delta2=float(p2 * rng.uniform(0.1, 0.6)))
        try:
            return BinaryDesignInput(marginals=marginals, effect=effect,
                                     association=PearsonAssociation(rho))
        except CompareKitError:
            continue


def _random_survival_scenario(rng) -> SurvivalScenario:
    while True:
        try:
            return SurvivalScenario(
                margin1=WeibullMargin.from_event_prob(
                    float(rng.uniform(0.05, 0.5)),
                    float(rng.uniform(0.5, 2.5)), 1.0),
                margin2=WeibullMargin.from_event_prob(
                    float(rng.uniform(0.02, 0.25)),
                    float(rng.uniform(0.5, 2.5)), 1.0),
                hr1=float(rng.uniform(0.5, 0.95)),
                hr2=float(rng.uniform(0.5, 0.95)),
                spearman_rho=float(rng.uniform(0.0, 0.85)),
                tau=1.0, eps1_terminal=bool(rng.integers(0, 2)))
        except CompareKitError:
            continue


def test_monte_carlo_oracle_equivalence():
    """Closed-form joint/composite probabilities, composite effect, and
    composite survival match independent Monte Carlo (10^6 draws, fixed
    seeds) within 3 standard errors on 50 randomized feasible scenarios;
    the copula sampler's Kendall tau matches its closed form within 3 SE."""
    n = 1_000_000
    rng = np.random.default_rng(815)

    for index in range(25):
        design = _random_binary_design(rng)
        m, rho = design.marginals, design.association.rho
        p12 = joint_prob_from_correlation(m, rho)
        p_star_control, p_star_treat = composite_probabilities(design)
        delta_star = p_star_control - p_star_treat

        control = sample_correlated_binary(
            m, rho, SimConfig(n_subjects=n, seed=1000 + index))
        treated = sample_correlated_binary(
            design.treatment_marginals(), rho,
            SimConfig(n_subjects=n, seed=2000 + index))
        p12_hat = control[0, 0] / n
        p_star_control_hat = 1.0 - control[1, 1] / n
        p_star_treat_hat = 1.0 - treated[1, 1] / n
        delta_star_hat = p_star_control_hat - p_star_treat_hat

        se_p12 = math.sqrt(p12 * (1 - p12) / n)
        se_pc = math.sqrt(p_star_control * (1 - p_star_control) / n)
        se_pt = math.sqrt(p_star_treat * (1 - p_star_treat) / n)
        se_delta = math.hypot(se_pc, se_pt)
        assert abs(p12_hat - p12) <= 3 * se_p12, f"binary scenario {index}"
        assert abs(p_star_control_hat - p_star_control) <= 3 * se_pc, \
            f"binary scenario {index}"
        assert abs(delta_star_hat - delta_star) <= 3 * se_delta, \
            f"binary scenario {index}"

    for index in range(25):
        scenario = _random_survival_scenario(rng)
        law = build_composite_law(scenario)
        p_star = 1.0 - law.S_star(0, 1.0)
        times = sample_gumbel_times(
            scenario, 0, SimConfig(n_subjects=n, seed=3000 + index))
        p_hat = float(np.mean(times.composite_event))
        se = math.sqrt(p_star * (1 - p_star) / n)
        assert abs(p_hat - p_star) <= 3 * se, f"survival scenario {index}"

    theta = gumbel_theta_from_spearman(0.7)
    pairs = sample_gumbel_uniforms(theta, n, seed=4000)
    taus = [stats.kendalltau(chunk[:, 0], chunk[:, 1]).statistic
            for chunk in np.split(pairs, 20)]
    se_tau = float(np.std(taus, ddof=1) / math.sqrt(len(taus)))
    assert abs(np.mean(taus) - (1.0 - 1.0 / theta)) <= 3 * se_tau


def test_low_frequency_correlation_approximation():
    """For rare equal-frequency components (p <= 0.05), the correlation
    approximates the conditional probability to 5% relative error across
    rho in [0.1, 0.6]."""
    violations = []
    for p in (0.05, 0.03, 0.01):
        marginals = BinaryMarginals(p1=p, p2=p)
        for rho in np.arange(0.1, 0.65, 0.1):
            cond12, _ = conditionals_from_correlation(marginals, float(rho))
            if abs(rho - cond12) > 0.05 * cond12:
                violations.append(
                    f"p={p}, rho={rho:.1f}: |rho - P(eps1|eps2)| = "
                    f"{abs(rho - cond12):.4f} > {0.05 * cond12:.4f}")
    assert not violations, "; ".join(violations)


def test_degenerate_identity_suite():
    """Independence factorizes the joint probability; a duplicated component
    gives ARE = 1; the copula at theta = 1 is independence; the diagonal
    copula case gives constant composite hazard ratio and ARE = p*/p1."""
    marginals = BinaryMarginals(p1=0.3, p2=0.2)
    assert joint_prob_from_correlation(marginals, 0.0) == 0.3 * 0.2

    duplicated = BinaryMarginals(p1=0.3, p2=0.3)
    _, rho_max = correlation_bounds(duplicated)
    duplicate_design = BinaryDesignInput(
        marginals=duplicated, effect=RiskDifferenceEffect(0.05, 0.05),
        association=PearsonAssociation(rho_max))
    assert are_binary(duplicate_design) == pytest.approx(1.0, abs=1e-6)

    grid = np.linspace(0.0, 1.0, 21)
    u, v = np.meshgrid(grid, grid)
    assert np.allclose(gumbel_cdf(u, v, 1.0), u * v, atol=1e-12)

    diagonal = SurvivalScenario(
        margin1=WeibullMargin.from_event_prob(0.125, 1.0, 1.0),
        margin2=WeibullMargin.from_event_prob(0.125, 1.0, 1.0),
        hr1=0.83, hr2=0.83, spearman_rho=0.7, tau=1.0, eps1_terminal=False)
    law = build_composite_law(diagonal)
    _, nonprop = ph_diagnostic(law, 1.0)
    assert nonprop <= 1e-9
    p_star = 1.0 - law.S_star(0, 1.0)
    assert are_survival(diagonal) == pytest.approx(p_star / 0.125, rel=1e-6)


def test_primary_component_standalone():
    """The library and CLI answer every question above without any frontend
    build present."""
    base = [sys.executable, "-m", "compare_kit.cli"]
    scenarios = pathlib.Path(__file__).resolve().parents[1] / "scenarios"
    result = subprocess.run(
        base + ["evaluate", "--scenario", str(scenarios / "tuxedo.json")],
        capture_output=True, text=True, timeout=120)
    assert result.returncode == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["n_total_composite"] == 2230
    result = subprocess.run(
        base + ["samplesize", "--scenario", str(scenarios / "oasis6.json")],
        capture_output=True, text=True, timeout=120)
    assert result.returncode == 0, result.stderr
    assert json.loads(result.stdout)["recommendation"] == "composite"
    result = subprocess.run(
        base + ["bounds", "--p1", "0.059", "--p2", "0.032"],
        capture_output=True, text=True, timeout=120)
    assert result.returncode == 0
    assert json.loads(result.stdout)["rho_upper_bound"] == pytest.approx(
        0.7261161836404406, abs=1e-12)
