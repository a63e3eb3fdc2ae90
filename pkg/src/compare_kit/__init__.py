"""Decision support for choosing between a composite and a single endpoint.

Given anticipated control-arm frequencies, treatment effects, and the
association between a relevant endpoint and an additional endpoint, the
package computes composite-event probabilities, composite treatment effects,
the asymptotic relative efficiency of testing the composite versus the
relevant endpoint alone, and the required sample sizes — for binary
endpoints and for time-to-event endpoints under a Gumbel copula. A Monte
Carlo module checks the analytic answers by simulating trials.
"""

from importlib.metadata import version as _dist_version

from .binary import (BinaryDesignInput, BinaryMarginals, PearsonAssociation,
                     RiskDifferenceEffect, are_binary, composite_effect,
                     composite_probabilities, composite_probability,
                     conditionals_from_correlation, correlation_bounds,
                     correlation_from_conditional, joint_prob_from_correlation,
                     sample_size_binary)
from .engine import (DesignReport, Scenario, SweepCell, SweepTable,
                     canonical_json, convert_association, evaluate,
                     parse_grid_axis, render_report, report_to_dict,
                     sample_size_summary, simulate, sweep, sweep_to_dict)
from .errors import (CompareKitError, InfeasibleAssociation, NumericFailure,
                     QuadratureFailure, RootConvergenceFailure,
                     RootNotBracketed, UndetectableEffect, ValidationFailure)
from .numerics import DEFAULT_TOL, ToleranceSpec, find_root, integrate_1d
from .simulation import (PowerEstimate, SimConfig, sample_correlated_binary,
                         sample_gumbel_times, sample_gumbel_uniforms,
                         simulate_power_binary, simulate_power_survival)
from .survival import (CompositeLaw, SurvivalScenario, WeibullMargin,
                       are_survival, build_composite_law, effective_hr,
                       freedman_sample_size, gumbel_cdf,
                       gumbel_theta_from_spearman, ph_diagnostic,
                       spearman_of_gumbel)

__version__ = _dist_version("artifact")

__all__ = [
    "__version__",
    # errors
    "CompareKitError", "ValidationFailure", "InfeasibleAssociation",
    "UndetectableEffect", "NumericFailure", "QuadratureFailure",
    "RootNotBracketed", "RootConvergenceFailure",
    # numerics
    "ToleranceSpec", "DEFAULT_TOL", "integrate_1d", "find_root",
    # binary endpoints
    "BinaryMarginals", "RiskDifferenceEffect", "PearsonAssociation",
    "BinaryDesignInput", "correlation_bounds", "joint_prob_from_correlation",
    "conditionals_from_correlation", "correlation_from_conditional",
    "composite_probability", "composite_probabilities", "composite_effect",
    "sample_size_binary", "are_binary",
    # time-to-event endpoints
    "WeibullMargin", "SurvivalScenario", "CompositeLaw", "gumbel_cdf",
    "spearman_of_gumbel", "gumbel_theta_from_spearman", "build_composite_law",
    "are_survival", "effective_hr", "freedman_sample_size", "ph_diagnostic",
    # simulation
    "SimConfig", "PowerEstimate", "sample_gumbel_uniforms",
    "sample_correlated_binary", "sample_gumbel_times",
    "simulate_power_binary", "simulate_power_survival",
    # scenarios and reports
    "Scenario", "DesignReport", "SweepCell", "SweepTable", "evaluate",
    "sweep", "parse_grid_axis", "convert_association", "sample_size_summary",
    "simulate", "render_report", "report_to_dict", "sweep_to_dict",
    "canonical_json",
]
