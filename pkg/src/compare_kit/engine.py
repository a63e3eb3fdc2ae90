"""Scenario assembly, evaluation, sweeps, decision rule, and report rendering.

A Scenario is the single JSON-serializable description shared by the library,
CLI, service, and UI: a ``kind`` discriminator (binary or survival) plus the
anticipated design quantities. Probabilities and effects are decimals
throughout; percentage points appear only in display rendering.

``evaluate`` produces a DesignReport; ``sweep`` evaluates a small rectangular
grid of variants and keeps infeasible cells with the violated bound named, so
a consumer can draw the feasible frontier.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import binary, simulation, survival
from .errors import (CompareKitError, InfeasibleAssociation,
                     UndetectableEffect, ValidationFailure)

__all__ = [
    "Scenario", "DesignReport", "SweepCell", "SweepTable",
    "evaluate", "sweep", "parse_grid_axis", "convert_association",
    "sample_size_summary", "simulate", "render_report",
    "report_to_dict", "sweep_to_dict", "canonical_json",
]

SHAPE_NAMES = {"constant": 1.0, "increasing": 2.0, "decreasing": 0.5}

_COMMON_KEYS = {"kind", "label", "alpha", "power", "sidedness"}
_BINARY_KEYS = _COMMON_KEYS | {"p1", "p2", "delta1", "delta2", "rho",
                               "variance_variant"}
_SURVIVAL_KEYS = _COMMON_KEYS | {"p1", "p2", "shape1", "shape2", "hr1", "hr2",
                                 "spearman_rho", "tau", "eps1_terminal"}
_BINARY_AXES = ("p1", "p2", "delta1", "delta2", "rho", "alpha", "power")
_SURVIVAL_AXES = ("p1", "p2", "shape1", "shape2", "hr1", "hr2",
                  "spearman_rho", "tau", "alpha", "power")


def _require_number(payload: dict, key: str, default: float | None = None) -> float:
    if key not in payload:
        if default is not None:
            return default
        raise ValidationFailure(f"missing required field {key!r}", field=key)
    value = payload[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationFailure(
            f"{key} must be a number, got {value!r}", field=key)
    return float(value)


def _shape_value(payload: dict, key: str) -> float:
    if key not in payload:
        raise ValidationFailure(f"missing required field {key!r}", field=key)
    value = payload[key]
    if isinstance(value, str):
        if value not in SHAPE_NAMES:
            raise ValidationFailure(
                f"{key} must be a positive number or one of "
                f"{sorted(SHAPE_NAMES)}, got {value!r}", field=key)
        return SHAPE_NAMES[value]
    return _require_number(payload, key)


@dataclass(frozen=True)
class Scenario:
    """Validated design question of either kind, ready to evaluate."""

    kind: str
    payload: binary.BinaryDesignInput | survival.SurvivalScenario
    label: str = ""
    alpha: float = 0.05
    power: float = 0.80
    sidedness: str = "one"

    def __post_init__(self):
        if self.kind == "binary":
            if not isinstance(self.payload, binary.BinaryDesignInput):
                raise ValidationFailure(
                    "binary scenarios require a BinaryDesignInput payload",
                    field="payload")
            # Test configuration lives on the payload; mirror it here so both
            # kinds expose the same attributes.
            object.__setattr__(self, "alpha", self.payload.alpha)
            object.__setattr__(self, "power", self.payload.power)
            object.__setattr__(self, "sidedness", self.payload.sidedness)
        elif self.kind == "survival":
            if not isinstance(self.payload, survival.SurvivalScenario):
                raise ValidationFailure(
                    "survival scenarios require a SurvivalScenario payload",
                    field="payload")
            if not (0.0 < self.alpha < 0.5):
                raise ValidationFailure(
                    f"alpha must lie strictly between 0 and 0.5, got {self.alpha}",
                    field="alpha")
            if not (0.5 < self.power < 1.0):
                raise ValidationFailure(
                    f"power must lie strictly between 0.5 and 1, got {self.power}",
                    field="power")
            if self.sidedness not in ("one", "two"):
                raise ValidationFailure(
                    f"sidedness must be 'one' or 'two', got {self.sidedness!r}",
                    field="sidedness")
        else:
            raise ValidationFailure(
                f"kind must be 'binary' or 'survival', got {self.kind!r}",
                field="kind")

    @classmethod
    def from_dict(cls, payload: dict) -> "Scenario":
        if not isinstance(payload, dict):
            raise ValidationFailure("scenario must be a JSON object")
        kind = payload.get("kind")
        if kind not in ("binary", "survival"):
            raise ValidationFailure(
                f"kind must be 'binary' or 'survival', got {kind!r}",
                field="kind")
        allowed = _BINARY_KEYS if kind == "binary" else _SURVIVAL_KEYS
        unknown = sorted(set(payload) - allowed)
        if unknown:
            raise ValidationFailure(
                f"unknown field(s) for a {kind} scenario: {', '.join(unknown)}",
                field=unknown[0])
        label = payload.get("label", "")
        if not isinstance(label, str):
            raise ValidationFailure("label must be a string", field="label")
        alpha = _require_number(payload, "alpha", 0.05)
        power = _require_number(payload, "power", 0.80)
        sidedness = payload.get("sidedness", "one")
        if kind == "binary":
            variant = payload.get("variance_variant", "pooled")
            design = binary.BinaryDesignInput(
                marginals=binary.BinaryMarginals(
                    p1=_require_number(payload, "p1"),
                    p2=_require_number(payload, "p2")),
                effect=binary.RiskDifferenceEffect(
                    delta1=_require_number(payload, "delta1"),
                    delta2=_require_number(payload, "delta2")),
                association=binary.PearsonAssociation(
                    rho=_require_number(payload, "rho")),
                alpha=alpha, power=power, sidedness=sidedness,
                variance_variant=variant)
            return cls(kind="binary", payload=design, label=label)
        tau = _require_number(payload, "tau", 1.0)
        terminal = payload.get("eps1_terminal", True)
        if not isinstance(terminal, bool):
            raise ValidationFailure(
                f"eps1_terminal must be a boolean, got {terminal!r}",
                field="eps1_terminal")
        scenario = survival.SurvivalScenario(
            margin1=survival.WeibullMargin.from_event_prob(
                _require_number(payload, "p1"),
                _shape_value(payload, "shape1"), tau),
            margin2=survival.WeibullMargin.from_event_prob(
                _require_number(payload, "p2"),
                _shape_value(payload, "shape2"), tau),
            hr1=_require_number(payload, "hr1"),
            hr2=_require_number(payload, "hr2"),
            spearman_rho=_require_number(payload, "spearman_rho"),
            tau=tau, eps1_terminal=terminal)
        return cls(kind="survival", payload=scenario, label=label,
                   alpha=alpha, power=power, sidedness=sidedness)

    def to_dict(self) -> dict:
        if self.kind == "binary":
            d = self.payload
            return {
                "kind": "binary", "label": self.label,
                "p1": d.marginals.p1, "p2": d.marginals.p2,
                "delta1": d.effect.delta1, "delta2": d.effect.delta2,
                "rho": d.association.rho,
                "alpha": d.alpha, "power": d.power,
                "sidedness": d.sidedness,
                "variance_variant": d.variance_variant,
            }
        s = self.payload
        return {
            "kind": "survival", "label": self.label,
            "p1": s.margin1.event_prob_tau, "p2": s.margin2.event_prob_tau,
            "shape1": s.margin1.shape, "shape2": s.margin2.shape,
            "hr1": s.hr1, "hr2": s.hr2,
            "spearman_rho": s.spearman_rho, "tau": s.tau,
            "eps1_terminal": s.eps1_terminal,
            "alpha": self.alpha, "power": self.power,
            "sidedness": self.sidedness,
        }


@dataclass(frozen=True)
class DesignReport:
    """Everything the decision rule and the report layer need for one scenario."""

    kind: str
    label: str
    p_star_control: float
    effect_star: float
    are: float
    recommendation: str
    n_total_composite: int
    n_total_relevant: int
    diagnostics: tuple[tuple[str, float], ...]

    def diagnostic(self, name: str) -> float:
        for key, value in self.diagnostics:
            if key == name:
                return value
        raise KeyError(name)


def _recommend(are: float) -> str:
    # Strict inequality: indifference at exactly 1 resolves to the simpler
    # relevant endpoint.
    return "composite" if are > 1.0 else "relevant"


def _evaluate_binary(scenario: Scenario) -> DesignReport:
    design = scenario.payload
    m, rho = design.marginals, design.association.rho
    rho_min, rho_max = binary.correlation_bounds(m)
    p12_control = binary.joint_prob_from_correlation(m, rho)
    cond12, cond21 = binary.conditionals_from_correlation(m, rho)
    p_star_control, p_star_treat = binary.composite_probabilities(design)
    effect_star = p_star_control - p_star_treat
    are = binary.are_binary(design)
    n_composite = binary.sample_size_binary(
        p_star_control, p_star_treat, design.alpha, design.power,
        design.sidedness, design.variance_variant)
    n_relevant = binary.sample_size_binary(
        m.p1, m.p1 - design.effect.delta1, design.alpha, design.power,
        design.sidedness, design.variance_variant)
    treated = design.treatment_marginals()
    p12_treat = (binary.joint_prob_from_correlation(treated, rho)
                 if treated is not None else 0.0)
    diagnostics = (
        ("rho", rho),
        ("rho_lower_bound", rho_min),
        ("rho_upper_bound", rho_max),
        ("joint_prob_control", p12_control),
        ("joint_prob_treatment", p12_treat),
        ("conditional_eps1_given_eps2", cond12),
        ("conditional_eps2_given_eps1", cond21),
        ("p_star_treatment", p_star_treat),
    )
    return DesignReport(
        kind="binary", label=scenario.label,
        p_star_control=p_star_control, effect_star=effect_star, are=are,
        recommendation=_recommend(are), n_total_composite=n_composite,
        n_total_relevant=n_relevant, diagnostics=diagnostics)


def _evaluate_survival(scenario: Scenario) -> DesignReport:
    sc = scenario.payload
    law = survival.build_composite_law(sc)
    are = survival.are_survival(sc, law=law)
    ghr = survival.effective_hr(law, sc.tau)
    p_star_control = law.event_prob(0)
    p_star_treat = law.event_prob(1)
    n_composite = survival.freedman_sample_size(
        ghr, 0.5 * (p_star_control + p_star_treat),
        scenario.alpha, scenario.power, scenario.sidedness)
    # Component margins obey proportional hazards by construction, so HR1
    # itself is the summary hazard ratio for the relevant-endpoint trial.
    p1_treat = sc.margin1.under_hr(sc.hr1).event_prob_tau
    n_relevant = survival.freedman_sample_size(
        sc.hr1, 0.5 * (sc.margin1.event_prob_tau + p1_treat),
        scenario.alpha, scenario.power, scenario.sidedness)
    _, nonprop = survival.ph_diagnostic(law, sc.tau, 1000)
    diagnostics = (
        ("spearman_rho", sc.spearman_rho),
        ("theta", law.theta),
        ("non_proportionality_index", nonprop),
        ("p_star_treatment", p_star_treat),
        ("latent_additional_event_prob",
         law.control_margins[1].event_prob_tau),
    )
    return DesignReport(
        kind="survival", label=scenario.label,
        p_star_control=p_star_control, effect_star=ghr, are=are,
        recommendation=_recommend(are), n_total_composite=n_composite,
        n_total_relevant=n_relevant, diagnostics=diagnostics)


def evaluate(scenario: Scenario) -> DesignReport:
    """Full design report for one scenario."""
    if scenario.kind == "binary":
        return _evaluate_binary(scenario)
    return _evaluate_survival(scenario)


@dataclass(frozen=True)
class SweepCell:
    """One grid point: its coordinates and either a report or a reason."""

    coords: tuple[tuple[str, object], ...]
    report: DesignReport | None = None
    infeasible_reason: str | None = None


@dataclass(frozen=True)
class SweepTable:
    """Rectangular grid of reports with table-level monotonicity metadata."""

    kind: str
    label: str
    axes: tuple[tuple[str, tuple[object, ...]], ...]
    cells: tuple[SweepCell, ...]
    metadata: tuple[tuple[str, object], ...] = ()


def parse_grid_axis(text: str) -> tuple[str, list]:
    """Parse ``name=start:stop:step`` (inclusive) or ``name=v1,v2,...``."""
    if "=" not in text:
        raise ValidationFailure(
            f"grid axis must look like name=start:stop:step or name=v1,v2,..., "
            f"got {text!r}", field="grid")
    name, _, spec = text.partition("=")
    name, spec = name.strip(), spec.strip()
    if not name or not spec:
        raise ValidationFailure(
            f"grid axis must name a parameter and give values, got {text!r}",
            field="grid")
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValidationFailure(
                f"range grid must be start:stop:step, got {spec!r}", field=name)
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ValidationFailure(
                f"range grid bounds must be numbers, got {spec!r}", field=name)
        if step <= 0 or stop < start:
            raise ValidationFailure(
                f"range grid requires step > 0 and stop >= start, got {spec!r}",
                field=name)
        values: list = []
        k = 0
        # Inclusive stop despite accumulated float error in start + k*step.
        eps = 1e-9 * max(1.0, abs(step))
        while True:
            v = start + k * step
            if v > stop + eps:
                break
            values.append(stop if abs(v - stop) <= eps else v)
            k += 1
        return name, values
    values = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            values.append(float(token))
        except ValueError:
            values.append(token)
    if not values:
        raise ValidationFailure(f"grid axis {name!r} has no values", field=name)
    return name, values


def _max_workers() -> int:
    raw = os.environ.get("COMPARE_KIT_THREADS", "")
    if raw:
        try:
            workers = int(raw)
        except ValueError:
            raise ValidationFailure(
                f"COMPARE_KIT_THREADS must be an integer, got {raw!r}")
        if workers < 1:
            raise ValidationFailure(
                f"COMPARE_KIT_THREADS must be positive, got {workers}")
        return workers
    return min(8, os.cpu_count() or 1)


def sweep(base: Scenario, grid: dict[str, list] | list[tuple[str, list]]) -> SweepTable:
    """Evaluate a 1- or 2-axis rectangular grid of variants of a scenario.

    Cells whose parameters violate a feasibility bound are kept, flagged with
    the violated constraint; only a grid with no feasible cell at all is an
    error.
    """
    axes = list(grid.items()) if isinstance(grid, dict) else list(grid)
    if base.kind == "survival":
        # Accept the generic association name for survival scenarios too.
        axes = [("spearman_rho" if name == "rho" else name, values)
                for name, values in axes]
    if not 1 <= len(axes) <= 2:
        raise ValidationFailure(
            f"sweep supports 1 or 2 grid axes, got {len(axes)}", field="grid")
    if len(axes) == 2 and axes[0][0] == axes[1][0]:
        raise ValidationFailure(
            f"duplicate sweep axis {axes[0][0]!r}", field=axes[0][0])
    allowed = _BINARY_AXES if base.kind == "binary" else _SURVIVAL_AXES
    for name, values in axes:
        if name not in allowed:
            raise ValidationFailure(
                f"unknown sweep axis {name!r} for a {base.kind} scenario; "
                f"expected one of {allowed}", field=name)
        if not values:
            raise ValidationFailure(f"grid axis {name!r} has no values",
                                    field=name)
    base_dict = base.to_dict()
    combos: list[tuple[tuple[str, object], ...]] = [()]
    for name, values in axes:
        combos = [c + ((name, v),) for c in combos for v in values]

    def run_cell(coords: tuple[tuple[str, object], ...]) -> SweepCell:
        payload = dict(base_dict)
        payload.update(coords)
        try:
            report = evaluate(Scenario.from_dict(payload))
        except (ValidationFailure, InfeasibleAssociation,
                UndetectableEffect) as exc:
            return SweepCell(coords=coords, infeasible_reason=exc.message)
        return SweepCell(coords=coords, report=report)

    workers = _max_workers()
    if workers > 1 and len(combos) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = tuple(pool.map(run_cell, combos))
    else:
        cells = tuple(run_cell(c) for c in combos)
    if all(cell.report is None for cell in cells):
        raise ValidationFailure(
            "every cell of the sweep is infeasible; first reason: "
            f"{cells[0].infeasible_reason}", field="grid")
    metadata = _sweep_metadata(base.kind, axes, cells)
    return SweepTable(kind=base.kind, label=base.label,
                      axes=tuple((n, tuple(v)) for n, v in axes),
                      cells=cells, metadata=metadata)


def _sweep_metadata(kind: str, axes: list, cells: tuple[SweepCell, ...]
                    ) -> tuple[tuple[str, object], ...]:
    assoc = "rho" if kind == "binary" else "spearman_rho"
    names = [n for n, _ in axes]
    if assoc not in names:
        return ()
    other = [n for n in names if n != assoc]
    groups: dict = {}
    for cell in cells:
        if cell.report is None:
            continue
        coords = dict(cell.coords)
        key = coords[other[0]] if other else None
        groups.setdefault(key, []).append((coords[assoc], cell.report.are))
    decreasing = True
    for series in groups.values():
        series.sort(key=lambda pair: pair[0])
        ares = [a for _, a in series]
        if any(b >= a for a, b in zip(ares, ares[1:])):
            decreasing = False
    return (("are_decreasing_in_association", decreasing),)


def convert_association(payload: dict) -> dict:
    """Convert between association measures.

    Binary (keys p1, p2 plus one of rho / conditional_eps1_given_eps2):
    returns the correlation, joint and conditional probabilities, and the
    feasibility bounds. Survival (one of spearman_rho / theta): returns the
    copula parameter, Spearman correlation, and Kendall tau.
    """
    if not isinstance(payload, dict):
        raise ValidationFailure("payload must be a JSON object")
    if "p1" in payload or "p2" in payload:
        marginals = binary.BinaryMarginals(
            p1=_require_number(payload, "p1"),
            p2=_require_number(payload, "p2"))
        has_rho = "rho" in payload
        has_cond = "conditional_eps1_given_eps2" in payload
        if has_rho == has_cond:
            raise ValidationFailure(
                "provide exactly one of rho or conditional_eps1_given_eps2",
                field="rho")
        if has_rho:
            rho = _require_number(payload, "rho")
        else:
            rho = binary.correlation_from_conditional(
                marginals,
                _require_number(payload, "conditional_eps1_given_eps2"))
        lower, upper = binary.correlation_bounds(marginals)
        joint = binary.joint_prob_from_correlation(marginals, rho)
        cond12, cond21 = binary.conditionals_from_correlation(marginals, rho)
        return {
            "kind": "binary", "rho": rho, "joint_prob": joint,
            "conditional_eps1_given_eps2": cond12,
            "conditional_eps2_given_eps1": cond21,
            "rho_lower_bound": lower, "rho_upper_bound": upper,
        }
    has_spearman = "spearman_rho" in payload
    has_theta = "theta" in payload
    if has_spearman == has_theta:
        raise ValidationFailure(
            "provide p1/p2 with an association, or exactly one of "
            "spearman_rho / theta", field="spearman_rho")
    if has_spearman:
        rho_s = _require_number(payload, "spearman_rho")
        theta = survival.gumbel_theta_from_spearman(rho_s)
    else:
        theta = _require_number(payload, "theta")
        rho_s = survival.spearman_of_gumbel(theta)
    return {
        "kind": "survival", "spearman_rho": rho_s, "theta": theta,
        "kendall_tau": 1.0 - 1.0 / theta,
    }


def sample_size_summary(scenario: Scenario) -> dict:
    """Sample sizes of the composite and relevant designs for one scenario."""
    report = evaluate(scenario)
    return {
        "kind": report.kind,
        "n_total_composite": report.n_total_composite,
        "n_total_relevant": report.n_total_relevant,
        "p_star_control": report.p_star_control,
        "effect_star": report.effect_star,
        "are": report.are,
        "recommendation": report.recommendation,
    }


def simulate(scenario: Scenario, endpoint: str, n_total: int,
             n_replications: int, seed: int) -> dict:
    """Empirical power of the configured test at a given total sample size."""
    config = simulation.SimConfig(n_subjects=n_total,
                                  n_replications=n_replications, seed=seed)
    if scenario.kind == "binary":
        estimate = simulation.simulate_power_binary(
            scenario.payload, endpoint, n_total, config)
    else:
        estimate = simulation.simulate_power_survival(
            scenario.payload, endpoint, n_total, config,
            alpha=scenario.alpha, sidedness=scenario.sidedness)
    return {
        "endpoint": endpoint,
        "n_total": n_total,
        "power_hat": estimate.power_hat,
        "mc_standard_error": estimate.mc_standard_error,
        "n_replications": estimate.n_replications,
        "seed": seed,
    }


def report_to_dict(report: DesignReport) -> dict:
    return {
        "kind": report.kind,
        "label": report.label,
        "p_star_control": report.p_star_control,
        "effect_star": report.effect_star,
        "are": report.are,
        "recommendation": report.recommendation,
        "n_total_composite": report.n_total_composite,
        "n_total_relevant": report.n_total_relevant,
        "diagnostics": dict(report.diagnostics),
    }


def sweep_to_dict(table: SweepTable) -> dict:
    cells = []
    for cell in table.cells:
        entry: dict = {"coords": dict(cell.coords)}
        if cell.report is not None:
            entry["report"] = report_to_dict(cell.report)
        else:
            entry["infeasible_reason"] = cell.infeasible_reason
        cells.append(entry)
    return {
        "kind": table.kind,
        "label": table.label,
        "axes": [{"name": name, "values": list(values)}
                 for name, values in table.axes],
        "cells": cells,
        "metadata": dict(table.metadata),
    }


def canonical_json(payload) -> str:
    """Stable full-precision JSON used verbatim by both CLI and service."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"),
                      allow_nan=False)


_ASSOCIATION_BINS = ((0.25, "Weak"), (0.55, "Moderate"), (math.inf, "Strong"))


def _association_label(rho: float) -> str:
    for bound, label in _ASSOCIATION_BINS:
        if rho < bound:
            return label
    return "Strong"


def _fmt(value: float, places: int) -> str:
    return f"{value:.{places}f}"


def _binary_row(rho: float, report: DesignReport) -> list[str]:
    return [
        _association_label(rho),
        _fmt(rho, 2),
        _fmt(report.diagnostic("conditional_eps1_given_eps2"), 2),
        _fmt(report.diagnostic("conditional_eps2_given_eps1"), 2),
        _fmt(report.p_star_control, 2),
        _fmt(report.effect_star * 100.0, 1),
        str(report.n_total_composite),
    ]


_BINARY_HEADER = ["Association", "Correlation", "P(eps1 given eps2)",
                  "P(eps2 given eps1)", "Composite probability",
                  "Composite effect (pp)", "Total Sample Size"]


def _survival_row(rho_s: float, report: DesignReport) -> list[str]:
    return [
        _association_label(rho_s),
        _fmt(rho_s, 2),
        _fmt(report.p_star_control, 2),
        _fmt(report.effect_star, 2),
        _fmt(report.are, 2),
        report.recommendation,
        str(report.n_total_composite),
    ]


_SURVIVAL_HEADER = ["Association", "Correlation", "Composite probability",
                    "Effective hazard ratio", "ARE", "Recommendation",
                    "Total Sample Size"]


def _markdown_table(header: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |",
             "| " + " | ".join("---" for _ in header) + " |"]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _report_rows(obj: DesignReport | SweepTable
                 ) -> list[tuple[dict, DesignReport | None, str | None]]:
    if isinstance(obj, DesignReport):
        return [({}, obj, None)]
    return [(dict(cell.coords), cell.report, cell.infeasible_reason)
            for cell in obj.cells]


def _render_markdown(obj: DesignReport | SweepTable) -> str:
    kind = obj.kind
    assoc_key = "rho" if kind == "binary" else "spearman_rho"
    rows = _report_rows(obj)
    single_axis = isinstance(obj, DesignReport) or (
        len(obj.axes) == 1 and obj.axes[0][0] == assoc_key)
    if single_axis:
        header = _BINARY_HEADER if kind == "binary" else _SURVIVAL_HEADER
        out_rows = []
        for coords, report, reason in rows:
            if report is None:
                out_rows.append([_fmt(coords[assoc_key], 2)
                                 if assoc_key in coords else "?"] +
                                [f"infeasible: {reason}"] +
                                [""] * (len(header) - 2))
                continue
            rho = coords.get(assoc_key, report.diagnostic(assoc_key))
            out_rows.append(_binary_row(rho, report) if kind == "binary"
                            else _survival_row(rho, report))
        return _markdown_table(header, out_rows)
    axis_names = [name for name, _ in obj.axes]
    header = axis_names + ["Composite probability",
                           "Composite effect (pp)" if kind == "binary"
                           else "Effective hazard ratio",
                           "ARE", "Recommendation", "Total Sample Size",
                           "Note"]
    out_rows = []
    for coords, report, reason in rows:
        prefix = [str(coords[n]) for n in axis_names]
        if report is None:
            out_rows.append(prefix + ["", "", "", "", "",
                                      f"infeasible: {reason}"])
        else:
            effect = (_fmt(report.effect_star * 100.0, 1) if kind == "binary"
                      else _fmt(report.effect_star, 2))
            out_rows.append(prefix + [
                _fmt(report.p_star_control, 2), effect,
                _fmt(report.are, 2), report.recommendation,
                str(report.n_total_composite), ""])
    return _markdown_table(header, out_rows)


def _render_csv(obj: DesignReport | SweepTable) -> str:
    import csv
    import io

    rows = _report_rows(obj)
    axis_names = ([] if isinstance(obj, DesignReport)
                  else [name for name, _ in obj.axes])
    any_diagnostics = any(r is not None and r.diagnostics for _, r, _ in rows)
    any_infeasible = any(r is None for _, r, _ in rows)
    header = axis_names + ["label", "p_star_control", "effect_star", "are",
                           "recommendation", "n_total_composite",
                           "n_total_relevant"]
    if any_diagnostics:
        header.append("diagnostics")
    if any_infeasible:
        header.append("infeasible_reason")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for coords, report, reason in rows:
        prefix = [coords[n] for n in axis_names]
        if report is None:
            row = prefix + [obj.label, "", "", "", "", "", ""]
            if any_diagnostics:
                row.append("")
            row.append(reason)
        else:
            row = prefix + [report.label, repr(report.p_star_control),
                            repr(report.effect_star), repr(report.are),
                            report.recommendation, report.n_total_composite,
                            report.n_total_relevant]
            if any_diagnostics:
                row.append(";".join(f"{k}={v!r}" for k, v in report.diagnostics))
            if any_infeasible:
                row.append("")
        writer.writerow(row)
    return buffer.getvalue()


def render_report(obj: DesignReport | SweepTable, format: str = "json") -> str:
    """Render a report or sweep as json (full precision), csv, or markdown."""
    if format == "json":
        payload = (report_to_dict(obj) if isinstance(obj, DesignReport)
                   else sweep_to_dict(obj))
        return canonical_json(payload)
    if format == "csv":
        return _render_csv(obj)
    if format == "markdown":
        return _render_markdown(obj)
    raise ValidationFailure(
        f"format must be json, csv, or markdown, got {format!r}",
        field="format")
