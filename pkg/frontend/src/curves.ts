/**
 * Pure view-model builders: turn API responses into the structures the DOM
 * layer renders. No statistics happen here — points, banner text, and panel
 * values are read straight off the response objects.
 */

import { DesignReport, Recommendation, SweepCell, SweepTable } from "./types.js";

export interface CurvePoint {
  x: number;
  are: number;
  recommendation: Recommendation;
  nTotalComposite: number;
}

export interface CurveSeries {
  /** Value of the secondary-effect axis this line belongs to, if any. */
  level: number | string | null;
  label: string;
  /** One entry per association grid value; null marks an infeasible cell. */
  points: Array<CurvePoint | null>;
}

export interface InfeasibleCell {
  x: number;
  level: number | string | null;
  reason: string;
}

export interface CurveModel {
  associationName: string;
  levelName: string | null;
  xValues: number[];
  series: CurveSeries[];
  infeasible: InfeasibleCell[];
}

const ASSOCIATION_AXES = new Set(["rho", "spearman_rho"]);

/**
 * Group sweep cells into one line per secondary-effect level, indexed along
 * the association axis. Infeasible cells become gaps, so the chart shows the
 * feasible frontier instead of interpolating across it.
 */
export function buildCurveModel(table: SweepTable): CurveModel {
  const assocAxis =
    table.axes.find((axis) => ASSOCIATION_AXES.has(axis.name)) ?? table.axes[0];
  if (!assocAxis) {
    throw new Error("sweep response has no axes");
  }
  const levelAxis = table.axes.find((axis) => axis.name !== assocAxis.name);
  const xValues = assocAxis.values.map((value) => Number(value));
  const levels: Array<number | string | null> = levelAxis
    ? [...levelAxis.values]
    : [null];

  const cellIndex = new Map<string, SweepCell>();
  for (const cell of table.cells) {
    const x = cell.coords[assocAxis.name];
    const level = levelAxis ? cell.coords[levelAxis.name] : null;
    cellIndex.set(`${String(x)}|${String(level)}`, cell);
  }

  const infeasible: InfeasibleCell[] = [];
  const series: CurveSeries[] = levels.map((level) => {
    const points = xValues.map((x, index) => {
      const key = `${String(assocAxis.values[index])}|${String(level)}`;
      const cell = cellIndex.get(key);
      if (!cell || !cell.report) {
        infeasible.push({
          x,
          level,
          reason: cell?.infeasible_reason ?? "missing cell",
        });
        return null;
      }
      return {
        x,
        are: cell.report.are,
        recommendation: cell.report.recommendation,
        nTotalComposite: cell.report.n_total_composite,
      };
    });
    const label =
      level === null
        ? "ARE"
        : `${levelAxis ? levelAxis.name : ""} = ${String(level)}`;
    return { level, label, points };
  });

  return {
    associationName: assocAxis.name,
    levelName: levelAxis ? levelAxis.name : null,
    xValues,
    series,
    infeasible,
  };
}

export interface Banner {
  /** Verbatim copy of the API's recommendation field. */
  recommendation: Recommendation;
  headline: string;
  detail: string;
  are: number;
}

/**
 * The recommendation banner derives exclusively from the report object the
 * API returned; the same object feeds the ARE readout, so banner and chart
 * can never disagree.
 */
export function buildBanner(report: DesignReport): Banner {
  const headline =
    report.recommendation === "composite"
      ? "Composite endpoint recommended"
      : "Relevant endpoint recommended";
  const detail =
    report.recommendation === "composite"
      ? `ARE ${report.are.toFixed(3)} > 1: the composite needs ${report.n_total_composite} subjects versus ${report.n_total_relevant} for the relevant endpoint alone.`
      : `ARE ${report.are.toFixed(3)} ≤ 1: the relevant endpoint alone needs ${report.n_total_relevant} subjects versus ${report.n_total_composite} for the composite.`;
  return {
    recommendation: report.recommendation,
    headline,
    detail,
    are: report.are,
  };
}

export interface PanelRow {
  label: string;
  value: string;
  title?: string;
}

/** Sample-size panel rows for the current report. */
export function buildSampleSizePanel(report: DesignReport): PanelRow[] {
  return [
    {
      label: "Composite endpoint trial",
      value: `${report.n_total_composite} subjects`,
    },
    {
      label: "Relevant endpoint trial",
      value: `${report.n_total_relevant} subjects`,
    },
    { label: "Asymptotic relative efficiency", value: report.are.toFixed(3) },
  ];
}

/** Diagnostic panel rows; for survival this is the hazard-ratio diagnostic. */
export function buildDiagnosticsPanel(report: DesignReport): PanelRow[] {
  const d = report.diagnostics;
  const row = (
    label: string,
    key: string,
    digits = 4,
    title?: string,
  ): PanelRow[] => {
    const value = d[key];
    if (value === undefined) return [];
    return [{ label, value: value.toFixed(digits), title }];
  };
  if (report.kind === "binary") {
    return [
      {
        label: "Composite event probability (control)",
        value: report.p_star_control.toFixed(4),
      },
      {
        label: "Composite effect (percentage points)",
        value: (report.effect_star * 100).toFixed(2),
      },
      ...row("Both events together (control)", "joint_prob_control"),
      ...row("P(relevant | additional)", "conditional_eps1_given_eps2"),
      ...row("P(additional | relevant)", "conditional_eps2_given_eps1"),
      ...row("Feasible correlation, lower", "rho_lower_bound"),
      ...row("Feasible correlation, upper", "rho_upper_bound"),
    ];
  }
  return [
    {
      label: "Composite event probability (control)",
      value: report.p_star_control.toFixed(4),
    },
    {
      label: "Effective composite hazard ratio",
      value: report.effect_star.toFixed(4),
      title:
        "Geometric average of the time-varying composite hazard ratio over follow-up",
    },
    ...row(
      "Non-proportionality index",
      "non_proportionality_index",
      4,
      "0 means the composite hazard ratio is constant in time; larger values mean the logrank summary is an average over a drifting effect",
    ),
    ...row("Copula parameter theta", "theta"),
    ...row("Latent additional-event probability", "latent_additional_event_prob"),
  ];
}
