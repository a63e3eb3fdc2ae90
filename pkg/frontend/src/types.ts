/**
 * Wire types mirrored from the compare-kit HTTP API.
 *
 * Every number displayed anywhere in the UI comes from one of these response
 * shapes; the client performs no statistical computation of its own.
 */

export type Sidedness = "one" | "two";
export type VarianceVariant = "pooled" | "unpooled";
export type HazardShapeName = "constant" | "increasing" | "decreasing";
export type Recommendation = "composite" | "relevant";

/** Binary-endpoints design question (two event indicators per subject). */
export interface BinaryScenario {
  kind: "binary";
  label: string;
  /** Control-arm event probability of the relevant endpoint, in (0, 1). */
  p1: number;
  /** Control-arm event probability of the additional endpoint, in (0, 1). */
  p2: number;
  /** Absolute risk reduction on the relevant endpoint, in [0, 1). */
  delta1: number;
  /** Absolute risk reduction on the additional endpoint, in [0, 1). */
  delta2: number;
  /** Pearson correlation of the two event indicators, within Frechet bounds. */
  rho: number;
  alpha: number;
  power: number;
  sidedness: Sidedness;
  variance_variant: VarianceVariant;
}

/** Time-to-event design question (Weibull margins, Gumbel dependence). */
export interface SurvivalScenario {
  kind: "survival";
  label: string;
  /** Control-arm event probability of the relevant endpoint by time tau. */
  p1: number;
  /** Control-arm event probability of the additional endpoint by time tau. */
  p2: number;
  /** Weibull shape: a positive number or a named hazard pattern. */
  shape1: number | HazardShapeName;
  shape2: number | HazardShapeName;
  /** Hazard ratio on the relevant endpoint, in (0, 1]. */
  hr1: number;
  /** Hazard ratio on the additional endpoint, in (0, 1]. */
  hr2: number;
  /** Spearman rank correlation of the component times, in [0, 1). */
  spearman_rho: number;
  /** Follow-up horizon; probabilities above are cumulative by this time. */
  tau: number;
  /** Whether the relevant event censors observation of the additional one. */
  eps1_terminal: boolean;
  alpha: number;
  power: number;
  sidedness: Sidedness;
}

export type Scenario = BinaryScenario | SurvivalScenario;

/** Result of POST /v1/evaluate. */
export interface DesignReport {
  kind: "binary" | "survival";
  label: string;
  p_star_control: number;
  /** Risk difference (binary) or effective hazard ratio (survival). */
  effect_star: number;
  are: number;
  recommendation: Recommendation;
  n_total_composite: number;
  n_total_relevant: number;
  diagnostics: Record<string, number>;
}

/** One value list or a "start:stop:step" range the server expands itself. */
export type GridAxisSpec = Array<number | string> | string;
export type GridRequest = Record<string, GridAxisSpec>;

export interface SweepCell {
  coords: Record<string, number | string>;
  report?: DesignReport;
  infeasible_reason?: string;
}

/** Result of POST /v1/sweep. */
export interface SweepTable {
  kind: "binary" | "survival";
  label: string;
  axes: Array<{ name: string; values: Array<number | string> }>;
  cells: SweepCell[];
  metadata: Record<string, unknown>;
}

/** Result of POST /v1/samplesize. */
export interface SampleSizeSummary {
  kind: "binary" | "survival";
  n_total_composite: number;
  n_total_relevant: number;
  p_star_control: number;
  effect_star: number;
  are: number;
  recommendation: Recommendation;
}

/** Result of POST /v1/association/convert for binary marginals. */
export interface BinaryAssociation {
  kind: "binary";
  rho: number;
  joint_prob: number;
  conditional_eps1_given_eps2: number;
  conditional_eps2_given_eps1: number;
  rho_lower_bound: number;
  rho_upper_bound: number;
}

/** Result of POST /v1/association/convert for a rank correlation. */
export interface SurvivalAssociation {
  kind: "survival";
  spearman_rho: number;
  theta: number;
  kendall_tau: number;
}

export type AssociationConversion = BinaryAssociation | SurvivalAssociation;

/** Result of POST /v1/simulate. */
export interface SimulationResult {
  endpoint: "composite" | "relevant";
  n_total: number;
  power_hat: number;
  mc_standard_error: number;
  n_replications: number;
  seed: number;
}

export interface HealthStatus {
  status: string;
  version: string;
}

export type ApiErrorCode =
  | "VALIDATION"
  | "INFEASIBLE_ASSOCIATION"
  | "UNDETECTABLE_EFFECT"
  | "QUADRATURE_FAILURE"
  | "INTERNAL";

/** The `error` member of a non-2xx response envelope. */
export interface ApiErrorPayload {
  code: ApiErrorCode;
  message: string;
  /** Dotted path of the offending input field, present on 4xx. */
  field?: string;
  feasible_lower?: number;
  feasible_upper?: number;
  best_estimate?: number;
  error_bound?: number;
  last_bracket?: number[];
}

/** Every POST response is one of these two envelopes. */
export interface ResultEnvelope<T> {
  request_id: string;
  elapsed_ms: number;
  result: T;
}

export interface ErrorEnvelope {
  request_id: string;
  elapsed_ms: number;
  error: ApiErrorPayload;
}

export type Envelope<T> = ResultEnvelope<T> | ErrorEnvelope;

export function isErrorEnvelope(value: unknown): value is ErrorEnvelope {
  return (
    typeof value === "object" &&
    value !== null &&
    "error" in value &&
    typeof (value as { error: unknown }).error === "object"
  );
}
