/**
 * Scenario document handling: client-side validation mirrored from the
 * server schema, import of user-supplied JSON, and canonical export.
 *
 * Export writes keys in the same order and number style as the bundled
 * scenario files, so exporting an imported document reproduces it byte for
 * byte and the result is accepted verbatim by the command-line `evaluate`.
 */

import {
  BinaryScenario,
  HazardShapeName,
  Scenario,
  SurvivalScenario,
} from "./types.js";

export interface FieldError {
  field: string;
  message: string;
}

export class ScenarioParseError extends Error {
  constructor(message: string, readonly errors: FieldError[] = []) {
    super(message);
    this.name = "ScenarioParseError";
  }
}

export const SHAPE_NAMES: HazardShapeName[] = [
  "constant",
  "increasing",
  "decreasing",
];

const COMMON_KEYS = ["kind", "label", "alpha", "power", "sidedness"];
const BINARY_KEYS = new Set([
  ...COMMON_KEYS,
  "p1",
  "p2",
  "delta1",
  "delta2",
  "rho",
  "variance_variant",
]);
const SURVIVAL_KEYS = new Set([
  ...COMMON_KEYS,
  "p1",
  "p2",
  "shape1",
  "shape2",
  "hr1",
  "hr2",
  "spearman_rho",
  "tau",
  "eps1_terminal",
]);

/** Export key order, matching the bundled scenario documents. */
const BINARY_ORDER: Array<keyof BinaryScenario> = [
  "kind",
  "label",
  "p1",
  "p2",
  "delta1",
  "delta2",
  "rho",
  "alpha",
  "power",
  "sidedness",
  "variance_variant",
];
const SURVIVAL_ORDER: Array<keyof SurvivalScenario> = [
  "kind",
  "label",
  "p1",
  "p2",
  "shape1",
  "shape2",
  "hr1",
  "hr2",
  "spearman_rho",
  "tau",
  "eps1_terminal",
  "alpha",
  "power",
  "sidedness",
];

function isFiniteNumber(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

function openInterval(
  errors: FieldError[],
  field: string,
  value: number,
  lo: number,
  hi: number,
): void {
  if (!(lo < value && value < hi)) {
    errors.push({
      field,
      message: `${field} must lie strictly between ${lo} and ${hi}`,
    });
  }
}

/**
 * Structural validation mirrored from the server: domains of every field.
 * Association feasibility against the marginals stays server-side; the form
 * clamps to API-reported bounds and renders API field errors inline.
 */
export function validateScenario(scenario: Scenario): FieldError[] {
  const errors: FieldError[] = [];
  const common = scenario as { alpha: number; power: number; sidedness: string };
  openInterval(errors, "alpha", common.alpha, 0, 0.5);
  openInterval(errors, "power", common.power, 0.5, 1);
  if (common.sidedness !== "one" && common.sidedness !== "two") {
    errors.push({ field: "sidedness", message: "sidedness must be 'one' or 'two'" });
  }
  if (scenario.kind === "binary") {
    openInterval(errors, "p1", scenario.p1, 0, 1);
    openInterval(errors, "p2", scenario.p2, 0, 1);
    for (const field of ["delta1", "delta2"] as const) {
      const value = scenario[field];
      if (!(0 <= value && value < 1)) {
        errors.push({ field, message: `${field} must lie in [0, 1)` });
      }
    }
    if (scenario.delta1 > scenario.p1) {
      errors.push({
        field: "delta1",
        message: "delta1 exceeds the control-arm probability p1",
      });
    }
    if (scenario.delta2 > scenario.p2) {
      errors.push({
        field: "delta2",
        message: "delta2 exceeds the control-arm probability p2",
      });
    }
    if (!(-1 <= scenario.rho && scenario.rho <= 1)) {
      errors.push({ field: "rho", message: "rho must lie in [-1, 1]" });
    }
    if (scenario.variance_variant !== "pooled" && scenario.variance_variant !== "unpooled") {
      errors.push({
        field: "variance_variant",
        message: "variance_variant must be 'pooled' or 'unpooled'",
      });
    }
  } else {
    openInterval(errors, "p1", scenario.p1, 0, 1);
    openInterval(errors, "p2", scenario.p2, 0, 1);
    for (const field of ["shape1", "shape2"] as const) {
      const value = scenario[field];
      if (typeof value === "string") {
        if (!SHAPE_NAMES.includes(value)) {
          errors.push({
            field,
            message: `${field} must be a positive number or one of ${SHAPE_NAMES.join(", ")}`,
          });
        }
      } else if (!(isFiniteNumber(value) && value > 0)) {
        errors.push({ field, message: `${field} must be positive` });
      }
    }
    for (const field of ["hr1", "hr2"] as const) {
      const value = scenario[field];
      if (!(0 < value && value <= 1)) {
        errors.push({
          field,
          message: `${field} must lie in (0, 1] (beneficial or null effect)`,
        });
      }
    }
    if (!(0 <= scenario.spearman_rho && scenario.spearman_rho < 1)) {
      errors.push({
        field: "spearman_rho",
        message: "spearman_rho must lie in [0, 1)",
      });
    }
    if (!(scenario.tau > 0)) {
      errors.push({ field: "tau", message: "tau must be positive" });
    }
  }
  return errors;
}

function requireNumber(
  raw: Record<string, unknown>,
  key: string,
  fallback?: number,
): number {
  if (!(key in raw)) {
    if (fallback !== undefined) return fallback;
    throw new ScenarioParseError(`missing required field '${key}'`, [
      { field: key, message: `missing required field '${key}'` },
    ]);
  }
  const value = raw[key];
  if (!isFiniteNumber(value)) {
    throw new ScenarioParseError(`${key} must be a finite number`, [
      { field: key, message: `${key} must be a finite number` },
    ]);
  }
  return value;
}

function shapeValue(raw: Record<string, unknown>, key: string): number | HazardShapeName {
  const value = raw[key];
  if (typeof value === "string") {
    if (!SHAPE_NAMES.includes(value as HazardShapeName)) {
      throw new ScenarioParseError(
        `${key} must be a positive number or one of ${SHAPE_NAMES.join(", ")}`,
        [{ field: key, message: `unknown hazard shape '${value}'` }],
      );
    }
    return value as HazardShapeName;
  }
  return requireNumber(raw, key);
}

/**
 * Parse a scenario document (already JSON-decoded) into a fully populated
 * Scenario, applying the same defaults as the server.
 */
export function scenarioFromObject(raw: unknown): Scenario {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new ScenarioParseError("scenario must be a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  const kind = obj["kind"];
  if (kind !== "binary" && kind !== "survival") {
    throw new ScenarioParseError("kind must be 'binary' or 'survival'", [
      { field: "kind", message: "kind must be 'binary' or 'survival'" },
    ]);
  }
  const allowed = kind === "binary" ? BINARY_KEYS : SURVIVAL_KEYS;
  const unknown = Object.keys(obj).filter((key) => !allowed.has(key)).sort();
  if (unknown.length > 0) {
    throw new ScenarioParseError(
      `unknown field(s) for a ${kind} scenario: ${unknown.join(", ")}`,
      unknown.map((field) => ({ field, message: "unknown field" })),
    );
  }
  const label = obj["label"] ?? "";
  if (typeof label !== "string") {
    throw new ScenarioParseError("label must be a string", [
      { field: "label", message: "label must be a string" },
    ]);
  }
  const sidedness = obj["sidedness"] ?? "one";
  if (sidedness !== "one" && sidedness !== "two") {
    throw new ScenarioParseError("sidedness must be 'one' or 'two'", [
      { field: "sidedness", message: "sidedness must be 'one' or 'two'" },
    ]);
  }
  const alpha = requireNumber(obj, "alpha", 0.05);
  const power = requireNumber(obj, "power", 0.8);
  let scenario: Scenario;
  if (kind === "binary") {
    const variant = obj["variance_variant"] ?? "pooled";
    if (variant !== "pooled" && variant !== "unpooled") {
      throw new ScenarioParseError(
        "variance_variant must be 'pooled' or 'unpooled'",
        [{ field: "variance_variant", message: "must be 'pooled' or 'unpooled'" }],
      );
    }
    scenario = {
      kind: "binary",
      label,
      p1: requireNumber(obj, "p1"),
      p2: requireNumber(obj, "p2"),
      delta1: requireNumber(obj, "delta1"),
      delta2: requireNumber(obj, "delta2"),
      rho: requireNumber(obj, "rho"),
      alpha,
      power,
      sidedness,
      variance_variant: variant,
    };
  } else {
    const terminal = obj["eps1_terminal"] ?? true;
    if (typeof terminal !== "boolean") {
      throw new ScenarioParseError("eps1_terminal must be a boolean", [
        { field: "eps1_terminal", message: "must be true or false" },
      ]);
    }
    scenario = {
      kind: "survival",
      label,
      p1: requireNumber(obj, "p1"),
      p2: requireNumber(obj, "p2"),
      shape1: shapeValue(obj, "shape1"),
      shape2: shapeValue(obj, "shape2"),
      hr1: requireNumber(obj, "hr1"),
      hr2: requireNumber(obj, "hr2"),
      spearman_rho: requireNumber(obj, "spearman_rho"),
      tau: requireNumber(obj, "tau", 1.0),
      eps1_terminal: terminal,
      alpha,
      power,
      sidedness,
    };
  }
  const errors = validateScenario(scenario);
  if (errors.length > 0) {
    const first = errors[0]!;
    throw new ScenarioParseError(first.message, errors);
  }
  return scenario;
}

/** Parse scenario JSON text (file import). */
export function importScenario(text: string): Scenario {
  let decoded: unknown;
  try {
    decoded = JSON.parse(text);
  } catch (cause) {
    throw new ScenarioParseError(`malformed JSON: ${(cause as Error).message}`);
  }
  return scenarioFromObject(decoded);
}

/**
 * Render one number the way the scenario files do: integral values keep a
 * trailing ".0" so a written document round-trips byte for byte.
 */
function formatNumber(value: number): string {
  if (Number.isInteger(value) && Math.abs(value) < 1e15) {
    return value.toFixed(1);
  }
  return String(value);
}

function formatValue(value: unknown): string {
  if (typeof value === "number") return formatNumber(value);
  return JSON.stringify(value);
}

/** Serialize a scenario as a canonical two-space-indented JSON document. */
export function exportScenario(scenario: Scenario): string {
  const order: readonly string[] =
    scenario.kind === "binary" ? BINARY_ORDER : SURVIVAL_ORDER;
  const record = scenario as unknown as Record<string, unknown>;
  const lines = order.map(
    (key) => `  ${JSON.stringify(key)}: ${formatValue(record[key])}`,
  );
  return `{\n${lines.join(",\n")}\n}\n`;
}

/** Deep equality of two scenarios, label included. */
export function scenariosEqual(a: Scenario, b: Scenario): boolean {
  return exportScenario(a) === exportScenario(b);
}
