/**
 * Application state for the decision surface.
 *
 * Responsibilities: hold the scenario form, debounce recomputation while
 * sliders move (150 ms), enforce last-write-wins so an in-flight response
 * for an older form state never overwrites a newer one, clamp the
 * association slider to the API-reported feasible interval, route API field
 * errors to the offending control, and flag the view stale with a retry
 * affordance when the network fails.
 *
 * Every number stored here came out of an API response; the store performs
 * no statistical computation.
 */

import { ApiClient, ApiError, NetworkError } from "./api.js";
import { DEBOUNCE_MS } from "./config.js";
import {
  PresetChartConfig,
  defaultChartConfig,
  presetById,
} from "./presets.js";
import {
  FieldError,
  ScenarioParseError,
  exportScenario,
  importScenario,
  validateScenario,
} from "./scenario.js";
import { DesignReport, Scenario, SweepTable } from "./types.js";

export interface AssociationBounds {
  lower: number;
  upper: number;
  /** "api" when fetched from the service, "domain" for the schema range. */
  source: "api" | "domain";
}

export interface StoreState {
  scenario: Scenario;
  presetId: string | null;
  chart: PresetChartConfig;
  bounds: AssociationBounds;
  report: DesignReport | null;
  sweep: SweepTable | null;
  loading: boolean;
  /** True while the displayed results are older than the form. */
  stale: boolean;
  /** Field path (API or client) to message, for inline rendering. */
  fieldErrors: Record<string, string>;
  /** Network-level failure; non-null invites a retry. */
  transportError: string | null;
}

export type ExportResult =
  | { ok: true; text: string; fileName: string }
  | { ok: false; errors: FieldError[] };

export type ImportResult = { ok: true } | { ok: false; errors: FieldError[] };

const GENERAL_ERROR_FIELD = "_general";

/** Schema domain of the association control before API bounds are known. */
function domainBounds(scenario: Scenario): AssociationBounds {
  if (scenario.kind === "binary") {
    return { lower: -1, upper: 1, source: "domain" };
  }
  // Spearman rank correlation domain is [0, 1); 0.99 is the largest slider
  // stop, finer values remain available through the number input.
  return { lower: 0, upper: 0.99, source: "domain" };
}

export function associationFieldName(scenario: Scenario): "rho" | "spearman_rho" {
  return scenario.kind === "binary" ? "rho" : "spearman_rho";
}

function normalizeFieldPath(path: string | undefined): string {
  if (!path) return GENERAL_ERROR_FIELD;
  return path.startsWith("scenario.") ? path.slice("scenario.".length) : path;
}

export class Store {
  private state: StoreState;
  private readonly api: ApiClient;
  private readonly listeners = new Set<(state: StoreState) => void>();
  private readonly debounceMs: number;
  private pendingTimer: ReturnType<typeof setTimeout> | null = null;
  /** Bumped on every form change; stale responses compare against it. */
  private seq = 0;

  constructor(api: ApiClient, options: { debounceMs?: number } = {}) {
    this.api = api;
    this.debounceMs = options.debounceMs ?? DEBOUNCE_MS;
    const scenario = presetScenarioOrThrow("tuxedo");
    this.state = {
      scenario,
      presetId: "tuxedo",
      chart: presetById("tuxedo").chart,
      bounds: domainBounds(scenario),
      report: null,
      sweep: null,
      loading: false,
      stale: false,
      fieldErrors: {},
      transportError: null,
    };
  }

  getState(): StoreState {
    return this.state;
  }

  subscribe(listener: (state: StoreState) => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private setState(patch: Partial<StoreState>): void {
    this.state = { ...this.state, ...patch };
    this.notify();
  }

  /** Replace the whole document (preset load or import). */
  loadPreset(id: string): Promise<void> {
    const preset = presetById(id);
    const scenario = importScenario(preset.text);
    this.setState({
      scenario,
      presetId: id,
      chart: preset.chart,
      bounds: domainBounds(scenario),
      fieldErrors: {},
      transportError: null,
      stale: this.state.report !== null,
    });
    return this.refreshNow();
  }

  importText(text: string): { result: ImportResult; refreshed: Promise<void> } {
    let scenario: Scenario;
    try {
      scenario = importScenario(text);
    } catch (error) {
      if (error instanceof ScenarioParseError) {
        const errors =
          error.errors.length > 0
            ? error.errors
            : [{ field: GENERAL_ERROR_FIELD, message: error.message }];
        return { result: { ok: false, errors }, refreshed: Promise.resolve() };
      }
      throw error;
    }
    this.setState({
      scenario,
      presetId: null,
      chart: defaultChartConfig(scenario),
      bounds: domainBounds(scenario),
      fieldErrors: {},
      transportError: null,
      stale: this.state.report !== null,
    });
    return { result: { ok: true }, refreshed: this.refreshNow() };
  }

  /**
   * Export is blocked while the form is invalid or a field error from the
   * API is outstanding, so a written file always evaluates cleanly.
   */
  exportCurrent(): ExportResult {
    const errors = validateScenario(this.state.scenario);
    for (const [field, message] of Object.entries(this.state.fieldErrors)) {
      errors.push({ field, message });
    }
    if (errors.length > 0) {
      return { ok: false, errors };
    }
    const fileName = this.state.presetId
      ? `${this.state.presetId}.json`
      : "scenario.json";
    return { ok: true, text: exportScenario(this.state.scenario), fileName };
  }

  /** Set one scenario field; association fields are clamped to bounds. */
  setField(field: string, value: unknown): void {
    const scenario = { ...this.state.scenario } as unknown as Record<string, unknown>;
    let next = value;
    if (field === associationFieldName(this.state.scenario)) {
      next = this.clampAssociation(Number(value));
    }
    scenario[field] = next;
    this.setState({
      scenario: scenario as unknown as Scenario,
      presetId: null,
      stale: this.state.report !== null,
    });
    this.scheduleRefresh();
  }

  setAssociation(value: number): void {
    this.setField(associationFieldName(this.state.scenario), value);
  }

  /** Switch scenario families, starting from that family's bundled preset. */
  setKind(kind: "binary" | "survival"): Promise<void> {
    if (kind === this.state.scenario.kind) return Promise.resolve();
    return this.loadPreset(kind === "binary" ? "tuxedo" : "oasis6");
  }

  setChartLevels(levels: number[]): void {
    if (levels.length === 0) return;
    this.setState({ chart: { ...this.state.chart, levels } });
    this.scheduleRefresh();
  }

  setChartAxisSpec(axisSpec: string): void {
    this.setState({ chart: { ...this.state.chart, axisSpec } });
    this.scheduleRefresh();
  }

  clampAssociation(value: number): number {
    const { lower, upper } = this.state.bounds;
    return Math.min(Math.max(value, lower), upper);
  }

  /** Debounced recomputation; every call supersedes in-flight responses. */
  private scheduleRefresh(): void {
    this.seq += 1;
    if (this.pendingTimer !== null) {
      clearTimeout(this.pendingTimer);
    }
    this.pendingTimer = setTimeout(() => {
      this.pendingTimer = null;
      void this.runRefresh();
    }, this.debounceMs);
  }

  /** Immediate recomputation: preset loads, imports, and the retry button. */
  refreshNow(): Promise<void> {
    if (this.pendingTimer !== null) {
      clearTimeout(this.pendingTimer);
      this.pendingTimer = null;
    }
    this.seq += 1;
    return this.runRefresh();
  }

  private async runRefresh(): Promise<void> {
    const seq = this.seq;
    const scenario = this.state.scenario;
    const clientErrors = validateScenario(scenario);
    if (clientErrors.length > 0) {
      const fieldErrors: Record<string, string> = {};
      for (const error of clientErrors) {
        fieldErrors[error.field] = error.message;
      }
      this.setState({ fieldErrors, loading: false });
      return;
    }
    this.setState({ loading: true });

    const assocName = associationFieldName(scenario);
    const levelName = scenario.kind === "binary" ? "delta2" : "hr2";
    const grid = {
      [assocName]: this.state.chart.axisSpec,
      [levelName]: this.state.chart.levels,
    };

    const tasks: [
      Promise<DesignReport>,
      Promise<SweepTable>,
      Promise<AssociationBounds | null>,
    ] = [
      this.api.evaluate(scenario),
      this.api.sweep(scenario, grid),
      this.fetchBounds(scenario),
    ];
    const [evaluated, swept, bounds] = await Promise.allSettled(tasks);
    if (seq !== this.seq) {
      return; // A newer form state exists; drop this response entirely.
    }

    const fieldErrors: Record<string, string> = {};
    let transportError: string | null = null;
    const routeError = (reason: unknown): void => {
      if (reason instanceof ApiError) {
        let message = reason.message;
        if (
          reason.code === "INFEASIBLE_ASSOCIATION" &&
          reason.feasibleLower !== undefined &&
          reason.feasibleUpper !== undefined
        ) {
          message += ` (feasible range [${reason.feasibleLower}, ${reason.feasibleUpper}])`;
        }
        fieldErrors[normalizeFieldPath(reason.field)] = message;
      } else if (reason instanceof NetworkError) {
        transportError = reason.message;
      } else {
        transportError = String(reason);
      }
    };

    const patch: Partial<StoreState> = {};
    if (evaluated.status === "fulfilled") {
      patch.report = evaluated.value;
    } else {
      routeError(evaluated.reason);
    }
    if (swept.status === "fulfilled") {
      patch.sweep = swept.value;
    } else {
      routeError(swept.reason);
    }
    let clampedScenario: Scenario | null = null;
    if (bounds.status === "fulfilled" && bounds.value !== null) {
      patch.bounds = bounds.value;
      const current = (scenario as unknown as Record<string, number>)[assocName]!;
      const clamped = Math.min(
        Math.max(current, bounds.value.lower),
        bounds.value.upper,
      );
      if (clamped !== current) {
        clampedScenario = {
          ...(scenario as unknown as Record<string, unknown>),
          [assocName]: clamped,
        } as unknown as Scenario;
      }
    } else if (bounds.status === "rejected") {
      routeError(bounds.reason);
    }

    patch.fieldErrors = fieldErrors;
    patch.transportError = transportError;
    patch.loading = false;
    patch.stale =
      evaluated.status !== "fulfilled" || swept.status !== "fulfilled";
    if (clampedScenario !== null) {
      patch.scenario = clampedScenario;
      patch.stale = true;
    }
    this.setState(patch);
    if (clampedScenario !== null) {
      // The feasible interval moved under the current value: converge on the
      // clamped form with a fresh (debounced) recomputation.
      this.scheduleRefresh();
    }
  }

  /**
   * Feasible correlation interval for binary scenarios: the API-reported
   * Frechet bounds of the control arm intersected with the treatment arm's
   * (the engine enforces both). Survival association keeps its schema
   * domain; no tighter bound exists.
   */
  private async fetchBounds(
    scenario: Scenario,
  ): Promise<AssociationBounds | null> {
    if (scenario.kind !== "binary") {
      return null;
    }
    const control = await this.api.correlationBounds(scenario.p1, scenario.p2);
    let lower = control.lower;
    let upper = control.upper;
    const p1Treated = scenario.p1 - scenario.delta1;
    const p2Treated = scenario.p2 - scenario.delta2;
    if (p1Treated > 0 && p2Treated > 0) {
      const treated = await this.api.correlationBounds(p1Treated, p2Treated);
      lower = Math.max(lower, treated.lower);
      upper = Math.min(upper, treated.upper);
    }
    return { lower, upper, source: "api" };
  }
}

function presetScenarioOrThrow(id: string): Scenario {
  return importScenario(presetById(id).text);
}
