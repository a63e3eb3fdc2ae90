/**
 * Typed client for the compare-kit /v1 endpoints.
 *
 * The client unwraps the `{request_id, elapsed_ms, result|error}` envelope:
 * a successful call resolves to the bare result, a non-2xx envelope rejects
 * with `ApiError` (machine-readable code plus offending field), and a
 * transport-level failure rejects with `NetworkError` so callers can offer a
 * retry affordance instead of a field message.
 */

import {
  AssociationConversion,
  BinaryAssociation,
  DesignReport,
  Envelope,
  GridRequest,
  HealthStatus,
  SampleSizeSummary,
  Scenario,
  SimulationResult,
  SweepTable,
  isErrorEnvelope,
} from "./types.js";

export type FetchLike = (
  url: string,
  init: { method: string; headers: Record<string, string>; body?: string },
) => Promise<{ status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly field?: string;
  readonly requestId?: string;
  readonly feasibleLower?: number;
  readonly feasibleUpper?: number;

  constructor(options: {
    code: string;
    message: string;
    status: number;
    field?: string;
    requestId?: string;
    feasibleLower?: number;
    feasibleUpper?: number;
  }) {
    super(options.message);
    this.name = "ApiError";
    this.code = options.code;
    this.status = options.status;
    this.field = options.field;
    this.requestId = options.requestId;
    this.feasibleLower = options.feasibleLower;
    this.feasibleUpper = options.feasibleUpper;
  }
}

export class NetworkError extends Error {
  constructor(message: string, override readonly cause?: unknown) {
    super(message);
    this.name = "NetworkError";
  }
}

export interface SimulateRequest {
  scenario: Scenario;
  endpoint: "composite" | "relevant";
  n_total: number;
  n_replications: number;
  seed?: number;
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    // Normalize so both "" (same origin) and "http://host:port/" work.
    this.base = baseUrl.replace(/\/+$/, "");
    const impl = fetchImpl ?? (globalThis.fetch as unknown as FetchLike);
    if (!impl) {
      throw new Error("no fetch implementation available");
    }
    this.fetchImpl = impl.bind(globalThis) as FetchLike;
  }

  get baseUrl(): string {
    return this.base;
  }

  evaluate(scenario: Scenario): Promise<DesignReport> {
    return this.post<DesignReport>("/v1/evaluate", scenario);
  }

  sweep(scenario: Scenario, grid: GridRequest): Promise<SweepTable> {
    return this.post<SweepTable>("/v1/sweep", { scenario, grid });
  }

  samplesize(scenario: Scenario): Promise<SampleSizeSummary> {
    return this.post<SampleSizeSummary>("/v1/samplesize", scenario);
  }

  convertAssociation(
    payload: Record<string, number>,
  ): Promise<AssociationConversion> {
    return this.post<AssociationConversion>("/v1/association/convert", payload);
  }

  /** Frechet correlation interval for a pair of binary marginals. */
  async correlationBounds(
    p1: number,
    p2: number,
  ): Promise<{ lower: number; upper: number }> {
    // rho = 0 is feasible for every non-degenerate pair of marginals, so it
    // serves as the probe value for reading the bounds off the conversion.
    const converted = (await this.convertAssociation({
      p1,
      p2,
      rho: 0,
    })) as BinaryAssociation;
    return { lower: converted.rho_lower_bound, upper: converted.rho_upper_bound };
  }

  simulate(request: SimulateRequest): Promise<SimulationResult> {
    return this.post<SimulationResult>("/v1/simulate", request);
  }

  async health(): Promise<HealthStatus> {
    let response: { status: number; json(): Promise<unknown> };
    try {
      response = await this.fetchImpl(`${this.base}/healthz`, {
        method: "GET",
        headers: { Accept: "application/json" },
      });
    } catch (cause) {
      throw new NetworkError("health check failed", cause);
    }
    return (await response.json()) as HealthStatus;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    let response: { status: number; json(): Promise<unknown> };
    try {
      response = await this.fetchImpl(`${this.base}${path}`, {
        method: "POST",
        headers: {
          "Content-Type": "application/json",
          Accept: "application/json",
        },
        body: JSON.stringify(body),
      });
    } catch (cause) {
      throw new NetworkError(`request to ${path} failed`, cause);
    }
    let envelope: Envelope<T>;
    try {
      envelope = (await response.json()) as Envelope<T>;
    } catch (cause) {
      throw new NetworkError(`non-JSON response from ${path}`, cause);
    }
    if (isErrorEnvelope(envelope)) {
      const err = envelope.error;
      throw new ApiError({
        code: err.code,
        message: err.message,
        status: response.status,
        field: err.field,
        requestId: envelope.request_id,
        feasibleLower: err.feasible_lower,
        feasibleUpper: err.feasible_upper,
      });
    }
    if (response.status < 200 || response.status >= 300) {
      throw new NetworkError(
        `unexpected status ${response.status} from ${path}`,
      );
    }
    return envelope.result;
  }
}
