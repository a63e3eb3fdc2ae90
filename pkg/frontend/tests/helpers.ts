/**
 * Test support: fixture loading and a fetch stand-in that replays recorded
 * API payloads (produced by the real service) or hands unmatched requests to
 * a scriptable fallback.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { FetchLike } from "../src/api.js";

export interface RecordedExchange {
  request: { method: string; path: string; body?: unknown };
  status: number;
  response: unknown;
}

// Resolved via node:path rather than the URL constructor: DOM test
// environments replace the global URL class with one that resolves against
// the document base instead of the module file.
const FIXTURE_DIR = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function loadFixture<T = RecordedExchange>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURE_DIR, name), "utf-8")) as T;
}

/** Stable deep canonicalization so request bodies compare structurally. */
export function canonical(value: unknown): string {
  if (Array.isArray(value)) {
    return `[${value.map(canonical).join(",")}]`;
  }
  if (typeof value === "object" && value !== null) {
    const entries = Object.entries(value as Record<string, unknown>)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([key, val]) => `${JSON.stringify(key)}:${canonical(val)}`);
    return `{${entries.join(",")}}`;
  }
  return JSON.stringify(value);
}

export interface LoggedRequest {
  method: string;
  path: string;
  body: unknown;
}

export type Responder = (
  path: string,
  body: unknown,
) => { status: number; payload: unknown } | undefined;

/**
 * Replays recorded exchanges by method+path+body; unmatched requests go to
 * the fallback responder; with neither, the request rejects like an outage.
 */
export class FakeFetch {
  readonly log: LoggedRequest[] = [];
  private readonly records = new Map<string, RecordedExchange>();
  private fallback: Responder | undefined;
  /** When set, requests are withheld and resolved manually via release(). */
  private gate: Array<{
    key: LoggedRequest;
    resolve: (r: { status: number; payload: unknown }) => void;
    reject: (reason: unknown) => void;
  }> | null = null;

  constructor(records: RecordedExchange[] = [], fallback?: Responder) {
    for (const record of records) {
      this.records.set(this.key(record.request.path, record.request.body), record);
    }
    this.fallback = fallback;
  }

  private key(path: string, body: unknown): string {
    return `${path}|${body === undefined ? "" : canonical(body)}`;
  }

  add(record: RecordedExchange): void {
    this.records.set(this.key(record.request.path, record.request.body), record);
  }

  setFallback(fallback: Responder | undefined): void {
    this.fallback = fallback;
  }

  /** Start holding requests open for manual, out-of-order resolution. */
  holdRequests(): void {
    this.gate = [];
  }

  pendingCount(): number {
    return this.gate ? this.gate.length : 0;
  }

  /** Resolve the i-th held request with the matched/fallback payload. */
  release(index: number): void {
    if (!this.gate) throw new Error("holdRequests() was not called");
    const held = this.gate[index];
    if (!held) throw new Error(`no held request at index ${index}`);
    const outcome = this.lookup(held.key.path, held.key.body);
    if (outcome) {
      held.resolve(outcome);
    } else {
      held.reject(new Error(`no fixture for ${held.key.path}`));
    }
  }

  releaseAll(): void {
    if (!this.gate) return;
    const held = [...this.gate];
    this.gate = [];
    held.forEach((_, i) => {
      const outcome = this.lookup(held[i]!.key.path, held[i]!.key.body);
      if (outcome) held[i]!.resolve(outcome);
      else held[i]!.reject(new Error(`no fixture for ${held[i]!.key.path}`));
    });
  }

  private lookup(
    path: string,
    body: unknown,
  ): { status: number; payload: unknown } | undefined {
    const record = this.records.get(this.key(path, body));
    if (record) {
      return { status: record.status, payload: record.response };
    }
    return this.fallback?.(path, body);
  }

  readonly fetch: FetchLike = (url, init) => {
    const path = url.replace(/^https?:\/\/[^/]+/, "") || "/";
    const body = init.body === undefined ? undefined : JSON.parse(init.body);
    this.log.push({ method: init.method, path, body });
    const respond = (outcome: { status: number; payload: unknown }) => ({
      status: outcome.status,
      json: () => Promise.resolve(outcome.payload),
    });
    if (this.gate) {
      return new Promise((resolve, reject) => {
        this.gate!.push({
          key: { method: init.method, path, body },
          resolve: (outcome) => resolve(respond(outcome)),
          reject,
        });
      });
    }
    const outcome = this.lookup(path, body);
    if (!outcome) {
      return Promise.reject(
        new Error(`connection refused (no fixture for ${path})`),
      );
    }
    return Promise.resolve(respond(outcome));
  };
}

/** Envelope wrapper matching the service's success shape. */
export function resultEnvelope(result: unknown): unknown {
  return { request_id: "fixture", elapsed_ms: 0, result };
}

/** A minimal synthetic report, for behavioral tests that ignore numbers. */
export function syntheticReport(overrides: Record<string, unknown> = {}): unknown {
  return {
    kind: "binary",
    label: "synthetic",
    p_star_control: 0.1,
    effect_star: 0.02,
    are: 1.5,
    recommendation: "composite",
    n_total_composite: 1000,
    n_total_relevant: 1500,
    diagnostics: {},
    ...overrides,
  };
}

/** A minimal synthetic one-axis sweep table. */
export function syntheticSweep(kind: "binary" | "survival" = "binary"): unknown {
  const axis = kind === "binary" ? "rho" : "spearman_rho";
  return {
    kind,
    label: "synthetic",
    axes: [{ name: axis, values: [0, 0.2, 0.4] }],
    cells: [0, 0.2, 0.4].map((value) => ({
      coords: { [axis]: value },
      report: syntheticReport({ kind }),
    })),
    metadata: {},
  };
}

/** Fallback responder that answers every endpoint with synthetic payloads. */
export function syntheticResponder(
  options: { kind?: "binary" | "survival"; boundsUpper?: number } = {},
): Responder {
  const kind = options.kind ?? "binary";
  return (path) => {
    if (path === "/v1/evaluate") {
      return {
        status: 200,
        payload: resultEnvelope(syntheticReport({ kind })),
      };
    }
    if (path === "/v1/sweep") {
      return { status: 200, payload: resultEnvelope(syntheticSweep(kind)) };
    }
    if (path === "/v1/association/convert") {
      return {
        status: 200,
        payload: resultEnvelope({
          kind: "binary",
          rho: 0,
          joint_prob: 0,
          conditional_eps1_given_eps2: 0,
          conditional_eps2_given_eps1: 0,
          rho_lower_bound: -1,
          rho_upper_bound: options.boundsUpper ?? 1,
        }),
      };
    }
    return undefined;
  };
}
