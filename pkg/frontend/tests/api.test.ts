import { describe, expect, it } from "vitest";
import { ApiClient, ApiError, NetworkError } from "../src/api.js";
import { resolveApiBase } from "../src/config.js";
import { presetScenario } from "../src/presets.js";
import { DesignReport, SweepTable } from "../src/types.js";
import { FakeFetch, RecordedExchange, loadFixture } from "./helpers.js";

const tuxedoEvaluate = loadFixture("tuxedo-evaluate.json");
const oasis6Evaluate = loadFixture("oasis6-evaluate.json");
const tuxedoSweep = loadFixture("tuxedo-sweep.json");
const boundsControl = loadFixture("tuxedo-bounds-control.json");
const boundsTreatment = loadFixture("tuxedo-bounds-treatment.json");
const infeasibleRho = loadFixture("infeasible-rho.json");
const validationError = loadFixture("evaluate-validation-error.json");
const samplesize = loadFixture("tuxedo-samplesize.json");
const simulate = loadFixture("tuxedo-simulate.json");
const healthz = loadFixture("healthz.json");

function clientWith(records: RecordedExchange[]): {
  client: ApiClient;
  fake: FakeFetch;
} {
  const fake = new FakeFetch(records);
  return { client: new ApiClient("http://api.test", fake.fetch), fake };
}

describe("ApiClient envelope handling", () => {
  it("unwraps a successful evaluate envelope to the bare report", async () => {
    const { client } = clientWith([tuxedoEvaluate]);
    const report = await client.evaluate(presetScenario("tuxedo"));
    const expected = (tuxedoEvaluate.response as { result: DesignReport }).result;
    expect(report).toEqual(expected);
    expect(report.are).toBe(expected.are);
    expect(report.recommendation).toBe(expected.recommendation);
  });

  it("unwraps survival evaluate and sweep results", async () => {
    const { client } = clientWith([oasis6Evaluate, tuxedoSweep]);
    const report = await client.evaluate(presetScenario("oasis6"));
    expect(report.kind).toBe("survival");
    const sweepBody = tuxedoSweep.request.body as {
      scenario: never;
      grid: never;
    };
    const table = await client.sweep(sweepBody.scenario, sweepBody.grid);
    const expected = (tuxedoSweep.response as { result: SweepTable }).result;
    expect(table.cells).toHaveLength(expected.cells.length);
    expect(table).toEqual(expected);
  });

  it("unwraps samplesize and simulate results", async () => {
    const { client } = clientWith([samplesize, simulate]);
    const sizes = await client.samplesize(presetScenario("tuxedo"));
    expect(sizes.n_total_composite).toBeGreaterThan(0);
    const sim = await client.simulate(
      simulate.request.body as Parameters<ApiClient["simulate"]>[0],
    );
    expect(sim.n_replications).toBe(50);
    expect(sim.power_hat).toBeGreaterThanOrEqual(0);
  });

  it("reads the health endpoint", async () => {
    const { client } = clientWith([healthz]);
    const health = await client.health();
    expect(health.status).toBe("ok");
    expect(typeof health.version).toBe("string");
  });
});

describe("ApiClient error mapping", () => {
  it("maps an infeasible association to ApiError with the feasible range", async () => {
    const { client } = clientWith([infeasibleRho]);
    const scenario = { ...presetScenario("tuxedo"), rho: 0.9 };
    const failure = await client.evaluate(scenario).catch((error) => error);
    expect(failure).toBeInstanceOf(ApiError);
    const apiError = failure as ApiError;
    expect(apiError.status).toBe(422);
    expect(apiError.code).toBe("INFEASIBLE_ASSOCIATION");
    expect(apiError.field).toBe("rho");
    expect(apiError.feasibleUpper).toBe(0.7261161836404406);
  });

  it("maps a validation failure to ApiError with the field path", async () => {
    const { client } = clientWith([validationError]);
    const scenario = { ...presetScenario("tuxedo"), alpha: 0.7 };
    const failure = await client.evaluate(scenario).catch((error) => error);
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).code).toBe("VALIDATION");
    expect((failure as ApiError).field).toBe("alpha");
  });

  it("wraps a transport failure in NetworkError", async () => {
    const { client } = clientWith([]); // no fixtures: every request refuses
    const failure = await client
      .evaluate(presetScenario("tuxedo"))
      .catch((error) => error);
    expect(failure).toBeInstanceOf(NetworkError);
  });
});

describe("ApiClient addressing", () => {
  it("strips trailing slashes from the base URL", async () => {
    const fake = new FakeFetch([tuxedoEvaluate]);
    const client = new ApiClient("http://api.test///", fake.fetch);
    await client.evaluate(presetScenario("tuxedo"));
    expect(fake.log[0]?.path).toBe("/v1/evaluate");
  });

  it("reads the correlation bounds off the association conversion", async () => {
    const { client, fake } = clientWith([boundsControl, boundsTreatment]);
    const bounds = await client.correlationBounds(0.059, 0.032);
    expect(bounds.upper).toBe(0.7261161836404406);
    expect(bounds.lower).toBe(-0.04552694456406588);
    expect(fake.log[0]?.path).toBe("/v1/association/convert");
    expect(fake.log[0]?.body).toEqual({ p1: 0.059, p2: 0.032, rho: 0 });
  });
});

describe("API base resolution", () => {
  it("prefers the query parameter, then the meta tag, then same-origin", () => {
    const meta = (name: string) =>
      name === "api-base" ? "http://meta.example" : null;
    expect(resolveApiBase("?api=http://query.example", meta)).toBe(
      "http://query.example",
    );
    expect(resolveApiBase("", meta)).toBe("http://meta.example");
    expect(resolveApiBase("", () => null)).toBe("");
  });
});
