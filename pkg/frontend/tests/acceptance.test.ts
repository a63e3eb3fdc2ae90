/**
 * End-to-end guarantees for the UI, checked against recorded service and
 * command-line outputs so every comparison is exact (no tolerances):
 *
 *  1. Loading a bundled preset renders ARE curves numerically identical to
 *     the command-line sweep over the same grid.
 *  2. The recommendation banner always agrees with the API recommendation
 *     field, across randomized scenarios of both endpoint families.
 *  3. The association slider clamps exactly at the service-reported
 *     feasibility bound for the bundled binary preset's marginals.
 */

import { describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { renderChart } from "../src/chart.js";
import { buildBanner, buildCurveModel } from "../src/curves.js";
import { presetById } from "../src/presets.js";
import { Store } from "../src/store.js";
import { BinaryAssociation, DesignReport, SweepTable } from "../src/types.js";
import { FakeFetch, RecordedExchange, loadFixture } from "./helpers.js";

interface CliSweepFixture {
  command: string[];
  output: SweepTable;
}

interface RandomEvaluations {
  seed: number;
  records: Array<{ request: { body: unknown }; response: { result: DesignReport } }>;
}

function sweepResult(record: RecordedExchange): SweepTable {
  return (record.response as { result: SweepTable }).result;
}

const PRESET_FIXTURES = [
  {
    presetId: "tuxedo",
    api: loadFixture("tuxedo-sweep.json"),
    cli: loadFixture<CliSweepFixture>("tuxedo-sweep-cli.json"),
    assocName: "rho",
    levelName: "delta2",
  },
  {
    presetId: "oasis6",
    api: loadFixture("oasis6-sweep.json"),
    cli: loadFixture<CliSweepFixture>("oasis6-sweep-cli.json"),
    assocName: "spearman_rho",
    levelName: "hr2",
  },
] as const;

describe("preset curves match the command-line sweep exactly", () => {
  for (const fixture of PRESET_FIXTURES) {
    it(`${fixture.presetId}: the UI requests the same grid the recorded command used`, () => {
      const chart = presetById(fixture.presetId).chart;
      const requestGrid = (fixture.api.request.body as { grid: Record<string, unknown> })
        .grid;
      expect(requestGrid[fixture.assocName]).toBe(chart.axisSpec);
      expect(requestGrid[fixture.levelName]).toEqual(chart.levels);
      const gridArgs = fixture.cli.command.filter(
        (_, index) => fixture.cli.command[index - 1] === "--grid",
      );
      expect(gridArgs).toContain(`${fixture.assocName}=${chart.axisSpec}`);
      expect(gridArgs).toContain(
        `${fixture.levelName}=${chart.levels.join(",")}`,
      );
    });

    it(`${fixture.presetId}: every curve point equals the command-line cell, number for number`, () => {
      const model = buildCurveModel(sweepResult(fixture.api));
      const cli = fixture.cli.output;
      const cliAxis = cli.axes.find((axis) => axis.name === fixture.assocName)!;
      expect(model.xValues).toEqual(cliAxis.values);

      let compared = 0;
      for (const cell of cli.cells) {
        const level = cell.coords[fixture.levelName]!;
        const x = cell.coords[fixture.assocName]!;
        const series = model.series.find((s) => s.level === level)!;
        const index = model.xValues.indexOf(x as number);
        expect(index).toBeGreaterThanOrEqual(0);
        const point = series.points[index];
        if (cell.report) {
          expect(point, `feasible cell ${JSON.stringify(cell.coords)}`).not.toBeNull();
          expect(point!.are).toBe(cell.report.are);
          expect(point!.nTotalComposite).toBe(cell.report.n_total_composite);
          expect(point!.recommendation).toBe(cell.report.recommendation);
          compared += 1;
        } else {
          expect(point, `infeasible cell ${JSON.stringify(cell.coords)}`).toBeNull();
        }
      }
      expect(compared).toBeGreaterThan(0);
      expect(compared + model.infeasible.length).toBe(cli.cells.length);
    });

    it(`${fixture.presetId}: the rendered chart carries those exact values`, () => {
      const svg = renderChart(buildCurveModel(sweepResult(fixture.api)));
      const rendered = [...svg.matchAll(/data-are="([^"]+)"/g)]
        .map((match) => match[1])
        .sort();
      const expected = fixture.cli.output.cells
        .filter((cell) => cell.report)
        .map((cell) => String(cell.report!.are))
        .sort();
      expect(rendered).toEqual(expected);
    });
  }
});

describe("recommendation banner agrees with the API field", () => {
  const fixture = loadFixture<RandomEvaluations>("random-evaluations.json");

  it("covers 20 randomized scenarios containing both recommendations", () => {
    expect(fixture.records).toHaveLength(20);
    const recommendations = fixture.records.map(
      (record) => record.response.result.recommendation,
    );
    expect(recommendations).toContain("composite");
    expect(recommendations).toContain("relevant");
  });

  it("echoes the API recommendation verbatim on every scenario", () => {
    for (const record of fixture.records) {
      const report = record.response.result;
      const banner = buildBanner(report);
      expect(banner.recommendation).toBe(report.recommendation);
      expect(banner.headline).toBe(
        report.recommendation === "composite"
          ? "Composite endpoint recommended"
          : "Relevant endpoint recommended",
      );
      // The service recommends the composite exactly when ARE exceeds 1.
      expect(report.are > 1).toBe(report.recommendation === "composite");
    }
  });
});

describe("association slider clamps at the service-reported bound", () => {
  it("clamps to the exact double the API reports for the binary preset marginals", async () => {
    const fake = new FakeFetch([
      loadFixture("tuxedo-evaluate.json"),
      loadFixture("tuxedo-sweep.json"),
      loadFixture("tuxedo-bounds-control.json"),
      loadFixture("tuxedo-bounds-treatment.json"),
    ]);
    const store = new Store(new ApiClient("http://api.test", fake.fetch), {
      debounceMs: 60_000,
    });
    await store.refreshNow();

    const reportedUpper = (
      loadFixture("tuxedo-bounds-control.json").response as {
        result: BinaryAssociation;
      }
    ).result.rho_upper_bound;
    expect(reportedUpper).toBeCloseTo(0.726, 3);

    store.setAssociation(0.99);
    const scenario = store.getState().scenario;
    expect(scenario.kind).toBe("binary");
    if (scenario.kind === "binary") {
      expect(scenario.rho).toBe(reportedUpper);
      expect(scenario.rho).toBe(0.7261161836404406);
    }
    expect(store.getState().bounds.upper).toBe(reportedUpper);
  });
});
