import { describe, expect, it } from "vitest";
import { chartLegend, renderChart } from "../src/chart.js";
import {
  buildBanner,
  buildCurveModel,
  buildDiagnosticsPanel,
  buildSampleSizePanel,
} from "../src/curves.js";
import { DesignReport, SweepTable } from "../src/types.js";
import { loadFixture } from "./helpers.js";

function fixtureResult<T>(name: string): T {
  const record = loadFixture(name);
  return (record.response as { result: T }).result;
}

const tuxedoSweep = fixtureResult<SweepTable>("tuxedo-sweep.json");
const oasis6Sweep = fixtureResult<SweepTable>("oasis6-sweep.json");
const tuxedoReport = fixtureResult<DesignReport>("tuxedo-evaluate.json");
const oasis6Report = fixtureResult<DesignReport>("oasis6-evaluate.json");

describe("buildCurveModel", () => {
  it("groups the binary sweep into one series per secondary-effect level", () => {
    const model = buildCurveModel(tuxedoSweep);
    expect(model.associationName).toBe("rho");
    expect(model.levelName).toBe("delta2");
    expect(model.xValues).toHaveLength(16);
    expect(model.xValues[0]).toBe(0);
    expect(model.xValues[15]).toBe(0.72);
    expect(model.series.map((s) => s.label)).toEqual([
      "delta2 = 0.0049",
      "delta2 = 0.0098",
      "delta2 = 0.0147",
    ]);
    for (const series of model.series) {
      expect(series.points).toHaveLength(16);
    }
  });

  it("copies ARE values verbatim from the sweep cells", () => {
    const model = buildCurveModel(tuxedoSweep);
    for (const cell of tuxedoSweep.cells) {
      if (!cell.report) continue;
      const series = model.series.find((s) => s.level === cell.coords["delta2"]);
      const point = series?.points.find((p) => p !== null && p.x === cell.coords["rho"]);
      expect(point, `point for ${JSON.stringify(cell.coords)}`).toBeTruthy();
      expect(point!.are).toBe(cell.report.are);
      expect(point!.nTotalComposite).toBe(cell.report.n_total_composite);
      expect(point!.recommendation).toBe(cell.report.recommendation);
    }
  });

  it("marks infeasible cells as gaps instead of interpolating", () => {
    const model = buildCurveModel(tuxedoSweep);
    const top = model.series.find((s) => s.level === 0.0147);
    expect(top).toBeTruthy();
    expect(top!.points[14]).toBeNull();
    expect(top!.points[15]).toBeNull();
    expect(top!.points.filter((p) => p !== null)).toHaveLength(14);
    expect(model.infeasible).toHaveLength(2);
    expect(model.infeasible.map((cell) => cell.x)).toEqual([0.672, 0.72]);
    expect(model.infeasible[0]?.reason).toContain("infeasible association");
    const lower = model.series.filter((s) => s.level !== 0.0147);
    for (const series of lower) {
      expect(series.points.every((p) => p !== null)).toBe(true);
    }
  });

  it("handles the survival sweep keyed by spearman_rho", () => {
    const model = buildCurveModel(oasis6Sweep);
    expect(model.associationName).toBe("spearman_rho");
    expect(model.levelName).toBe("hr2");
    expect(model.series.map((s) => s.label)).toEqual([
      "hr2 = 0.56",
      "hr2 = 0.66",
      "hr2 = 0.76",
    ]);
    expect(model.infeasible).toHaveLength(0);
    expect(model.xValues[15]).toBe(0.9);
  });

  it("labels a single-axis sweep as one unnamed ARE series", () => {
    const singleAxis: SweepTable = {
      ...tuxedoSweep,
      axes: [tuxedoSweep.axes[0]!],
      cells: tuxedoSweep.cells
        .filter((cell) => cell.coords["delta2"] === 0.0098)
        .map((cell) => ({ ...cell, coords: { rho: cell.coords["rho"]! } })),
    };
    const model = buildCurveModel(singleAxis);
    expect(model.levelName).toBeNull();
    expect(model.series).toHaveLength(1);
    expect(model.series[0]?.label).toBe("ARE");
    expect(model.series[0]?.points.filter((p) => p !== null)).toHaveLength(16);
  });
});

describe("buildBanner", () => {
  it("recommends the composite exactly when the API says composite", () => {
    const banner = buildBanner(tuxedoReport);
    expect(tuxedoReport.recommendation).toBe("composite");
    expect(banner.recommendation).toBe("composite");
    expect(banner.headline).toBe("Composite endpoint recommended");
    expect(banner.detail).toContain(`${tuxedoReport.n_total_composite} subjects`);
    expect(banner.are).toBe(tuxedoReport.are);
  });

  it("recommends the relevant endpoint when the API says relevant", () => {
    const records = loadFixture<{ records: Array<{ response: { result: DesignReport } }> }>(
      "random-evaluations.json",
    );
    const relevant = records.records
      .map((record) => record.response.result)
      .find((report) => report.recommendation === "relevant");
    expect(relevant).toBeTruthy();
    const banner = buildBanner(relevant!);
    expect(banner.recommendation).toBe("relevant");
    expect(banner.headline).toBe("Relevant endpoint recommended");
    expect(banner.detail).toContain(`${relevant!.n_total_relevant} subjects`);
  });
});

describe("result panels", () => {
  it("lists both sample sizes and the efficiency ratio", () => {
    const rows = buildSampleSizePanel(tuxedoReport);
    expect(rows.map((row) => row.label)).toEqual([
      "Composite endpoint trial",
      "Relevant endpoint trial",
      "Asymptotic relative efficiency",
    ]);
    expect(rows[0]?.value).toBe(`${tuxedoReport.n_total_composite} subjects`);
    expect(rows[1]?.value).toBe(`${tuxedoReport.n_total_relevant} subjects`);
    expect(rows[2]?.value).toBe(tuxedoReport.are.toFixed(3));
  });

  it("shows binary association diagnostics from the response", () => {
    const rows = buildDiagnosticsPanel(tuxedoReport);
    const labels = rows.map((row) => row.label);
    expect(labels).toContain("Composite event probability (control)");
    expect(labels).toContain("Feasible correlation, upper");
    const upper = rows.find((row) => row.label === "Feasible correlation, upper");
    expect(upper?.value).toBe(
      tuxedoReport.diagnostics["rho_upper_bound"]!.toFixed(4),
    );
  });

  it("shows the hazard-ratio diagnostic for survival scenarios", () => {
    const rows = buildDiagnosticsPanel(oasis6Report);
    const labels = rows.map((row) => row.label);
    expect(labels).toContain("Effective composite hazard ratio");
    expect(labels).toContain("Non-proportionality index");
    const hr = rows.find((row) => row.label === "Effective composite hazard ratio");
    expect(hr?.value).toBe(oasis6Report.effect_star.toFixed(4));
  });
});

describe("renderChart", () => {
  it("draws one polyline per feasible run and one circle per feasible cell", () => {
    const svg = renderChart(buildCurveModel(tuxedoSweep));
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.match(/<polyline /g)).toHaveLength(3);
    expect(svg.match(/<circle /g)).toHaveLength(46);
    expect(svg).toContain('stroke-dasharray="5 4"');
    expect(svg).toContain("ARE = 1");
  });

  it("exposes the exact API numbers as data attributes", () => {
    const svg = renderChart(buildCurveModel(tuxedoSweep));
    const first = tuxedoSweep.cells[0]!;
    expect(svg).toContain(`data-are="${String(first.report!.are)}"`);
    expect(svg).toContain(`data-n="${String(first.report!.n_total_composite)}"`);
    const last = tuxedoSweep.cells.filter((cell) => cell.report).at(-1)!;
    expect(svg).toContain(`data-are="${String(last.report!.are)}"`);
  });

  it("splits a series with an interior gap into separate polylines", () => {
    const model = buildCurveModel(tuxedoSweep);
    const series = model.series[0]!;
    const withGap = {
      ...model,
      series: [
        {
          ...series,
          points: series.points.map((p, i) => (i === 8 ? null : p)),
        },
      ],
    };
    const svg = renderChart(withGap);
    expect(svg.match(/<polyline /g)).toHaveLength(2);
    expect(svg.match(/<circle /g)).toHaveLength(15);
  });

  it("labels the x axis with the association name", () => {
    const svg = renderChart(buildCurveModel(oasis6Sweep));
    expect(svg).toContain(">spearman_rho</text>");
  });

  it("produces a legend entry per series in chart order", () => {
    const legend = chartLegend(buildCurveModel(tuxedoSweep));
    expect(legend.map((entry) => entry.label)).toEqual([
      "delta2 = 0.0049",
      "delta2 = 0.0098",
      "delta2 = 0.0147",
    ]);
    expect(new Set(legend.map((entry) => entry.color)).size).toBe(3);
  });
});
