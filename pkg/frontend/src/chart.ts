/**
 * Dependency-free SVG line chart for the ARE-versus-association view.
 *
 * Pure geometry: the data values plotted are exactly the numbers the API
 * returned (exposed per point as data attributes for inspection); only the
 * pixel mapping happens here.
 */

import { CurveModel, CurvePoint } from "./curves.js";

export interface ChartOptions {
  width: number;
  height: number;
  marginLeft: number;
  marginRight: number;
  marginTop: number;
  marginBottom: number;
}

export const DEFAULT_CHART: ChartOptions = {
  width: 640,
  height: 360,
  marginLeft: 56,
  marginRight: 16,
  marginTop: 16,
  marginBottom: 44,
};

const SERIES_COLORS = ["#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed", "#0891b2"];

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

interface Scale {
  (value: number): number;
}

function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (value: number) => r0 + ((value - d0) / span) * (r1 - r0);
}

function ticks(lo: number, hi: number, count: number): number[] {
  const result: number[] = [];
  for (let i = 0; i < count; i += 1) {
    result.push(lo + ((hi - lo) * i) / (count - 1));
  }
  return result;
}

/** Split a series at infeasible gaps into runs of consecutive points. */
function feasibleRuns(points: Array<CurvePoint | null>): CurvePoint[][] {
  const runs: CurvePoint[][] = [];
  let current: CurvePoint[] = [];
  for (const point of points) {
    if (point === null) {
      if (current.length > 0) runs.push(current);
      current = [];
    } else {
      current.push(point);
    }
  }
  if (current.length > 0) runs.push(current);
  return runs;
}

export function renderChart(
  model: CurveModel,
  options: ChartOptions = DEFAULT_CHART,
): string {
  const { width, height, marginLeft, marginRight, marginTop, marginBottom } =
    options;
  const innerW = width - marginLeft - marginRight;
  const innerH = height - marginTop - marginBottom;

  const allPoints = model.series.flatMap((series) =>
    series.points.filter((p): p is CurvePoint => p !== null),
  );
  const xs = model.xValues;
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  // The decision threshold ARE = 1 is always kept in view.
  const areValues = allPoints.map((p) => p.are).concat([1]);
  const yLo = Math.min(...areValues);
  const yHi = Math.max(...areValues);
  const pad = (yHi - yLo || 0.1) * 0.06;
  const x = linearScale(xLo, xHi, marginLeft, marginLeft + innerW);
  const y = linearScale(yLo - pad, yHi + pad, marginTop + innerH, marginTop);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `role="img" aria-label="Relative efficiency of the composite versus the ${escapeXml(model.associationName)} association" ` +
      `class="are-chart">`,
  );
  parts.push(
    `<rect x="${marginLeft}" y="${marginTop}" width="${innerW}" height="${innerH}" class="chart-plot" fill="none" stroke="#d4d4d8"/>`,
  );

  for (const tick of ticks(xLo, xHi, 6)) {
    const px = x(tick);
    parts.push(
      `<line x1="${px.toFixed(2)}" y1="${marginTop + innerH}" x2="${px.toFixed(2)}" y2="${marginTop + innerH + 5}" stroke="#71717a"/>`,
    );
    parts.push(
      `<text x="${px.toFixed(2)}" y="${marginTop + innerH + 20}" text-anchor="middle" class="chart-tick">${tick.toFixed(2)}</text>`,
    );
  }
  for (const tick of ticks(yLo - pad, yHi + pad, 5)) {
    const py = y(tick);
    parts.push(
      `<line x1="${marginLeft - 5}" y1="${py.toFixed(2)}" x2="${marginLeft}" y2="${py.toFixed(2)}" stroke="#71717a"/>`,
    );
    parts.push(
      `<text x="${marginLeft - 9}" y="${(py + 4).toFixed(2)}" text-anchor="end" class="chart-tick">${tick.toFixed(2)}</text>`,
    );
  }
  parts.push(
    `<text x="${marginLeft + innerW / 2}" y="${height - 6}" text-anchor="middle" class="chart-axis-label">${escapeXml(model.associationName)}</text>`,
  );
  parts.push(
    `<text x="14" y="${marginTop + innerH / 2}" text-anchor="middle" class="chart-axis-label" transform="rotate(-90 14 ${marginTop + innerH / 2})">ARE</text>`,
  );

  // Decision threshold: above this line the composite needs fewer subjects.
  const yOne = y(1);
  if (yOne >= marginTop && yOne <= marginTop + innerH) {
    parts.push(
      `<line x1="${marginLeft}" y1="${yOne.toFixed(2)}" x2="${marginLeft + innerW}" y2="${yOne.toFixed(2)}" stroke="#71717a" stroke-dasharray="5 4" class="chart-threshold"/>`,
    );
    parts.push(
      `<text x="${marginLeft + innerW - 4}" y="${(yOne - 5).toFixed(2)}" text-anchor="end" class="chart-tick">ARE = 1</text>`,
    );
  }

  model.series.forEach((series, seriesIndex) => {
    const color = SERIES_COLORS[seriesIndex % SERIES_COLORS.length];
    for (const run of feasibleRuns(series.points)) {
      if (run.length > 1) {
        const pointsAttr = run
          .map((p) => `${x(p.x).toFixed(2)},${y(p.are).toFixed(2)}`)
          .join(" ");
        parts.push(
          `<polyline points="${pointsAttr}" fill="none" stroke="${color}" stroke-width="2" class="chart-series chart-series-${seriesIndex}"/>`,
        );
      }
      for (const p of run) {
        parts.push(
          `<circle cx="${x(p.x).toFixed(2)}" cy="${y(p.are).toFixed(2)}" r="3" fill="${color}" ` +
            `data-x="${String(p.x)}" data-are="${String(p.are)}" data-n="${String(p.nTotalComposite)}" class="chart-point">` +
            `<title>${escapeXml(`${model.associationName} = ${String(p.x)}: ARE ${p.are.toFixed(3)}, n = ${p.nTotalComposite} (${p.recommendation})`)}</title></circle>`,
        );
      }
    }
  });

  parts.push("</svg>");
  return parts.join("");
}

export interface LegendEntry {
  label: string;
  color: string;
}

export function chartLegend(model: CurveModel): LegendEntry[] {
  return model.series.map((series, index) => ({
    label: series.label,
    color: SERIES_COLORS[index % SERIES_COLORS.length] ?? "#000000",
  }));
}
