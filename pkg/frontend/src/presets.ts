/**
 * Bundled case-study presets: one click restores either shipped scenario
 * document together with its default chart configuration.
 *
 * The embedded text is byte-identical to the scenario files that ship with
 * the engine, so exporting a freshly loaded preset reproduces the file.
 */

import { importScenario } from "./scenario.js";
import { Scenario } from "./types.js";

export interface PresetChartConfig {
  /** Association axis as a server-side "start:stop:step" range. */
  axisSpec: string;
  /** Secondary-effect levels, one chart line each (delta2 or hr2 values). */
  levels: number[];
}

export interface Preset {
  id: string;
  name: string;
  description: string;
  text: string;
  chart: PresetChartConfig;
}

const TUXEDO_TEXT = `{
  "kind": "binary",
  "label": "TUXEDO case study (binary endpoints, weak association)",
  "p1": 0.059,
  "p2": 0.032,
  "delta1": 0.0196,
  "delta2": 0.0098,
  "rho": 0.1,
  "alpha": 0.05,
  "power": 0.8,
  "sidedness": "one",
  "variance_variant": "pooled"
}
`;

const OASIS6_TEXT = `{
  "kind": "survival",
  "label": "OASIS-6 case study (time-to-event endpoints)",
  "p1": 0.125,
  "p2": 0.05,
  "shape1": "constant",
  "shape2": "constant",
  "hr1": 0.83,
  "hr2": 0.66,
  "spearman_rho": 0.7,
  "tau": 1.0,
  "eps1_terminal": true,
  "alpha": 0.05,
  "power": 0.8,
  "sidedness": "one"
}
`;

export const PRESETS: Preset[] = [
  {
    id: "tuxedo",
    name: "Stent trial (binary)",
    description:
      "Two binary endpoints with a small additional effect; the association decides the endpoint choice.",
    text: TUXEDO_TEXT,
    chart: {
      axisSpec: "0:0.72:0.048",
      levels: [0.0049, 0.0098, 0.0147],
    },
  },
  {
    id: "oasis6",
    name: "Anticoagulant trial (time-to-event)",
    description:
      "Death plus a nonfatal event under competing risks; composite wins across hazard shapes.",
    text: OASIS6_TEXT,
    chart: {
      axisSpec: "0:0.9:0.06",
      levels: [0.56, 0.66, 0.76],
    },
  },
];

export function presetById(id: string): Preset {
  const preset = PRESETS.find((candidate) => candidate.id === id);
  if (!preset) {
    throw new Error(`unknown preset '${id}'`);
  }
  return preset;
}

export function presetScenario(id: string): Scenario {
  return importScenario(presetById(id).text);
}

/** Default chart configuration for scenarios that did not come from a preset. */
export function defaultChartConfig(scenario: Scenario): PresetChartConfig {
  if (scenario.kind === "binary") {
    return { axisSpec: "0:0.72:0.048", levels: [scenario.delta2] };
  }
  return { axisSpec: "0:0.9:0.06", levels: [scenario.hr2] };
}
