/**
 * DOM layer: builds the controls, binds them to the store, and re-renders
 * the result panels whenever the store changes. All numbers shown are taken
 * from the store's last API responses.
 */

import { chartLegend, renderChart } from "./chart.js";
import {
  buildBanner,
  buildCurveModel,
  buildDiagnosticsPanel,
  buildSampleSizePanel,
} from "./curves.js";
import { PRESETS } from "./presets.js";
import { Store, StoreState, associationFieldName } from "./store.js";
import { Scenario } from "./types.js";

interface NumberFieldSpec {
  field: string;
  label: string;
  step: string;
  help?: string;
}

const BINARY_FIELDS: NumberFieldSpec[] = [
  { field: "p1", label: "P(relevant event), control arm", step: "0.001" },
  { field: "p2", label: "P(additional event), control arm", step: "0.001" },
  { field: "delta1", label: "Risk reduction, relevant", step: "0.0001" },
  { field: "delta2", label: "Risk reduction, additional", step: "0.0001" },
];

const SURVIVAL_FIELDS: NumberFieldSpec[] = [
  { field: "p1", label: "P(relevant event by τ), control arm", step: "0.001" },
  { field: "p2", label: "P(additional event by τ), control arm", step: "0.001" },
  { field: "hr1", label: "Hazard ratio, relevant", step: "0.01" },
  { field: "hr2", label: "Hazard ratio, additional", step: "0.01" },
  { field: "tau", label: "Follow-up horizon τ", step: "0.1" },
];

const COMMON_FIELDS: NumberFieldSpec[] = [
  { field: "alpha", label: "Significance level α", step: "0.005" },
  { field: "power", label: "Power 1−β", step: "0.01" },
];

const SHAPE_OPTIONS = ["constant", "increasing", "decreasing", "custom"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function scenarioValue(scenario: Scenario, field: string): unknown {
  return (scenario as unknown as Record<string, unknown>)[field];
}

export class UIController {
  private readonly root: HTMLElement;
  private readonly store: Store;
  private formKind: "binary" | "survival" | null = null;
  private readonly inputs = new Map<string, HTMLInputElement | HTMLSelectElement>();
  private readonly errorSpans = new Map<string, HTMLElement>();

  private formContainer!: HTMLElement;
  private assocSlider!: HTMLInputElement;
  private assocNumber!: HTMLInputElement;
  private assocBoundsNote!: HTMLElement;
  private levelsInput!: HTMLInputElement;
  private axisInput!: HTMLInputElement;
  private chartContainer!: HTMLElement;
  private legendContainer!: HTMLElement;
  private banner!: HTMLElement;
  private sampleSizePanel!: HTMLElement;
  private diagnosticsPanel!: HTMLElement;
  private statusBar!: HTMLElement;
  private staleBadge!: HTMLElement;
  private retryButton!: HTMLButtonElement;
  private generalErrors!: HTMLElement;
  private exportNote!: HTMLElement;

  constructor(root: HTMLElement, store: Store) {
    this.root = root;
    this.store = store;
    this.buildSkeleton();
    store.subscribe((state) => this.render(state));
    this.render(store.getState());
  }

  private buildSkeleton(): void {
    this.root.textContent = "";

    const header = el("header", "app-header");
    header.appendChild(el("h1", undefined, "Composite endpoint design explorer"));
    const subtitle = el(
      "p",
      "subtitle",
      "Anticipate component frequencies, effects, and their association; " +
        "compare the composite against the single relevant endpoint.",
    );
    header.appendChild(subtitle);
    const presetBar = el("div", "preset-bar");
    presetBar.appendChild(el("span", "preset-label", "Presets:"));
    for (const preset of PRESETS) {
      const button = el("button", "preset-button", preset.name);
      button.type = "button";
      button.title = preset.description;
      button.dataset["presetId"] = preset.id;
      button.addEventListener("click", () => {
        void this.store.loadPreset(preset.id);
      });
      presetBar.appendChild(button);
    }
    const kindToggle = el("div", "kind-toggle");
    for (const kind of ["binary", "survival"] as const) {
      const button = el(
        "button",
        "kind-button",
        kind === "binary" ? "Binary endpoints" : "Time-to-event endpoints",
      );
      button.type = "button";
      button.dataset["kind"] = kind;
      button.addEventListener("click", () => {
        void this.store.setKind(kind);
      });
      kindToggle.appendChild(button);
    }
    presetBar.appendChild(kindToggle);
    header.appendChild(presetBar);
    this.root.appendChild(header);

    const layout = el("div", "layout");

    const formSection = el("section", "panel form-panel");
    formSection.appendChild(el("h2", undefined, "Scenario"));
    this.formContainer = el("div", "form-fields");
    formSection.appendChild(this.formContainer);
    const ioBar = el("div", "io-bar");
    const exportButton = el("button", "io-button", "Export scenario");
    exportButton.type = "button";
    exportButton.addEventListener("click", () => this.onExport());
    ioBar.appendChild(exportButton);
    const importLabel = el("label", "io-button io-import", "Import scenario");
    const importInput = el("input") as HTMLInputElement;
    importInput.type = "file";
    importInput.accept = "application/json,.json";
    importInput.addEventListener("change", () => {
      const file = importInput.files && importInput.files[0];
      if (file) {
        void file.text().then((text) => {
          const { result } = this.store.importText(text);
          if (!result.ok) {
            this.exportNote.textContent = `Import rejected: ${result.errors
              .map((error) => `${error.field}: ${error.message}`)
              .join("; ")}`;
          } else {
            this.exportNote.textContent = "";
          }
          importInput.value = "";
        });
      }
    });
    importLabel.appendChild(importInput);
    ioBar.appendChild(importLabel);
    this.exportNote = el("span", "export-note");
    this.exportNote.setAttribute("role", "alert");
    ioBar.appendChild(this.exportNote);
    formSection.appendChild(ioBar);
    layout.appendChild(formSection);

    const resultsSection = el("section", "panel results-panel");
    this.banner = el("div", "banner");
    this.banner.setAttribute("role", "status");
    resultsSection.appendChild(this.banner);

    const chartBlock = el("div", "chart-block");
    chartBlock.appendChild(
      el("h2", undefined, "Relative efficiency across association"),
    );
    this.chartContainer = el("div", "chart-container");
    chartBlock.appendChild(this.chartContainer);
    this.legendContainer = el("div", "chart-legend");
    chartBlock.appendChild(this.legendContainer);

    const chartControls = el("div", "chart-controls");
    const levelsLabel = el("label", "chart-control");
    levelsLabel.appendChild(el("span", undefined, "Curve levels"));
    this.levelsInput = el("input") as HTMLInputElement;
    this.levelsInput.type = "text";
    this.levelsInput.addEventListener("change", () => {
      const levels = this.levelsInput.value
        .split(",")
        .map((token) => Number(token.trim()))
        .filter((value) => Number.isFinite(value));
      if (levels.length > 0) this.store.setChartLevels(levels);
    });
    levelsLabel.appendChild(this.levelsInput);
    chartControls.appendChild(levelsLabel);
    const axisLabel = el("label", "chart-control");
    axisLabel.appendChild(el("span", undefined, "Association axis (start:stop:step)"));
    this.axisInput = el("input") as HTMLInputElement;
    this.axisInput.type = "text";
    this.axisInput.addEventListener("change", () => {
      if (/^-?[\d.]+:-?[\d.]+:-?[\d.]+$/.test(this.axisInput.value.trim())) {
        this.store.setChartAxisSpec(this.axisInput.value.trim());
      }
    });
    axisLabel.appendChild(this.axisInput);
    chartControls.appendChild(axisLabel);
    chartBlock.appendChild(chartControls);
    resultsSection.appendChild(chartBlock);

    const panels = el("div", "result-panels");
    this.sampleSizePanel = el("div", "result-card");
    panels.appendChild(this.sampleSizePanel);
    this.diagnosticsPanel = el("div", "result-card");
    panels.appendChild(this.diagnosticsPanel);
    resultsSection.appendChild(panels);
    layout.appendChild(resultsSection);
    this.root.appendChild(layout);

    this.statusBar = el("div", "status-bar");
    this.staleBadge = el("span", "stale-badge", "Showing last good results");
    this.staleBadge.hidden = true;
    this.statusBar.appendChild(this.staleBadge);
    this.retryButton = el("button", "retry-button", "Retry") as HTMLButtonElement;
    this.retryButton.type = "button";
    this.retryButton.hidden = true;
    this.retryButton.addEventListener("click", () => {
      void this.store.refreshNow();
    });
    this.statusBar.appendChild(this.retryButton);
    this.generalErrors = el("span", "general-errors");
    this.generalErrors.setAttribute("role", "alert");
    this.statusBar.appendChild(this.generalErrors);
    this.root.appendChild(this.statusBar);
  }

  private buildForm(state: StoreState): void {
    this.formContainer.textContent = "";
    this.inputs.clear();
    this.errorSpans.clear();
    const scenario = state.scenario;
    this.formKind = scenario.kind;

    this.addTextField("label", "Label");
    const numberFields =
      scenario.kind === "binary" ? BINARY_FIELDS : SURVIVAL_FIELDS;
    for (const spec of numberFields) {
      this.addNumberField(spec);
    }
    if (scenario.kind === "survival") {
      this.addShapeField("shape1", "Hazard shape, relevant");
      this.addShapeField("shape2", "Hazard shape, additional");
      this.addCheckboxField(
        "eps1_terminal",
        "Relevant event ends observation (competing risk)",
      );
    }
    this.addAssociationField(state);
    for (const spec of COMMON_FIELDS) {
      this.addNumberField(spec);
    }
    this.addSelectField("sidedness", "Test sidedness", ["one", "two"]);
    if (scenario.kind === "binary") {
      this.addSelectField("variance_variant", "Variance under the null", [
        "pooled",
        "unpooled",
      ]);
    }
  }

  private fieldRow(field: string, label: string): HTMLElement {
    const row = el("div", "field-row");
    row.dataset["field"] = field;
    const caption = el("label", "field-label", label);
    caption.htmlFor = `field-${field}`;
    row.appendChild(caption);
    const errorSpan = el("span", "field-error");
    errorSpan.setAttribute("role", "alert");
    this.errorSpans.set(field, errorSpan);
    this.formContainer.appendChild(row);
    row.appendChild(errorSpan);
    return row;
  }

  private addTextField(field: string, label: string): void {
    const row = this.fieldRow(field, label);
    const input = el("input") as HTMLInputElement;
    input.type = "text";
    input.id = `field-${field}`;
    input.addEventListener("change", () => {
      this.store.setField(field, input.value);
    });
    this.inputs.set(field, input);
    row.insertBefore(input, this.errorSpans.get(field)!);
  }

  private addNumberField(spec: NumberFieldSpec): void {
    const row = this.fieldRow(spec.field, spec.label);
    const input = el("input") as HTMLInputElement;
    input.type = "number";
    input.step = spec.step;
    input.id = `field-${spec.field}`;
    input.addEventListener("input", () => {
      this.store.setField(spec.field, Number(input.value));
    });
    this.inputs.set(spec.field, input);
    row.insertBefore(input, this.errorSpans.get(spec.field)!);
  }

  private addSelectField(field: string, label: string, options: string[]): void {
    const row = this.fieldRow(field, label);
    const select = el("select") as HTMLSelectElement;
    select.id = `field-${field}`;
    for (const option of options) {
      const node = el("option", undefined, option) as HTMLOptionElement;
      node.value = option;
      select.appendChild(node);
    }
    select.addEventListener("change", () => {
      this.store.setField(field, select.value);
    });
    this.inputs.set(field, select);
    row.insertBefore(select, this.errorSpans.get(field)!);
  }

  private addCheckboxField(field: string, label: string): void {
    const row = this.fieldRow(field, label);
    const input = el("input") as HTMLInputElement;
    input.type = "checkbox";
    input.id = `field-${field}`;
    input.addEventListener("change", () => {
      this.store.setField(field, input.checked);
    });
    this.inputs.set(field, input);
    row.insertBefore(input, this.errorSpans.get(field)!);
  }

  private addShapeField(field: string, label: string): void {
    const row = this.fieldRow(field, label);
    const wrap = el("div", "shape-wrap");
    const select = el("select") as HTMLSelectElement;
    select.id = `field-${field}`;
    for (const option of SHAPE_OPTIONS) {
      const node = el("option", undefined, option) as HTMLOptionElement;
      node.value = option;
      select.appendChild(node);
    }
    const custom = el("input") as HTMLInputElement;
    custom.type = "number";
    custom.step = "0.1";
    custom.min = "0";
    custom.className = "shape-custom";
    custom.id = `field-${field}-custom`;
    const apply = () => {
      if (select.value === "custom") {
        custom.hidden = false;
        const value = Number(custom.value);
        if (Number.isFinite(value) && value > 0) {
          this.store.setField(field, value);
        }
      } else {
        custom.hidden = true;
        this.store.setField(field, select.value);
      }
    };
    select.addEventListener("change", apply);
    custom.addEventListener("input", apply);
    wrap.appendChild(select);
    wrap.appendChild(custom);
    this.inputs.set(field, select);
    this.inputs.set(`${field}-custom`, custom);
    row.insertBefore(wrap, this.errorSpans.get(field)!);
  }

  private addAssociationField(state: StoreState): void {
    const field = associationFieldName(state.scenario);
    const label =
      state.scenario.kind === "binary"
        ? "Correlation of the event indicators ρ"
        : "Rank correlation of the event times ρₛ";
    const row = this.fieldRow(field, label);
    const wrap = el("div", "assoc-wrap");
    this.assocSlider = el("input") as HTMLInputElement;
    this.assocSlider.type = "range";
    this.assocSlider.id = `field-${field}`;
    this.assocSlider.step = "0.001";
    this.assocSlider.addEventListener("input", () => {
      this.store.setAssociation(Number(this.assocSlider.value));
    });
    this.assocNumber = el("input") as HTMLInputElement;
    this.assocNumber.type = "number";
    this.assocNumber.step = "0.001";
    this.assocNumber.id = `field-${field}-number`;
    this.assocNumber.addEventListener("input", () => {
      this.store.setAssociation(Number(this.assocNumber.value));
    });
    this.assocBoundsNote = el("span", "assoc-bounds");
    wrap.appendChild(this.assocSlider);
    wrap.appendChild(this.assocNumber);
    wrap.appendChild(this.assocBoundsNote);
    this.inputs.set(field, this.assocSlider);
    row.insertBefore(wrap, this.errorSpans.get(field)!);
  }

  private onExport(): void {
    const outcome = this.store.exportCurrent();
    if (!outcome.ok) {
      this.exportNote.textContent = `Export blocked: ${outcome.errors
        .map((error) => `${error.field}: ${error.message}`)
        .join("; ")}`;
      return;
    }
    this.exportNote.textContent = "";
    const blob = new Blob([outcome.text], { type: "application/json" });
    const url = URL.createObjectURL(blob);
    const anchor = el("a") as HTMLAnchorElement;
    anchor.href = url;
    anchor.download = outcome.fileName;
    anchor.click();
    URL.revokeObjectURL(url);
  }

  private syncInput(
    input: HTMLInputElement | HTMLSelectElement,
    value: string,
  ): void {
    if (document.activeElement === input) return;
    if (input instanceof HTMLInputElement && input.type === "checkbox") {
      input.checked = value === "true";
      return;
    }
    if (input.value !== value) input.value = value;
  }

  private render(state: StoreState): void {
    if (this.formKind !== state.scenario.kind) {
      this.buildForm(state);
    }
    const scenario = state.scenario;

    for (const [field, input] of this.inputs.entries()) {
      if (field.endsWith("-custom")) {
        const base = field.slice(0, -"-custom".length);
        const value = scenarioValue(scenario, base);
        const custom = input as HTMLInputElement;
        custom.hidden = typeof value === "string";
        if (typeof value === "number") this.syncInput(custom, String(value));
        continue;
      }
      const value = scenarioValue(scenario, field);
      if (value === undefined) continue;
      if (field === "shape1" || field === "shape2") {
        this.syncInput(
          input,
          typeof value === "string" ? value : "custom",
        );
        continue;
      }
      this.syncInput(input, String(value));
    }

    const assocField = associationFieldName(scenario);
    const assocValue = scenarioValue(scenario, assocField) as number;
    this.assocSlider.min = String(state.bounds.lower);
    this.assocSlider.max = String(state.bounds.upper);
    this.syncInput(this.assocSlider, String(assocValue));
    this.assocNumber.min = String(state.bounds.lower);
    this.assocNumber.max = String(state.bounds.upper);
    this.syncInput(this.assocNumber, String(assocValue));
    this.assocBoundsNote.textContent =
      state.bounds.source === "api"
        ? `feasible: [${state.bounds.lower.toFixed(4)}, ${state.bounds.upper.toFixed(4)}]`
        : `domain: [${state.bounds.lower}, ${state.bounds.upper}]`;
    this.assocBoundsNote.title =
      state.bounds.source === "api"
        ? `Exact bounds from the API: [${state.bounds.lower}, ${state.bounds.upper}]`
        : "Schema domain; tighter bounds load with the first evaluation";

    for (const [field, span] of this.errorSpans.entries()) {
      const message = state.fieldErrors[field] ?? "";
      span.textContent = message;
      const row = span.parentElement;
      if (row) row.classList.toggle("has-error", message !== "");
    }

    for (const button of this.root.querySelectorAll<HTMLButtonElement>(
      ".preset-button",
    )) {
      button.classList.toggle(
        "active",
        button.dataset["presetId"] === state.presetId,
      );
    }
    for (const button of this.root.querySelectorAll<HTMLButtonElement>(
      ".kind-button",
    )) {
      button.classList.toggle(
        "active",
        button.dataset["kind"] === scenario.kind,
      );
    }

    this.levelsInput.value = state.chart.levels.join(", ");
    this.axisInput.value = state.chart.axisSpec;

    if (state.report) {
      const banner = buildBanner(state.report);
      this.banner.className = `banner banner-${banner.recommendation}`;
      this.banner.textContent = "";
      this.banner.appendChild(el("strong", undefined, banner.headline));
      this.banner.appendChild(el("span", undefined, banner.detail));
      this.banner.dataset["recommendation"] = banner.recommendation;

      this.sampleSizePanel.textContent = "";
      this.sampleSizePanel.appendChild(el("h3", undefined, "Sample size"));
      for (const rowData of buildSampleSizePanel(state.report)) {
        const row = el("div", "panel-row");
        row.appendChild(el("span", "panel-label", rowData.label));
        row.appendChild(el("span", "panel-value", rowData.value));
        this.sampleSizePanel.appendChild(row);
      }

      this.diagnosticsPanel.textContent = "";
      this.diagnosticsPanel.appendChild(
        el(
          "h3",
          undefined,
          state.report.kind === "survival"
            ? "Composite hazard-ratio diagnostic"
            : "Composite probability diagnostics",
        ),
      );
      for (const rowData of buildDiagnosticsPanel(state.report)) {
        const row = el("div", "panel-row");
        const labelSpan = el("span", "panel-label", rowData.label);
        if (rowData.title) labelSpan.title = rowData.title;
        row.appendChild(labelSpan);
        row.appendChild(el("span", "panel-value", rowData.value));
        this.diagnosticsPanel.appendChild(row);
      }
    }

    if (state.sweep) {
      const model = buildCurveModel(state.sweep);
      this.chartContainer.innerHTML = renderChart(model);
      this.legendContainer.textContent = "";
      for (const entry of chartLegend(model)) {
        const item = el("span", "legend-item");
        const swatch = el("span", "legend-swatch");
        swatch.style.backgroundColor = entry.color;
        item.appendChild(swatch);
        item.appendChild(el("span", undefined, entry.label));
        this.legendContainer.appendChild(item);
      }
      if (model.infeasible.length > 0) {
        this.legendContainer.appendChild(
          el(
            "span",
            "legend-note",
            `${model.infeasible.length} grid cells infeasible (outside the association bounds)`,
          ),
        );
      }
    }

    this.staleBadge.hidden = !state.stale;
    this.retryButton.hidden = state.transportError === null;
    this.generalErrors.textContent =
      state.transportError ?? state.fieldErrors["_general"] ?? "";
    this.root.classList.toggle("loading", state.loading);
  }
}
