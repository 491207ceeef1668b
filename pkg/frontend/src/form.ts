/**
 * Schema-driven entry form.
 *
 * The form is generated from the schema document the backend serves:
 * numeric features become number inputs, categorical and binned features
 * become selects whose options are exactly the declared levels (plus an
 * unselected placeholder).  Nothing in here knows the twelve default
 * fields — any schema renders without code changes.
 */

import type { FeatureDoc, SchemaDoc } from "./api.js";

export type Mode = "predict" | "enter-record";

const ERROR_CLASS = "field-error";

function labelText(feature: FeatureDoc): string {
  const pretty = feature.name.replace(/_/g, " ");
  const capitalized = pretty.charAt(0).toUpperCase() + pretty.slice(1);
  return feature.unit ? `${capitalized} (${feature.unit})` : capitalized;
}

export class FormView {
  private inputs = new Map<string, HTMLInputElement | HTMLSelectElement>();
  private outcomeSelect: HTMLSelectElement;
  private outcomeRow: HTMLElement;
  private submitButton: HTMLButtonElement;
  private modeInputs: HTMLInputElement[] = [];
  private mode: Mode = "predict";
  private busy = false;

  onSubmit: (() => void) | null = null;
  onModeChange: ((mode: Mode) => void) | null = null;

  constructor(
    private root: HTMLElement,
    private schema: SchemaDoc,
  ) {
    this.root.innerHTML = "";

    const modeBar = document.createElement("div");
    modeBar.className = "mode-bar";
    for (const mode of ["predict", "enter-record"] as Mode[]) {
      const label = document.createElement("label");
      const radio = document.createElement("input");
      radio.type = "radio";
      radio.name = "mode";
      radio.value = mode;
      radio.checked = mode === this.mode;
      radio.addEventListener("change", () => this.setMode(mode));
      label.appendChild(radio);
      label.appendChild(
        document.createTextNode(mode === "predict" ? " Predict" : " Enter record"),
      );
      modeBar.appendChild(label);
      this.modeInputs.push(radio);
    }
    this.root.appendChild(modeBar);

    const form = document.createElement("form");
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      if (this.onSubmit) this.onSubmit();
    });

    for (const feature of schema.features) {
      form.appendChild(this.fieldRow(feature));
    }

    this.outcomeSelect = document.createElement("select");
    this.outcomeSelect.name = "outcome";
    const noOutcome = document.createElement("option");
    noOutcome.value = "";
    noOutcome.textContent = "(not recorded)";
    this.outcomeSelect.appendChild(noOutcome);
    for (const level of schema.target_levels) {
      const option = document.createElement("option");
      option.value = level;
      option.textContent = level;
      this.outcomeSelect.appendChild(option);
    }
    this.outcomeRow = document.createElement("div");
    this.outcomeRow.className = "field-row outcome-row";
    const outcomeLabel = document.createElement("label");
    outcomeLabel.textContent = `${schema.target.replace(/_/g, " ")} outcome`;
    this.outcomeRow.appendChild(outcomeLabel);
    this.outcomeRow.appendChild(this.outcomeSelect);
    this.outcomeRow.hidden = true;
    form.appendChild(this.outcomeRow);

    this.submitButton = document.createElement("button");
    this.submitButton.type = "submit";
    this.submitButton.textContent = "Submit";
    this.submitButton.disabled = true;
    form.appendChild(this.submitButton);

    this.root.appendChild(form);
  }

  private fieldRow(feature: FeatureDoc): HTMLElement {
    const row = document.createElement("div");
    row.className = "field-row";
    row.dataset.feature = feature.name;

    const label = document.createElement("label");
    label.textContent = labelText(feature);
    label.htmlFor = `field-${feature.name}`;
    row.appendChild(label);

    let input: HTMLInputElement | HTMLSelectElement;
    if (feature.kind === "numeric") {
      input = document.createElement("input");
      input.type = "number";
      input.step = "any";
    } else {
      input = document.createElement("select");
      const placeholder = document.createElement("option");
      placeholder.value = "";
      placeholder.textContent = "(choose)";
      placeholder.disabled = true;
      placeholder.selected = true;
      input.appendChild(placeholder);
      for (const level of feature.levels) {
        const option = document.createElement("option");
        option.value = level;
        option.textContent = level;
        input.appendChild(option);
      }
    }
    input.id = `field-${feature.name}`;
    input.name = feature.name;
    input.addEventListener("input", () => this.refreshSubmitState());
    input.addEventListener("change", () => this.refreshSubmitState());

    const message = document.createElement("span");
    message.className = "field-message";

    row.appendChild(input);
    row.appendChild(message);
    this.inputs.set(feature.name, input);
    return row;
  }

  /** Current values as a schema-keyed map of strings; unset fields are "". */
  values(): Record<string, string> {
    const out: Record<string, string> = {};
    for (const [name, input] of this.inputs) {
      out[name] = input.value.trim();
    }
    return out;
  }

  setValues(values: Record<string, string>): void {
    for (const [name, value] of Object.entries(values)) {
      const input = this.inputs.get(name);
      if (input) input.value = value;
    }
    this.refreshSubmitState();
  }

  outcome(): string | null {
    return this.outcomeSelect.value === "" ? null : this.outcomeSelect.value;
  }

  isComplete(): boolean {
    for (const input of this.inputs.values()) {
      if (input.value.trim() === "") return false;
    }
    return true;
  }

  currentMode(): Mode {
    return this.mode;
  }

  setMode(mode: Mode): void {
    this.mode = mode;
    this.outcomeRow.hidden = mode !== "enter-record";
    for (const radio of this.modeInputs) {
      radio.checked = radio.value === mode;
    }
    if (this.onModeChange) this.onModeChange(mode);
  }

  setBusy(busy: boolean): void {
    this.busy = busy;
    this.refreshSubmitState();
  }

  isBusy(): boolean {
    return this.busy;
  }

  refreshSubmitState(): void {
    this.submitButton.disabled = this.busy || !this.isComplete();
  }

  submitDisabled(): boolean {
    return this.submitButton.disabled;
  }

  highlightProblems(fields: Record<string, string>): void {
    this.clearHighlights();
    for (const [name, problem] of Object.entries(fields)) {
      const input = this.inputs.get(name);
      if (!input) continue;
      input.classList.add(ERROR_CLASS);
      const message = input.parentElement?.querySelector(".field-message");
      if (message) message.textContent = problem;
    }
  }

  clearHighlights(): void {
    for (const input of this.inputs.values()) {
      input.classList.remove(ERROR_CLASS);
      const message = input.parentElement?.querySelector(".field-message");
      if (message) message.textContent = "";
    }
  }

  highlightedFields(): string[] {
    return [...this.inputs.entries()]
      .filter(([, input]) => input.classList.contains(ERROR_CLASS))
      .map(([name]) => name);
  }

  clearValues(): void {
    for (const input of this.inputs.values()) {
      input.value = "";
    }
    this.outcomeSelect.value = "";
    this.refreshSubmitState();
  }
}
