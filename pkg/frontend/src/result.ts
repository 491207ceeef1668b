/**
 * Result pane: exactly one of {empty, result, error} is visible.
 * Clearing never touches the form.
 */

import type { PredictionResponse } from "./api.js";

export type PanelState = "empty" | "result" | "error";

export class ResultPanel {
  private resultBox: HTMLElement;
  private errorBox: HTMLElement;

  constructor(private root: HTMLElement) {
    this.root.innerHTML = "";
    this.resultBox = document.createElement("div");
    this.resultBox.className = "result-box";
    this.resultBox.hidden = true;
    this.errorBox = document.createElement("div");
    this.errorBox.className = "error-banner";
    this.errorBox.hidden = true;
    this.root.appendChild(this.resultBox);
    this.root.appendChild(this.errorBox);
  }

  state(): PanelState {
    if (!this.resultBox.hidden) return "result";
    if (!this.errorBox.hidden) return "error";
    return "empty";
  }

  showPrediction(response: PredictionResponse, targetLabel: string): void {
    this.resultBox.innerHTML = "";
    const headline = document.createElement("p");
    headline.className = "result-label";
    headline.textContent = `${targetLabel}: ${response.label}`;
    const score = document.createElement("p");
    score.className = "result-score";
    score.textContent = `Risk score ${response.score.toFixed(3)} (threshold ${response.threshold})`;
    const meta = document.createElement("p");
    meta.className = "result-meta";
    const algorithm = response.model?.["algorithm"];
    meta.textContent = algorithm ? `Model: ${String(algorithm)}` : "Model metadata unavailable";
    this.resultBox.append(headline, score, meta);
    this.resultBox.hidden = false;
    this.errorBox.hidden = true;
  }

  showSaved(id: number): void {
    this.resultBox.innerHTML = "";
    const note = document.createElement("p");
    note.className = "result-label";
    note.textContent = `Record #${id} saved`;
    this.resultBox.appendChild(note);
    this.resultBox.hidden = false;
    this.errorBox.hidden = true;
  }

  showError(message: string): void {
    this.errorBox.textContent = message;
    this.errorBox.hidden = false;
    this.resultBox.hidden = true;
  }

  clear(): void {
    this.resultBox.hidden = true;
    this.errorBox.hidden = true;
  }

  text(): string {
    return this.state() === "error"
      ? this.errorBox.textContent ?? ""
      : this.resultBox.textContent ?? "";
  }
}
