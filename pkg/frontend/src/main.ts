/**
 * Application wiring: load the schema, build the form, route submissions.
 *
 * At most one request is in flight per form; the submit button stays
 * disabled while pending.  Every prediction shown comes from a backend
 * response — there is no client-side model logic.
 */

import { ApiClient, ValidationError, type SchemaDoc } from "./api.js";
import { FormView } from "./form.js";
import { ResultPanel } from "./result.js";

export interface App {
  form: FormView;
  panel: ResultPanel;
  schema: SchemaDoc;
}

function targetHeadline(schema: SchemaDoc): string {
  const pretty = schema.target.replace(/_/g, " ");
  return `${pretty.charAt(0).toUpperCase()}${pretty.slice(1)} or not`;
}

export async function bootstrap(root: HTMLElement, client: ApiClient): Promise<App | null> {
  root.innerHTML = "";

  let schema: SchemaDoc;
  try {
    schema = await client.schema();
  } catch (error) {
    const banner = document.createElement("div");
    banner.className = "error-banner";
    banner.textContent = `Cannot reach the prediction service (${String(error)})`;
    const retry = document.createElement("button");
    retry.className = "retry-button";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => void bootstrap(root, client));
    root.append(banner, retry);
    return null;
  }

  const formRoot = document.createElement("div");
  formRoot.className = "form-root";
  const panelRoot = document.createElement("div");
  panelRoot.className = "panel-root";
  const clearButton = document.createElement("button");
  clearButton.type = "button";
  clearButton.className = "clear-button";
  clearButton.textContent = "Clear result";
  root.append(formRoot, panelRoot, clearButton);

  const form = new FormView(formRoot, schema);
  const panel = new ResultPanel(panelRoot);
  clearButton.addEventListener("click", () => panel.clear());

  form.onSubmit = async () => {
    if (form.isBusy() || !form.isComplete()) return;
    form.clearHighlights();
    form.setBusy(true);
    const values = form.values();
    try {
      if (form.currentMode() === "predict") {
        const response = await client.predict(values);
        panel.showPrediction(response, targetHeadline(schema));
      } else {
        const saved = await client.submitRecord(values, form.outcome());
        panel.showSaved(saved.id);
        form.clearValues();
      }
    } catch (error) {
      if (error instanceof ValidationError) {
        form.highlightProblems(error.fields);
        panel.showError("Some fields need attention");
      } else {
        // Failed saves keep the form contents; nothing is cleared here.
        panel.showError(`Request failed: ${String(error)}`);
      }
    } finally {
      form.setBusy(false);
    }
  };

  return { form, panel, schema };
}

declare global {
  interface Window {
    aefikitApp?: Promise<App | null>;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const root = document.getElementById("app") as HTMLElement;
  window.aefikitApp = bootstrap(root, new ApiClient(""));
}
