/**
 * Typed client for the prediction service.
 *
 * Every request body is a plain map of schema feature names to string
 * values — the client adds nothing and strips nothing, so recorded
 * traffic matches the form state exactly.
 */

export interface FeatureDoc {
  name: string;
  kind: "numeric" | "categorical" | "binned";
  levels: string[];
  unit?: string | null;
  unknown_level?: string | null;
  missing_policy?: string;
}

export interface SchemaDoc {
  features: FeatureDoc[];
  target: string;
  target_levels: [string, string];
  max_age_days?: number;
  age_feature?: string;
}

export interface PredictionResponse {
  label: string;
  score: number;
  threshold: number;
  model: Record<string, unknown>;
}

export interface RecordSavedResponse {
  id: number;
}

/** A non-2xx response with a parsed body. */
export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** 422 responses carry a per-field problem map for form highlighting. */
export class ValidationError extends ApiError {
  constructor(public fields: Record<string, string>) {
    super(422, `invalid fields: ${Object.keys(fields).join(", ")}`);
  }
}

async function parseError(response: Response): Promise<never> {
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    // non-JSON error body; fall through to the generic error
  }
  if (response.status === 422 && body && typeof body === "object" && "fields" in body) {
    throw new ValidationError((body as { fields: Record<string, string> }).fields);
  }
  const detail =
    body && typeof body === "object" && "error" in body
      ? String((body as { error: unknown }).error)
      : response.statusText;
  throw new ApiError(response.status, detail || `HTTP ${response.status}`);
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  private async post<T>(path: string, payload: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  schema(): Promise<SchemaDoc> {
    return this.get<SchemaDoc>("/api/v1/schema");
  }

  predict(features: Record<string, string>): Promise<PredictionResponse> {
    return this.post<PredictionResponse>("/api/v1/predict", { features });
  }

  submitRecord(
    features: Record<string, string>,
    outcome: string | null,
  ): Promise<RecordSavedResponse> {
    return this.post<RecordSavedResponse>("/api/v1/records", { features, outcome });
  }
}
