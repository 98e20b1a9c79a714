// Thin client for the prediction service. All transport errors are
// returned as values so the UI can decide between an inline message
// (client mistakes) and a retry banner (service trouble).

export type Prediction = {
  letter: string;
  confidence: number;
};

export type PredictResponse = {
  predictions: Prediction[];
  model_id: string;
  latency_ms: number;
};

export type ApiFailure =
  | { kind: "http"; status: number; code: string; detail: string }
  | { kind: "network"; message: string };

export type PredictResult =
  | { ok: true; data: PredictResponse }
  | { ok: false; error: ApiFailure };

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export function retryable(error: ApiFailure): boolean {
  return error.kind === "network" || error.status >= 500;
}

export async function predict(
  apiBase: string,
  imageBase64: string,
  topK: number = 3,
  fetchImpl: FetchLike = fetch
): Promise<PredictResult> {
  let response: Response;
  try {
    response = await fetchImpl(`${apiBase}/v1/predict`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        image_data: imageBase64,
        content_type: "image/png",
        top_k: topK
      })
    });
  } catch (err) {
    return { ok: false, error: { kind: "network", message: String(err) } };
  }

  if (!response.ok) {
    let code = "unknown";
    let detail = "";
    try {
      const body = await response.json();
      code = body.error ?? code;
      detail = body.detail ?? "";
    } catch {
      // non-JSON error body, keep defaults
    }
    return { ok: false, error: { kind: "http", status: response.status, code, detail } };
  }

  const data = (await response.json()) as PredictResponse;
  return { ok: true, data };
}

export async function checkHealth(
  apiBase: string,
  fetchImpl: FetchLike = fetch
): Promise<boolean> {
  try {
    const response = await fetchImpl(`${apiBase}/v1/health`);
    return response.ok;
  } catch {
    return false;
  }
}
