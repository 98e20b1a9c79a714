import { describe, expect, it } from "vitest";

import { checkHealth, predict, retryable, type FetchLike } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" }
  });
}

describe("predict client", () => {
  it("posts the expected payload and parses a success", async () => {
    let seenUrl = "";
    let seenBody: any = null;
    const fetchImpl: FetchLike = async (url, init) => {
      seenUrl = url;
      seenBody = JSON.parse(init!.body as string);
      return jsonResponse(200, {
        predictions: [
          { letter: "A", confidence: 0.91 },
          { letter: "R", confidence: 0.05 }
        ],
        model_id: "ckpt",
        latency_ms: 4.2
      });
    };

    const result = await predict("http://svc", "aGVsbG8=", 2, fetchImpl);
    expect(seenUrl).toBe("http://svc/v1/predict");
    expect(seenBody).toEqual({
      image_data: "aGVsbG8=",
      content_type: "image/png",
      top_k: 2
    });
    expect(result.ok).toBe(true);
    if (result.ok) {
      expect(result.data.predictions[0].letter).toBe("A");
    }
  });

  it("surfaces the service error code on 4xx", async () => {
    const fetchImpl: FetchLike = async () =>
      jsonResponse(400, { error: "bad_image", detail: "undecodable image payload" });
    const result = await predict("", "zzzz", 3, fetchImpl);
    expect(result.ok).toBe(false);
    if (!result.ok && result.error.kind === "http") {
      expect(result.error.status).toBe(400);
      expect(result.error.code).toBe("bad_image");
      expect(retryable(result.error)).toBe(false);
    }
  });

  it("marks 503 and network failures as retryable", async () => {
    const unavailable: FetchLike = async () =>
      jsonResponse(503, { error: "model_unavailable", detail: "" });
    const down: FetchLike = async () => {
      throw new TypeError("fetch failed");
    };

    const r1 = await predict("", "aa==", 3, unavailable);
    const r2 = await predict("", "aa==", 3, down);
    expect(!r1.ok && retryable(r1.error)).toBe(true);
    expect(!r2.ok && r2.error.kind === "network" && retryable(r2.error)).toBe(true);
  });

  it("tolerates a non-JSON error body", async () => {
    const fetchImpl: FetchLike = async () => new Response("boom", { status: 500 });
    const result = await predict("", "aa==", 3, fetchImpl);
    expect(!result.ok && result.error.kind === "http" && result.error.code).toBe("unknown");
  });
});

describe("health client", () => {
  it("maps 200/503/network to ready flags", async () => {
    const ok: FetchLike = async () => jsonResponse(200, { status: "ok" });
    const busy: FetchLike = async () => jsonResponse(503, { status: "unavailable" });
    const dead: FetchLike = async () => {
      throw new Error("refused");
    };
    expect(await checkHealth("", ok)).toBe(true);
    expect(await checkHealth("", busy)).toBe(false);
    expect(await checkHealth("", dead)).toBe(false);
  });
});
