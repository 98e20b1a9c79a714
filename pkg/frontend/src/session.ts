// Client-side session state. Pure functions over a plain object so the
// word-buffer rules are testable without any DOM.

import type { PredictResponse } from "./api.js";

export const LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";

export type CaptureSession = {
  apiBase: string;
  image: string | null; // base64 PNG, no data: prefix
  results: PredictResponse | null;
  wordBuffer: string;
};

export function newSession(apiBase: string): CaptureSession {
  return { apiBase, image: null, results: null, wordBuffer: "" };
}

// A fresh image always invalidates previous results.
export function withImage(session: CaptureSession, image: string): CaptureSession {
  return { ...session, image, results: null };
}

export function clearImage(session: CaptureSession): CaptureSession {
  return { ...session, image: null, results: null };
}

export function withResults(
  session: CaptureSession,
  results: PredictResponse
): CaptureSession {
  if (session.image === null) {
    throw new Error("results without a captured image");
  }
  return { ...session, results };
}

export function topLetter(session: CaptureSession): string | null {
  const first = session.results?.predictions[0];
  return first ? first.letter : null;
}

export function addToWord(session: CaptureSession): CaptureSession {
  const letter = topLetter(session);
  if (letter === null || !LETTERS.includes(letter)) {
    return session;
  }
  return { ...session, wordBuffer: session.wordBuffer + letter };
}

export function backspaceWord(session: CaptureSession): CaptureSession {
  return { ...session, wordBuffer: session.wordBuffer.slice(0, -1) };
}

export function resetWord(session: CaptureSession): CaptureSession {
  return { ...session, wordBuffer: "" };
}
