import { describe, expect, it } from "vitest";

import type { PredictResponse } from "../src/api.js";
import {
  addToWord,
  backspaceWord,
  clearImage,
  newSession,
  resetWord,
  topLetter,
  withImage,
  withResults
} from "../src/session.js";

function results(letters: string[]): PredictResponse {
  return {
    predictions: letters.map((letter, i) => ({ letter, confidence: 0.9 - i * 0.1 })),
    model_id: "m",
    latency_ms: 1.0
  };
}

describe("capture session", () => {
  it("starts empty", () => {
    const s = newSession("http://api");
    expect(s.image).toBeNull();
    expect(s.results).toBeNull();
    expect(s.wordBuffer).toBe("");
  });

  it("new image invalidates old results", () => {
    let s = withImage(newSession(""), "aaaa");
    s = withResults(s, results(["A"]));
    s = withImage(s, "bbbb");
    expect(s.results).toBeNull();
    expect(s.image).toBe("bbbb");
  });

  it("results require an image", () => {
    expect(() => withResults(newSession(""), results(["A"]))).toThrow();
  });

  it("clearImage drops both image and results", () => {
    let s = withResults(withImage(newSession(""), "x"), results(["B"]));
    s = clearImage(s);
    expect(s.image).toBeNull();
    expect(s.results).toBeNull();
  });

  it("add-to-word appends the top letter only", () => {
    let s = withResults(withImage(newSession(""), "x"), results(["A", "R", "S"]));
    expect(topLetter(s)).toBe("A");
    s = addToWord(s);
    s = withResults(withImage(s, "y"), results(["B", "A"]));
    s = addToWord(s);
    expect(s.wordBuffer).toBe("AB");
  });

  it("add-to-word is a no-op without results or with a bad letter", () => {
    const empty = addToWord(newSession(""));
    expect(empty.wordBuffer).toBe("");
    const bad = addToWord(withResults(withImage(newSession(""), "x"), results(["?"])));
    expect(bad.wordBuffer).toBe("");
  });

  it("backspace and reset mirror the speller commands", () => {
    let s = newSession("");
    for (const letter of ["H", "E", "J"]) {
      s = withResults(withImage(s, "x"), results([letter]));
      s = addToWord(s);
    }
    expect(s.wordBuffer).toBe("HEJ");
    s = backspaceWord(s);
    expect(s.wordBuffer).toBe("HE");
    s = backspaceWord(backspaceWord(backspaceWord(s)));
    expect(s.wordBuffer).toBe("");
    s = withResults(withImage(s, "x"), results(["A"]));
    s = addToWord(s);
    expect(resetWord(s).wordBuffer).toBe("");
  });
});
