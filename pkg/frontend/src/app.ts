// Single-page application with three views: home (choose capture mode),
// capture (webcam or upload, preview, re-take), results (ranked list
// plus the word-assembly panel).

import { predict, retryable, type ApiFailure, type FetchLike } from "./api.js";
import { grabFrame, openCamera, readImageFile, stopCamera } from "./capture.js";
import {
  addToWord,
  backspaceWord,
  clearImage,
  newSession,
  resetWord,
  withImage,
  withResults,
  type CaptureSession
} from "./session.js";

export type AppOptions = {
  apiBase: string;
  fetchImpl?: FetchLike;
};

export type View = "home" | "capture" | "results";

const TEMPLATE = `
  <section id="view-home">
    <h1>Sign alphabet reader</h1>
    <p>Show a hand sign to your webcam, or upload a picture of one.</p>
    <button id="btn-webcam">Use webcam</button>
    <button id="btn-upload">Upload image</button>
  </section>

  <section id="view-capture" hidden>
    <video id="camera" autoplay playsinline muted hidden></video>
    <button id="btn-grab" hidden>Take picture</button>
    <input id="file-input" type="file" accept="image/*" hidden />
    <p id="capture-error" class="error" hidden></p>
    <div id="preview-box" hidden>
      <img id="preview" alt="captured sign" />
      <button id="btn-retake">Re-take</button>
      <button id="btn-submit">Submit</button>
    </div>
    <button id="btn-home">Back</button>
  </section>

  <section id="view-results" hidden>
    <div id="retry-banner" class="banner" hidden>
      <span id="retry-message"></span>
      <button id="btn-retry">Retry</button>
    </div>
    <p id="submit-error" class="error" hidden></p>
    <ol id="ranking"></ol>
    <div id="word-panel">
      <span>Word: </span><strong id="word-buffer"></strong>
      <button id="btn-add">Add to word</button>
      <button id="btn-backspace">Backspace</button>
      <button id="btn-reset">Reset</button>
    </div>
    <button id="btn-again">Capture another</button>
  </section>
`;

export class App {
  session: CaptureSession;
  root: HTMLElement;
  private fetchImpl: FetchLike;
  private inflight: Promise<void> | null = null;

  constructor(root: HTMLElement, options: AppOptions) {
    this.root = root;
    this.session = newSession(options.apiBase);
    this.fetchImpl = options.fetchImpl ?? fetch.bind(globalThis);
    root.innerHTML = TEMPLATE;
    this.wire();
    this.show("home");
  }

  private el<T extends HTMLElement>(id: string): T {
    const node = this.root.querySelector(`#${id}`);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  }

  private wire(): void {
    this.el("btn-webcam").onclick = () => void this.startWebcam();
    this.el("btn-upload").onclick = () => this.startUpload();
    this.el("btn-grab").onclick = () => this.grab();
    this.el<HTMLInputElement>("file-input").onchange = () => void this.fileChosen();
    this.el("btn-retake").onclick = () => this.retake();
    this.el("btn-submit").onclick = () => void this.submit();
    this.el("btn-retry").onclick = () => void this.submit();
    this.el("btn-home").onclick = () => this.goHome();
    this.el("btn-again").onclick = () => this.captureAnother();
    this.el("btn-add").onclick = () => this.updateWord(addToWord);
    this.el("btn-backspace").onclick = () => this.updateWord(backspaceWord);
    this.el("btn-reset").onclick = () => this.updateWord(resetWord);
  }

  show(view: View): void {
    for (const name of ["home", "capture", "results"] as const) {
      this.el(`view-${name}`).hidden = name !== view;
    }
  }

  currentView(): View {
    for (const name of ["home", "capture", "results"] as const) {
      if (!this.el(`view-${name}`).hidden) return name;
    }
    return "home";
  }

  // Resolves once any in-flight prediction settles; used by tests.
  async idle(): Promise<void> {
    while (this.inflight) {
      await this.inflight;
    }
  }

  private async startWebcam(): Promise<void> {
    this.show("capture");
    const video = this.el<HTMLVideoElement>("camera");
    try {
      await openCamera(video);
      video.hidden = false;
      this.el("btn-grab").hidden = false;
      this.setCaptureError(null);
    } catch (err) {
      // Permission denied or no device: leave the upload path open.
      this.setCaptureError(`Camera unavailable (${String(err)}). You can upload an image instead.`);
      this.el<HTMLInputElement>("file-input").hidden = false;
    }
  }

  private startUpload(): void {
    this.show("capture");
    this.setCaptureError(null);
    this.el<HTMLInputElement>("file-input").hidden = false;
  }

  private grab(): void {
    try {
      this.setImage(grabFrame(this.el<HTMLVideoElement>("camera")));
    } catch (err) {
      this.setCaptureError(String(err));
    }
  }

  private async fileChosen(): Promise<void> {
    const input = this.el<HTMLInputElement>("file-input");
    const file = input.files?.[0];
    if (!file) return;
    try {
      this.setImage(await readImageFile(file));
    } catch (err) {
      this.setCaptureError(String(err instanceof Error ? err.message : err));
    }
    input.value = "";
  }

  setImage(imageBase64: string): void {
    this.session = withImage(this.session, imageBase64);
    const preview = this.el<HTMLImageElement>("preview");
    preview.src = `data:image/png;base64,${imageBase64}`;
    this.el("preview-box").hidden = false;
    this.setCaptureError(null);
  }

  private retake(): void {
    this.session = clearImage(this.session);
    this.el("preview-box").hidden = true;
  }

  private goHome(): void {
    stopCamera(this.el<HTMLVideoElement>("camera"));
    this.retake();
    this.show("home");
  }

  private captureAnother(): void {
    this.retake();
    this.hideResultErrors();
    this.show("capture");
    const input = this.el<HTMLInputElement>("file-input");
    if (this.el<HTMLVideoElement>("camera").hidden) input.hidden = false;
  }

  async submit(): Promise<void> {
    if (this.inflight || this.session.image === null) return;
    const button = this.el<HTMLButtonElement>("btn-submit");
    const retry = this.el<HTMLButtonElement>("btn-retry");
    button.disabled = retry.disabled = true;
    this.inflight = this.runPredict().finally(() => {
      this.inflight = null;
      button.disabled = retry.disabled = false;
    });
    await this.inflight;
  }

  private async runPredict(): Promise<void> {
    const result = await predict(
      this.session.apiBase,
      this.session.image as string,
      3,
      this.fetchImpl
    );
    this.show("results");
    this.hideResultErrors();
    if (!result.ok) {
      this.showFailure(result.error);
      return;
    }
    this.session = withResults(this.session, result.data);
    this.renderRanking();
  }

  private renderRanking(): void {
    const list = this.el<HTMLOListElement>("ranking");
    list.innerHTML = "";
    // Response order is already ranked; render it as-is.
    const predictions = this.session.results?.predictions ?? [];
    predictions.forEach((p, i) => {
      const item = document.createElement("li");
      item.className = i === 0 ? "prediction top" : "prediction";
      item.textContent = `${p.letter} ${(p.confidence * 100).toFixed(1)}%`;
      list.appendChild(item);
    });
  }

  private showFailure(error: ApiFailure): void {
    if (error.kind === "http" && !retryable(error)) {
      const detail = error.detail || error.code;
      this.el("submit-error").textContent = `Request rejected: ${detail}`;
      this.el("submit-error").hidden = false;
      return;
    }
    const message =
      error.kind === "network"
        ? "Could not reach the prediction service."
        : "The prediction service is unavailable right now.";
    this.el("retry-message").textContent = message;
    this.el("retry-banner").hidden = false;
  }

  private hideResultErrors(): void {
    this.el("retry-banner").hidden = true;
    this.el("submit-error").hidden = true;
  }

  private updateWord(step: (s: CaptureSession) => CaptureSession): void {
    this.session = step(this.session);
    this.el("word-buffer").textContent = this.session.wordBuffer;
  }

  private setCaptureError(message: string | null): void {
    const node = this.el("capture-error");
    node.hidden = message === null;
    node.textContent = message ?? "";
  }
}

export function createApp(root: HTMLElement, options: AppOptions): App {
  return new App(root, options);
}
