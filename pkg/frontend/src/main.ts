import { createApp } from "./app.js";

// API base resolution order: ?api= query param, then a window global
// (set by the hosting page), then same-origin.
function resolveApiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery) return fromQuery.replace(/\/$/, "");
  const fromGlobal = (window as any).SIGNLAB_API_BASE as string | undefined;
  if (fromGlobal) return fromGlobal.replace(/\/$/, "");
  return "";
}

const root = document.getElementById("app");
if (root) {
  createApp(root, { apiBase: resolveApiBase() });
}
