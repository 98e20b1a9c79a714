"""Stateless HTTP prediction service.

A single checkpoint is loaded once at startup into read-only state;
request handlers only run inference. Routes are versioned under /v1.
"""

from __future__ import annotations

import base64
import os
import time
from pathlib import Path
from typing import Optional

import numpy as np
import cv2
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .errors import CheckpointError
from .letters import LETTERS
from .model.network import load_model, predict_batch, preprocess
from .model.registry import get_backbone
from .dataset.frames import resize_frame

MAX_BODY_BYTES = 5 * 1024 * 1024
DEFAULT_TOP_K = int(os.environ.get("SIGNLAB_TOPK_DEFAULT", "3"))


class PredictRequest(BaseModel):
    image_data: str
    content_type: str = "image/png"
    top_k: Optional[int] = None


def decode_image(data: bytes) -> np.ndarray:
    """Decode PNG/JPEG bytes to an RGB array; ValueError when undecodable."""
    buf = np.frombuffer(data, dtype=np.uint8)
    img = cv2.imdecode(buf, cv2.IMREAD_COLOR)
    if img is None:
        raise ValueError("undecodable image payload")
    return cv2.cvtColor(img, cv2.COLOR_BGR2RGB)


class ModelState:
    def __init__(self):
        self.model = None
        self.spec = None
        self.model_id = ""
        self.load_error: str | None = None
        self.started_at = time.monotonic()

    def load(self, checkpoint_uri: str) -> None:
        try:
            self.model, self.spec = load_model(checkpoint_uri, expect_classes=len(LETTERS))
            self.model_id = Path(checkpoint_uri).name
            self.load_error = None
        except CheckpointError as err:
            self.model = None
            self.load_error = str(err)

    @property
    def ready(self) -> bool:
        return self.model is not None


def _error(status: int, code: str, detail: str = "") -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "detail": detail})


def create_app(checkpoint_uri: str | None = None) -> FastAPI:
    app = FastAPI(title="signlab inference service", version="1")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    state = ModelState()
    app.state.model_state = state
    if checkpoint_uri:
        state.load(checkpoint_uri)

    @app.get("/v1/health")
    def health():
        payload = {
            "status": "ok" if state.ready else "unavailable",
            "model_id": state.model_id,
            "uptime_s": time.monotonic() - state.started_at,
        }
        if state.load_error:
            payload["detail"] = state.load_error
        return JSONResponse(status_code=200 if state.ready else 503, content=payload)

    @app.post("/v1/predict")
    async def predict_route(request: Request):
        body = await request.body()
        if len(body) > MAX_BODY_BYTES:
            return _error(413, "payload_too_large", f"limit {MAX_BODY_BYTES} bytes")
        if not state.ready:
            return _error(503, "model_unavailable", state.load_error or "model not loaded")

        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload = form.get("image")
            if upload is None:
                return _error(400, "bad_image", "multipart field 'image' missing")
            raw = await upload.read()
            top_k_raw = form.get("top_k")
            top_k = int(top_k_raw) if top_k_raw is not None else DEFAULT_TOP_K
        else:
            try:
                req = PredictRequest.model_validate_json(body)
            except Exception as err:
                return _error(400, "bad_request", str(err))
            try:
                raw = base64.b64decode(req.image_data, validate=True)
            except Exception:
                return _error(400, "bad_image", "image_data is not valid base64")
            top_k = req.top_k if req.top_k is not None else DEFAULT_TOP_K

        if not 1 <= top_k <= len(LETTERS):
            return _error(400, "bad_top_k", f"top_k must be in [1, {len(LETTERS)}]")
        try:
            image = decode_image(raw)
        except ValueError as err:
            return _error(400, "bad_image", str(err))

        start = time.perf_counter()
        normalization = get_backbone(state.spec.backbone).input_normalization
        resized = resize_frame(image)
        probs = predict_batch(state.model, preprocess(resized, normalization))[0]
        # descending confidence, ties broken by class order
        order = np.lexsort((np.arange(len(probs)), -probs))
        predictions = [
            {"letter": LETTERS[i], "confidence": float(probs[i])} for i in order[:top_k]
        ]
        return {
            "predictions": predictions,
            "model_id": state.model_id,
            "latency_ms": (time.perf_counter() - start) * 1000.0,
        }

    return app


def serve(checkpoint_uri: str, port: int = 8080, host: str = "0.0.0.0") -> None:
    import uvicorn

    app = create_app(checkpoint_uri)
    state: ModelState = app.state.model_state
    if not state.ready:
        raise SystemExit(f"cannot load checkpoint: {state.load_error}")
    uvicorn.run(app, host=host, port=port)
