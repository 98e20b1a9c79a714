"""Live spelling state machine: debounced per-frame predictions into a word.

A letter is committed after `stability` consecutive frames whose top-1
prediction matches and clears the confidence threshold; a letter is never
committed twice in a row (double letters need an explicit delete/reset in
between). The machine is pure, so recorded prediction logs replay exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .letters import LETTERS

COMMANDS = ("backspace", "delete", "reset")


@dataclass(frozen=True)
class SpellerState:
    word_buffer: str = ""
    candidate: str | None = None
    consecutive_count: int = 0
    last_committed: str | None = None
    confidence_threshold: float = 0.7
    stability: int = 5


@dataclass
class Overlay:
    top3: list[tuple[str, float]] = field(default_factory=list)
    word_buffer: str = ""
    candidate: str | None = None
    consecutive_count: int = 0
    committed: str | None = None


def step(state: SpellerState, probs) -> tuple[SpellerState, Overlay]:
    """Advance the machine by one frame of class probabilities."""
    ranked = sorted(range(len(probs)), key=lambda i: (-probs[i], i))
    top3 = [(LETTERS[i], float(probs[i])) for i in ranked[:3]]
    letter, confidence = top3[0]

    committed = None
    if confidence < state.confidence_threshold:
        state = replace(state, candidate=None, consecutive_count=0)
    else:
        if letter == state.candidate:
            count = state.consecutive_count + 1
        else:
            count = 1
        state = replace(state, candidate=letter, consecutive_count=count)
        if count >= state.stability and letter != state.last_committed:
            state = replace(
                state,
                word_buffer=state.word_buffer + letter,
                last_committed=letter,
                candidate=None,
                consecutive_count=0,
            )
            committed = letter

    return state, Overlay(
        top3=top3,
        word_buffer=state.word_buffer,
        candidate=state.candidate,
        consecutive_count=state.consecutive_count,
        committed=committed,
    )


def command(state: SpellerState, cmd: str) -> SpellerState:
    if cmd == "backspace":
        return replace(state, word_buffer=state.word_buffer[:-1])
    if cmd == "delete":
        return replace(state, candidate=None, consecutive_count=0, last_committed=None)
    if cmd == "reset":
        return replace(state, word_buffer="", candidate=None, consecutive_count=0, last_committed=None)
    raise ValueError(f"unknown command {cmd!r}; expected one of {COMMANDS}")


def replay(log_path: str | Path, threshold: float = 0.7, stability: int = 5) -> SpellerState:
    """Replay a recorded prediction log (JSON lines).

    Each line is either {"probs": [...26 floats...]} or {"command": "reset"}.
    """
    state = SpellerState(confidence_threshold=threshold, stability=stability)
    with Path(log_path).open() as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            event = json.loads(line)
            if "command" in event:
                state = command(state, event["command"])
            else:
                state, _ = step(state, event["probs"])
    return state


def run_webcam(checkpoint_uri: str, camera: int = 0, threshold: float = 0.7, stability: int = 5) -> None:
    """Interactive webcam loop. Keys: b=backspace, d=delete, r=reset, q=quit."""
    import cv2
    import numpy as np

    from .dataset.frames import resize_frame
    from .model.network import load_model, predict_batch, preprocess
    from .model.registry import get_backbone

    model, spec = load_model(checkpoint_uri)
    normalization = get_backbone(spec.backbone).input_normalization
    cap = cv2.VideoCapture(camera)
    if not cap.isOpened():
        raise SystemExit(f"cannot open camera {camera}")
    state = SpellerState(confidence_threshold=threshold, stability=stability)
    try:
        while True:
            ok, frame = cap.read()
            if not ok:
                raise SystemExit("camera stream ended unexpectedly")
            rgb = cv2.cvtColor(frame, cv2.COLOR_BGR2RGB)
            probs = predict_batch(model, preprocess(resize_frame(rgb), normalization))[0]
            state, overlay = step(state, probs)
            y = 30
            for letter, conf in overlay.top3:
                cv2.putText(frame, f"{letter}: {conf:.2f}", (10, y),
                            cv2.FONT_HERSHEY_SIMPLEX, 0.8, (0, 255, 0), 2)
                y += 30
            cv2.putText(frame, f"word: {overlay.word_buffer}", (10, y + 10),
                        cv2.FONT_HERSHEY_SIMPLEX, 1.0, (255, 255, 0), 2)
            cv2.imshow("signlab speller", frame)
            key = cv2.waitKey(1) & 0xFF
            if key == ord("q"):
                break
            if key == ord("b"):
                state = command(state, "backspace")
            elif key == ord("d"):
                state = command(state, "delete")
            elif key == ord("r"):
                state = command(state, "reset")
    finally:
        cap.release()
        cv2.destroyAllWindows()
