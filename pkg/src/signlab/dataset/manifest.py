"""Recording manifests: the catalog of source videos per person."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import InputError
from ..letters import is_letter

GENDERS = ("male", "female", "other")


@dataclass(frozen=True)
class RecordingEntry:
    letter: str
    video_uri: str
    duration_s: float


@dataclass
class RecordingManifest:
    recording_id: str
    person_id: str
    age: int
    gender: str
    entries: list[RecordingEntry] = field(default_factory=list)

    def validate(self) -> None:
        if self.gender not in GENDERS:
            raise InputError(f"{self.recording_id}: gender must be one of {GENDERS}")
        for e in self.entries:
            if not is_letter(e.letter):
                raise InputError(f"{self.recording_id}: unsupported letter {e.letter!r}")
            if e.duration_s <= 0:
                raise InputError(
                    f"{self.recording_id}/{e.letter}: duration must be > 0, got {e.duration_s}"
                )


def validate_manifests(manifests: list[RecordingManifest]) -> None:
    seen: set[str] = set()
    for m in manifests:
        if m.recording_id in seen:
            raise InputError(f"duplicate recording_id {m.recording_id!r}")
        seen.add(m.recording_id)
        m.validate()


def load_manifests(path: str | Path) -> list[RecordingManifest]:
    """Load and validate a JSON manifest file (a list of recordings or a single one)."""
    raw = json.loads(Path(path).read_text())
    if isinstance(raw, dict):
        raw = [raw]
    manifests = [
        RecordingManifest(
            recording_id=r["recording_id"],
            person_id=r["person_id"],
            age=int(r["age"]),
            gender=r["gender"],
            entries=[
                RecordingEntry(e["letter"], e["video_uri"], float(e["duration_s"]))
                for e in r["entries"]
            ],
        )
        for r in raw
    ]
    validate_manifests(manifests)
    return manifests


def save_manifests(manifests: list[RecordingManifest], path: str | Path) -> None:
    payload = [
        {
            "recording_id": m.recording_id,
            "person_id": m.person_id,
            "age": m.age,
            "gender": m.gender,
            "entries": [
                {"letter": e.letter, "video_uri": e.video_uri, "duration_s": e.duration_s}
                for e in m.entries
            ],
        }
        for m in manifests
    ]
    Path(path).write_text(json.dumps(payload, indent=2))
