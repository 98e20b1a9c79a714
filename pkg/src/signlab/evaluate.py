"""Test-set evaluation: accuracy, misclassification error, confusion matrix."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, InputError
from .letters import LETTERS, N_CLASSES, letter_index
from .dataset.augment import AugmentationPolicy, augment
from .dataset.build import list_samples, load_report, read_image
from .model.network import predict_batch, preprocess
from .model.registry import get_backbone


def misclassification_error(predictions: list[str], labels: list[str]) -> float:
    """Fraction of samples whose prediction differs from the label."""
    if len(predictions) != len(labels):
        raise InputError(f"length mismatch: {len(predictions)} predictions vs {len(labels)} labels")
    if not labels:
        raise InputError("need at least one sample")
    wrong = sum(1 for p, y in zip(predictions, labels) if p != y)
    return wrong / len(labels)


@dataclass
class EvalReport:
    overall_accuracy: float
    misclassification: float
    per_class_accuracy: dict[str, float]
    confusion_matrix: list[list[int]]  # rows true, cols predicted
    per_person_accuracy: dict[str, float]  # extension beyond headline metrics
    n_samples: int

    def to_dict(self) -> dict:
        return {
            "overall_accuracy": self.overall_accuracy,
            "misclassification_error": self.misclassification,
            "per_class_accuracy": self.per_class_accuracy,
            "confusion_matrix": self.confusion_matrix,
            "per_person_accuracy": self.per_person_accuracy,
            "n_samples": self.n_samples,
        }

    def to_text(self) -> str:
        lines = [
            f"samples: {self.n_samples}",
            f"accuracy: {self.overall_accuracy:.4f}",
            f"misclassification error: {self.misclassification:.4f}",
            "",
            "per-class accuracy:",
        ]
        for letter in LETTERS:
            if letter in self.per_class_accuracy:
                lines.append(f"  {letter}: {self.per_class_accuracy[letter]:.4f}")
        if self.per_person_accuracy:
            lines.append("")
            lines.append("per-person accuracy:")
            for person in sorted(self.per_person_accuracy):
                lines.append(f"  {person}: {self.per_person_accuracy[person]:.4f}")
        return "\n".join(lines)

    def save(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "eval_report.json").write_text(json.dumps(self.to_dict(), indent=2))
        (out / "eval_report.txt").write_text(self.to_text() + "\n")
        with (out / "confusion_matrix.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["true\\pred"] + list(LETTERS))
            for letter, row in zip(LETTERS, self.confusion_matrix):
                writer.writerow([letter] + row)


def report_from_pairs(
    predictions: list[str], labels: list[str], persons: list[str] | None = None
) -> EvalReport:
    if not labels:
        raise DataError("no samples to evaluate")
    err = misclassification_error(predictions, labels)
    confusion = np.zeros((N_CLASSES, N_CLASSES), dtype=int)
    for p, y in zip(predictions, labels):
        confusion[letter_index(y), letter_index(p)] += 1
    per_class = {}
    for i, letter in enumerate(LETTERS):
        support = int(confusion[i].sum())
        if support:
            per_class[letter] = float(confusion[i, i] / support)
    per_person: dict[str, float] = {}
    if persons:
        hits: dict[str, list[int]] = {}
        for person, p, y in zip(persons, predictions, labels):
            hits.setdefault(person, []).append(int(p == y))
        per_person = {k: float(np.mean(v)) for k, v in hits.items()}
    return EvalReport(
        overall_accuracy=1.0 - err,
        misclassification=err,
        per_class_accuracy=per_class,
        confusion_matrix=confusion.tolist(),
        per_person_accuracy=per_person,
        n_samples=len(labels),
    )


def evaluate(
    model,
    dataset_dir: str | Path,
    spec,
    seed: int = 0,
    batch_size: int = 32,
    split: str = "test",
    apply_policy: bool = True,
) -> EvalReport:
    """One deterministic pass over the split with the stored test policy."""
    samples = list_samples(dataset_dir, split)
    if not samples:
        raise DataError(f"split {split!r} of {dataset_dir} is empty")
    report = load_report(dataset_dir)
    policy = None
    if apply_policy and report.policies.get(split):
        stored = AugmentationPolicy.from_dict(report.policies[split])
        policy = AugmentationPolicy.from_dict({**stored.to_dict(), "seed": seed})
    normalization = get_backbone(spec.backbone).input_normalization
    rng = np.random.default_rng(seed)

    predictions: list[str] = []
    labels: list[str] = []
    persons: list[str] = []
    for start in range(0, len(samples), batch_size):
        chunk = samples[start : start + batch_size]
        images = []
        for path, letter in chunk:
            img = read_image(path)
            if policy is not None:
                img = augment(img, policy, rng)
            images.append(img)
            labels.append(letter)
            recording_id = path.stem.rsplit("_", 1)[0]
            persons.append(report.persons.get(recording_id, recording_id))
        probs = predict_batch(model, preprocess(np.stack(images), normalization))
        predictions.extend(LETTERS[i] for i in probs.argmax(axis=1))
    return report_from_pairs(predictions, labels, persons)
