"""Two-stage model selection: backbone x optimizer grid with repeated runs,
rank-test validation and spread analysis, then a hyperparameter sweep and a
final long training run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import InputError
from ..model.config import ModelSpec, RunResult, TrainingConfig
from ..model.network import assemble_model, export_model
from ..model.training import train
from .wilcoxon import WilcoxonResult, wilcoxon_signed_rank

DOMINANCE_MARGIN = 0.02  # backbones trailing the leader's best cell by more are dropped


@dataclass
class GridCell:
    backbone: str
    optimizer: str
    runs: list[RunResult] = field(default_factory=list)
    error: str | None = None

    @property
    def mean_best_val_accuracy(self) -> float:
        return float(np.mean([r.best_val_accuracy for r in self.runs])) if self.runs else 0.0

    @property
    def per_epoch_val_accuracies(self) -> list[float]:
        """Validation-accuracy curve averaged over the repeats."""
        if not self.runs:
            return []
        curves = np.array([[e.val_accuracy for e in r.epochs] for r in self.runs])
        return [float(v) for v in curves.mean(axis=0)]

    def to_dict(self) -> dict:
        return {
            "backbone": self.backbone,
            "optimizer": self.optimizer,
            "runs": [r.to_dict() for r in self.runs],
            "error": self.error,
            "mean_best_val_accuracy": self.mean_best_val_accuracy,
            "per_epoch_val_accuracies": self.per_epoch_val_accuracies,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GridCell":
        return cls(
            backbone=d["backbone"],
            optimizer=d["optimizer"],
            runs=[RunResult.from_dict(r) for r in d["runs"]],
            error=d.get("error"),
        )


def derived_seed(base: int, *stream: int) -> int:
    return int(np.random.default_rng([base, *stream]).integers(0, 2**31 - 1))


def run_once(
    spec: ModelSpec,
    config: TrainingConfig,
    dataset_dir: str | Path,
    out_dir: str | Path | None = None,
    run_name: str = "run",
    weights: str | None = None,
) -> RunResult:
    """One seeded assemble+train; persists the run log when out_dir is set."""
    from tensorflow import keras

    keras.utils.set_random_seed(config.seed)
    model = assemble_model(spec, weights=weights)
    ckpt = Path(out_dir) / "checkpoints" / run_name if out_dir else None
    result = train(model, dataset_dir, config, spec, checkpoint_dir=ckpt)
    if out_dir:
        runs_dir = Path(out_dir) / "runs"
        runs_dir.mkdir(parents=True, exist_ok=True)
        (runs_dir / f"{run_name}.json").write_text(json.dumps(result.to_dict(), indent=2))
    return result


def run_grid(
    backbones: list[str],
    optimizers: list[str],
    dataset_dir: str | Path,
    config: TrainingConfig,
    out_dir: str | Path,
    frozen_layers: int = 20,
    weights: str | None = None,
) -> list[GridCell]:
    """Train `config.repeats` runs per (backbone, optimizer) cell with derived
    seeds. Failures are flagged on the cell without aborting the grid.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cells: list[GridCell] = []
    for bi, backbone in enumerate(backbones):
        for oi, optimizer in enumerate(optimizers):
            cell = GridCell(backbone, optimizer)
            spec = ModelSpec(backbone=backbone, frozen_layers=frozen_layers)
            for rep in range(config.repeats):
                cfg = TrainingConfig(
                    **{
                        **config.to_dict(),
                        "optimizer": optimizer,
                        "seed": derived_seed(config.seed, bi, oi, rep),
                    }
                )
                name = f"{backbone}_{optimizer}_rep{rep}"
                try:
                    cell.runs.append(
                        run_once(spec, cfg, dataset_dir, out, run_name=name, weights=weights)
                    )
                except Exception as err:  # isolate per-cell failures
                    cell.error = f"{name}: {err}"
                    break
            cells.append(cell)
    (out / "grid_cells.json").write_text(
        json.dumps([c.to_dict() for c in cells], indent=2)
    )
    return cells


@dataclass
class SpreadStats:
    median: float
    q1: float
    q3: float
    minimum: float
    maximum: float

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1

    @classmethod
    def of(cls, values: list[float]) -> "SpreadStats":
        arr = np.asarray(values, dtype=float)
        q1, med, q3 = np.percentile(arr, [25, 50, 75])
        return cls(float(med), float(q1), float(q3), float(arr.min()), float(arr.max()))

    def to_dict(self) -> dict:
        return {**vars(self), "iqr": self.iqr}


@dataclass
class SelectionReport:
    winner: tuple[str, str] | None
    excluded_backbones: list[dict]
    optimizer_tests: list[dict]
    finalists: list[dict]
    tie: bool
    rationale: list[str]

    def to_dict(self) -> dict:
        return {
            "winner": list(self.winner) if self.winner else None,
            "excluded_backbones": self.excluded_backbones,
            "optimizer_tests": self.optimizer_tests,
            "finalists": self.finalists,
            "tie": self.tie,
            "rationale": self.rationale,
        }


def select_combination(
    cells: list[GridCell],
    alpha_levels: tuple[float, ...] = (0.05, 0.01),
) -> SelectionReport:
    """Pick the grid winner: drop dominated backbones, rank-test each
    surviving backbone's optimizer curves, then break ties by the smaller
    interquartile range of per-epoch validation accuracy.
    """
    if len(cells) < 2:
        raise InputError("selection needs at least two grid cells")
    rationale: list[str] = []
    usable = [c for c in cells if c.runs and not c.error]
    if not usable:
        return SelectionReport(None, [], [], [], False, ["no usable cells"])

    best_by_backbone: dict[str, float] = {}
    for c in usable:
        best_by_backbone[c.backbone] = max(
            best_by_backbone.get(c.backbone, 0.0), c.mean_best_val_accuracy
        )
    leader = max(best_by_backbone.values())
    excluded = []
    for backbone, best in sorted(best_by_backbone.items()):
        if best < leader - DOMINANCE_MARGIN:
            excluded.append(
                {"backbone": backbone, "best": best, "leader": leader,
                 "reason": f"trails leader by {leader - best:.4f} > {DOMINANCE_MARGIN}"}
            )
            rationale.append(f"excluded {backbone}: best cell {best:.4f} vs leader {leader:.4f}")
    excluded_names = {e["backbone"] for e in excluded}
    surviving = [c for c in usable if c.backbone not in excluded_names]

    loose_alpha = max(alpha_levels)
    tests: list[dict] = []
    finalists: list[GridCell] = []
    for backbone in sorted({c.backbone for c in surviving}):
        group = sorted(
            (c for c in surviving if c.backbone == backbone), key=lambda c: c.optimizer
        )
        if len(group) < 2:
            finalists.extend(group)
            continue
        a, b = group[0], group[1]
        result: WilcoxonResult = wilcoxon_signed_rank(
            a.per_epoch_val_accuracies, b.per_epoch_val_accuracies
        )
        rejected = result.p_value < loose_alpha and not result.degenerate
        attained = [lvl for lvl in sorted(alpha_levels) if result.p_value < lvl]
        tests.append(
            {
                "backbone": backbone,
                "optimizers": [a.optimizer, b.optimizer],
                "w": result.w_statistic,
                "n_effective": result.n_effective,
                "p_value": result.p_value,
                "method": result.method,
                "rejected": rejected,
                "alpha_attained": attained[0] if attained else None,
            }
        )
        if rejected:
            keep = max(group, key=lambda c: c.mean_best_val_accuracy)
            rationale.append(
                f"{backbone}: optimizers differ (p={result.p_value:.4g}), keep {keep.optimizer}"
            )
            finalists.append(keep)
        else:
            rationale.append(
                f"{backbone}: no significant optimizer difference (p={result.p_value:.4g}), keep both"
            )
            finalists.extend(group)

    if not finalists:
        return SelectionReport(None, excluded, tests, [], False, rationale + ["no finalist"])

    spreads = {
        (c.backbone, c.optimizer): SpreadStats.of(c.per_epoch_val_accuracies)
        for c in finalists
    }
    ordered = sorted(
        finalists, key=lambda c: (spreads[(c.backbone, c.optimizer)].iqr, c.backbone, c.optimizer)
    )
    winner = ordered[0]
    min_iqr = spreads[(winner.backbone, winner.optimizer)].iqr
    tie = sum(1 for c in finalists if spreads[(c.backbone, c.optimizer)].iqr == min_iqr) > 1
    if tie:
        rationale.append("spread tie: winner chosen by deterministic (backbone, optimizer) order")
    rationale.append(
        f"winner ({winner.backbone}, {winner.optimizer}) with IQR {min_iqr:.4f}"
    )
    return SelectionReport(
        winner=(winner.backbone, winner.optimizer),
        excluded_backbones=excluded,
        optimizer_tests=tests,
        finalists=[
            {"backbone": c.backbone, "optimizer": c.optimizer,
             "mean_best_val_accuracy": c.mean_best_val_accuracy,
             "spread": spreads[(c.backbone, c.optimizer)].to_dict()}
            for c in finalists
        ],
        tie=tie,
        rationale=rationale,
    )


@dataclass
class SweepResult:
    cells: dict[tuple[int, float], float]
    winner: tuple[int, float] | None
    confirmation_runs: dict[tuple[int, float], list[RunResult]]
    confirmation_means: dict[tuple[int, float], float]

    def to_dict(self) -> dict:
        key = lambda k: f"frozen={k[0]},factor={k[1]}"
        return {
            "cells": {key(k): v for k, v in self.cells.items()},
            "winner": list(self.winner) if self.winner else None,
            "confirmation_means": {key(k): v for k, v in self.confirmation_means.items()},
            "confirmation_runs": {
                key(k): [r.to_dict() for r in runs]
                for k, runs in self.confirmation_runs.items()
            },
        }


def sweep_hyperparams(
    backbone: str,
    optimizer: str,
    dataset_dir: str | Path,
    config: TrainingConfig,
    out_dir: str | Path,
    frozen_values: tuple[int, ...] = (5, 20, 50),
    factor_values: tuple[float, ...] = (0.2, 0.7, 1.2),
    confirm_top: int = 2,
    confirm_extra_runs: int = 2,
    weights: str | None = None,
) -> SweepResult:
    """One run per (frozen, factor) cell, then the top cells are retrained
    for an averaged confirmation; the winner is the best confirmation mean.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cells: dict[tuple[int, float], float] = {}
    first_runs: dict[tuple[int, float], RunResult] = {}
    for fi, frozen in enumerate(frozen_values):
        for si, factor in enumerate(factor_values):
            spec = ModelSpec(backbone=backbone, frozen_layers=frozen)
            cfg = TrainingConfig(
                **{
                    **config.to_dict(),
                    "optimizer": optimizer,
                    "step_size_factor": factor,
                    "seed": derived_seed(config.seed, 100 + fi, si, 0),
                }
            )
            name = f"sweep_f{frozen}_s{factor}_rep0"
            try:
                result = run_once(spec, cfg, dataset_dir, out, run_name=name, weights=weights)
            except Exception as err:
                cells[(frozen, factor)] = float("nan")
                (out / f"{name}.error").write_text(str(err))
                continue
            first_runs[(frozen, factor)] = result
            cells[(frozen, factor)] = result.best_val_accuracy

    ranked = sorted(first_runs, key=lambda k: (-cells[k], k))
    top = ranked[:confirm_top]
    confirmation_runs: dict[tuple[int, float], list[RunResult]] = {}
    confirmation_means: dict[tuple[int, float], float] = {}
    for (frozen, factor) in top:
        runs = [first_runs[(frozen, factor)]]
        for rep in range(1, confirm_extra_runs + 1):
            spec = ModelSpec(backbone=backbone, frozen_layers=frozen)
            cfg = TrainingConfig(
                **{
                    **config.to_dict(),
                    "optimizer": optimizer,
                    "step_size_factor": factor,
                    "seed": derived_seed(config.seed, 200 + frozen, int(factor * 10), rep),
                }
            )
            name = f"sweep_f{frozen}_s{factor}_rep{rep}"
            runs.append(run_once(spec, cfg, dataset_dir, out, run_name=name, weights=weights))
        confirmation_runs[(frozen, factor)] = runs
        confirmation_means[(frozen, factor)] = float(
            np.mean([r.best_val_accuracy for r in runs])
        )

    winner = max(confirmation_means, key=lambda k: (confirmation_means[k], k)) if confirmation_means else None
    result = SweepResult(cells, winner, confirmation_runs, confirmation_means)
    (out / "sweep_result.json").write_text(json.dumps(result.to_dict(), indent=2))
    return result


def finalize(
    spec: ModelSpec,
    config: TrainingConfig,
    dataset_dir: str | Path,
    out_dir: str | Path,
    weights: str | None = None,
) -> RunResult:
    """Final long training run; exports the checkpoint plus curve data and plots."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = run_once(spec, config, dataset_dir, out, run_name="final", weights=weights)
    curves = [e.to_dict() for e in result.epochs]
    (out / "final_curves.json").write_text(json.dumps(curves, indent=2))
    with (out / "final_curves.csv").open("w") as fh:
        fh.write("epoch,train_loss,val_loss,train_acc,val_acc\n")
        for e in result.epochs:
            fh.write(
                f"{e.epoch},{e.train_loss},{e.val_loss},{e.train_accuracy},{e.val_accuracy}\n"
            )
    from .plots import plot_training_curves

    plot_training_curves(result.epochs, out / "final_curves.png")
    return result
