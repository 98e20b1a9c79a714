from .wilcoxon import WilcoxonResult, wilcoxon_signed_rank
from .lab import (
    GridCell, SelectionReport, SweepResult, SpreadStats,
    run_grid, run_once, select_combination, sweep_hyperparams, finalize, derived_seed,
)

__all__ = [
    "WilcoxonResult", "wilcoxon_signed_rank", "GridCell", "SelectionReport",
    "SweepResult", "SpreadStats", "run_grid", "run_once", "select_combination",
    "sweep_hyperparams", "finalize", "derived_seed",
]
