"""Experiment harness: simulation, sweeps, reporting and replay."""

from .report import SweepResult, read_csv, report, series, spreads, summarize, write_csv
from .runs import RunSpec, metrics_of_row, run_point, run_specs, spec_from_row
from .simulate import noise_realization, simulate
from .sweeps import (
    ExperimentConfig,
    run_sweep,
    select_by_discrepancy,
    sweep_baselines,
    sweep_compare,
    sweep_penalties,
    sweep_single,
    sweep_tau,
)

__all__ = [
    "ExperimentConfig", "RunSpec", "SweepResult", "metrics_of_row", "noise_realization",
    "read_csv", "report", "run_point", "run_specs", "run_sweep", "select_by_discrepancy",
    "series", "simulate", "spec_from_row", "spreads", "summarize", "sweep_baselines",
    "sweep_compare", "sweep_penalties", "sweep_single", "sweep_tau", "write_csv",
]
