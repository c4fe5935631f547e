"""Experiment runner, result files and the ``ktbench`` command line."""

from .experiment import METHODS, ConfigError, ExperimentResult, RunConfig, load_problem, run_experiment
from .io import CSV_HEADER, ErrorRecord, read_csv, render_pgm, write_csv

__all__ = [
    "CSV_HEADER",
    "ConfigError",
    "ErrorRecord",
    "ExperimentResult",
    "METHODS",
    "RunConfig",
    "load_problem",
    "read_csv",
    "render_pgm",
    "run_experiment",
    "write_csv",
]
