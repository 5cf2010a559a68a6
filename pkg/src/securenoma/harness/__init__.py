"""Experiment orchestration: configs, deterministic sweeps, CSV, CLI."""

from .config import ConfigError, ExperimentConfig, load_config, parse_config
from .csvio import emit_csv, parse_csv
from .sweep import SweepResult, SweepRow, derive_trial_rng, run_sweep

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "SweepResult",
    "SweepRow",
    "derive_trial_rng",
    "emit_csv",
    "load_config",
    "parse_config",
    "parse_csv",
    "run_sweep",
]
