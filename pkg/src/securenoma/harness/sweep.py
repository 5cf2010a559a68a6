"""Deterministic, optionally parallel execution of an experiment sweep.

Trials are cut into fixed-size chunks that do not depend on the worker count.
Workers only decide *where* a chunk runs; the chunk results are added up in
chunk order, so every output is the same for any number of workers.
"""

from __future__ import annotations

import logging
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..rng import derive_trial_rng
from .config import ExperimentConfig
from .experiments import build_points

log = logging.getLogger(__name__)

CHUNK_TRIALS = 1 << 16

__all__ = ["CHUNK_TRIALS", "SweepRow", "SweepResult", "derive_trial_rng", "run_chunks", "run_sweep"]


def _sig10(x: float) -> float:
    return float(format(float(x), ".10g"))


@dataclass(frozen=True)
class SweepRow:
    sweep: float
    metric: str
    estimate: float
    stderr: float
    trials: int
    seed: int


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...] = ()

    def metric(self, name: str) -> list[SweepRow]:
        return [r for r in self.rows if r.metric == name]

    def metrics(self) -> list[str]:
        return list(dict.fromkeys(r.metric for r in self.rows))


def chunk_bounds(trials: int, chunk: int | None = None) -> list[tuple[int, int]]:
    chunk = chunk or CHUNK_TRIALS
    return [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]


def _call(task, bounds):
    return task(*bounds)


def run_chunks(task, trials: int, pool: ProcessPoolExecutor | None = None) -> np.ndarray:
    """Sum ``task(start, stop)`` over the fixed chunks of ``range(trials)``."""
    bounds = chunk_bounds(trials)
    if pool is None:
        parts = (task(*b) for b in bounds)
    else:
        parts = pool.map(_call, [task] * len(bounds), bounds)
    total = None
    for part in parts:
        total = part.copy() if total is None else total + part
    return total


def run_sweep(config: ExperimentConfig) -> SweepResult:
    """Evaluate every sweep value of ``config``.

    Rows are ordered by sweep value, then by the experiment's metric order.
    Numbers are kept to 10 significant digits, the precision written to CSV.
    """
    points = build_points(config)
    pool = None
    if config.workers > 1 and len(chunk_bounds(config.trials)) > 1:
        pool = ProcessPoolExecutor(config.workers, mp_context=multiprocessing.get_context("fork"))
    rows = []
    try:
        for value, point in zip(config.sweep_values, points):
            log.info("%s: %s = %g", config.kind, config.sweep_name, value)
            totals = None if point.task is None else run_chunks(point.task, config.trials, pool)
            for order, (metric, estimate, stderr, trials) in enumerate(
                    point.finalize(totals, config.trials, config.seed)):
                row = SweepRow(_sig10(value), metric, _sig10(estimate), _sig10(stderr),
                               int(trials), config.seed)
                rows.append((value, order, row))
    finally:
        if pool is not None:
            pool.shutdown()
    rows.sort(key=lambda item: (item[0], item[1]))
    return SweepResult(tuple(r for _, _, r in rows))
