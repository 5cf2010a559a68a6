"""Frequency-hopping carrier driven by a seeded pseudo-random hop sequence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..rng import stream_key, uniforms


@dataclass(frozen=True)
class HopPlan:
    carriers: tuple[float, ...]
    phases: tuple[float, ...]
    dwell: int
    sample_rate: float
    hops: int
    seed: int = 0

    def __post_init__(self):
        if not self.carriers or min(self.carriers) <= 0:
            raise ValueError("carrier frequencies must be positive")
        if len(self.phases) != len(self.carriers):
            raise ValueError("need one phase per carrier")
        if self.dwell < 1 or self.hops < 1:
            raise ValueError("dwell and hop count must be positive")
        if not self.sample_rate > 0:
            raise ValueError("sample rate must be positive")

    @property
    def duration(self) -> float:
        return self.hops * self.dwell / self.sample_rate


def hop_sequence(plan: HopPlan) -> np.ndarray:
    """Carrier index used in each dwell."""
    u = uniforms(stream_key(plan.seed, "hops"), np.arange(plan.hops), 1)[:, 0]
    n = len(plan.carriers)
    return np.minimum((u * n).astype(np.int64), n - 1)


def fh_carrier(plan: HopPlan, t: float) -> float:
    """``cos(2*pi*f_i*t + phi_i)`` with ``i`` the carrier of the dwell containing ``t``."""
    if not 0.0 <= t < plan.duration:
        raise ValueError(f"time {t} outside the plan duration [0, {plan.duration})")
    dwell = int(t * plan.sample_rate) // plan.dwell
    i = hop_sequence(plan)[dwell]
    return float(np.cos(2 * np.pi * plan.carriers[i] * t + plan.phases[i]))


def fh_waveform(plan: HopPlan) -> np.ndarray:
    """The carrier sampled over the whole plan."""
    n = np.arange(plan.hops * plan.dwell)
    idx = np.repeat(hop_sequence(plan), plan.dwell)
    f = np.asarray(plan.carriers)[idx]
    phi = np.asarray(plan.phases)[idx]
    return np.cos(2 * np.pi * f * n / plan.sample_rate + phi)
