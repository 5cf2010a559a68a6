"""Warden-side detection of a covert transmission.

Willie averages the received power over ``n`` channel uses and compares it
with a threshold.  Under H0 he sees noise (plus optional interference), under
H1 additionally Alice's Gaussian covert signal.  Detection performance is the
error sum ``xi = P_FA + P_MD``; Pinsker's inequality lower-bounds it through
the KL divergence of the two observation laws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .rng import complex_normals, stream_key

__all__ = [
    "HypothesisScenario",
    "DetectionReport",
    "KlPinsker",
    "radiometer_stat",
    "simulate_detection",
    "detection_oracle_gaussian",
    "min_error_detection",
    "kl_pinsker",
    "optimal_threshold",
    "analytic_min_error",
    "default_gamma_grid",
]


@dataclass(frozen=True)
class HypothesisScenario:
    """Observation model at the warden.

    ``power`` is the covert signal power per sample and ``noise_power`` the
    AWGN variance.  ``interference_power`` adds an independent Gaussian
    interferer under both hypotheses.  The priors are bookkeeping only; the
    error sum weights both hypotheses equally.
    """

    power: float
    noise_power: float = 1.0
    channel_uses: int = 1
    interference_power: float = 0.0
    prior0: float = 0.5
    prior1: float = 0.5
    signaling: str = "gaussian"

    def __post_init__(self):
        if self.power < 0:
            raise ValueError(f"covert power must be nonnegative, got {self.power}")
        if not self.noise_power > 0:
            raise ValueError(f"noise power must be positive, got {self.noise_power}")
        if self.interference_power < 0:
            raise ValueError("interference power must be nonnegative")
        if int(self.channel_uses) != self.channel_uses or self.channel_uses < 1:
            raise ValueError(f"channel_uses must be a positive integer, got {self.channel_uses}")
        if min(self.prior0, self.prior1) < 0 or not math.isclose(self.prior0 + self.prior1, 1.0):
            raise ValueError("priors must be nonnegative and sum to 1")

    @property
    def variance0(self) -> float:
        """Per-sample received power under H0."""
        return self.noise_power + self.interference_power

    @property
    def variance1(self) -> float:
        return self.variance0 + self.power


@dataclass(frozen=True)
class DetectionReport:
    threshold: float
    p_fa: float
    p_md: float
    xi: float
    pinsker_bound: float
    stderr: float = 0.0


@dataclass(frozen=True)
class KlPinsker:
    divergence: float
    bound: float


def radiometer_stat(samples) -> float:
    """Average received power ``(1/n) * sum |y|**2``."""
    samples = np.asarray(samples)
    if samples.size == 0:
        raise ValueError("radiometer needs at least one sample")
    return float(np.mean(np.abs(samples) ** 2))


# keeps a chunk's sample buffer around 2**21 complex values
_SAMPLES_PER_CHUNK = 1 << 21


def _chunk_size(n: int) -> int:
    return max(1, _SAMPLES_PER_CHUNK // n)


def hypothesis_stats(scenario: HypothesisScenario, hypothesis: int, seed: int,
                     start: int, stop: int) -> np.ndarray:
    """Radiometer outputs for trials ``start .. stop-1`` under H0 or H1.

    Each trial draws its noise, interference and covert signal from disjoint
    parts of its own stream, and each hypothesis has its own stream key.
    """
    n = scenario.channel_uses
    key = stream_key(seed, f"H{hypothesis}")
    out = np.empty(stop - start)
    step = _chunk_size(n)
    for lo in range(start, stop, step):
        hi = min(lo + step, stop)
        trials = np.arange(lo, hi)
        y = math.sqrt(scenario.noise_power) * complex_normals(key, trials, n, 0)
        if scenario.interference_power > 0:
            y += math.sqrt(scenario.interference_power) * complex_normals(key, trials, n, 2 * n)
        if hypothesis == 1 and scenario.power > 0:
            y += math.sqrt(scenario.power) * complex_normals(key, trials, n, 4 * n)
        out[lo - start:hi - start] = np.mean(y.real**2 + y.imag**2, axis=1)
    return out


def detection_counts(scenario: HypothesisScenario, gammas, seed: int, start: int, stop: int) -> np.ndarray:
    """Per-threshold ``[false alarms, missed detections]`` over a trial range."""
    gammas = np.atleast_1d(np.asarray(gammas, dtype=float))
    s0 = np.sort(hypothesis_stats(scenario, 0, seed, start, stop))
    s1 = np.sort(hypothesis_stats(scenario, 1, seed, start, stop))
    false_alarms = s0.size - np.searchsorted(s0, gammas, side="right")
    misses = np.searchsorted(s1, gammas, side="right")
    return np.stack([false_alarms, misses]).astype(np.int64)


def _check_signaling(scenario: HypothesisScenario):
    if scenario.signaling != "gaussian":
        raise NotImplementedError(f"only Gaussian covert signaling is supported, got {scenario.signaling!r}")


def simulate_detection(scenario: HypothesisScenario, gamma, trials: int, seed: int):
    """Empirical ``(P_FA, P_MD)`` of the radiometer at threshold(s) ``gamma``.

    A false alarm is ``stat > gamma`` under H0, a miss ``stat <= gamma`` under H1.
    """
    _check_signaling(scenario)
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    if np.any(np.asarray(gamma) < 0):
        raise ValueError("threshold must be nonnegative")
    counts = detection_counts(scenario, gamma, seed, 0, trials) / trials
    if np.ndim(gamma) == 0:
        return float(counts[0, 0]), float(counts[1, 0])
    return counts[0], counts[1]


def detection_oracle_gaussian(scenario: HypothesisScenario, gamma):
    """Closed-form ``(P_FA, P_MD)`` for Gaussian noise and signaling.

    ``n * stat / variance`` is Gamma(n, 1) distributed under either
    hypothesis, so both error rates are regularized incomplete-gamma tails.
    """
    _check_signaling(scenario)
    n = scenario.channel_uses
    gamma = np.asarray(gamma, dtype=float)
    p_fa = special.gammaincc(n, n * gamma / scenario.variance0)
    p_md = special.gammainc(n, n * gamma / scenario.variance1)
    if gamma.ndim == 0:
        return float(p_fa), float(p_md)
    return p_fa, p_md


def kl_pinsker(variance0: float, variance1: float, channel_uses: int = 1) -> KlPinsker:
    """KL divergence D(P0 || P1) in nats and the bound ``1 - sqrt(D/2)``."""
    if not (variance0 > 0 and variance1 > 0):
        raise ValueError("variances must be positive")
    ratio = variance0 / variance1
    divergence = channel_uses * (-math.log(ratio) + ratio - 1.0)
    return KlPinsker(divergence, max(0.0, 1.0 - math.sqrt(divergence / 2.0)))


def optimal_threshold(variance0: float, variance1: float) -> float:
    """Radiometer threshold where the two likelihoods cross.

    It does not depend on the number of channel uses.  With equal variances
    every threshold is equally useless and ``variance0`` is returned.
    """
    if variance1 == variance0:
        return variance0
    return variance0 * variance1 * math.log(variance1 / variance0) / (variance1 - variance0)


def analytic_min_error(scenario: HypothesisScenario) -> DetectionReport:
    gamma = optimal_threshold(scenario.variance0, scenario.variance1)
    p_fa, p_md = detection_oracle_gaussian(scenario, gamma)
    bound = kl_pinsker(scenario.variance0, scenario.variance1, scenario.channel_uses).bound
    return DetectionReport(gamma, p_fa, p_md, p_fa + p_md, bound)


def default_gamma_grid(scenario: HypothesisScenario, points: int = 200) -> np.ndarray:
    return np.geomspace(scenario.variance0 / 10.0, 10.0 * scenario.variance1, points)


def report_from_counts(scenario: HypothesisScenario, gammas, counts, trials: int) -> DetectionReport:
    """Pick the grid threshold with the smallest empirical error sum."""
    p_fa = counts[0] / trials
    p_md = counts[1] / trials
    xi = p_fa + p_md
    best = int(np.argmin(xi))
    stderr = math.sqrt((p_fa[best] * (1 - p_fa[best]) + p_md[best] * (1 - p_md[best])) / trials)
    bound = kl_pinsker(scenario.variance0, scenario.variance1, scenario.channel_uses).bound
    return DetectionReport(float(gammas[best]), float(p_fa[best]), float(p_md[best]),
                           float(xi[best]), bound, stderr)


def min_error_detection(scenario: HypothesisScenario, gamma_grid=None, trials: int = 100_000,
                        seed: int = 0) -> DetectionReport:
    """Worst-case warden: the grid threshold minimizing ``P_FA + P_MD``."""
    _check_signaling(scenario)
    gammas = default_gamma_grid(scenario) if gamma_grid is None else np.asarray(gamma_grid, dtype=float)
    if gammas.size == 0:
        raise ValueError("threshold grid is empty")
    counts = detection_counts(scenario, gammas, seed, 0, trials)
    return report_from_counts(scenario, gammas, counts, trials)
