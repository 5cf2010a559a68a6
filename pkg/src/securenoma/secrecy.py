"""Secrecy capacity and secure beamforming.

ZF precoding and the artificial-noise basis use the precoding convention
``y = h^H w`` with channel vectors ``h``.  Beamfocusing works with the array
responses from :func:`securenoma.channel.array_response`, where the received
sample is ``h @ w``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import SPEED_OF_LIGHT, ArrayGeometry, FarField, NearField, array_response
from .rng import complex_normals

__all__ = [
    "SecrecyReport",
    "MeanEstimate",
    "FadingConfig",
    "Beamformer",
    "BeamMode",
    "dbm_to_watts",
    "secrecy_capacity",
    "secrecy_rates",
    "ergodic_secrecy",
    "zf_precoder",
    "an_nullspace",
    "an_covariance",
    "beamfocus_secrecy",
]

NULLSPACE_RTOL = 1e-10


def dbm_to_watts(p_dbm):
    return 10.0 ** ((np.asarray(p_dbm, dtype=float) - 30.0) / 10.0)


@dataclass(frozen=True)
class SecrecyReport:
    c_main: float
    c_wiretap: float
    c_secrecy: float


@dataclass(frozen=True)
class MeanEstimate:
    mean: float
    stderr: float
    trials: int
    seed: int


def secrecy_rates(power, gain_main, gain_wiretap, n_main=1.0, n_wiretap=1.0):
    """Vectorised ``(C_m, C_w, C_s)`` from power gains ``|h|**2``."""
    if np.any(np.asarray(power) < 0):
        raise ValueError(f"transmit power must be nonnegative, got {power}")
    if np.any(~(np.asarray(n_main) > 0)) or np.any(~(np.asarray(n_wiretap) > 0)):
        raise ValueError("noise powers must be positive")
    c_m = np.log2(1.0 + power * gain_main / n_main)
    c_w = np.log2(1.0 + power * gain_wiretap / n_wiretap)
    return c_m, c_w, np.maximum(c_m - c_w, 0.0)


def secrecy_capacity(power: float, h_main: complex, h_wiretap: complex,
                     n_main: float = 1.0, n_wiretap: float = 1.0) -> SecrecyReport:
    """Secrecy capacity of one fading realization.

    With ``|h_main| = |h_wiretap| = 1`` this is the plain Gaussian wiretap
    channel ``log2(1 + P/n_m) - log2(1 + P/n_w)``, clipped at zero.
    """
    c_m, c_w, c_s = secrecy_rates(power, abs(h_main) ** 2, abs(h_wiretap) ** 2, n_main, n_wiretap)
    return SecrecyReport(float(c_m), float(c_w), float(c_s))


@dataclass(frozen=True)
class FadingConfig:
    """Rayleigh main and wiretap links."""

    mean_main: float = 1.0
    mean_wiretap: float = 1.0
    n_main: float = 1.0
    n_wiretap: float = 1.0

    def __post_init__(self):
        if self.mean_main < 0 or self.mean_wiretap < 0:
            raise ValueError("mean channel gains must be nonnegative")
        if not (self.n_main > 0 and self.n_wiretap > 0):
            raise ValueError("noise powers must be positive")


CHUNK_TRIALS = 1 << 16


def secrecy_chunk(config: FadingConfig, power: float, seed: int, start: int, stop: int) -> np.ndarray:
    """``[sum C_s, sum C_s**2, #(C_s > 0)]`` over trials ``start .. stop-1``."""
    h = complex_normals(seed, np.arange(start, stop), 2)
    g_m = np.abs(h[:, 0]) ** 2 * config.mean_main
    g_w = np.abs(h[:, 1]) ** 2 * config.mean_wiretap
    c_s = secrecy_rates(power, g_m, g_w, config.n_main, config.n_wiretap)[2]
    return np.array([c_s.sum(), (c_s**2).sum(), np.count_nonzero(c_s > 0)])


def mean_from_sums(sums, trials: int, seed: int) -> MeanEstimate:
    total, total_sq = float(sums[0]), float(sums[1])
    mean = total / trials
    if trials > 1:
        var = max(total_sq - trials * mean * mean, 0.0) / (trials - 1)
        stderr = math.sqrt(var / trials)
    else:
        stderr = 0.0
    return MeanEstimate(mean, stderr, trials, seed)


def ergodic_secrecy(config: FadingConfig, power: float, trials: int, seed: int) -> MeanEstimate:
    """Monte Carlo mean secrecy capacity over Rayleigh realizations."""
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    sums = np.zeros(3)
    for start in range(0, trials, CHUNK_TRIALS):
        sums += secrecy_chunk(config, power, seed, start, min(start + CHUNK_TRIALS, trials))
    return mean_from_sums(sums, trials, seed)


@dataclass(frozen=True)
class Beamformer:
    weights: np.ndarray
    degenerate: bool = False

    def gain(self, h) -> float:
        """``|h^H w|**2``."""
        return float(abs(np.vdot(h, self.weights)) ** 2)


def zf_precoder(h, g) -> Beamformer:
    """Unit-norm beam along ``h`` with the eavesdropper channel ``g`` projected out.

    Collinear ``h`` and ``g`` leave nothing to transmit; the result is then a
    zero beamformer flagged ``degenerate`` instead of an error.
    """
    h = np.asarray(h, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if h.ndim != 1 or h.shape != g.shape or h.size < 2:
        raise ValueError("h and g must be vectors of equal length >= 2")
    g_norm2 = np.vdot(g, g).real
    w = h - g * (np.vdot(g, h) / g_norm2) if g_norm2 > 0 else h.copy()
    norm = np.linalg.norm(w)
    if norm <= NULLSPACE_RTOL * np.linalg.norm(h):
        return Beamformer(np.zeros_like(h), degenerate=True)
    w = w / norm
    # one more projection pass tightens the null to rounding level
    if g_norm2 > 0:
        w = w - g * (np.vdot(g, w) / g_norm2)
        w = w / np.linalg.norm(w)
    return Beamformer(w)


def an_nullspace(H) -> np.ndarray:
    """Orthonormal basis (columns) of the null space of the K x N matrix ``H``.

    Artificial noise sent in this subspace never reaches the legitimate users.
    """
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    k, n = H.shape
    if n <= k:
        raise ValueError(f"need more antennas than users for a null space (N={n}, K={k})")
    _, s, vh = np.linalg.svd(H)
    rank = int(np.count_nonzero(s > NULLSPACE_RTOL * s[0])) if s[0] > 0 else 0
    if rank < k:
        raise ValueError(f"channel matrix is rank deficient (rank {rank} < {k})")
    return vh[k:].conj().T


def an_covariance(basis, power: float) -> np.ndarray:
    """AN covariance with ``power`` spread evenly over the basis directions."""
    basis = np.asarray(basis)
    return power / basis.shape[1] * basis @ basis.conj().T


class BeamMode(enum.Enum):
    NEAR_FIELD_MATCHED = "NearFieldMatched"
    FAR_FIELD_STEERING = "FarFieldSteering"


def beam_weights(array: ArrayGeometry, user: NearField, mode: BeamMode, wavelength: float) -> np.ndarray:
    if mode is BeamMode.NEAR_FIELD_MATCHED:
        h = array_response(array, user, wavelength)
    else:
        h = array_response(array, FarField(user.angle), wavelength)
    return h.conj() / np.linalg.norm(h)


def beamfocus_secrecy(array: ArrayGeometry, user: NearField, eve: NearField, power_dbm: float,
                      mode: BeamMode, *, noise_dbm: float = -90.0,
                      frequency: float = 28e9) -> SecrecyReport:
    """Secrecy capacity of a single-stream beam towards ``user``.

    Both links use the exact spherical-wave response with free-space
    amplitudes; ``mode`` only changes how the beam is formed.
    """
    wavelength = SPEED_OF_LIGHT / frequency
    w = beam_weights(array, user, mode, wavelength)
    g_user = abs(array_response(array, user, wavelength) @ w) ** 2
    g_eve = abs(array_response(array, eve, wavelength) @ w) ** 2
    noise = float(dbm_to_watts(noise_dbm))
    c_m, c_w, c_s = secrecy_rates(float(dbm_to_watts(power_dbm)), g_user, g_eve, noise, noise)
    return SecrecyReport(float(c_m), float(c_w), float(c_s))
