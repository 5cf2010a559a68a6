"""Counter-based random streams.

Every random number in the package is a pure function of
``(seed, trial index, draw index)``.  A trial's stream is a SplitMix64
sequence started from a state derived from the seed and the trial index, so
the numbers a trial sees never depend on which worker ran it or in which
order trials were evaluated.

The batch helpers (:func:`uniforms`, :func:`complex_normals`) produce exactly
the same values as stepping a :class:`TrialStream` for each trial; they just
do it for many trials at once with numpy.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_U53 = 2.0**-53

__all__ = [
    "TrialStream",
    "derive_trial_rng",
    "stream_key",
    "uniforms",
    "complex_normals",
]


def _mix_int(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def _mix(z: np.ndarray) -> np.ndarray:
    # uint64 arithmetic wraps modulo 2**64, which is what SplitMix64 wants
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if seed < 0 or seed > _MASK:
        raise ValueError(f"seed must fit in an unsigned 64-bit integer, got {seed}")
    return seed


def stream_key(seed: int, *labels: int | str) -> int:
    """Derive an independent 64-bit seed from ``seed`` and a label path.

    Used to give separate experiment parts (for example the two hypotheses of
    a detection test) their own trial streams under one master seed.
    """
    key = _mix_int(_check_seed(seed) + _GOLDEN)
    for label in labels:
        if isinstance(label, str):
            digest = hashlib.blake2b(label.encode(), digest_size=8).digest()
            value = int.from_bytes(digest, "little")
        else:
            value = int(label) & _MASK
        key = _mix_int(key ^ _mix_int(value + _GOLDEN))
    return key


def _trial_states(seed: int, trials: np.ndarray) -> np.ndarray:
    key = np.uint64(_mix_int(_check_seed(seed) + _GOLDEN))
    t = np.asarray(trials, dtype=np.uint64)
    return _mix(key + (t + np.uint64(1)) * np.uint64(_GOLDEN))


def _raw(states: np.ndarray, start: int, count: int) -> np.ndarray:
    j = np.arange(start + 1, start + count + 1, dtype=np.uint64) * np.uint64(_GOLDEN)
    return _mix(states[:, None] + j[None, :])


def _to_unit(raw: np.ndarray) -> np.ndarray:
    # (0, 1]: safe to take the log of
    return ((raw >> np.uint64(11)).astype(np.float64) + 1.0) * _U53


def _box_muller(u: np.ndarray) -> np.ndarray:
    radius = np.sqrt(-np.log(u[..., 0::2]))
    return radius * np.exp(2j * np.pi * u[..., 1::2])


def uniforms(seed: int, trials, count: int, offset: int = 0) -> np.ndarray:
    """Uniform (0, 1] draws ``offset .. offset+count-1`` for each trial.

    Returns an array of shape ``(len(trials), count)``.
    """
    with np.errstate(over="ignore"):
        states = _trial_states(seed, np.atleast_1d(trials))
        return _to_unit(_raw(states, offset, count))


def complex_normals(seed: int, trials, count: int, offset: int = 0) -> np.ndarray:
    """Circularly-symmetric CN(0, 1) samples, ``count`` per trial.

    Sample ``i`` consumes uniform draws ``offset + 2i`` and ``offset + 2i + 1``.
    """
    return _box_muller(uniforms(seed, trials, 2 * count, offset))


class TrialStream:
    """The random stream owned by one trial.

    Draw counters advance as values are consumed, so successive calls return
    fresh numbers.
    """

    def __init__(self, seed: int, trial: int):
        if trial < 0:
            raise ValueError(f"trial index must be nonnegative, got {trial}")
        self.seed = _check_seed(seed)
        self.trial = int(trial)
        self.position = 0
        with np.errstate(over="ignore"):
            self._state = _trial_states(self.seed, np.array([self.trial]))

    def uniform(self, count: int) -> np.ndarray:
        with np.errstate(over="ignore"):
            out = _to_unit(_raw(self._state, self.position, count))[0]
        self.position += count
        return out

    def complex_normal(self, count: int) -> np.ndarray:
        return _box_muller(self.uniform(2 * count))

    def __repr__(self) -> str:
        return f"TrialStream(seed={self.seed}, trial={self.trial}, position={self.position})"


def derive_trial_rng(seed: int, trial: int) -> TrialStream:
    """Stream for ``trial`` under master ``seed``; depends on nothing else."""
    return TrialStream(seed, trial)
