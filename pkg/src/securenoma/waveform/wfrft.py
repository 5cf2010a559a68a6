"""Four-term weighted fractional Fourier transform."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

M = 4


@dataclass(frozen=True)
class WfrftParams:
    """Transform order and scale vectors.

    ``sign`` resolves the +/- in the weight exponent; with all-zero scale
    vectors the transform is the classic 4-WFRFT for either sign.
    """

    order: float = 0.0
    mv: tuple[int, ...] = field(default=(0, 0, 0, 0))
    nv: tuple[int, ...] = field(default=(0, 0, 0, 0))
    sign: str = "-"

    def __post_init__(self):
        if len(self.mv) != M or len(self.nv) != M:
            raise ValueError(f"scale vectors must have length {M}")
        if self.sign not in ("+", "-"):
            raise ValueError(f"sign must be '+' or '-', got {self.sign!r}")


def wfrft_weights(params: WfrftParams) -> np.ndarray:
    s = 1.0 if params.sign == "+" else -1.0
    k = np.arange(M)
    m = np.asarray(params.mv, dtype=float)
    n = np.asarray(params.nv, dtype=float)
    i = np.arange(M)[:, None]
    exponent = (M * m + 1) * params.order * (k + M * n) - i * k
    return np.exp(s * 2j * np.pi / M * exponent).sum(axis=1) / M


def dft_powers(frame) -> tuple[np.ndarray, ...]:
    """Unitary DFT applied 0, 1, 2 and 3 times."""
    x = np.asarray(frame, dtype=complex)
    x1 = np.fft.fft(x, norm="ortho")
    x2 = np.roll(x[::-1], 1)
    x3 = np.fft.ifft(x, norm="ortho")
    return x, x1, x2, x3


def wfrft(frame, params: WfrftParams) -> np.ndarray:
    w = wfrft_weights(params)
    return sum(wi * xi for wi, xi in zip(w, dft_powers(frame)))
