"""QPSK mapping, superposition coding and the two-stage SIC receiver.

Frames are 1-D complex numpy arrays.  QPSK is Gray mapped with unit symbol
energy: bit pair ``(b0, b1)`` maps to ``((1 - 2*b0) + 1j*(1 - 2*b1)) / sqrt(2)``.
"""

from __future__ import annotations

import numpy as np

from ..rng import complex_normals, stream_key

_SCALE = 1.0 / np.sqrt(2.0)


def qpsk_mod(bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.int8).ravel()
    if bits.size % 2:
        raise ValueError(f"QPSK needs an even number of bits, got {bits.size}")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0 or 1")
    pairs = bits.reshape(-1, 2)
    return ((1 - 2 * pairs[:, 0]) + 1j * (1 - 2 * pairs[:, 1])) * _SCALE


def qpsk_demod(frame) -> np.ndarray:
    """Minimum-distance QPSK decisions, two bits per symbol."""
    frame = np.asarray(frame)
    bits = np.empty((frame.size, 2), dtype=np.int8)
    bits[:, 0] = frame.real < 0
    bits[:, 1] = frame.imag < 0
    return bits.ravel()


def _check_alpha(alpha: float):
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"power split must lie in (0, 1), got {alpha}")
    if alpha == 0.5:
        raise ValueError("power split 0.5 makes the composite constellation ambiguous")


def sc_transmit(bits1, bits2, alpha: float) -> np.ndarray:
    """Superposition-coded frame ``sqrt(alpha)*s1 + sqrt(1 - alpha)*s2``."""
    _check_alpha(alpha)
    s1 = qpsk_mod(bits1)
    s2 = qpsk_mod(bits2)
    if s1.size != s2.size:
        raise ValueError(f"streams differ in length ({s1.size} vs {s2.size} symbols)")
    return np.sqrt(alpha) * s1 + np.sqrt(1.0 - alpha) * s2


def awgn(frame, snr_db: float, seed: int, energy: float = 1.0, start: int = 0) -> np.ndarray:
    """Add CN(0, energy / snr) noise.

    Sample ``i`` of the frame is treated as symbol ``start + i`` and draws its
    noise from that symbol's own stream, so a long frame cut into pieces gets
    the same noise as the whole.
    """
    frame = np.asarray(frame, dtype=complex)
    noise_power = energy / 10.0 ** (snr_db / 10.0)
    symbols = np.arange(start, start + frame.size)
    noise = complex_normals(stream_key(seed, "awgn"), symbols, 1)[:, 0]
    return frame + np.sqrt(noise_power) * noise


def _equalize(frame, channel_gain) -> np.ndarray:
    if channel_gain == 0:
        raise ValueError("channel gain must be nonzero")
    return np.asarray(frame, dtype=complex) / channel_gain


def sic_second_stage(frame, alpha: float, first_symbols, channel_gain: complex = 1.0) -> np.ndarray:
    """Cancel the stronger stream's symbols and demodulate the weaker one.

    Feeding the true symbols gives the genie-aided receiver.
    """
    _check_alpha(alpha)
    strong, weak = max(alpha, 1 - alpha), min(alpha, 1 - alpha)
    residual = _equalize(frame, channel_gain) - np.sqrt(strong) * np.asarray(first_symbols)
    return qpsk_demod(residual / np.sqrt(weak))


def sic_receive(frame, alpha: float, channel_gain: complex = 1.0):
    """Decode both streams of a superposition-coded frame.

    Stage one demodulates the higher-power stream (stream 1 when
    ``alpha > 0.5``) with the other as noise; stage two subtracts its
    reconstruction, rescales and demodulates the remaining stream.
    Returns ``(bits1, bits2)``.
    """
    _check_alpha(alpha)
    bits_first = qpsk_demod(_equalize(frame, channel_gain))
    bits_second = sic_second_stage(frame, alpha, qpsk_mod(bits_first), channel_gain)
    if alpha > 0.5:
        return bits_first, bits_second
    return bits_second, bits_first
