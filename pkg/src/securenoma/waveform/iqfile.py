"""Raw IQ files: little-endian interleaved float32 I/Q pairs, no header."""

from __future__ import annotations

from pathlib import Path

import numpy as np

_DTYPE = np.dtype("<c8")


def write_iq(path, frame) -> None:
    path = Path(path)
    data = np.asarray(frame).astype(_DTYPE)
    try:
        path.write_bytes(data.tobytes())
    except OSError as exc:
        raise OSError(f"cannot write IQ file {path}: {exc}") from exc


def read_iq(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) % _DTYPE.itemsize:
        raise ValueError(f"{path}: size {len(raw)} is not a whole number of I/Q float32 pairs")
    return np.frombuffer(raw, dtype=_DTYPE).copy()
