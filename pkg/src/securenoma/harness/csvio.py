"""CSV form of sweep results."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .sweep import SweepResult, SweepRow

HEADER = ("sweep", "metric", "estimate", "stderr", "trials", "seed")


def _num(x: float) -> str:
    return format(x, ".10g")


def emit_csv(result: SweepResult, destination=None) -> bytes:
    """Serialize ``result``; write it to ``destination`` (path or binary file) if given."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for r in result.rows:
        writer.writerow((_num(r.sweep), r.metric, _num(r.estimate), _num(r.stderr), r.trials, r.seed))
    data = buf.getvalue().encode()
    if destination is None:
        return data
    if hasattr(destination, "write"):
        destination.write(data)
        return data
    path = Path(destination)
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc.strerror}") from exc
    return data


def parse_csv(data: bytes | str) -> SweepResult:
    text = data.decode() if isinstance(data, bytes) else data
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != HEADER:
        raise ValueError(f"unexpected CSV header {header}")
    rows = [SweepRow(float(s), m, float(e), float(se), int(t), int(seed))
            for s, m, e, se, t, seed in reader]
    return SweepResult(tuple(rows))
