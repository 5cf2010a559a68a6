"""Experiment configuration files.

The format is flat ``key = value`` text under ``[section]`` headers::

    [experiment]
    kind = outage
    trials = 1000000
    seed = 1
    workers = 4

    [sweep]
    name = snr_db
    values = 10, 15, 20, 25, 30, 35, 40

    [scenario]
    distance1 = 40
    ...

Command-line flags override ``trials``, ``seed`` and ``workers``.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

KINDS = ("outage", "secrecy", "covert", "beamfocus", "waveform")


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    sweep_name: str
    sweep_values: tuple[float, ...]
    trials: int = 10_000
    seed: int = 0
    workers: int = 1
    scenario: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError("experiment.kind", f"unknown experiment kind {self.kind!r}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ConfigError("experiment.trials", f"must be a positive integer, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("experiment.seed", f"must be an unsigned 64-bit integer, got {self.seed}")
        if self.workers < 1:
            raise ConfigError("experiment.workers", f"must be at least 1, got {self.workers}")
        if not self.sweep_name:
            raise ConfigError("sweep.name", "missing")
        if not self.sweep_values:
            raise ConfigError("sweep.values", "must list at least one value")
        if len(set(self.sweep_values)) != len(self.sweep_values):
            raise ConfigError("sweep.values", "contains duplicates")

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        overrides = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **overrides)


def _int(value: str, name: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(name, f"expected an integer, got {value!r}") from None


def parse_floats(text: str, name: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(name, f"expected comma-separated numbers, got {text!r}") from None


def parse_config(text: str, kind: str | None = None) -> ExperimentConfig:
    """Build a config from file contents; ``kind`` fills in a missing kind."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("file", str(exc)) from None
    exp = parser["experiment"] if parser.has_section("experiment") else {}
    file_kind = exp.get("kind")
    if file_kind and kind and file_kind != kind:
        raise ConfigError("experiment.kind", f"config is for {file_kind!r}, not {kind!r}")
    if not parser.has_section("sweep"):
        raise ConfigError("sweep", "section missing")
    sweep = parser["sweep"]
    return ExperimentConfig(
        kind=file_kind or kind or "",
        sweep_name=sweep.get("name", "").strip(),
        sweep_values=parse_floats(sweep.get("values", ""), "sweep.values"),
        trials=_int(exp.get("trials", "10000"), "experiment.trials"),
        seed=_int(exp.get("seed", "0"), "experiment.seed"),
        workers=_int(exp.get("workers", "1"), "experiment.workers"),
        scenario=dict(parser["scenario"]) if parser.has_section("scenario") else {},
    )


def load_config(path, kind: str | None = None) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("file", f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, kind)
