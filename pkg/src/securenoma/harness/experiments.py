"""Experiment kinds: config parsing and per-chunk Monte Carlo work.

An experiment turns each sweep value into a *point*.  A point offers

* ``task``: a picklable callable ``(start, stop) -> ndarray`` returning
  additive statistics over trials ``start .. stop-1`` (``None`` when the
  point is deterministic), and
* ``finalize(totals, trials, seed)``: ``(metric, estimate, stderr, trials)``
  tuples in a fixed metric order.

Everything is validated when the points are built, before any work starts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..channel import SPEED_OF_LIGHT, ArrayGeometry, NearField
from ..covert import (
    HypothesisScenario,
    analytic_min_error,
    default_gamma_grid,
    detection_counts,
    report_from_counts,
)
from ..noma import DecodingStrategy, NomaScenario, outage_indicators
from ..rng import stream_key, uniforms
from ..secrecy import BeamMode, FadingConfig, beamfocus_secrecy, mean_from_sums, secrecy_chunk
from ..waveform.modulation import awgn, qpsk_mod, sc_transmit, sic_receive, sic_second_stage
from .config import ConfigError, ExperimentConfig, parse_floats


def _proportion(count: float, trials: int) -> tuple[float, float]:
    p = count / trials
    return p, math.sqrt(p * (1.0 - p) / trials)


class Params:
    """Typed access to the ``[scenario]`` section; rejects unknown keys."""

    def __init__(self, raw: dict[str, str], known: set[str]):
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError(f"scenario.{unknown[0]}", "unknown parameter")
        self.raw = raw

    def float(self, name: str, default: float) -> float:
        if name not in self.raw:
            return default
        try:
            return float(self.raw[name])
        except ValueError:
            raise ConfigError(f"scenario.{name}", f"expected a number, got {self.raw[name]!r}") from None

    def int(self, name: str, default: int) -> int:
        value = self.float(name, default)
        if value != int(value):
            raise ConfigError(f"scenario.{name}", f"expected an integer, got {self.raw[name]!r}")
        return int(value)

    def bool(self, name: str, default: bool) -> bool:
        if name not in self.raw:
            return default
        text = self.raw[name].strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"scenario.{name}", f"expected a boolean, got {self.raw[name]!r}")

    def floats(self, name: str) -> tuple[float, ...] | None:
        if name not in self.raw:
            return None
        return parse_floats(self.raw[name], f"scenario.{name}")

    def words(self, name: str, default: str) -> list[str]:
        return [w.strip() for w in self.raw.get(name, default).split(",") if w.strip()]


def _build(field_name: str, factory, *args, **kwargs):
    try:
        return factory(*args, **kwargs)
    except ValueError as exc:
        raise ConfigError(field_name, str(exc)) from None


def _check_axis(config: ExperimentConfig, allowed: tuple[str, ...]):
    if config.sweep_name not in allowed:
        raise ConfigError("sweep.name", f"{config.kind} sweeps over one of {', '.join(allowed)}; "
                                        f"got {config.sweep_name!r}")


# --- outage -----------------------------------------------------------------

@dataclass(frozen=True)
class OutageTask:
    scenario: NomaScenario
    strategies: tuple[DecodingStrategy, ...]
    rho: float
    seed: int

    def __call__(self, start: int, stop: int) -> np.ndarray:
        g1, g2 = self.scenario.gains(self.seed, np.arange(start, stop))
        return np.array([np.count_nonzero(outage_indicators(s, g1, g2, self.rho, self.scenario))
                         for s in self.strategies], dtype=np.int64)


@dataclass(frozen=True)
class OutagePoint:
    task: OutageTask

    def finalize(self, totals, trials, seed):
        rows = []
        for strategy, count in zip(self.task.strategies, totals):
            p, se = _proportion(int(count), trials)
            rows.append((f"outage:{strategy.value}", p, se, trials))
        return rows


OUTAGE_KEYS = {"distance1", "distance2", "d0", "exponent", "alpha", "rate1", "rate2", "primary",
               "weak_primary_first", "mean_gains", "fading", "strategies"}


def outage_points(config: ExperimentConfig):
    _check_axis(config, ("snr_db",))
    p = Params(config.scenario, OUTAGE_KEYS)
    mean_gains = p.floats("mean_gains")
    if mean_gains is not None and len(mean_gains) != 2:
        raise ConfigError("scenario.mean_gains", "expected two values")
    scenario = _build("scenario", NomaScenario,
                      distance1=p.float("distance1", 40.0), distance2=p.float("distance2", 30.0),
                      d0=p.float("d0", 10.0), exponent=p.float("exponent", 2.7),
                      alpha=p.float("alpha", 0.7), rate1=p.float("rate1", 1.6),
                      rate2=p.float("rate2", 0.4), primary=p.int("primary", 1),
                      weak_primary_first=p.bool("weak_primary_first", True),
                      mean_gains=mean_gains, fading=p.bool("fading", True))
    names = p.words("strategies", ",".join(s.value for s in DecodingStrategy))
    strategies = tuple(_build("scenario.strategies", DecodingStrategy.parse, n) for n in names)
    if not strategies:
        raise ConfigError("scenario.strategies", "empty")
    return [OutagePoint(OutageTask(scenario, strategies, 10.0 ** (v / 10.0), config.seed))
            for v in config.sweep_values]


# --- ergodic secrecy --------------------------------------------------------

@dataclass(frozen=True)
class SecrecyTask:
    fading: FadingConfig
    power: float
    seed: int

    def __call__(self, start: int, stop: int) -> np.ndarray:
        return secrecy_chunk(self.fading, self.power, self.seed, start, stop)


@dataclass(frozen=True)
class SecrecyPoint:
    task: SecrecyTask

    def finalize(self, totals, trials, seed):
        est = mean_from_sums(totals, trials, seed)
        p, se = _proportion(totals[2], trials)
        return [("ergodic_secrecy", est.mean, est.stderr, trials),
                ("positive_secrecy_prob", p, se, trials)]


def secrecy_points(config: ExperimentConfig):
    _check_axis(config, ("power_db",))
    p = Params(config.scenario, {"mean_main", "mean_wiretap", "n_main", "n_wiretap"})
    fading = _build("scenario", FadingConfig, p.float("mean_main", 1.0), p.float("mean_wiretap", 1.0),
                    p.float("n_main", 1.0), p.float("n_wiretap", 1.0))
    return [SecrecyPoint(SecrecyTask(fading, 10.0 ** (v / 10.0), config.seed)) for v in config.sweep_values]


# --- covert detection -------------------------------------------------------

@dataclass(frozen=True)
class CovertTask:
    scenario: HypothesisScenario
    gammas: tuple[float, ...]
    seed: int

    def __call__(self, start: int, stop: int) -> np.ndarray:
        return detection_counts(self.scenario, self.gammas, self.seed, start, stop).ravel()


@dataclass(frozen=True)
class CovertPoint:
    task: CovertTask

    def finalize(self, totals, trials, seed):
        gammas = np.asarray(self.task.gammas)
        counts = np.asarray(totals).reshape(2, -1)
        best = report_from_counts(self.task.scenario, gammas, counts, trials)
        analytic = analytic_min_error(self.task.scenario)
        p_fa, se_fa = _proportion(best.p_fa * trials, trials)
        p_md, se_md = _proportion(best.p_md * trials, trials)
        return [("threshold", best.threshold, 0.0, trials),
                ("p_fa", p_fa, se_fa, trials),
                ("p_md", p_md, se_md, trials),
                ("xi_min", best.xi, best.stderr, trials),
                ("xi_analytic", analytic.xi, 0.0, trials),
                ("pinsker_bound", best.pinsker_bound, 0.0, trials)]


COVERT_AXES = ("power", "channel_uses", "noise_power", "interference_power")


def covert_points(config: ExperimentConfig):
    _check_axis(config, COVERT_AXES)
    p = Params(config.scenario, set(COVERT_AXES) | {"grid_points"})
    grid_points = p.int("grid_points", 200)
    if grid_points < 1:
        raise ConfigError("scenario.grid_points", "must be at least 1")
    points = []
    for v in config.sweep_values:
        values = {
            "power": p.float("power", 1.0),
            "noise_power": p.float("noise_power", 1.0),
            "channel_uses": p.int("channel_uses", 1),
            "interference_power": p.float("interference_power", 0.0),
        }
        values[config.sweep_name] = int(v) if config.sweep_name == "channel_uses" else v
        if config.sweep_name == "channel_uses" and v != int(v):
            raise ConfigError("sweep.values", f"channel_uses must be integers, got {v}")
        scenario = _build("scenario", HypothesisScenario, **values)
        gammas = tuple(float(g) for g in default_gamma_grid(scenario, grid_points))
        points.append(CovertPoint(CovertTask(scenario, gammas, config.seed)))
    return points


# --- near-field beamfocusing ------------------------------------------------

@dataclass(frozen=True)
class BeamfocusPoint:
    array: ArrayGeometry
    user: NearField
    eve: NearField
    power_dbm: float
    noise_dbm: float
    frequency: float
    task = None

    def finalize(self, totals, trials, seed):
        rows = []
        for mode in BeamMode:
            r = beamfocus_secrecy(self.array, self.user, self.eve, self.power_dbm, mode,
                                  noise_dbm=self.noise_dbm, frequency=self.frequency)
            rows += [(f"c_main:{mode.value}", r.c_main, 0.0, 1),
                     (f"c_wiretap:{mode.value}", r.c_wiretap, 0.0, 1),
                     (f"c_secrecy:{mode.value}", r.c_secrecy, 0.0, 1)]
        return rows


BEAM_AXES = ("user_distance", "eve_distance", "user_angle", "eve_angle", "power_dbm", "noise_dbm",
             "n_elements")


def beamfocus_points(config: ExperimentConfig):
    _check_axis(config, BEAM_AXES)
    p = Params(config.scenario, set(BEAM_AXES) | {"frequency", "spacing"})
    frequency = p.float("frequency", 28e9)
    if not frequency > 0:
        raise ConfigError("scenario.frequency", "must be positive")
    spacing = p.float("spacing", SPEED_OF_LIGHT / frequency / 2)
    points = []
    for v in config.sweep_values:
        values = {
            "user_distance": p.float("user_distance", 15.0),
            "eve_distance": p.float("eve_distance", 5.0),
            "user_angle": p.float("user_angle", 0.0),
            "eve_angle": p.float("eve_angle", 0.0),
            "power_dbm": p.float("power_dbm", -15.0),
            "noise_dbm": p.float("noise_dbm", -90.0),
            "n_elements": p.int("n_elements", 512),
        }
        values[config.sweep_name] = v
        if not float(values["n_elements"]).is_integer():
            raise ConfigError("sweep.values", f"n_elements must be integers, got {v}")
        for name in ("user_distance", "eve_distance"):
            if not values[name] > 0:
                raise ConfigError(f"scenario.{name}", "must be positive")
        array = _build("scenario.n_elements", ArrayGeometry, int(values["n_elements"]), spacing)
        points.append(BeamfocusPoint(array, NearField(values["user_distance"], values["user_angle"]),
                                     NearField(values["eve_distance"], values["eve_angle"]),
                                     values["power_dbm"], values["noise_dbm"], frequency))
    return points


# --- SC / SIC baseband ------------------------------------------------------

@dataclass(frozen=True)
class WaveformTask:
    alpha: float
    snr_db: float
    channel_gain: float
    seed: int

    def __call__(self, start: int, stop: int) -> np.ndarray:
        idx = np.arange(start, stop)
        bits1 = (uniforms(stream_key(self.seed, "bits1"), idx, 2) <= 0.5).astype(np.int8).ravel()
        bits2 = (uniforms(stream_key(self.seed, "bits2"), idx, 2) <= 0.5).astype(np.int8).ravel()
        frame = self.channel_gain * sc_transmit(bits1, bits2, self.alpha)
        if math.isfinite(self.snr_db):
            frame = awgn(frame, self.snr_db, self.seed, energy=self.channel_gain**2, start=start)
        got1, got2 = sic_receive(frame, self.alpha, self.channel_gain)
        genie2 = sic_second_stage(frame, self.alpha, qpsk_mod(bits1), self.channel_gain)
        return np.array([np.count_nonzero(got1 != bits1), np.count_nonzero(got2 != bits2),
                         np.count_nonzero(genie2 != bits2)])


@dataclass(frozen=True)
class WaveformPoint:
    task: WaveformTask

    def finalize(self, totals, trials, seed):
        bits = 2 * trials
        rows = []
        for name, count in zip(("ber_stream1", "ber_stream2", "ber_stream2_genie"), totals):
            p, se = _proportion(int(count), bits)
            rows.append((name, p, se, trials))
        return rows


def waveform_points(config: ExperimentConfig):
    _check_axis(config, ("snr_db",))
    p = Params(config.scenario, {"alpha", "channel_gain"})
    alpha = p.float("alpha", 0.7)
    if not 0.5 < alpha < 1.0:
        raise ConfigError("scenario.alpha", f"must lie in (0.5, 1), got {alpha}")
    gain = p.float("channel_gain", 1.0)
    if gain == 0:
        raise ConfigError("scenario.channel_gain", "must be nonzero")
    return [WaveformPoint(WaveformTask(alpha, v, gain, config.seed)) for v in config.sweep_values]


BUILDERS = {
    "outage": outage_points,
    "secrecy": secrecy_points,
    "covert": covert_points,
    "beamfocus": beamfocus_points,
    "waveform": waveform_points,
}


def build_points(config: ExperimentConfig):
    return BUILDERS[config.kind](config)
