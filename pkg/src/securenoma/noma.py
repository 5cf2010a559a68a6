"""Two-user power-domain NOMA: rates, SIC decoding-order strategies, outage.

Conventions used throughout:

* rates are in bits/s/Hz (base-2 logs) and ``gamma_i = 2**R_i - 1``;
* noise power is 1, so ``rho`` is the transmit SNR;
* SIC is modelled at the information-theoretic level: a stage succeeds iff
  its SINR reaches the threshold of the signal being decoded.

Each strategy reduces to a *lead* signal, the one decoded first, which gets
the larger power share ``pa_dos_alpha``.  The user owning the lead signal
decodes it directly with the other signal as interference; the other user
decodes the lead signal first, cancels it, then decodes its own.  Under the
PA-DOS strategies each user picks its own order instead, so a user succeeds
if either order works for it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import PowerLaw, rayleigh_gains

__all__ = [
    "PowerAllocation",
    "TargetRates",
    "DecodingStrategy",
    "OutageEstimate",
    "NomaScenario",
    "Realization",
    "DecodingPlan",
    "QosDecision",
    "HybridGrouping",
    "superpose",
    "achievable_rates_csi",
    "qos_admission",
    "hybrid_threshold",
    "hybrid_threshold_and_group",
    "strategy_order",
    "lead_users",
    "outage_indicators",
    "common_outage",
    "outage_free_feasible",
]


def _check_snr(rho):
    if np.any(~(np.asarray(rho) > 0)):
        raise ValueError(f"transmit SNR must be positive, got {rho}")


@dataclass(frozen=True)
class PowerAllocation:
    alpha1: float = 0.3
    alpha2: float = 0.7
    pa_dos_alpha: float = 0.7

    def __post_init__(self):
        for name in ("alpha1", "alpha2"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.alpha1 + self.alpha2 > 1.0 + 1e-12:
            raise ValueError(f"alpha1 + alpha2 must not exceed 1, got {self.alpha1 + self.alpha2}")
        if not 0.5 < self.pa_dos_alpha < 1.0:
            raise ValueError(f"pa_dos_alpha must lie in (0.5, 1), got {self.pa_dos_alpha}")


@dataclass(frozen=True)
class TargetRates:
    r1: float
    r2: float
    r0: float = 0.0

    def __post_init__(self):
        for name in ("r0", "r1", "r2"):
            if getattr(self, name) < 0:
                raise ValueError(f"target rate {name} must be nonnegative")

    @property
    def gamma0(self) -> float:
        return 2.0**self.r0 - 1.0

    @property
    def gamma1(self) -> float:
        return 2.0**self.r1 - 1.0

    @property
    def gamma2(self) -> float:
        return 2.0**self.r2 - 1.0

    def gamma(self, user: int) -> float:
        return {0: self.gamma0, 1: self.gamma1, 2: self.gamma2}[user]


class DecodingStrategy(enum.Enum):
    FIXED_CSI = "FixedCsiOrder"
    STATISTICAL_CSI = "StatisticalCsiOrder"
    QOS_CR = "QosCr"
    HYBRID_CSI_QOS = "HybridCsiQos"
    PA_DOS_HUF = "PaDosHuf"
    PA_DOS_LUF = "PaDosLuf"

    @property
    def adaptive(self) -> bool:
        """True when each user chooses its own SIC order (PA-DOS)."""
        return self in (DecodingStrategy.PA_DOS_HUF, DecodingStrategy.PA_DOS_LUF)

    @classmethod
    def parse(cls, name: str) -> "DecodingStrategy":
        for member in cls:
            if name.strip().lower() in (member.value.lower(), member.name.lower()):
                return member
        raise ValueError(f"unknown decoding strategy {name!r}")


@dataclass(frozen=True)
class OutageEstimate:
    probability: float
    stderr: float
    trials: int
    seed: int

    @classmethod
    def from_count(cls, outages: int, trials: int, seed: int) -> "OutageEstimate":
        p = outages / trials
        return cls(p, math.sqrt(p * (1.0 - p) / trials), trials, seed)


@dataclass(frozen=True)
class NomaScenario:
    """Geometry, targets and power split for the two-user downlink.

    ``mean_gains`` overrides the path-loss geometry (e.g. unit-Rayleigh
    links); with ``fading=False`` the channels are held at their mean gains.
    """

    distance1: float = 40.0
    distance2: float = 30.0
    d0: float = 10.0
    exponent: float = 2.7
    alpha: float = 0.7
    rate1: float = 1.6
    rate2: float = 0.4
    primary: int = 1
    weak_primary_first: bool = True
    mean_gains: tuple[float, float] | None = None
    fading: bool = True

    def __post_init__(self):
        if not (self.distance1 > 0 and self.distance2 > 0):
            raise ValueError("user distances must be positive")
        if self.primary not in (1, 2):
            raise ValueError(f"primary must be user 1 or 2, got {self.primary}")
        if self.mean_gains is not None and min(self.mean_gains) < 0:
            raise ValueError(f"mean gains must be nonnegative, got {self.mean_gains}")
        # validates alpha and the rates
        self.allocation
        self.rates

    @property
    def rates(self) -> TargetRates:
        return TargetRates(self.rate1, self.rate2)

    @property
    def allocation(self) -> PowerAllocation:
        return PowerAllocation(1.0 - self.alpha, self.alpha, self.alpha)

    @property
    def distances(self) -> tuple[float, float]:
        return self.distance1, self.distance2

    def average_gains(self) -> tuple[float, float]:
        if self.mean_gains is not None:
            return tuple(float(g) for g in self.mean_gains)
        model = PowerLaw(self.d0, self.exponent)
        return float(model.as_power(self.distance1)), float(model.as_power(self.distance2))

    def gains(self, seed: int, trials) -> tuple[np.ndarray, np.ndarray]:
        """Channel power gains of both users for the given trial indices."""
        trials = np.atleast_1d(trials)
        mean = self.average_gains()
        if not self.fading:
            return np.full(trials.shape, mean[0]), np.full(trials.shape, mean[1])
        g = rayleigh_gains(seed, trials, mean)
        return g[:, 0], g[:, 1]


def superpose(s1, s2, pa: PowerAllocation):
    """Superposition-coded symbol ``sqrt(a1)*s1 + sqrt(a2)*s2``."""
    return np.sqrt(pa.alpha1) * s1 + np.sqrt(pa.alpha2) * s2


def achievable_rates_csi(g1, g2, rho, pa: PowerAllocation):
    """Rates of the CSI-ordered downlink with ``g1 >= g2``.

    Returns ``(r_1to2, r_1to1, r_2to2)``: user 1 decoding user 2's signal,
    user 1 decoding its own after SIC, and user 2 decoding its own.  The last
    one is ``log2(1 + a2*rho*g2)`` as published; the outage engine instead
    counts user 1's signal as interference at user 2.
    """
    _check_snr(rho)
    r12 = np.log2(1.0 + pa.alpha2 * g1 / (pa.alpha1 * g1 + 1.0 / rho))
    r11 = np.log2(1.0 + pa.alpha1 * rho * g1)
    r22 = np.log2(1.0 + pa.alpha2 * rho * g2)
    return r12, r11, r22


@dataclass(frozen=True)
class QosDecision:
    admitted: bool
    primary_rate: float
    secondary_rate: float


def qos_admission(g1: float, g2: float, rho: float, r1: float) -> QosDecision:
    """Cognitive-radio admission of user 2 alongside primary user 1."""
    _check_snr(rho)
    if math.isinf(g2):
        primary_rate = 0.0
    else:
        primary_rate = math.log2(1.0 + g1 / (g2 + 1.0 / rho))
    admitted = primary_rate >= r1
    secondary_rate = math.log2(1.0 + rho * g2) if admitted else 0.0
    return QosDecision(admitted, primary_rate, secondary_rate)


def hybrid_threshold(g0, r0: float, rho):
    """Grouping threshold ``max(0, g0/(2**r0 - 1) - 1/rho)``; ``inf`` when r0 = 0."""
    _check_snr(rho)
    if r0 < 0:
        raise ValueError(f"primary target rate must be nonnegative, got {r0}")
    denom = math.expm1(r0 * math.log(2.0))
    if denom == 0:
        return np.full(np.shape(g0), np.inf) if np.ndim(g0) else math.inf
    # tiny positive targets overflow to inf, which is the right limit
    with np.errstate(over="ignore"):
        return np.maximum(0.0, np.asarray(g0) / denom - 1.0 / np.asarray(rho))


@dataclass(frozen=True)
class HybridGrouping:
    tau: float
    groups: tuple[str, ...]

    @property
    def strong(self) -> list[int]:
        return [i for i, g in enumerate(self.groups) if g == "Strong"]

    @property
    def weak(self) -> list[int]:
        return [i for i, g in enumerate(self.groups) if g == "Weak"]


def hybrid_threshold_and_group(g0: float, r0: float, rho: float, secondary_gains) -> HybridGrouping:
    """Split secondary users into Strong (gain above threshold) and Weak."""
    tau = float(hybrid_threshold(g0, r0, rho))
    groups = tuple("Strong" if g > tau else "Weak" for g in secondary_gains)
    return HybridGrouping(tau, groups)


@dataclass(frozen=True)
class Realization:
    """What a strategy may look at when choosing an order."""

    gains: tuple[float, float] | None = None
    distances: tuple[float, float] | None = None
    snr: float | None = None


@dataclass(frozen=True)
class DecodingPlan:
    sic_order: tuple[int, int]
    allocation: tuple[float, float]
    adaptive: bool = False

    @property
    def lead(self) -> int:
        return self.sic_order[0]


def lead_users(strategy: DecodingStrategy, rates: TargetRates, alpha: float, *,
               gains=None, distances=None, snr=None, primary: int = 1,
               weak_primary_first: bool = True) -> np.ndarray:
    """User (1 or 2) whose signal is decoded first, per realization.

    ``gains`` is a pair of arrays ``(g1, g2)``.  Ties go to user 1 being the
    strong / high-rate user.
    """

    def need(value, name):
        if value is None:
            raise ValueError(f"{strategy.value} needs realization field {name!r}")
        return value

    if strategy is DecodingStrategy.FIXED_CSI:
        g1, g2 = need(gains, "gains")
        # weak user leads; user 1 counts as strong on ties
        return np.where(np.asarray(g1) >= np.asarray(g2), 2, 1)
    if strategy is DecodingStrategy.STATISTICAL_CSI:
        d1, d2 = need(distances, "distances")
        return np.asarray(2 if d1 <= d2 else 1)
    if strategy is DecodingStrategy.QOS_CR:
        return np.asarray(primary)
    if strategy is DecodingStrategy.HYBRID_CSI_QOS:
        g = need(gains, "gains")
        rho = need(snr, "snr")
        secondary = 3 - primary
        tau = hybrid_threshold(g[primary - 1], rates.r1 if primary == 1 else rates.r2, rho)
        weak_lead = primary if weak_primary_first else secondary
        return np.where(np.asarray(g[secondary - 1]) > tau, secondary, weak_lead)
    high = 1 if rates.r1 >= rates.r2 else 2
    if strategy is DecodingStrategy.PA_DOS_HUF:
        return np.asarray(high)
    if strategy is DecodingStrategy.PA_DOS_LUF:
        return np.asarray(3 - high)
    raise ValueError(f"unknown strategy {strategy!r}")


def strategy_order(strategy: DecodingStrategy, rates: TargetRates, pa: PowerAllocation,
                   realization: Realization, *, primary: int = 1,
                   weak_primary_first: bool = True) -> DecodingPlan:
    """SIC order and power split chosen by ``strategy`` for one realization.

    ``sic_order`` lists the users' signals in decoding order; the first one
    gets ``pa.pa_dos_alpha`` of the power.
    """
    lead = int(lead_users(strategy, rates, pa.pa_dos_alpha, gains=realization.gains,
                          distances=realization.distances, snr=realization.snr,
                          primary=primary, weak_primary_first=weak_primary_first))
    a = pa.pa_dos_alpha
    allocation = (a, 1.0 - a) if lead == 1 else (1.0 - a, a)
    return DecodingPlan((lead, 3 - lead), allocation, strategy.adaptive)


def _sinr(share, g, rho):
    # decode the signal with `share` of the power; the rest is interference
    return share * g / ((1.0 - share) * g + 1.0 / rho)


def _user_success(g, share, own_gamma, other_gamma, rho, leads: np.ndarray, adaptive: bool):
    direct = _sinr(share, g, rho) >= own_gamma
    sic = (_sinr(1.0 - share, g, rho) >= other_gamma) & (share * rho * g >= own_gamma)
    if adaptive:
        return direct | sic
    return np.where(leads, direct, sic)


def outage_indicators(strategy: DecodingStrategy, g1, g2, rho: float, scenario: NomaScenario) -> np.ndarray:
    """Common-outage flag (any user fails) for each channel realization."""
    _check_snr(rho)
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    rates = scenario.rates
    lead = lead_users(strategy, rates, scenario.alpha, gains=(g1, g2),
                      distances=scenario.distances, snr=rho, primary=scenario.primary,
                      weak_primary_first=scenario.weak_primary_first)
    lead = np.broadcast_to(lead, np.broadcast(g1, g2).shape)
    a = scenario.alpha
    share1 = np.where(lead == 1, a, 1.0 - a)
    ok1 = _user_success(g1, share1, rates.gamma1, rates.gamma2, rho, lead == 1, strategy.adaptive)
    ok2 = _user_success(g2, 1.0 - share1, rates.gamma2, rates.gamma1, rho, lead == 2, strategy.adaptive)
    return ~(ok1 & ok2)


CHUNK_TRIALS = 1 << 16


def common_outage(strategy: DecodingStrategy, scenario: NomaScenario, rho: float,
                  trials: int, seed: int) -> OutageEstimate:
    """Monte Carlo common-outage probability.

    Trial ``t`` always sees the same channels for a given seed, so estimates
    at different SNRs or under different strategies share their draws.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    outages = 0
    for start in range(0, trials, CHUNK_TRIALS):
        idx = np.arange(start, min(start + CHUNK_TRIALS, trials))
        g1, g2 = scenario.gains(seed, idx)
        outages += int(np.count_nonzero(outage_indicators(strategy, g1, g2, rho, scenario)))
    return OutageEstimate.from_count(outages, trials, seed)


def _order_interval(g_lead, g_other, rho, gamma_lead, gamma_other):
    """Feasible range of the lead signal's power share for one order."""
    lo, hi = 0.0, 1.0
    # lead user decodes its signal directly; the other user decodes it first
    for g in (g_lead, g_other):
        if gamma_lead > 0:
            if g <= 0:
                return None
            lo = max(lo, gamma_lead * (g + 1.0 / rho) / (g * (1.0 + gamma_lead)))
    # the other user's own signal after cancellation
    if gamma_other > 0:
        if g_other <= 0:
            return None
        hi = min(hi, 1.0 - gamma_other / (rho * g_other))
    return (lo, hi) if lo <= hi else None


def outage_free_feasible(g1: float, g2: float, rho: float, gamma1: float, gamma2: float) -> bool:
    """Whether some decoding order and power split avoids outage for both users."""
    _check_snr(rho)
    if gamma1 < 0 or gamma2 < 0:
        raise ValueError("SNR thresholds must be nonnegative")
    first = _order_interval(g1, g2, rho, gamma1, gamma2)
    second = _order_interval(g2, g1, rho, gamma2, gamma1)
    return first is not None or second is not None
