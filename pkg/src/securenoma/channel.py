"""Channel realizations: path loss, Rayleigh fading and array responses.

Two path-loss conventions coexist here and must not be mixed up:

* :class:`PowerLaw` ``(d0/d)**nu`` is a *power* gain.
* :class:`FreeSpace` ``c/(4*pi*f*d)`` is an *amplitude* gain.

Both expose ``as_power`` and ``as_amplitude`` so callers always say which one
they want.  :func:`path_loss` returns the model's native domain.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .rng import TrialStream, complex_normals

log = logging.getLogger(__name__)

SPEED_OF_LIGHT = 3.0e8

__all__ = [
    "SPEED_OF_LIGHT",
    "LinkGeometry",
    "PowerLaw",
    "FreeSpace",
    "ArrayGeometry",
    "FarField",
    "NearField",
    "path_loss",
    "rayleigh_sample",
    "rayleigh_gains",
    "array_response",
]


def _check_distance(d) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    if np.any(~(d > 0)):
        raise ValueError(f"distance must be positive, got {d}")
    return d


@dataclass(frozen=True)
class PowerLaw:
    """Power-domain path loss ``(d0/d)**exponent``."""

    d0: float = 10.0
    exponent: float = 2.7

    def __post_init__(self):
        if not self.d0 > 0:
            raise ValueError(f"reference distance d0 must be positive, got {self.d0}")

    def as_power(self, d):
        d = _check_distance(d)
        if np.any(d < self.d0):
            log.warning("distance %s below reference distance %s: gain exceeds 1", d, self.d0)
        return (self.d0 / d) ** self.exponent

    def as_amplitude(self, d):
        return np.sqrt(self.as_power(d))


@dataclass(frozen=True)
class FreeSpace:
    """Amplitude-domain free-space loss ``c/(4*pi*f*d)``."""

    frequency: float = 28e9

    def __post_init__(self):
        if not self.frequency > 0:
            raise ValueError(f"carrier frequency must be positive, got {self.frequency}")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency

    def as_amplitude(self, d):
        d = _check_distance(d)
        return SPEED_OF_LIGHT / (4.0 * np.pi * self.frequency * d)

    def as_power(self, d):
        return self.as_amplitude(d) ** 2


PathLossModel = PowerLaw | FreeSpace


def path_loss(model: PathLossModel, d):
    """Evaluate ``model`` at distance ``d`` in its native domain.

    PowerLaw gives a power gain, FreeSpace an amplitude gain.
    """
    if isinstance(model, PowerLaw):
        return model.as_power(d)
    if isinstance(model, FreeSpace):
        return model.as_amplitude(d)
    raise TypeError(f"unknown path-loss model {model!r}")


@dataclass(frozen=True)
class LinkGeometry:
    distance: float
    angle: float = 0.0
    d0: float = 10.0
    exponent: float = 2.7
    frequency: float = 28e9

    def __post_init__(self):
        for name in ("distance", "d0", "frequency"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")

    @property
    def power_law(self) -> PowerLaw:
        return PowerLaw(self.d0, self.exponent)

    @property
    def free_space(self) -> FreeSpace:
        return FreeSpace(self.frequency)

    def mean_gain(self) -> float:
        """Average power gain under the power-law model."""
        return float(self.power_law.as_power(self.distance))


def rayleigh_sample(stream: TrialStream, mean_power: float, size: int | None = None):
    """Draw CN(0, mean_power) fading coefficient(s) from ``stream``."""
    if mean_power < 0:
        raise ValueError(f"mean_power must be nonnegative, got {mean_power}")
    h = np.sqrt(mean_power) * stream.complex_normal(1 if size is None else size)
    return complex(h[0]) if size is None else h


def rayleigh_gains(seed: int, trials, mean_powers, offset: int = 0) -> np.ndarray:
    """Power gains ``|h|**2`` for a batch of trials.

    Column ``k`` is the link with average gain ``mean_powers[k]``; it uses
    draw indices ``offset + 2k`` and ``offset + 2k + 1`` of each trial stream.
    """
    mean_powers = np.asarray(mean_powers, dtype=float)
    if np.any(mean_powers < 0):
        raise ValueError(f"mean powers must be nonnegative, got {mean_powers}")
    h = complex_normals(seed, trials, mean_powers.size, offset)
    return np.abs(h) ** 2 * mean_powers[None, :]


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array centred on the origin, axis along y.

    Angles are measured from broadside (the +x axis).
    """

    n_elements: int = 512
    spacing: float = SPEED_OF_LIGHT / 28e9 / 2
    positions: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ValueError(f"n_elements must be a positive integer, got {self.n_elements}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        offsets = (np.arange(self.n_elements) - (self.n_elements - 1) / 2) * self.spacing
        offsets.setflags(write=False)
        object.__setattr__(self, "positions", offsets)

    @classmethod
    def half_wavelength(cls, n_elements: int, wavelength: float) -> "ArrayGeometry":
        return cls(n_elements, wavelength / 2)

    @property
    def aperture(self) -> float:
        return (self.n_elements - 1) * self.spacing


@dataclass(frozen=True)
class FarField:
    angle: float


@dataclass(frozen=True)
class NearField:
    """A point at ``distance`` from the array centre along ``angle``."""

    distance: float
    angle: float = 0.0

    @property
    def xy(self) -> tuple[float, float]:
        return self.distance * np.cos(self.angle), self.distance * np.sin(self.angle)


def element_distances(array: ArrayGeometry, point: NearField) -> np.ndarray:
    x, y = point.xy
    return np.hypot(x, y - array.positions)


def array_response(array: ArrayGeometry, target, wavelength: float, model=None) -> np.ndarray:
    """Channel vector from each array element to ``target``.

    The received sample for transmit weights ``w`` is ``h @ w``.

    FarField targets give unit-modulus plane-wave phases
    ``exp(j*2*pi*y_n*sin(angle)/wavelength)``.  NearField targets use the exact
    element distance ``r_n``: phase ``exp(-j*2*pi*r_n/wavelength)`` and amplitude
    ``model.as_amplitude(r_n)`` (free space at ``c/wavelength`` by default).
    """
    if not wavelength > 0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    if isinstance(target, FarField):
        phase = 2 * np.pi * array.positions * np.sin(target.angle) / wavelength
        return np.exp(1j * phase)
    if isinstance(target, NearField):
        r = element_distances(array, target)
        if np.any(r <= 1e-12 * max(array.aperture, wavelength)):
            raise ValueError("near-field point coincides with an array element")
        if model is None:
            model = FreeSpace(SPEED_OF_LIGHT / wavelength)
        return model.as_amplitude(r) * np.exp(-2j * np.pi * r / wavelength)
    raise TypeError(f"unknown target {target!r}")
