"""Constellation overlap seen by a receiver that only observes ``s1 + s2``."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass


def _key(z: complex, digits: int = 9) -> complex:
    # +0.0 folds -0.0 into 0.0 so both land in the same bucket
    return complex(round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0)


@dataclass(frozen=True)
class OverlapReport:
    points: tuple[complex, ...]
    multiplicity: dict
    pairs: dict
    pair_error: float

    @property
    def injective(self) -> bool:
        return all(m == 1 for m in self.multiplicity.values())


def overlap_analysis(alphabet1, alphabet2) -> OverlapReport:
    """Enumerate every symbol pair and group the pairs by their sum.

    ``pair_error`` is the error rate of an eavesdropper that maps each
    received point to one of its pairs without noise: a point hit by ``m``
    equiprobable pairs is wrong with probability ``(m - 1)/m``.
    """
    alphabet1, alphabet2 = list(alphabet1), list(alphabet2)
    if not alphabet1 or not alphabet2:
        raise ValueError("alphabets must be nonempty")
    pairs = defaultdict(list)
    for a in alphabet1:
        for b in alphabet2:
            pairs[_key(complex(a) + complex(b))].append((complex(a), complex(b)))
    total = len(alphabet1) * len(alphabet2)
    points = tuple(sorted(pairs, key=lambda z: (z.real, z.imag)))
    multiplicity = {p: len(pairs[p]) for p in points}
    error = sum(m - 1 for m in multiplicity.values()) / total
    return OverlapReport(points, multiplicity, {p: pairs[p] for p in points}, error)
