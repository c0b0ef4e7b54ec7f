"""Boolean statistics: Fock space C Omega + H, so at most one particle.

``Z = 1 + z zeta``, ``n(e) = g z exp(-beta e) / (1 + z zeta)`` and
``N = z zeta / (1 + z zeta) < 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .spectrum import Spectrum, partition_function

__all__ = ["BooleanState", "boolean_gpf", "boolean_occupation", "boolean_total"]


@dataclass(frozen=True)
class BooleanState:
    spectrum: Spectrum
    beta: float
    fugacity: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise DomainError(f"beta must be finite and > 0, got {self.beta!r}")
        if not (math.isfinite(self.fugacity) and self.fugacity > 0):
            raise DomainError(f"fugacity must be finite and > 0, got {self.fugacity!r}")

    def _denominator(self) -> float:
        d = 1.0 + self.fugacity * partition_function(self.spectrum, self.beta)
        if not math.isfinite(d):
            raise DomainError("1 + z*zeta overflows")
        return d


def boolean_gpf(bs: BooleanState) -> float:
    return bs._denominator()


def boolean_occupation(energy: float, degeneracy: float, bs: BooleanState) -> float:
    """Occupation of one level of ``bs.spectrum``; other levels are rejected."""
    for lv in bs.spectrum:
        if lv.energy == energy and lv.degeneracy == degeneracy:
            break
    else:
        raise DomainError(f"level (energy={energy!r}, degeneracy={degeneracy!r}) is not in the spectrum")
    return degeneracy * bs.fugacity * math.exp(-bs.beta * energy) / bs._denominator()


def boolean_total(bs: BooleanState) -> float:
    """Mean particle number, computed as the sum of level occupations.

    Equals ``z zeta / (1 + z zeta)`` up to rounding; summing the occupations
    makes ``sum n(e) == N`` hold bit for bit.
    """
    d = bs._denominator()
    return math.fsum(lv.degeneracy * bs.fugacity * math.exp(-bs.beta * lv.energy) / d
                     for lv in bs.spectrum)
