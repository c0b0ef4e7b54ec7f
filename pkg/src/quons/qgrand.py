"""Grand-canonical thermodynamics of q-particles on a discrete spectrum.

For ``q != 0``::

    ln Z_q = -(1/q) * sum_i g_i * ln(1 - z q exp(-beta e_i))

and ``ln Z_0 = z * zeta``.  The q = 0 branch is taken only when ``q == 0``
exactly; continuity across q = 0 is a tested property, not something the
code enforces by blending.  Z_q is normalised so that Z_q -> 1 as z -> 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .spectrum import Spectrum, ThermoState, partition_function, validate

__all__ = [
    "GrandState",
    "OccupancyRow",
    "ln_grand_partition",
    "ln_grand_partition_levels",
    "occupation",
    "occupancy_table",
    "total_number",
    "landau_potential",
    "pv",
    "qgp_upper_bound",
    "ln_z_upper_bound",
    "boltzmann_gap_estimate",
    "boltzmann_gap_bound",
]


@dataclass(frozen=True)
class GrandState:
    spectrum: Spectrum
    state: ThermoState

    def __post_init__(self):
        verdict = validate(self.spectrum, self.state)
        if not verdict:
            raise DomainError(verdict.constraint, boundary=verdict.boundary)

    @classmethod
    def of(cls, spectrum: Spectrum, beta: float, fugacity: float, q: float) -> "GrandState":
        return cls(spectrum, ThermoState(beta, fugacity, q))

    @property
    def beta(self) -> float:
        return self.state.beta

    @property
    def fugacity(self) -> float:
        return self.state.fugacity

    @property
    def q(self) -> float:
        return self.state.q

    @property
    def zeta(self) -> float:
        return partition_function(self.spectrum, self.state.beta)


@dataclass(frozen=True)
class OccupancyRow:
    energy: float
    degeneracy: float
    occupation: float


def _log1m(y):
    """``ln(1 - y)`` for ``y < 1``, accurate near both 0 and 1."""
    y = np.asarray(y, dtype=float)
    out = np.empty_like(y)
    small = y < 0.5
    out[small] = np.log1p(-y[small])
    # 1 - y is exact in binary floating point for y in [0.5, 1]
    out[~small] = np.log(1.0 - y[~small])
    return out


_PHI_SERIES_MAX = 1e-4


def _phi(y):
    """``-ln(1 - y) / y``, equal to 1 at y = 0; a short Taylor series near 0
    keeps full relative precision even when ``y`` is subnormal."""
    y = np.asarray(y, dtype=float)
    out = np.empty_like(y)
    small = np.abs(y) < _PHI_SERIES_MAX
    ys = y[small]
    out[small] = 1.0 + ys * (1 / 2 + ys * (1 / 3 + ys / 4))
    out[~small] = -_log1m(y[~small]) / y[~small]
    return out


def ln_grand_partition_levels(energies, degeneracies, beta, fugacity, q) -> float:
    """Array kernel behind :func:`ln_grand_partition`.

    Performs no validation of the spectrum (energies may be negative, as
    needed for finite differences around a zero level) but still rejects
    ``z q exp(-beta e) >= 1``.
    """
    e = np.asarray(energies, dtype=float)
    g = np.asarray(degeneracies, dtype=float)
    if q == 0:
        # same expression as z * zeta, so the q = 0 bound saturates bit for bit
        return fugacity * math.fsum(g * np.exp(-beta * e))
    x = fugacity * np.exp(-beta * e)
    y = q * x
    if q > 0 and np.any(y >= 1.0):
        raise DomainError("z*q*exp(-beta*e) reaches 1; ln Z_q diverges")
    # -(1/q) ln(1 - q x) written as x * phi(q x)
    return math.fsum(g * x * _phi(y))


def ln_grand_partition(gs: GrandState) -> float:
    """Logarithm of the grand partition function ``Z_q``.

    Examples
    --------
    >>> from quons.spectrum import Spectrum
    >>> s = Spectrum.from_pairs([(0, 1)])
    >>> round(ln_grand_partition(GrandState.of(s, 1.0, 0.5, 1.0)), 12)
    0.69314718056
    """
    s = gs.spectrum
    return ln_grand_partition_levels(s.energies, s.degeneracies, gs.beta, gs.fugacity, gs.q)


def occupation(energy: float, degeneracy: float, st: ThermoState) -> float:
    """Mean occupation ``g / (exp(beta e)/z - q)`` of a level.

    Evaluated as ``g x / (1 - q x)`` with ``x = z exp(-beta e)``, which is the
    same quantity without overflow for large ``beta * e``.
    """
    x = st.fugacity * math.exp(-st.beta * energy)
    denom = 1.0 - st.q * x
    if denom <= 0:
        raise DomainError(
            f"level energy={energy!r}: z*q*exp(-beta*e) = {st.q * x!r} >= 1",
            boundary=math.exp(st.beta * energy) / st.q,
        )
    return degeneracy * x / denom


def occupancy_table(gs: GrandState) -> list[OccupancyRow]:
    return [OccupancyRow(lv.energy, lv.degeneracy, occupation(lv.energy, lv.degeneracy, gs.state))
            for lv in gs.spectrum]


def total_number(gs: GrandState) -> float:
    """Mean particle number, the sum of level occupations."""
    return math.fsum(row.occupation for row in occupancy_table(gs))


def landau_potential(gs: GrandState) -> float:
    return -ln_grand_partition(gs) / gs.beta


def pv(gs: GrandState) -> float:
    """Pressure times volume, ``-Omega_q = ln Z_q / beta``."""
    return ln_grand_partition(gs) / gs.beta


def _ground_factor(gs: GrandState) -> float:
    return gs.fugacity * gs.q * math.exp(-gs.beta * gs.spectrum.min_energy)


def qgp_upper_bound(gs: GrandState) -> float:
    """Estimate of ``ln Z_q`` in the form ``zeta z`` (q <= 0) or
    ``zeta z q / (1 - z q exp(-beta e_min))`` (q > 0).

    For ``0 < q < 1`` this expression is *not* an upper bound: it misses a
    factor ``1/q`` and falls below ``ln Z_q`` (one level at e = 0 with
    q = 1/2, z = 1 gives 1 against ln Z = 2 ln 2).  Use
    :func:`ln_z_upper_bound` when a guaranteed bound is needed; the two agree
    for ``q <= 0`` and ``q = 1``.
    """
    zz = gs.zeta * gs.fugacity
    if gs.q <= 0:
        return zz
    return zz * gs.q / (1.0 - _ground_factor(gs))


def ln_z_upper_bound(gs: GrandState) -> float:
    """Upper bound ``zeta z / (1 - max(q, 0) z exp(-beta e_min))`` on ``ln Z_q``.

    Follows from ``-ln(1 - y) <= y / (1 - y)`` level by level; saturates at q = 0.
    """
    zz = gs.zeta * gs.fugacity
    if gs.q <= 0:
        return zz
    return zz / (1.0 - _ground_factor(gs))


def boltzmann_gap_estimate(gs: GrandState) -> float:
    """Second-order estimate ``(|q|/2) (z zeta)^2`` of ``|ln Z_q - ln Z_0|``.

    This is the leading Taylor term only.  It bounds the gap for ``q <= 0``
    when every degeneracy is at least 1, but for ``q > 0`` the cubic and
    higher terms can exceed it when a single non-degenerate level dominates.
    :func:`boltzmann_gap_bound` includes the remainder.
    """
    return 0.5 * abs(gs.q) * (gs.fugacity * gs.zeta) ** 2


def boltzmann_gap_bound(gs: GrandState) -> float:
    """Rigorous bound ``(|q|/2) sum_i g_i x_i^2 / (1 - max(q,0) x_i)`` on ``|ln Z_q - ln Z_0|``,
    with ``x_i = z exp(-beta e_i)``.

    Never exceeds ``(|q|/2)(z zeta)^2 / (1 - max(q,0) z exp(-beta e_min))``
    when all degeneracies are >= 1, so it still vanishes uniformly as q -> 0.
    """
    x = gs.fugacity * np.exp(-gs.beta * gs.spectrum.energies)
    qp = max(gs.q, 0.0)
    return 0.5 * abs(gs.q) * math.fsum(gs.spectrum.degeneracies * x * x / (1.0 - qp * x))
