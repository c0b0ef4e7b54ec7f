"""Ideal gas of q-particles in three dimensions, continuum limit.

Everything is expressed through the thermal wavelength ``lambda`` and the
reduced fugacity ``y = z|q|``::

    q < 0:  beta P = f_{5/2}(y) / (|q| lambda^3)      rho = f_{3/2}(y) / (|q| lambda^3)
    q = 0:  beta P = rho = z / lambda^3
    q > 0:  beta P = [g_{5/2}(y)/lambda^3 - (a/V) ln(1 - y)] / q
            rho    = [g_{3/2}(y)/lambda^3 + (a/V) y/(1 - y)] / q

``a >= 0`` weights the zero-momentum term split off before the continuum
limit.  Bose-like gases (q > 0) condense above ``rho_c = g_{3/2}(1)/(q lambda^3)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AccuracyError, DomainError
from .polylog import bose_g, fermi_f, quadrature_g

__all__ = [
    "PLANCK",
    "BOLTZMANN",
    "GasPoint",
    "EosSolution",
    "thermal_wavelength",
    "reduced_wavelength",
    "beta_pressure",
    "density",
    "eos_ratio",
    "critical_density",
    "solve_fugacity",
]

PLANCK = 6.626070040e-34  # J s
BOLTZMANN = 1.3806488e-23  # J / K

_BISECT_WIDTH = 1e-14
_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class GasPoint:
    """State of the free gas.

    ``volume`` (length^3, same length unit as ``wavelength``) is only
    needed when ``condensate_a > 0`` and ``q > 0``.
    """

    q: float
    fugacity: float
    wavelength: float = 1.0
    condensate_a: float = 0.0
    volume: float | None = None

    def __post_init__(self):
        if not (-1.0 <= self.q <= 1.0):
            raise DomainError(f"q must lie in [-1, 1], got {self.q!r}")
        if not (math.isfinite(self.fugacity) and self.fugacity > 0):
            raise DomainError(f"fugacity must be finite and > 0, got {self.fugacity!r}")
        if not (math.isfinite(self.wavelength) and self.wavelength > 0):
            raise DomainError(f"wavelength must be finite and > 0, got {self.wavelength!r}")
        if not self.condensate_a >= 0:
            raise DomainError(f"condensate_a must be >= 0, got {self.condensate_a!r}")
        if self.q > 0:
            y = self.fugacity * self.q
            if y > 1.0:
                raise DomainError(f"z*q = {y!r} exceeds 1", boundary=1.0 / self.q)
            if self.condensate_a > 0:
                if self.volume is None or not self.volume > 0:
                    raise DomainError("a positive volume is required when condensate_a > 0")
                if y >= 1.0:
                    raise DomainError("z*q = 1 with condensate_a > 0: the condensate term diverges",
                                      boundary=1.0 / self.q)

    @property
    def reduced_fugacity(self) -> float:
        return self.fugacity * abs(self.q)

    def _condensate_weight(self) -> float:
        if self.q > 0 and self.condensate_a > 0:
            return self.condensate_a / self.volume
        return 0.0


@dataclass(frozen=True)
class EosSolution:
    fugacity: float
    condensate_fraction: float = 0.0
    condensed: bool = False


def thermal_wavelength(mass: float, temperature: float) -> float:
    """``h / sqrt(2 pi m k_B T)`` in metres, for mass in kg and temperature in K."""
    if not (mass > 0 and temperature > 0):
        raise DomainError(f"mass and temperature must be > 0, got {mass!r}, {temperature!r}")
    return PLANCK / math.sqrt(2.0 * math.pi * mass * BOLTZMANN * temperature)


def reduced_wavelength(beta: float) -> float:
    """Thermal wavelength ``sqrt(2 pi beta)`` in units where hbar = m = k_B = 1."""
    if not beta > 0:
        raise DomainError(f"beta must be > 0, got {beta!r}")
    return math.sqrt(2.0 * math.pi * beta)


def beta_pressure(gp: GasPoint) -> float:
    """``P / (k_B T)`` in inverse length^3."""
    lam3 = gp.wavelength ** 3
    if gp.q == 0:
        return gp.fugacity / lam3
    y = gp.reduced_fugacity
    if gp.q < 0:
        return fermi_f(2.5, y).value / (abs(gp.q) * lam3)
    thermal = bose_g(2.5, y).value / lam3
    w = gp._condensate_weight()
    return (thermal - w * math.log1p(-y)) / gp.q if w else thermal / gp.q


def density(gp: GasPoint) -> float:
    """Number density ``N / V`` in inverse length^3."""
    lam3 = gp.wavelength ** 3
    if gp.q == 0:
        return gp.fugacity / lam3
    y = gp.reduced_fugacity
    if gp.q < 0:
        return fermi_f(1.5, y).value / (abs(gp.q) * lam3)
    thermal = bose_g(1.5, y).value / lam3
    w = gp._condensate_weight()
    return (thermal + w * y / (1.0 - y)) / gp.q if w else thermal / gp.q


def eos_ratio(q: float, fugacity: float) -> float:
    """``PV / (N k_B T)`` without condensate (a = 0)."""
    if q == 0:
        return 1.0
    gp = GasPoint(q, fugacity)
    y = gp.reduced_fugacity
    if q < 0:
        return fermi_f(2.5, y).value / fermi_f(1.5, y).value
    return bose_g(2.5, y).value / bose_g(1.5, y).value


def critical_density(q: float, wavelength: float) -> float:
    """Condensation threshold ``g_{3/2}(1) / (q lambda^3)`` for Bose-like q > 0."""
    if not (0.0 < q <= 1.0):
        raise DomainError(f"condensation needs 0 < q <= 1, got q={q!r}")
    if not wavelength > 0:
        raise DomainError(f"wavelength must be > 0, got {wavelength!r}")
    return bose_g(1.5, 1.0).value / (q * wavelength ** 3)


def _solve_log(forward, slope, target, lo, hi):
    """Find ``u`` in ``[lo, hi]`` with ``forward(u) = target`` for increasing ``forward``.

    Bisection until the bracket is narrower than 1e-14 (relative to
    ``max(1, |u|)``), then up to three Newton steps that must stay inside the
    bracket and reduce the residual.
    """
    while hi - lo > _BISECT_WIDTH * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if forward(mid) < target:
            lo = mid
        else:
            hi = mid
    u = 0.5 * (lo + hi)
    resid = forward(u) - target
    for _ in range(3):
        if resid == 0.0:
            break
        step = u - resid / slope(u)
        if not lo <= step <= hi:
            break
        r = forward(step) - target
        if abs(r) >= abs(resid):
            break
        u, resid = step, r
    if abs(resid) > _RESIDUAL_TOL * abs(target):
        raise AccuracyError(
            f"fugacity inversion stalled with residual {resid!r}",
            best=u, bound=abs(resid), bracket=(lo, hi),
        )
    return u


def solve_fugacity(rho_lambda3: float, q: float) -> EosSolution:
    """Fugacity giving reduced density ``rho lambda^3`` (a = 0).

    For q > 0 and ``q rho lambda^3 >= g_{3/2}(1)`` the gas is condensed:
    ``z = 1/q`` and the ground state holds the fraction ``1 - rho_c/rho``.

    Raises
    ------
    AccuracyError
        When the root finder cannot push the residual below 1e-10 relative.
    """
    if not (math.isfinite(rho_lambda3) and rho_lambda3 > 0):
        raise DomainError(f"rho*lambda^3 must be finite and > 0, got {rho_lambda3!r}")
    if not -1.0 <= q <= 1.0:
        raise DomainError(f"q must lie in [-1, 1], got {q!r}")
    if q == 0:
        return EosSolution(rho_lambda3)
    target = abs(q) * rho_lambda3

    if q < 0:
        # f_{3/2}(y) <= y, so y >= target; x d f_{3/2}/dx = f_{1/2}.
        def forward(u):
            return fermi_f(1.5, math.exp(u)).value

        def slope(u):
            return fermi_f(0.5, math.exp(u)).value

        lo = math.log(target)
        hi = max(lo + 1.0, 1.0)
        while forward(hi) < target:
            hi = lo + 2.0 * (hi - lo)
        u = _solve_log(forward, slope, target, lo, hi)
        return EosSolution(math.exp(u) / abs(q))

    critical = bose_g(1.5, 1.0).value
    if target >= critical:
        return EosSolution(1.0 / q, 1.0 - critical / target, True)

    def forward(u):
        return bose_g(1.5, math.exp(u)).value

    def slope(u):
        return quadrature_g(0.5, math.exp(u)).value

    # y <= g_{3/2}(y) <= y/(1-y)
    lo = math.log(target / (1.0 + target))
    hi = math.log(min(target, 1.0))
    u = _solve_log(forward, slope, target, lo, hi)
    return EosSolution(math.exp(u) / q)
