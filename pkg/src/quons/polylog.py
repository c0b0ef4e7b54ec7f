"""Bose functions g_nu(x) and Fermi functions f_nu(x) with error bounds.

    g_nu(x) = sum_{k>=1} x^k / k^nu,               0 <= x <= 1, nu > 1
    f_nu(x) = sum_{k>=1} (-1)^(k+1) x^k / k^nu,    x >= 0, continued as -Li_nu(-x)

Every evaluation returns a :class:`PolylogResult` carrying an absolute
error bound: truncation is bounded analytically, and rounding is charged a
few ulps per accumulated magnitude.  The quadrature routines are a fully
separate route through the integral representations and serve as a
cross-check on the series.
"""
from __future__ import annotations

import functools
import heapq
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import bernoulli, expit, gammaincc

from .errors import AccuracyError, DomainError

__all__ = [
    "PolylogResult",
    "riemann_zeta",
    "bose_g",
    "fermi_f",
    "quadrature_f",
    "quadrature_g",
    "FERMI_SWITCH",
]

EPS = float(np.finfo(float).eps)

#: fermi_f uses the accelerated series up to here and quadrature above.
FERMI_SWITCH = 0.9
#: bose_g uses the plain power series up to here.
BOSE_SERIES_MAX = 0.5
#: explicit terms before the Euler-Maclaurin tail in g_nu(1).
ZETA_EXPLICIT_TERMS = 10_000
# Beyond this order the plain series is used even near x = 1.
_ROBINSON_MAX_NU = 12.0
_ROBINSON_TERMS = 30
_CVZ_TERMS = 26
_QUAD_ABS_TOL = 1e-12
_QUAD_REL_TOL = 1e-14
_QUAD_MAX_PANELS = 4000
_TAIL_INTEGRAND_CUTOFF = 1e-16


@dataclass(frozen=True)
class PolylogResult:
    value: float
    abs_error_bound: float
    terms_or_nodes_used: int

    def __float__(self):
        return self.value


# ---------------------------------------------------------------------------
# Riemann zeta
# ---------------------------------------------------------------------------

_EM_ORDER = 12
_B2J = bernoulli(2 * (_EM_ORDER + 1))[2::2]  # B_2, B_4, ..., B_{2(m+1)}
_B2J_OVER_FACT = [_B2J[j - 1] / math.factorial(2 * j) for j in range(1, _EM_ORDER + 2)]


def _zeta_euler_maclaurin(s: float, n_explicit: int, order: int) -> tuple[float, float]:
    """Euler-Maclaurin evaluation of zeta(s) for real ``s >= 0``, ``s != 1``.

    The remainder after ``order`` Bernoulli corrections is bounded by the
    first omitted correction (valid for real s > -(2*order + 1)).
    """
    n = float(n_explicit)
    k = np.arange(1, n_explicit, dtype=float)
    head_terms = k ** -s
    head = math.fsum(head_terms)
    tail = [n ** (1.0 - s) / (s - 1.0), 0.5 * n ** -s]
    poch = s  # s (s+1) ... (s+2j-2)
    for j in range(1, order + 2):
        term = _B2J_OVER_FACT[j - 1] * poch * n ** (-s - 2 * j + 1)
        if j == order + 1:
            remainder = abs(term)
            break
        tail.append(term)
        poch *= (s + 2 * j - 1) * (s + 2 * j)
    value = head + math.fsum(tail)
    rounding = 4 * EPS * (head + math.fsum(abs(t) for t in tail))
    return value, remainder + rounding


@functools.lru_cache(maxsize=512)
def _zeta_cached(s: float) -> tuple[float, float]:
    if s == 1.0:
        raise DomainError("zeta has a pole at s = 1")
    if s < 0:
        if s == math.floor(s) and int(s) % 2 == 0:
            return 0.0, 0.0
        reflected, err = _zeta_cached(1.0 - s)
        factor = 2.0 ** s * math.pi ** (s - 1.0) * math.sin(0.5 * math.pi * s) * math.gamma(1.0 - s)
        value = factor * reflected
        rel = err / abs(reflected) + 16 * EPS
        return value, abs(value) * rel
    return _zeta_euler_maclaurin(s, 20, _EM_ORDER)


def riemann_zeta(s: float) -> PolylogResult:
    """Riemann zeta function for real ``s != 1``.

    Euler-Maclaurin summation for ``s >= 0``; the functional equation maps
    ``s < 0`` onto ``1 - s > 1``.
    """
    s = float(s)
    if not math.isfinite(s):
        raise DomainError(f"s must be finite, got {s!r}")
    value, err = _zeta_cached(s)
    return PolylogResult(value, err, 20)


# ---------------------------------------------------------------------------
# Bose functions
# ---------------------------------------------------------------------------

def _series_tail_bound(nu: float, x: float, n: int) -> float:
    """Bound on ``sum_{k>n} x^k / k^nu``."""
    m = n + 1.0
    lead = x ** m
    if lead == 0.0:
        return 0.0
    bounds = []
    if x < 1.0:
        bounds.append(lead * m ** -nu / (1.0 - x))
    if nu > 1.0:
        bounds.append(lead * (m ** -nu + m ** (1.0 - nu) / (nu - 1.0)))
    return min(bounds)


def _bose_series(nu: float, x: float, n: int) -> PolylogResult:
    k = np.arange(1, n + 1, dtype=float)
    terms = x ** k / k ** nu
    value = math.fsum(terms)
    bound = _series_tail_bound(nu, x, n) + 4 * EPS * value
    return PolylogResult(value, bound, n)


def _bose_series_auto(nu: float, x: float) -> PolylogResult:
    n = 16
    while _series_tail_bound(nu, x, n) > 1e-18 * x:
        n *= 2
        if n > 1 << 22:
            raise AccuracyError(f"g_{nu}({x}) series does not converge in {n} terms")
    return _bose_series(nu, x, n)


@functools.lru_cache(maxsize=64)
def _robinson_coefficients(nu: float) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """``zeta(nu - k) / k!`` and their error bounds for k = 0..K.

    The k = nu - 1 entry is zeroed for integer nu (it is carried by the
    logarithmic leading term instead).
    """
    integer = nu == math.floor(nu)
    coeffs, errs = [], []
    for k in range(_ROBINSON_TERMS + 1):
        if integer and k == int(nu) - 1:
            coeffs.append(0.0)
            errs.append(0.0)
            continue
        z, e = _zeta_cached(nu - k)
        f = math.factorial(k)
        coeffs.append(z / f)
        errs.append(e / f)
    return tuple(coeffs), tuple(errs)


def _bose_robinson(nu: float, x: float) -> PolylogResult:
    """g_nu(e^mu) = Gamma(1-nu)(-mu)^(nu-1) + sum_k zeta(nu-k) mu^k / k!, |mu| < 2 pi."""
    mu = math.log(x)
    coeffs, errs = _robinson_coefficients(nu)
    powers = mu ** np.arange(_ROBINSON_TERMS + 1, dtype=float)
    terms = np.asarray(coeffs) * powers
    if nu == math.floor(nu):
        n = int(nu)
        harmonic = math.fsum(1.0 / j for j in range(1, n))
        lead = mu ** (n - 1) / math.factorial(n - 1) * (harmonic - math.log(-mu))
    else:
        lead = math.gamma(1.0 - nu) * (-mu) ** (nu - 1.0)
    value = math.fsum([lead, *terms])
    r = abs(mu) / (2 * math.pi)
    truncation = 3.3 * (2 * math.pi) ** (nu - 1.0) * r ** (_ROBINSON_TERMS + 1) / (1.0 - r)
    coeff_err = math.fsum(np.asarray(errs) * np.abs(powers))
    rounding = 8 * EPS * (abs(lead) + math.fsum(np.abs(terms)))
    return PolylogResult(value, truncation + coeff_err + rounding, _ROBINSON_TERMS + 1)


def _check_nu(nu: float, lower: float, name: str) -> float:
    nu = float(nu)
    if not (math.isfinite(nu) and nu > lower):
        raise DomainError(f"{name} requires nu > {lower:g}, got {nu!r}")
    return nu


def bose_g(nu: float, x: float) -> PolylogResult:
    """Bose function ``g_nu(x) = sum_k x^k / k^nu`` on ``0 <= x <= 1``.

    Regimes: plain power series for ``x <= 0.5``; the expansion in
    ``mu = ln x`` about x = 1 (convergent for |mu| < 2 pi) on (0.5, 1);
    at x = 1, ``zeta(nu)`` from 10**4 explicit terms plus an
    Euler-Maclaurin tail.  Orders above 12 always use the plain series.

    Raises
    ------
    DomainError
        For ``nu <= 1`` or ``x`` outside ``[0, 1]``.
    """
    nu = _check_nu(nu, 1.0, "bose_g")
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"bose_g requires 0 <= x <= 1, got {x!r}", boundary=1.0)
    if x == 0.0:
        return PolylogResult(0.0, 0.0, 0)
    if x <= BOSE_SERIES_MAX or nu > _ROBINSON_MAX_NU:
        return _bose_series_auto(nu, x)
    if x < 1.0:
        return _bose_robinson(nu, x)
    value, err = _zeta_euler_maclaurin(nu, ZETA_EXPLICIT_TERMS, 3)
    return PolylogResult(value, err, ZETA_EXPLICIT_TERMS)


# ---------------------------------------------------------------------------
# Fermi functions
# ---------------------------------------------------------------------------

def _fermi_cvz(nu: float, x: float, n: int) -> PolylogResult:
    """Alternating series accelerated by the Cohen-Villegas-Zagier transform.

    ``a_k = x^(k+1)/(k+1)^nu`` is a moment sequence of a positive weight on
    ``[0, x]``, so the error is at most ``2 a_0 / (3 + sqrt 8)^n``.
    """
    k = np.arange(1, n + 1, dtype=float)
    a = x ** k / k ** nu
    d = (3.0 + math.sqrt(8.0)) ** n
    d = 0.5 * (d + 1.0 / d)
    b, c, s = -1.0, -d, 0.0
    for j in range(n):
        c = b - c
        s += c * a[j]
        b = (j + n) * (j - n) * b / ((j + 0.5) * (j + 1.0))
    value = s / d
    truncation = 2.0 * x / (3.0 + math.sqrt(8.0)) ** n
    rounding = (n + 4) * EPS * math.fsum(a)
    return PolylogResult(value, truncation + rounding, n)


def fermi_f(nu: float, x: float) -> PolylogResult:
    """Fermi function ``f_nu(x) = -Li_nu(-x)`` for ``x >= 0``.

    Accelerated alternating series for ``x <= 0.9``; above that, the
    integral representation (:func:`quadrature_f`).
    """
    nu = _check_nu(nu, 0.0, "fermi_f")
    x = float(x)
    if not (x >= 0.0 and math.isfinite(x)):
        raise DomainError(f"fermi_f requires finite x >= 0, got {x!r}")
    if x == 0.0:
        return PolylogResult(0.0, 0.0, 0)
    if x <= FERMI_SWITCH:
        return _fermi_cvz(nu, x, _CVZ_TERMS)
    return quadrature_f(nu, x)


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

_LO_N, _HI_N = 10, 20
_LO_RULE = leggauss(_LO_N)
_HI_RULE = leggauss(_HI_N)


def _gauss(f, a, b, rule):
    nodes, weights = rule
    half = 0.5 * (b - a)
    return half * float(np.dot(weights, f(half * nodes + 0.5 * (a + b))))


def _panel(f, a, b):
    hi = _gauss(f, a, b, _HI_RULE)
    lo = _gauss(f, a, b, _LO_RULE)
    return hi, abs(hi - lo)


def _adaptive(f, breakpoints, abs_tol, rel_tol):
    """Global adaptive Gauss-Legendre (10/20-point pairs) over ``breakpoints``.

    Returns ``(value, error_estimate, nodes_used)``.
    """
    heap = []
    for a, b in zip(breakpoints, breakpoints[1:]):
        val, err = _panel(f, a, b)
        heap.append((-err, a, b, val))
    heapq.heapify(heap)
    nodes = len(heap) * (_LO_N + _HI_N)
    while True:
        total_err = math.fsum(-h[0] for h in heap)
        value = math.fsum(h[3] for h in heap)
        if total_err <= max(abs_tol, rel_tol * abs(value)):
            return value, total_err, nodes
        if len(heap) >= _QUAD_MAX_PANELS:
            raise AccuracyError(
                f"adaptive quadrature stalled at error {total_err:.3e} after {len(heap)} panels",
                best=value,
                bound=total_err,
            )
        _, a, b, _ = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        for lo, hi in ((a, mid), (mid, b)):
            val, err = _panel(f, lo, hi)
            heapq.heappush(heap, (-err, lo, hi, val))
        nodes += 2 * (_LO_N + _HI_N)


def _integrate(integrand, log_x, weight_power, prefactor, amplitude, edge, tol):
    """Integrate ``integrand`` over ``t in [0, inf)``.

    ``prefactor * amplitude * t**weight_power * exp(log_x - t**2)`` must
    dominate the integrand; it fixes the cutoff and bounds the discarded tail.
    """
    t_max = math.sqrt(max(edge, 0.0)) + 6.0

    def envelope(t):
        return prefactor * amplitude * t ** weight_power * math.exp(min(log_x - t * t, 700.0))

    while envelope(t_max) >= _TAIL_INTEGRAND_CUTOFF:
        t_max *= 2.0
    # int_T^inf t^p e^{-t^2} dt = Gamma((p+1)/2) Q((p+1)/2, T^2) / 2
    a = 0.5 * (weight_power + 1.0)
    q = gammaincc(a, t_max * t_max)
    tail = 0.0 if q == 0.0 else prefactor * amplitude * 0.5 * math.gamma(a) * q * math.exp(min(log_x, 700.0))
    points = [0.0, t_max]
    if edge > 0.0:
        t0 = math.sqrt(edge)
        points = sorted({0.0, max(t0 - 1.0, 0.0), t0, t0 + 1.0, t_max})
    value, err, nodes = _adaptive(integrand, points, tol, _QUAD_REL_TOL)
    rounding = 8 * EPS * abs(value)
    return PolylogResult(value, err + tail + rounding, nodes)


def quadrature_f(nu: float, x: float, tol: float = _QUAD_ABS_TOL) -> PolylogResult:
    """``f_nu(x)`` from its integral representation, for ``x >= 0``.

    With ``t = p sqrt(beta / 2m)`` the momentum integrals become::

        f_{5/2}(x) = (4/sqrt(pi)) int_0^inf t^2 ln(1 + x e^{-t^2}) dt
        f_nu(x)    = (2/Gamma(nu)) int_0^inf t^(2 nu - 1) / (e^{t^2}/x + 1) dt

    The second form covers f_{3/2} and any ``nu >= 1/2``; smaller orders use
    ``w = t^(2 nu)`` to remove the singularity at 0.
    """
    nu = _check_nu(nu, 0.0, "quadrature_f")
    x = float(x)
    if not (x >= 0.0 and math.isfinite(x)):
        raise DomainError(f"quadrature_f requires finite x >= 0, got {x!r}")
    if x == 0.0:
        return PolylogResult(0.0, 0.0, 0)
    lx = math.log(x)
    if nu == 2.5:
        pref = 4.0 / math.sqrt(math.pi)
        return _integrate(lambda t: pref * t * t * np.logaddexp(0.0, lx - t * t),
                          lx, 2.0, pref, 1.0, lx, tol)
    if nu >= 0.5:
        pref = 2.0 / math.gamma(nu)
        p = 2.0 * nu - 1.0
        return _integrate(lambda t: pref * t ** p * expit(lx - t * t),
                          lx, p, pref, 1.0, lx, tol)
    # f_nu = (1/Gamma(nu+1)) int_0^inf dw / (e^{w^(1/nu)}/x + 1); with w = s^2 this
    # becomes (2/Gamma(nu+1)) int_0^inf s / (e^{s^(2/nu)}/x + 1) ds.  The range is cut
    # where the occupation drops below e^-40; no tail bound is attached.
    pref = 2.0 / math.gamma(nu + 1.0)
    edge = max(lx, 0.0)
    points = sorted({0.0, edge ** (0.5 * nu), (edge + 40.0) ** (0.5 * nu)})
    value, err, nodes = _adaptive(lambda s: pref * s * expit(lx - s ** (2.0 / nu)),
                                  points, tol, _QUAD_REL_TOL)
    return PolylogResult(value, err + 8 * EPS * abs(value), nodes)


def quadrature_g(nu: float, x: float, tol: float = _QUAD_ABS_TOL) -> PolylogResult:
    """``g_nu(x)`` from its integral representation, for ``0 <= x < 1``::

        g_{5/2}(x) = -(4/sqrt(pi)) int_0^inf t^2 ln(1 - x e^{-t^2}) dt
        g_nu(x)    =  (2/Gamma(nu)) int_0^inf t^(2 nu - 1) / (e^{t^2}/x - 1) dt
    """
    nu = _check_nu(nu, 0.0, "quadrature_g")
    if nu < 0.5:
        raise DomainError(f"quadrature_g requires nu >= 1/2, got {nu!r}")
    x = float(x)
    if not (0.0 <= x < 1.0):
        raise DomainError(f"quadrature_g requires 0 <= x < 1, got {x!r}", boundary=1.0)
    if x == 0.0:
        return PolylogResult(0.0, 0.0, 0)
    lx = math.log(x)
    amplitude = 1.0 / (1.0 - x)
    if nu == 2.5:
        pref = 4.0 / math.sqrt(math.pi)
        return _integrate(lambda t: -pref * t * t * np.log(-np.expm1(lx - t * t)),
                          lx, 2.0, pref, amplitude, 0.0, tol)
    pref = 2.0 / math.gamma(nu)
    p = 2.0 * nu - 1.0
    return _integrate(lambda t: pref * t ** p / np.expm1(t * t - lx),
                      lx, p, pref, amplitude, 0.0, tol)
