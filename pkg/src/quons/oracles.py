"""Independent reference evaluations used by the verification suite and tests.

Nothing here shares code with the production paths it checks: loops are
plain Python over ``math`` functions, and the series use different
acceleration schemes from :mod:`quons.polylog`.
"""
from __future__ import annotations

import math
from typing import Callable, Iterable

__all__ = [
    "bose_fermi_ln_z",
    "euler_transform_alternating",
    "eta_euler",
    "zeta_via_eta",
    "zeta_euler_maclaurin",
    "fermi_f_euler",
    "central_difference",
]


def bose_fermi_ln_z(pairs: Iterable[tuple[float, float]], beta: float, z: float, sign: int) -> float:
    """``-sum g ln(1 - z e^{-beta e})`` (sign=+1) or ``sum g ln(1 + z e^{-beta e})`` (sign=-1)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 (Bose) or -1 (Fermi)")
    total = 0.0
    for energy, degeneracy in pairs:
        total += -sign * degeneracy * math.log1p(-sign * z * math.exp(-beta * energy))
    return total


def euler_transform_alternating(term: Callable[[int], float], n_direct: int = 10,
                                n_avg: int = 60) -> float:
    """Sum ``sum_{k>=1} (-1)^(k+1) term(k)`` by Euler's transform.

    Sums ``n_direct`` terms plainly, then applies the transform to the rest
    in its repeated-averaging form (average neighbouring partial sums
    ``n_avg`` times), which avoids explicit high-order differences.
    """
    partial = 0.0
    for k in range(1, n_direct + 1):
        partial += (-1) ** (k + 1) * term(k)
    sums = []
    s = partial
    for k in range(n_direct + 1, n_direct + n_avg + 2):
        s += (-1) ** (k + 1) * term(k)
        sums.append(s)
    while len(sums) > 1:
        sums = [0.5 * (a + b) for a, b in zip(sums, sums[1:])]
    return sums[0]


def eta_euler(s: float) -> float:
    """Dirichlet eta ``sum (-1)^(k+1) k^-s`` by Euler transform."""
    return euler_transform_alternating(lambda k: k ** -s)


def zeta_via_eta(s: float) -> float:
    """``zeta(s) = eta(s) / (1 - 2^(1-s))``, s > 0, s != 1."""
    return eta_euler(s) / (1.0 - 2.0 ** (1.0 - s))


# B_2, B_4, ..., B_14
_BERNOULLI_EVEN = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)


def zeta_euler_maclaurin(s: float, n: int = 40) -> float:
    """``zeta(s)`` for s > 1: ``n - 1`` explicit terms plus an Euler-Maclaurin tail from ``n``.

    Uses seven Bernoulli corrections; for s <= 3 and n = 40 the truncation
    error is below 1e-18 relative.
    """
    head = sum(k ** -s for k in range(1, n))
    tail = n ** (1 - s) / (s - 1) + 0.5 * n ** -s
    rising = s  # s (s+1) ... (s+2j-2)
    for j, b in enumerate(_BERNOULLI_EVEN, start=1):
        tail += b / math.factorial(2 * j) * rising * n ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return head + tail


def fermi_f_euler(nu: float, x: float) -> float:
    """``f_nu(x)`` for ``0 <= x <= 1`` by Euler transform of the alternating series."""
    return euler_transform_alternating(lambda k: x ** k / k ** nu)


def central_difference(f: Callable[[float], float], x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)
