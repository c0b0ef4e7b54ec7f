"""Randomised invariant suite run by ``quons verify``.

Each property is evaluated on seeded random admissible samples and reduced
to a *worst ratio*: the largest observed deviation divided by its
tolerance.  A property passes when that ratio is at most 1.  Output is a
pure function of (spectrum, samples, seed).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import boolean, freegas, oracles, polylog, qgrand
from .errors import QuonError
from .spectrum import Spectrum, ThermoState, partition_function

__all__ = ["PropertyResult", "sample_states", "run_verification", "format_report"]

EPS = float(np.finfo(float).eps)
FD_REL_STEP = 1e-6
FD_TOL = 1e-6
# Skip finite-difference checks whose rounding noise alone would exceed this.
_FD_NOISE_LIMIT = 1e-8


@dataclass
class PropertyResult:
    name: str
    samples: int
    worst: float = 0.0
    skipped: int = 0
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None and self.worst <= 1.0

    def record(self, ratio: float, describe: Callable[[], str]):
        if not math.isfinite(ratio):
            ratio = math.inf
        if ratio > self.worst:
            self.worst = ratio
        if ratio > 1.0 and self.counterexample is None:
            self.counterexample = describe()


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def sample_states(spectrum: Spectrum, n: int, rng: np.random.Generator,
                  beta_range=(0.2, 1.2)) -> list[qgrand.GrandState]:
    """Admissible states with log-uniform beta; a fifth of q values sit exactly on -1, 0, 1.

    For q > 0 the fugacity is a uniform fraction in [0.01, 0.95] of the
    admissible bound; otherwise log-uniform on [1e-3, 1e2].
    """
    lo, hi = np.log(beta_range[0]), np.log(beta_range[1])
    out = []
    for _ in range(n):
        beta = float(np.exp(rng.uniform(lo, hi)))
        if rng.uniform() < 0.2:
            q = float(rng.choice([-1.0, 0.0, 1.0]))
        else:
            q = float(rng.uniform(-1.0, 1.0))
        if q > 0:
            z = float(rng.uniform(0.01, 0.95)) * math.exp(beta * spectrum.min_energy) / q
        else:
            z = float(10 ** rng.uniform(-3, 2))
        out.append(qgrand.GrandState(spectrum, ThermoState(beta, z, q)))
    return out


def _describe(gs: qgrand.GrandState, **extra) -> str:
    parts = [f"beta={gs.beta!r}", f"z={gs.fugacity!r}", f"q={gs.q!r}"]
    parts += [f"{k}={v!r}" for k, v in extra.items()]
    return " ".join(parts)


def _check_grand(spectrum: Spectrum, states, results: dict[str, PropertyResult]):
    e, g = spectrum.energies, spectrum.degeneracies
    pairs = spectrum.pairs()
    for gs in states:
        beta, z, q = gs.beta, gs.fugacity, gs.q
        ln_z = qgrand.ln_grand_partition(gs)

        # q = +-1 against the direct log-sum oracle
        # a fugacity admissible for bosons: z q when q > 0, else mapped into (0, e^{beta e_min})
        zb = z * q if q > 0 else z / (1.0 + z) * math.exp(beta * spectrum.min_energy)
        for sign in (1, -1):
            st = qgrand.GrandState.of(spectrum, beta, zb, float(sign))
            got = qgrand.ln_grand_partition(st)
            want = oracles.bose_fermi_ln_z(pairs, beta, zb, sign)
            results["bose_fermi_reduction"].record(
                _rel(got, want) / 1e-13, lambda: _describe(st, oracle=want, got=got))

        # -(1/beta) d lnZ / d e_i = n_i
        occ = [row.occupation for row in qgrand.occupancy_table(gs)]
        res = results["occupation_derivative"]
        for i, (ei, ni) in enumerate(zip(e, occ)):
            h = FD_REL_STEP * max(1.0, ei)
            if EPS * abs(ln_z) / (h * beta * ni) > _FD_NOISE_LIMIT:
                res.skipped += 1
                continue

            def lnz_at(x, i=i):
                shifted = e.copy()
                shifted[i] = x
                return qgrand.ln_grand_partition_levels(shifted, g, beta, z, q)

            fd = -oracles.central_difference(lnz_at, ei, h) / beta
            res.record(_rel(fd, ni) / FD_TOL, lambda: _describe(gs, level=i, fd=fd, occupation=ni))

        # z d lnZ / dz = N
        n_tot = qgrand.total_number(gs)
        h = FD_REL_STEP * z
        fd = z * oracles.central_difference(
            lambda zz: qgrand.ln_grand_partition_levels(e, g, beta, zz, q), z, h)
        results["fugacity_derivative"].record(
            _rel(fd, n_tot) / FD_TOL, lambda: _describe(gs, fd=fd, N=n_tot))

        # Z_q(z) = Z_{+-1}(z|q|)^(1/|q|)
        if q not in (-1.0, 0.0, 1.0):
            ref = qgrand.GrandState.of(spectrum, beta, z * abs(q), math.copysign(1.0, q))
            other = qgrand.ln_grand_partition(ref) / abs(q)
            results["power_identity"].record(
                _rel(ln_z, other) / 1e-13, lambda: _describe(gs, lnZ=ln_z, rescaled=other))

        bound = qgrand.ln_z_upper_bound(gs)
        results["grand_upper_bound"].record(
            (ln_z - bound) / (1e-12 * max(1.0, abs(bound))) if ln_z > bound else 0.0,
            lambda: _describe(gs, lnZ=ln_z, bound=bound))

        ln_z0 = z * partition_function(spectrum, beta)
        gap = abs(ln_z - ln_z0)
        gap_bound = qgrand.boltzmann_gap_bound(gs) + 8 * EPS * (abs(ln_z) + ln_z0)
        results["boltzmann_gap"].record(
            gap / gap_bound if gap_bound > 0 else (0.0 if gap == 0 else math.inf),
            lambda: _describe(gs, gap=gap, bound=gap_bound))

        # ln Z_q nondecreasing in q on the common domain
        q2 = min(1.0, q + 0.25)
        if q2 <= 0 or z * q2 * math.exp(-beta * spectrum.min_energy) < 1.0:
            ln_z2 = qgrand.ln_grand_partition_levels(e, g, beta, z, q2)
            drop = ln_z - ln_z2
            slack = 8 * EPS * abs(ln_z)
            results["q_monotonicity"].record(
                drop / slack if drop > 0 else 0.0, lambda: _describe(gs, q2=q2, drop=drop))

        zeta_hi = partition_function(spectrum, beta * 1.1)
        zeta_lo = partition_function(spectrum, beta)
        strict = bool(np.any(e > 0))
        ok = zeta_hi < zeta_lo if strict else zeta_hi == zeta_lo
        results["partition_monotone"].record(0.0 if ok else math.inf, lambda: _describe(gs))

        bs = boolean.BooleanState(spectrum, beta, z)
        n_b = boolean.boolean_total(bs)
        occ_b = [boolean.boolean_occupation(lv.energy, lv.degeneracy, bs) for lv in spectrum]
        ok = n_b < 1.0 and math.fsum(occ_b) == n_b
        if len(spectrum) >= 2:
            ok = ok and max(occ_b) < n_b
        results["boolean_occupation"].record(0.0 if ok else math.inf,
                                             lambda: _describe(gs, N=n_b, occupations=occ_b))


def _check_continuum(n: int, rng: np.random.Generator, results: dict[str, PropertyResult]):
    for _ in range(n):
        nu = float(rng.choice([1.5, 2.5]))
        x = float(rng.uniform(0.02, 0.98))

        series, quad = polylog.fermi_f(nu, x), polylog.quadrature_f(nu, x)
        results["polylog_series_vs_quadrature"].record(
            abs(series.value - quad.value) / 1e-8, lambda: f"f nu={nu} x={x}")
        series, quad = polylog.bose_g(nu, x), polylog.quadrature_g(nu, x)
        results["polylog_series_vs_quadrature"].record(
            abs(series.value - quad.value) / 1e-8, lambda: f"g nu={nu} x={x}")

        h = 1e-4 * x
        for name, fn in (("f", polylog.fermi_f), ("g", polylog.bose_g)):
            fd = x * oracles.central_difference(lambda t: fn(2.5, t).value, x, h)
            exact = fn(1.5, x).value
            results["polylog_derivative_ladder"].record(
                _rel(fd, exact) / 1e-6, lambda: f"{name} x={x} fd={fd} exact={exact}")

        f_val, g_val = polylog.fermi_f(nu, x).value, polylog.bose_g(nu, x).value
        results["polylog_ordering"].record(
            0.0 if f_val <= x <= g_val else math.inf, lambda: f"nu={nu} x={x} f={f_val} g={g_val}")

        q = float(rng.choice([-1.0, -0.5, 0.0, 0.5, 1.0]))
        rho = float(10 ** rng.uniform(-3, 1))
        sol = freegas.solve_fugacity(rho, q)
        thermal = freegas.density(freegas.GasPoint(q, sol.fugacity))
        total = thermal + sol.condensate_fraction * rho
        ok_phase = not sol.condensed or q > 0
        results["fugacity_round_trip"].record(
            _rel(total, rho) / 1e-10 if ok_phase else math.inf,
            lambda: f"q={q} rho_lambda3={rho} z={sol.fugacity} fraction={sol.condensate_fraction}")

        zc = float(10 ** rng.uniform(-6, -3))
        qc = float(rng.choice([-1.0, -0.5, 0.5, 1.0]))
        dev = abs(freegas.eos_ratio(qc, zc) - 1.0)
        results["classical_limit"].record(dev / (2 * zc), lambda: f"q={qc} z={zc} dev={dev}")


GRAND_PROPERTIES = (
    "bose_fermi_reduction",
    "occupation_derivative",
    "fugacity_derivative",
    "power_identity",
    "grand_upper_bound",
    "boltzmann_gap",
    "q_monotonicity",
    "partition_monotone",
    "boolean_occupation",
)
CONTINUUM_PROPERTIES = (
    "polylog_series_vs_quadrature",
    "polylog_derivative_ladder",
    "polylog_ordering",
    "fugacity_round_trip",
    "classical_limit",
)


def run_verification(spectrum: Spectrum, samples: int = 200, seed: int = 0) -> list[PropertyResult]:
    """Run every property; continuum checks use ``max(10, samples // 10)`` points."""
    rng = np.random.default_rng(seed)
    states = sample_states(spectrum, samples, rng)
    n_cont = max(10, samples // 10)
    results = {name: PropertyResult(name, samples) for name in GRAND_PROPERTIES}
    results.update({name: PropertyResult(name, n_cont) for name in CONTINUUM_PROPERTIES})
    errors = PropertyResult("no_library_errors", samples + n_cont)
    try:
        _check_grand(spectrum, states, results)
        _check_continuum(n_cont, rng, results)
    except QuonError as exc:
        # an exception on admissible input is itself a violation
        errors.record(math.inf, lambda: f"{type(exc).__name__}: {exc}")
    return [*results.values(), errors]


def format_report(results: list[PropertyResult]) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status} {r.name:<30} samples={r.samples:<6d} worst_ratio={r.worst:.6e}"
        if r.skipped:
            line += f" skipped={r.skipped}"
        lines.append(line)
        if not r.passed:
            lines.append(f"     counterexample: {r.counterexample}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} properties passed")
    return "\n".join(lines) + "\n"
