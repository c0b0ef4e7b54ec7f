"""Acceptance criteria, one marked group per criterion.

A summary line per criterion is printed at the end of the pytest run.
Tolerances below are the acceptance thresholds and must not be loosened.
"""
import math
import subprocess
import sys

import numpy as np
import pytest

from quons import cli, freegas, oracles, qgrand
from quons.boolean import BooleanState, boolean_occupation, boolean_total
from quons.errors import DomainError
from quons.pedagogical import gibbs_series_partial, naive_full_fock_gpf
from quons.polylog import bose_g, fermi_f, quadrature_f, quadrature_g
from quons.qgrand import GrandState
from quons.spectrum import Spectrum, bundled_spectrum, partition_function

G32_AT_ONE = 2.612375348685488
F32_AT_ONE = 0.7651470246254080

criterion = pytest.mark.criterion


def _log_uniform(rng, lo, hi):
    return float(np.exp(rng.uniform(math.log(lo), math.log(hi))))


def _admissible_states(n, seed, beta_range=(0.2, 5.0)):
    """Seeded states on the bundled spectrum spanning both signs of q, with q in {-1, 0, 1} included."""
    s = bundled_spectrum()
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        beta = _log_uniform(rng, *beta_range)
        q = (-1.0, 0.0, 1.0)[i % 3] if i % 10 == 0 else float(rng.uniform(-1, 1))
        if q > 0:
            z = float(rng.uniform(0.01, 0.99)) * math.exp(beta * s.min_energy) / q
        else:
            z = _log_uniform(rng, 1e-3, 1e2)
        out.append(GrandState.of(s, beta, z, q))
    return out


# 1 ---------------------------------------------------------------------------

@criterion(1, "Bose/Fermi reduction against the direct log-sum, 1e-13 relative")
def test_bose_fermi_reduction():
    s = bundled_spectrum()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        beta = _log_uniform(rng, 0.1, 10.0)
        z = float(rng.uniform(0.001, 0.999))  # admissible for both signs: e_min = 0
        for sign in (1, -1):
            got = qgrand.ln_grand_partition(GrandState.of(s, beta, z, float(sign)))
            want = oracles.bose_fermi_ln_z(s.pairs(), beta, z, sign)
            worst = max(worst, abs(got - want) / abs(want))
    assert worst <= 1e-13


# 2 ---------------------------------------------------------------------------

@criterion(2, "central differences reproduce occupations, 1e-6 relative")
@pytest.mark.parametrize("q", [-1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0])
def test_occupation_derivative(q):
    s = bundled_spectrum()
    e, g = s.energies, s.degeneracies
    worst = 0.0
    for beta in (0.5, 1.0, 2.0):
        for frac in (0.1, 0.5, 0.9):
            z = frac / q if q > 0 else 5 * frac
            rows = qgrand.occupancy_table(GrandState.of(s, beta, z, q))
            for i, row in enumerate(rows):
                h = 1e-6 * max(1.0, e[i])

                def lnz(x, i=i):
                    shifted = e.copy()
                    shifted[i] = x
                    return qgrand.ln_grand_partition_levels(shifted, g, beta, z, q)

                fd = -oracles.central_difference(lnz, e[i], h) / beta
                worst = max(worst, abs(fd - row.occupation) / row.occupation)
    assert worst <= 1e-6


# 3 ---------------------------------------------------------------------------

@criterion(3, "ln Z_q below the stated estimate on 1000 samples; q = 0 saturates")
def test_stated_estimate_bounds_ln_z():
    violations = []
    for gs in _admissible_states(1000, seed=31):
        ln_z = qgrand.ln_grand_partition(gs)
        bound = qgrand.qgp_upper_bound(gs)
        if ln_z > bound + 1e-12 * max(1.0, abs(bound)):
            violations.append((gs.beta, gs.fugacity, gs.q, ln_z, bound))
    assert not violations, f"{len(violations)} violations, first (beta, z, q, lnZ, bound) = {violations[0]}"


@criterion(3, "ln Z_q below the stated estimate on 1000 samples; q = 0 saturates")
def test_estimate_saturates_at_q_zero():
    for gs in _admissible_states(300, seed=32):
        gs0 = GrandState.of(gs.spectrum, gs.beta, gs.fugacity if gs.q <= 0 else gs.fugacity * gs.q, 0.0)
        assert qgrand.ln_grand_partition(gs0) == qgrand.qgp_upper_bound(gs0)


# 4 ---------------------------------------------------------------------------

BETA0, DELTA = 0.5, 0.9  # strip [beta0, inf) x (0, delta], delta < exp(beta0 * e_min) = 1


def _strip_samples(n, seed):
    s = bundled_spectrum()
    rng = np.random.default_rng(seed)
    return [(s, float(rng.uniform(BETA0, 5.0)), float(rng.uniform(1e-4, DELTA)), float(rng.uniform(-1, 1)))
            for _ in range(n)]


@criterion(4, "|ln Z_q - ln Z_0| <= (|q|/2)(z zeta)^2 in the strip; q = +-1e-8 within 1e-12")
def test_second_order_estimate_in_strip():
    violations = []
    for s, beta, z, q in _strip_samples(1000, seed=41):
        gs = GrandState.of(s, beta, z, q)
        gap = abs(qgrand.ln_grand_partition(gs) - z * gs.zeta)
        estimate = 0.5 * abs(q) * (z * gs.zeta) ** 2
        if gap > estimate * (1 + 1e-12):
            violations.append((beta, z, q, gap, estimate))
    assert not violations, f"{len(violations)} violations, first (beta, z, q, gap, estimate) = {violations[0]}"


@criterion(4, "|ln Z_q - ln Z_0| <= (|q|/2)(z zeta)^2 in the strip; q = +-1e-8 within 1e-12")
def test_tiny_q_matches_boltzmann():
    worst = 0.0
    for s, beta, z, _ in _strip_samples(1000, seed=42):
        ln_z0 = qgrand.ln_grand_partition(GrandState.of(s, beta, z, 0.0))
        for q in (1e-8, -1e-8):
            ln_zq = qgrand.ln_grand_partition(GrandState.of(s, beta, z, q))
            worst = max(worst, abs(ln_zq - ln_z0) / ln_z0)
    assert worst <= 1e-12, f"worst relative gap {worst:.3e}"


# 5 ---------------------------------------------------------------------------

@criterion(5, "g_3/2(1) and f_3/2(1) within 1e-9, each confirmed by two oracles")
def test_bose_constant():
    value = bose_g(1.5, 1.0).value
    assert abs(value - G32_AT_ONE) <= 1e-9
    assert abs(oracles.zeta_euler_maclaurin(1.5) - G32_AT_ONE) <= 1e-9
    assert abs(oracles.zeta_via_eta(1.5) - G32_AT_ONE) <= 1e-9
    assert abs(quadrature_g(1.5, 1 - 1e-12).value - value) <= 1e-5  # continuity towards x = 1


@criterion(5, "g_3/2(1) and f_3/2(1) within 1e-9, each confirmed by two oracles")
def test_fermi_constant():
    value = fermi_f(1.5, 1.0).value
    assert abs(value - F32_AT_ONE) <= 1e-9
    assert abs(oracles.fermi_f_euler(1.5, 1.0) - F32_AT_ONE) <= 1e-9
    assert abs((1 - 2 ** -0.5) * oracles.zeta_euler_maclaurin(1.5) - F32_AT_ONE) <= 1e-9
    assert abs(quadrature_f(1.5, 1.0).value - F32_AT_ONE) <= 1e-9


# 6 ---------------------------------------------------------------------------

@criterion(6, "series and quadrature agree to 1e-8 on x = 0.1..0.9")
@pytest.mark.parametrize("nu", [1.5, 2.5])
def test_series_vs_quadrature(nu):
    for x in np.round(np.arange(1, 10) / 10, 1):
        assert abs(fermi_f(nu, x).value - quadrature_f(nu, x).value) <= 1e-8
        assert abs(bose_g(nu, x).value - quadrature_g(nu, x).value) <= 1e-8


# 7 ---------------------------------------------------------------------------

@criterion(7, "rho_c q lambda^3 constant to 1e-12 and equal to g_3/2(1)")
@pytest.mark.parametrize("lam", [1.0, 0.37, 2.5])
def test_critical_density_law(lam):
    products = [freegas.critical_density(q, lam) * q * lam ** 3 for q in (0.1, 0.25, 0.5, 0.75, 1.0)]
    ref = products[-1]
    assert max(abs(p - ref) / ref for p in products) <= 1e-12
    assert abs(ref - G32_AT_ONE) <= 1e-9


# 8 ---------------------------------------------------------------------------

@criterion(8, "|PV/NkT - 1| <= 2z for z <= 1e-3; exactly 1 at q = 0")
def test_classical_limit():
    for q in (-1.0, -0.5, 0.5, 1.0):
        for z in (1e-3, 5e-4, 1e-4, 1e-5, 1e-6):
            assert abs(freegas.eos_ratio(q, z) - 1.0) <= 2 * z
    for z in (1e-6, 1e-3, 0.5, 10.0):
        assert freegas.eos_ratio(0.0, z) == 1.0


# 9 ---------------------------------------------------------------------------

@criterion(9, "density(solve_fugacity(rho lambda^3)) recovers rho lambda^3 to 1e-10")
@pytest.mark.parametrize("q", [-1.0, -0.5, 0.0, 0.5, 1.0])
def test_fugacity_round_trip(q):
    for rho in (1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 2.6, 10.0, 100.0):
        sol = freegas.solve_fugacity(rho, q)
        thermal = freegas.density(freegas.GasPoint(q, sol.fugacity))
        if sol.condensed:
            assert q > 0
            thermal += sol.condensate_fraction * rho
        assert abs(thermal - rho) <= 1e-10 * rho


@criterion(9, "density(solve_fugacity(rho lambda^3)) recovers rho lambda^3 to 1e-10")
def test_condensed_point():
    q, rho = 0.5, 8.0
    rho_c = freegas.critical_density(q, 1.0)
    sol = freegas.solve_fugacity(rho, q)
    assert sol.condensed and sol.fugacity == 1 / q
    assert sol.condensate_fraction == pytest.approx(1 - rho_c / rho, rel=1e-15)
    assert abs(freegas.density(freegas.GasPoint(q, sol.fugacity)) - rho_c) <= 1e-10 * rho_c


# 10 --------------------------------------------------------------------------

@criterion(10, "full-Fock formula fails exactly at zeta z >= 1; 25-term Gibbs series within 1e-14")
def test_naive_formula_domain():
    unit = Spectrum.from_pairs([(0.0, 1.0)])
    below = math.nextafter(1.0, 0.0)
    assert naive_full_fock_gpf(unit, 1.0, below) == pytest.approx(1 / (1 - below), rel=1e-15)
    for z in (1.0, math.nextafter(1.0, 2.0), 3.0):
        with pytest.raises(DomainError):
            naive_full_fock_gpf(unit, 1.0, z)


@criterion(10, "full-Fock formula fails exactly at zeta z >= 1; 25-term Gibbs series within 1e-14")
def test_gibbs_series():
    s = bundled_spectrum()
    beta = 1.0
    zeta = partition_function(s, beta)
    for zz in np.linspace(0.0, 3.0, 31)[1:]:
        got = gibbs_series_partial(s, beta, zz / zeta, 25)
        want = math.exp(zz / zeta * zeta)
        assert abs(got - want) <= 1e-14 * want


# 11 --------------------------------------------------------------------------

@criterion(11, "Boolean: N < 1, sum of occupations equals N, n(e) < N")
def test_boolean_statistics():
    s = bundled_spectrum()
    rng = np.random.default_rng(111)
    for _ in range(1000):
        bs = BooleanState(s, _log_uniform(rng, 0.05, 5.0), _log_uniform(rng, 1e-4, 1e4))
        n = boolean_total(bs)
        occ = [boolean_occupation(lv.energy, lv.degeneracy, bs) for lv in s]
        assert 0 < n < 1
        assert math.fsum(occ) == n
        assert max(occ) < n


# 12 --------------------------------------------------------------------------

@criterion(12, "CLI: verify reports byte-identical; grand matches worked values at 17 digits")
def test_verify_deterministic(tmp_path):
    outputs = []
    for name in ("first.txt", "second.txt"):
        path = tmp_path / name
        proc = subprocess.run([sys.executable, "-m", "quons.cli", "verify", "--seed", "42", "--output", str(path)])
        assert proc.returncode == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]


@criterion(12, "CLI: verify reports byte-identical; grand matches worked values at 17 digits")
@pytest.mark.parametrize("q,ln_z,n", [("1", math.log(2.0), 1.0), ("0", 0.5, 0.5)])
def test_grand_worked_examples(tmp_path, capsys, q, ln_z, n):
    path = tmp_path / "one.csv"
    path.write_text("energy,degeneracy\n0,1\n")
    code = cli.main(["grand", "--spectrum", str(path), "--beta", "1", "--z", "0.5", "--q", q, "--format", "csv"])
    out = capsys.readouterr().out
    assert code == 0
    header, row = out.splitlines()
    values = dict(zip(header.split(","), row.split(",")))
    assert values["lnZ"] == format(ln_z, ".17g")
    assert values["N"] == format(n, ".17g")
