import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quons import oracles, polylog
from quons.errors import DomainError
from quons.polylog import bose_g, fermi_f, quadrature_f, quadrature_g, riemann_zeta

# 20-digit reference values from an arbitrary-precision polylogarithm
ZETA = {1.5: 2.6123753486854883433, 2.5: 1.3414872572509171798, 3.0: 1.2020569031595942854,
        0.5: -1.4603545088095868129, -1.5: -0.02548520188983303595}
G = {
    (1.5, 0.1): 0.10374145234616938803, (1.5, 0.3): 0.3383110955448062693,
    (1.5, 0.5): 0.62483702081991385363, (1.5, 0.7): 1.0031228114191313908,
    (1.5, 0.9): 1.6144385285663397256, (1.5, 0.99): 2.2716600770079991348,
    (2.5, 0.1): 0.10183523303960216437, (2.5, 0.3): 0.31794896947832962143,
    (2.5, 0.5): 0.55499727871751229321, (2.5, 0.7): 0.82179287094277156032,
    (2.5, 0.9): 1.1390030252021567946, (2.5, 0.99): 1.317539425958727709,
}
F = {
    (0.5, 0.1): 0.093460380910364378929, (0.5, 0.5): 0.37375223798097305645,
    (0.5, 0.9): 0.5655259484586527679, (0.5, 1.0): 0.60489864342163037025,
    (0.5, 2.0): 0.89128871155212330198, (0.5, 10.0): 1.5882851378891343503,
    (1.5, 0.1): 0.096645247561283894759, (1.5, 0.5): 0.42988732158057926778,
    (1.5, 0.9): 0.70350075761860970451, (1.5, 1.0): 0.76514702462540794537,
    (1.5, 2.0): 1.2813803831597696388, (1.5, 10.0): 3.2856840823338928385,
    (2.5, 0.1): 0.098293426342086918088, (2.5, 0.5): 0.46229778219006343819,
    (2.5, 0.9): 0.7898675691659272294, (2.5, 1.0): 0.86719988901218413819,
    (2.5, 2.0): 1.5649813744600884771, (2.5, 10.0): 5.0887758641871826583,
}


class TestZeta:
    @pytest.mark.parametrize("s", sorted(ZETA))
    def test_reference(self, s):
        r = riemann_zeta(s)
        assert abs(r.value - ZETA[s]) <= max(r.abs_error_bound, 4e-16 * abs(ZETA[s]))
        assert abs(r.value - ZETA[s]) <= 1e-14 * abs(ZETA[s])

    def test_trivial_zeros(self):
        for s in (-2.0, -4.0, -10.0):
            assert riemann_zeta(s).value == 0.0

    def test_special_values(self):
        assert riemann_zeta(0.0).value == pytest.approx(-0.5, abs=1e-15)
        assert riemann_zeta(2.0).value == pytest.approx(math.pi ** 2 / 6, rel=1e-15)
        assert riemann_zeta(-1.0).value == pytest.approx(-1 / 12, rel=1e-14)

    def test_pole(self):
        with pytest.raises(DomainError):
            riemann_zeta(1.0)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(1.05, 30.0))
    def test_decreasing_above_one(self, s):
        assert riemann_zeta(s).value > riemann_zeta(s + 0.01).value > 1.0


class TestBose:
    @pytest.mark.parametrize("key", sorted(G))
    def test_reference(self, key):
        r = bose_g(*key)
        assert abs(r.value - G[key]) <= r.abs_error_bound + 4e-16 * G[key]
        assert abs(r.value - G[key]) <= 1e-13 * G[key]

    def test_at_one_is_zeta(self):
        r = bose_g(1.5, 1.0)
        assert abs(r.value - ZETA[1.5]) <= 1e-10
        assert abs(r.value - ZETA[1.5]) <= r.abs_error_bound
        assert bose_g(2.5, 1.0).value == pytest.approx(ZETA[2.5], abs=1e-12)

    def test_zero(self):
        assert bose_g(1.5, 0.0).value == 0.0

    def test_leading_terms(self):
        for x in (1e-3, 5e-4, 1e-4):
            rem = bose_g(2.5, x).value - x - x * x / 2 ** 2.5
            assert abs(rem) <= x ** 3  # x^3 / 3^{5/2} plus smaller terms

    def test_domain(self):
        for nu, x in ((1.0, 0.5), (0.5, 0.5), (1.5, -0.1), (1.5, 1.01)):
            with pytest.raises(DomainError):
                bose_g(nu, x)

    def test_bound_honest_against_ten_times_terms(self):
        for nu, x in ((1.5, 0.1), (2.5, 0.3), (1.5, 0.5), (7.0, 0.45)):
            r = bose_g(nu, x)
            ref = polylog._bose_series(nu, x, 10 * r.terms_or_nodes_used)
            assert abs(r.value - ref.value) <= r.abs_error_bound

    def test_integer_order_branch(self):
        # g_2(x) = Li_2(x); Li_2(1/2) = pi^2/12 - ln^2(2)/2
        assert bose_g(2.0, 0.5).value == pytest.approx(math.pi ** 2 / 12 - math.log(2) ** 2 / 2, rel=1e-14)
        # Li_3(0.75) evaluated away from the series regime, against the plain series
        assert bose_g(3.0, 0.75).value == pytest.approx(polylog._bose_series(3.0, 0.75, 400).value, rel=1e-13)


class TestFermi:
    @pytest.mark.parametrize("key", sorted(F))
    def test_reference(self, key):
        r = fermi_f(*key)
        assert abs(r.value - F[key]) <= r.abs_error_bound + 4e-16 * F[key]
        assert abs(r.value - F[key]) <= 1e-12 * F[key]

    def test_at_one(self):
        eta = (1 - 2 ** -0.5) * ZETA[1.5]
        assert fermi_f(1.5, 1.0).value == pytest.approx(eta, abs=1e-10)
        assert oracles.fermi_f_euler(1.5, 1.0) == pytest.approx(eta, abs=1e-14)

    def test_zero_and_leading_terms(self):
        assert fermi_f(2.5, 0.0).value == 0.0
        for x in (1e-3, 1e-4):
            rem = fermi_f(2.5, x).value - x + x * x / 2 ** 2.5
            assert abs(rem) <= x ** 3

    def test_cvz_bound_honest(self):
        for nu, x in ((1.5, 0.3), (2.5, 0.9), (0.5, 0.7)):
            r = fermi_f(nu, x)
            ref = polylog._fermi_cvz(nu, x, 60)
            assert abs(r.value - ref.value) <= r.abs_error_bound

    def test_against_euler_oracle(self):
        for nu in (1.5, 2.5):
            for x in np.linspace(0.05, 1.0, 20):
                assert fermi_f(nu, x).value == pytest.approx(oracles.fermi_f_euler(nu, x), abs=1e-13)

    def test_large_argument_sommerfeld(self):
        # leading Sommerfeld term (ln x)^{nu}/Gamma(nu+1) dominates for x -> infinity
        x = 1e8
        lead = math.log(x) ** 2.5 / math.gamma(3.5)
        assert fermi_f(2.5, x).value == pytest.approx(lead * (1 + math.pi ** 2 * 2.5 * 1.5 / 6 / math.log(x) ** 2),
                                                      rel=1e-4)


class TestQuadrature:
    def test_zero(self):
        assert quadrature_f(2.5, 0.0).value == 0.0
        assert quadrature_g(1.5, 0.0).value == 0.0

    @pytest.mark.parametrize("x", [0.1, 0.5, 0.9])
    def test_f_matches_series(self, x):
        assert abs(quadrature_f(2.5, x).value - fermi_f(2.5, x).value) <= 1e-8

    def test_g_matches_series(self):
        assert abs(quadrature_g(1.5, 0.5).value - bose_g(1.5, 0.5).value) <= 1e-8

    @pytest.mark.parametrize("key", sorted(G))
    def test_g_reference(self, key):
        r = quadrature_g(*key)
        assert abs(r.value - G[key]) <= r.abs_error_bound

    @pytest.mark.parametrize("key", [k for k in sorted(F) if k[0] >= 1.5])
    def test_f_reference(self, key):
        r = quadrature_f(*key)
        assert abs(r.value - F[key]) <= r.abs_error_bound

    def test_g_domain(self):
        with pytest.raises(DomainError):
            quadrature_g(1.5, 1.0)
        with pytest.raises(DomainError):
            quadrature_g(0.25, 0.5)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([1.5, 2.5, 4.0]), st.floats(0.0, 1.0))
def test_ordering(nu, x):
    f, g = fermi_f(nu, x).value, bose_g(nu, x).value
    assert f <= x * (1 + 1e-15) and x <= g * (1 + 1e-15)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([1.5, 2.5]), st.floats(0.01, 0.98))
def test_monotone_in_x(nu, x):
    h = 0.01
    assert fermi_f(nu, x + h).value > fermi_f(nu, x).value
    assert bose_g(nu, x + h).value > bose_g(nu, x).value


@pytest.mark.parametrize("x", np.linspace(0.05, 0.95, 10))
def test_derivative_ladder(x):
    h = 1e-4 * x
    for fn in (fermi_f, bose_g):
        fd = x * oracles.central_difference(lambda t: fn(2.5, t).value, x, h)
        assert fd == pytest.approx(fn(1.5, x).value, rel=1e-6)
