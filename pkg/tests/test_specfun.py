"""Special-function identities: Gamma machinery, Bessel identities, 2F1."""

import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings, strategies as st

from invsqwave import (
    DomainError,
    PoleError,
    BudgetExceededError,
    NonconvergenceError,
)
from invsqwave.specfun import (
    SeriesBudget,
    ln_gamma,
    gamma_ratio,
    gamma_ratio_asymptotic,
    polygamma,
    pochhammer,
    bessel_j,
    bessel_y,
    hankel1,
    bessel_j_series,
    hyp2f1,
    hyp2f1_near_one_limit,
    richardson_zero,
    weber_schafheitlin_closed_form,
    verify_bessel_identities,
)


# ---------------------------------------------------------------------------
# Gamma machinery
# ---------------------------------------------------------------------------


def test_ln_gamma_known_values():
    assert ln_gamma(1.0) == pytest.approx(0.0, abs=1e-14)
    assert ln_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-14)
    assert ln_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)


def test_ln_gamma_domain():
    with pytest.raises(DomainError):
        ln_gamma(0.0)
    with pytest.raises(DomainError):
        ln_gamma(-1.5)


@given(st.floats(min_value=0.1, max_value=1e5))
@settings(max_examples=200, deadline=None)
def test_gamma_recurrence(x):
    # Gamma(x+1) = x Gamma(x), through the ratio API
    # exp(lgamma difference) carries ~|lgamma| * eps relative error
    assert gamma_ratio(x, 1.0, 0.0) == pytest.approx(x, rel=1e-10)


def test_small_x_gamma_limit():
    # x Gamma(x) -> 1 as x -> 0+
    for x in (1e-1, 1e-2, 1e-4, 1e-6, 1e-8):
        val = x * math.exp(ln_gamma(x))
        assert abs(val - 1.0) < 2.0 * x  # = 1 - gamma*x + O(x^2)


def test_gamma_ratio_branch_agreement():
    # both evaluation branches agree in a band around the switch point
    # above ~1e5 the lgamma-difference side itself loses digits, which is
    # exactly why the asymptotic branch takes over
    for z in (5e3, 1e4, 2e4):
        direct = math.exp(sp.gammaln(z + 1.3) - sp.gammaln(z + 0.4))
        asym = gamma_ratio_asymptotic(z, 1.3, 0.4)
        assert abs(direct - asym) / direct < 5e-11


def test_gamma_ratio_pole_guard():
    with pytest.raises(PoleError):
        gamma_ratio(2.0, -2.0, 0.3)   # z + b = 0 hits the pole


def test_polygamma_values():
    assert polygamma(0, 1.0) == pytest.approx(-np.euler_gamma, rel=1e-12)
    # recurrence psi(x+1) - psi(x) = 1/x
    for x in (0.3, 1.7, 9.2):
        assert polygamma(0, x + 1.0) - polygamma(0, x) == pytest.approx(
            1.0 / x, rel=1e-12)
    with pytest.raises(DomainError):
        polygamma(-1, 1.0)
    with pytest.raises(DomainError):
        polygamma(0, -2.0)


@given(st.floats(min_value=-5.0, max_value=5.0),
       st.integers(min_value=0, max_value=12))
@settings(max_examples=100, deadline=None)
def test_pochhammer_recurrence(z, n):
    # (z)_{n+1} = (z)_n (z + n)
    assert pochhammer(z, n + 1) == pytest.approx(
        pochhammer(z, n) * (z + n), rel=1e-12, abs=1e-12)


def test_pochhammer_trivials():
    assert pochhammer(3.7, 0) == 1.0
    assert pochhammer(2.0, 3) == pytest.approx(24.0)
    with pytest.raises(DomainError):
        pochhammer(1.0, -1)


# ---------------------------------------------------------------------------
# Bessel functions
# ---------------------------------------------------------------------------


def test_bessel_trivials():
    assert bessel_j(0.0, 0.0) == pytest.approx(1.0)
    # half-order closed forms
    x = 1.7
    assert bessel_j(0.5, x) == pytest.approx(
        math.sqrt(2.0 / (math.pi * x)) * math.sin(x), rel=1e-13)
    assert bessel_y(0.5, x) == pytest.approx(
        -math.sqrt(2.0 / (math.pi * x)) * math.cos(x), rel=1e-13)
    h = hankel1(0.5, x)
    assert h == pytest.approx(complex(bessel_j(0.5, x), bessel_y(0.5, x)))


def test_bessel_domain():
    with pytest.raises(DomainError):
        bessel_j(1.0, -1.0)
    with pytest.raises(DomainError):
        bessel_y(1.0, 0.0)
    with pytest.raises(DomainError):
        hankel1(1.0, -0.5)


def test_bessel_series_reference():
    # the power-series reference agrees with the library where it converges
    for nu in (0.0, 0.618, 2.236):
        for x in (0.1, 1.0, 4.0):
            assert bessel_j_series(nu, x) == pytest.approx(
                bessel_j(nu, x), rel=1e-10, abs=1e-14)


def test_wronskian_lattice():
    # J_{nu+1} Y_nu - J_nu Y_{nu+1} = 2/(pi z) on a 12-point lattice
    worst = 0.0
    for nu in (0.3, 1.0, 2.7):
        for z in (0.5, 1.0, 2.0, 10.0):
            w = (bessel_j(nu + 1, z) * bessel_y(nu, z)
                 - bessel_j(nu, z) * bessel_y(nu + 1, z))
            worst = max(worst, abs(w - 2.0 / (math.pi * z)))
    assert worst <= 1e-10


def test_verify_bessel_identities_report():
    rep = verify_bessel_identities(nu=2.2, mu=0.7, s=1.0, lam=5.0)
    assert rep["wronskian"] <= 1e-10
    assert rep["indefinite_integral"] <= 1e-8
    assert rep["resolvent"] <= 1e-7
    assert rep["weber_schafheitlin"] <= 1e-7


def test_verify_bessel_identities_rejects_equal_orders():
    with pytest.raises(DomainError):
        verify_bessel_identities(nu=1.3, mu=1.3)


def test_weber_schafheitlin_domain():
    with pytest.raises(DomainError):
        weber_schafheitlin_closed_form(2.2, 0.7, 1.0, 2.0)  # needs b < a


# ---------------------------------------------------------------------------
# Gauss hypergeometric series
# ---------------------------------------------------------------------------


def test_hyp2f1_trivials():
    assert hyp2f1(1.3, 0.7, 2.1, 0.0) == 1.0
    # 2F1(1,1;2;x) = -ln(1-x)/x
    x = 0.5
    assert hyp2f1(1.0, 1.0, 2.0, x) == pytest.approx(
        -math.log1p(-x) / x, rel=1e-13)
    # 2F1(a,b;b;x) = (1-x)^{-a}
    assert hyp2f1(0.7, 1.9, 1.9, 0.3) == pytest.approx(
        0.7 ** -0.7, rel=1e-13)


def test_hyp2f1_vs_scipy():
    for (a, b, c) in ((1.7, 1.6, 0.5), (0.3, 2.2, 1.1)):
        for x in (0.1, 0.5, 0.9):
            assert hyp2f1(a, b, c, x) == pytest.approx(
                sp.hyp2f1(a, b, c, x), rel=1e-11)


def test_hyp2f1_errors():
    with pytest.raises(PoleError):
        hyp2f1(1.0, 1.0, -2.0, 0.5)
    with pytest.raises(DomainError):
        hyp2f1(1.0, 1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        hyp2f1(1.0, 1.0, 2.0, -0.5)


def test_hyp2f1_budget_carries_partial_sum():
    budget = SeriesBudget(max_terms=5)
    with pytest.raises(BudgetExceededError) as exc:
        hyp2f1(1.7, 1.6, 0.5, 0.97, budget=budget)
    assert math.isfinite(exc.value.partial)
    assert exc.value.tail_estimate > 0


def test_series_budget_validation():
    with pytest.raises(DomainError):
        SeriesBudget(max_terms=0)
    with pytest.raises(DomainError):
        SeriesBudget(abs_tol=-1.0)


def test_hyp2f1_near_one_law():
    a, b, c = 1.7, 1.6, 0.5
    ts = [2.0 ** (-j) for j in range(5, 12)]
    vals = [t ** (a + b - c) * hyp2f1(a, b, c, 1.0 - t) for t in ts]
    lim, _ = richardson_zero(ts, vals)
    assert abs(lim - hyp2f1_near_one_limit(a, b, c)) <= 1e-6


def test_hyp2f1_near_one_limit_domain():
    with pytest.raises(DomainError):
        hyp2f1_near_one_limit(0.2, 0.3, 1.0)  # c - a - b >= 0


def test_richardson_zero():
    # exact polynomial error model is removed exactly
    eps = [0.1 / 2 ** j for j in range(5)]
    vals = [3.0 + 2.0 * e + 5.0 * e ** 2 for e in eps]
    lim, stab = richardson_zero(eps, vals)
    assert lim == pytest.approx(3.0, abs=1e-12)
    assert stab < 1e-10
    with pytest.raises(NonconvergenceError):
        richardson_zero([0.1], [1.0])
