"""Spectral scalars, mode indices, and admissible L^p intervals."""

import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from invsqwave import (
    DomainError,
    SubcriticalCouplingError,
    WindowError,
    SpectralParams,
    make_params,
    mode_indices,
    admissible_p,
    theta_pd,
    OPERATOR_TAGS,
)

from conftest import PARAM_PAIRS


def test_make_params_examples():
    p = make_params(3, 0.0)
    assert p.nu0 == pytest.approx(0.5)
    assert p.sigma == pytest.approx(0.0)
    assert p.p0 == math.inf

    p = make_params(4, -1.0)
    assert p.nu0 == pytest.approx(0.0)
    assert p.sigma == pytest.approx(1.0)
    assert p.p0 == pytest.approx(4.0)

    p = make_params(2, 4.0)
    assert p.nu0 == pytest.approx(2.0)
    assert p.sigma == pytest.approx(-2.0)
    assert p.p0 == math.inf


def test_make_params_guards():
    with pytest.raises(SubcriticalCouplingError):
        make_params(3, -0.3)          # below -(1/2)^2
    with pytest.raises(SubcriticalCouplingError):
        make_params(4, -1.0 - 1e-9)
    with pytest.raises(DomainError):
        make_params(1, 0.0)
    with pytest.raises(DomainError):
        make_params(3.5, 0.0)
    # the critical coupling itself is admissible
    assert make_params(4, -1.0).nu0 == 0.0


def test_params_json_roundtrip():
    p = make_params(3, 1.0)
    q = SpectralParams.from_json(p.to_json())
    assert q == p
    obj = json.loads(p.to_json())
    assert obj["d"] == 3 and obj["a"] == 1.0


@given(st.sampled_from(PARAM_PAIRS), st.integers(min_value=0, max_value=200))
@settings(max_examples=150, deadline=None)
def test_mode_index_identities(pair, k):
    d, a = pair
    params = make_params(d, a)
    idx = mode_indices(params, k)
    assert idx.mu_k == pytest.approx(params.lambda0 + k)
    assert idx.a_k + idx.b_k == pytest.approx(idx.mu_k, rel=1e-14)
    assert idx.a_k - idx.b_k == pytest.approx(idx.nu_k, rel=1e-14)
    # 4 a_k b_k = mu_k^2 - nu_k^2 = -a
    assert 4.0 * idx.a_k * idx.b_k == pytest.approx(-a, abs=1e-10)
    # |b_k| = |a| / (2 (mu_k + nu_k)) decays in k
    if idx.mu_k + idx.nu_k > 0:
        assert abs(idx.b_k) == pytest.approx(
            abs(a) / (2.0 * (idx.mu_k + idx.nu_k)), rel=1e-10, abs=1e-14)


def test_mode_indices_guards():
    p = make_params(3, 1.0)
    with pytest.raises(DomainError):
        mode_indices(p, -1)
    with pytest.raises(DomainError):
        mode_indices(p, 1.5)


def test_admissible_p_wave_examples():
    # a > 0 gives the full open interval for W
    iv = admissible_p(make_params(3, 1.0), "W")
    assert (iv.lo, iv.hi) == (0.0, 1.0)
    # critical (4, -1): sigma = 1 shrinks both ends
    iv = admissible_p(make_params(4, -1.0), "W")
    assert iv.lo == pytest.approx(0.25)
    assert iv.hi == pytest.approx(0.75)
    assert iv.contains(0.5) and not iv.contains(0.2)
    # W and W* share the interval
    for d, a in PARAM_PAIRS:
        p = make_params(d, a)
        assert admissible_p(p, "W") == admissible_p(p, "W*")


def test_admissible_p_riesz_windows():
    p = make_params(3, 1.0)
    iv = admissible_p(p, "R^alpha", order=1.0)
    assert not iv.empty
    with pytest.raises(WindowError):
        admissible_p(p, "R^alpha", order=2.0 + 2.0 * p.nu0 + 0.1)
    with pytest.raises(WindowError):
        admissible_p(p, "R^alpha", order=-p.d - 0.1)
    with pytest.raises(WindowError):
        admissible_p(p, "R^-beta", order=p.d + 0.1)
    with pytest.raises(DomainError):
        admissible_p(p, "R^alpha")      # missing order
    with pytest.raises(DomainError):
        admissible_p(p, "no-such-op", order=1.0)


def test_admissible_p_all_tags_return_intervals():
    p = make_params(3, 1.0)
    for tag in OPERATOR_TAGS:
        order = 0.5 if tag not in ("W", "W*") else None
        iv = admissible_p(p, tag, order=order)
        assert 0.0 <= iv.lo and iv.hi <= 1.0


def test_theta_pd():
    # theta_{p,d} = (d+1)/p - (d+3)/2
    assert theta_pd(2.0, 3) == pytest.approx(2.0 - 3.0)
    assert theta_pd(4.0, 2) == pytest.approx(3.0 / 4.0 - 2.5)
    with pytest.raises(DomainError):
        theta_pd(1.0, 3)
