"""Named verification suites shared by the CLI and the test battery.

Each suite returns a list of check dicts {name, value, threshold, pass};
a suite passes when every check does.  Thresholds mirror the documented
invariants of the corresponding module.
"""

import math

import numpy as np
import scipy.special as sp

from .errors import WindowError
from .specfun import (verify_bessel_identities, hyp2f1,
                      hyp2f1_near_one_limit, gamma_ratio,
                      gamma_ratio_asymptotic, pochhammer, richardson_zero)
from .spectral import make_params, mode_indices, admissible_p
from .transforms import (make_log_grid, RadialFunction, bessel_transform,
                         apply_mode_waveop, spectral_multiplier)
from .waveop import (KernelQuery, kernel_ktilde, kernel_quadrature_oracle,
                     diagonal_limit, coeff_table, small_ratio_asymptote,
                     exponent_sign_predicate)
from .riesz import (kernel_riesz, kernel_even, inverse_mellin_oracle,
                    riesz_diagonal_limit, riesz_coeffs, mellin_symbol)
from .multiplier import (SequenceSample, bc_report, product_rule_check,
                         appendix_bound_check, bc_order)
from .harmonics import (make_angular_grid, Field, analyze, synthesize,
                        apply_W, apply_function_of_La)

__all__ = ["run_suite", "SUITES"]


def _check(name, value, threshold):
    return {
        "name": name,
        "value": float(value),
        "threshold": float(threshold),
        "pass": bool(value <= threshold),
    }


# ---------------------------------------------------------------------------
# specfun
# ---------------------------------------------------------------------------


def suite_specfun():
    checks = []

    res = 0.0
    for nu in (0.3, 1.0, 2.7):
        for z in (0.5, 1.0, 2.0, 10.0):
            w = sp.jv(nu + 1, z) * sp.yv(nu, z) - sp.jv(nu, z) * sp.yv(nu + 1, z)
            res = max(res, abs(w - 2.0 / (math.pi * z)))
    checks.append(_check("wronskian_identity_12pt", res, 1e-10))

    rep = verify_bessel_identities(nu=2.2, mu=0.7, s=1.0, lam=5.0)
    checks.append(_check("indefinite_integral_identity", rep["indefinite_integral"], 1e-8))
    checks.append(_check("resolvent_identity", rep["resolvent"], 1e-7))
    checks.append(_check("weber_schafheitlin_identity", rep["weber_schafheitlin"], 1e-7))

    # near-one law: (1-x)^{a+b-c} 2F1 extrapolated along x -> 1
    a, b, c = 1.7, 1.6, 0.5
    ts = [2.0 ** (-j) for j in range(5, 12)]
    vals = [t ** (a + b - c) * hyp2f1(a, b, c, 1.0 - t) for t in ts]
    lim, _ = richardson_zero(ts, vals)
    closed = hyp2f1_near_one_limit(a, b, c)
    checks.append(_check("hyp2f1_near_one_law", abs(lim - closed), 1e-6))

    # both gamma-ratio branches agree in a band around the switch point
    res = 0.0
    for z in (5e3, 2e4):
        direct = math.exp(sp.gammaln(z + 1.3) - sp.gammaln(z + 0.4))
        asym = gamma_ratio_asymptotic(z, 1.3, 0.4)
        res = max(res, abs(direct - asym) / abs(direct))
    checks.append(_check("gamma_ratio_branch_agreement", res, 1e-11))

    res = abs(pochhammer(2.3, 7) - gamma_ratio(2.3, 7.0, 0.0)) / pochhammer(2.3, 7)
    checks.append(_check("pochhammer_gamma_consistency", res, 1e-13))
    return checks


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

_GRID_IN = dict(r_min=1e-4, r_max=40.0, n=1400)
_GRID_OUT = dict(r_min=1e-4, r_max=40.0, n=1400)


def _gaussian(grid):
    return RadialFunction(grid=grid, values=np.exp(-grid.r ** 2 / 2.0))


def _matched_profile(grid, order):
    """r^(order - lambda0) e^{-r^2/2}: self-reciprocal under the transform
    of that order, hence resolved on a finite band."""
    lam0 = (grid.d - 2) / 2.0
    return RadialFunction(grid=grid,
                          values=grid.r ** (order - lam0) * np.exp(-grid.r ** 2 / 2.0))


def suite_transforms():
    checks = []
    params = make_params(3, 1.0)
    gin = make_log_grid(d=3, **_GRID_IN)
    gout = make_log_grid(d=3, **_GRID_OUT)

    idx = mode_indices(params, 2)
    f = _matched_profile(gin, idx.mu_k)
    g = bessel_transform(idx.mu_k, f, out_grid=gout)
    checks.append(_check("plancherel_bessel",
                         abs(g.norm() - f.norm()) / f.norm(), 1e-6))
    ff = bessel_transform(idx.mu_k, g, out_grid=gin)
    checks.append(_check("involution_bessel",
                         gin.norm(ff.values - f.values) / f.norm(), 1e-5))

    fh = _matched_profile(gin, idx.nu_k)
    h = bessel_transform(idx.nu_k, fh, out_grid=gout)
    checks.append(_check("plancherel_hankel",
                         abs(h.norm() - fh.norm()) / fh.norm(), 1e-6))

    p0 = make_params(3, 0.0)
    f1 = _matched_profile(gin, mode_indices(p0, 1).mu_k)
    wf = apply_mode_waveop(p0, 1, f1, mid_grid=gout)
    checks.append(_check("mode_waveop_a0_identity",
                         gin.norm(wf.values - f1.values) / f1.norm(), 1e-5))
    f = _gaussian(gin)

    # m(lambda) = lambda^2 in the free calculus equals -Laplacian on the
    # radial Gaussian: (d - r^2) e^{-r^2/2}
    lap = spectral_multiplier(p0, 0, lambda lam: lam ** 2, f,
                              calculus="free", mid_grid=gout)
    exact = (3.0 - gin.r ** 2) * np.exp(-gin.r ** 2 / 2.0)
    scale = gin.norm(exact)
    checks.append(_check("multiplier_laplacian_gaussian",
                         gin.norm(lap.values - exact) / scale, 1e-5))
    return checks


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


def suite_kernels():
    checks = []
    params = make_params(3, 1.0)

    res = 0.0
    for k in (0, 2):
        for (r, s) in ((1.0, 0.5), (0.5, 1.0)):
            q = KernelQuery(params=params, k=k, p=2.0, r=r, s=s)
            series = kernel_ktilde(q)
            oracle = kernel_quadrature_oracle(q)
            res = max(res, abs(series - oracle) / abs(oracle))
    checks.append(_check("kernel_series_vs_oracle", res, 1e-5))

    _, _, gap = diagonal_limit(params, 1, "below")
    checks.append(_check("kernel_diagonal_limit", gap, 1e-4))

    p0 = make_params(3, 0.0)
    q = KernelQuery(params=p0, k=1, p=2.0, r=1.0, s=0.4)
    checks.append(_check("kernel_a0_vanishes", abs(kernel_ktilde(q)), 1e-12))

    # (n+1)^2 E residual plateaus: n<=2000 sup within 4x of n<=500 sup
    tab = coeff_table(params, 3, 2000, "plus")
    scaled = (np.arange(2001) + 1.0) ** 2 * np.abs(tab.residuals)
    ratio = np.max(scaled) / np.max(scaled[:501])
    checks.append(_check("kernel_residual_plateau", ratio, 4.0))

    q = KernelQuery(params=params, k=0, p=2.0, r=1.0, s=1e-3)
    asym = small_ratio_asymptote(params, 0, 2.0, 1e-3)
    checks.append(_check("kernel_small_ratio_asymptote",
                         abs(kernel_ktilde(q) / asym - 1.0), 1e-3))

    # exponent predicate agrees with the theorem interval on a p-grid
    interval = admissible_p(params, "W")
    bad = 0
    for inv_p in np.linspace(0.005, 0.995, 100):
        if exponent_sign_predicate(params, 1.0 / inv_p) != interval.contains(inv_p):
            bad += 1
    checks.append(_check("kernel_exponent_predicate", bad, 0))
    return checks


# ---------------------------------------------------------------------------
# riesz
# ---------------------------------------------------------------------------


def suite_riesz():
    checks = []
    params = make_params(3, 1.0)
    alpha = 0.7

    res = 0.0
    for ratio in (0.4, 2.5):
        r, s = (1.0, ratio) if ratio < 1 else (1.0, ratio)
        series = kernel_riesz(params, 1, alpha, r, s)
        oracle = inverse_mellin_oracle(params, 1, alpha, r / s)
        res = max(res, abs(series - oracle) / abs(oracle))
    checks.append(_check("riesz_series_vs_mellin_oracle", res, 1e-5))

    gap = max(riesz_diagonal_limit(params, 1, alpha, side)[2]
              for side in ("below", "above"))
    checks.append(_check("riesz_diagonal_limit", gap, 1e-4))

    # alpha -> 2 continuity against the finite even-order kernel
    r, s = 1.0, 0.5
    even = kernel_even(params, 1, 1, r, s)
    near = kernel_riesz(params, 1, 2.0 - 1e-6, r, s)
    checks.append(_check("riesz_even_alpha_continuity",
                         abs(near - even) / max(abs(even), 1e-12), 1e-3))

    sym = mellin_symbol(params, 1, alpha, 1.0 + 200.0j)
    checks.append(_check("riesz_symbol_tends_to_one", abs(sym - 1.0), 0.1))

    try:
        riesz_coeffs(params, 0, 2.0 + 2.0 * params.nu0 + 0.5, n_max=8)
        guarded = 1.0
    except WindowError:
        guarded = 0.0
    checks.append(_check("riesz_window_guard", guarded, 0.5))
    return checks


# ---------------------------------------------------------------------------
# multiplier
# ---------------------------------------------------------------------------


def suite_multiplier():
    checks = []
    params = make_params(3, 1.0)
    N = bc_order(params.d)
    K = 2 ** 13 + N + 1
    ks = np.arange(K + 1)

    F = SequenceSample(values=1.0 / (1.0 + ks))
    G = SequenceSample(values=np.cos(0.1 * ks))
    rep = product_rule_check(F, G, 3)
    checks.append(_check("multiplier_leibniz_rule", rep["relative"], 1e-10))

    sinb = np.array([math.sin(math.pi * mode_indices(params, int(k)).b_k)
                     for k in ks])
    sup, dyadic = bc_report(SequenceSample(values=sinb), N, 12)
    checks.append(_check("multiplier_sin_pi_b_dyadic",
                         dyadic[12] / max(dyadic[6], 1e-300), 4.0))

    calpha = np.empty(K + 1)
    for k in ks:
        idx = mode_indices(params, int(k))
        qv = (idx.mu_k - idx.nu_k + 0.7) / 2.0
        calpha[k] = (2.0 * math.sin(math.pi * 0.35)
                     * math.sin(math.pi * (idx.mu_k - idx.nu_k) / 2.0)
                     / (math.pi * math.sin(math.pi * qv)))
    sup, dyadic = bc_report(SequenceSample(values=calpha), N, 12)
    checks.append(_check("multiplier_c_alpha_dyadic",
                         dyadic[12] / max(dyadic[6], 1e-300), 4.0))

    rep = appendix_bound_check(params, None, 2, 128, 100)
    worst = max(v["sup"] for v in rep.values())
    checks.append(_check("multiplier_appendix_sup_finite", 0.0 if math.isfinite(worst) else 1.0, 0.5))
    return checks


# ---------------------------------------------------------------------------
# harmonics
# ---------------------------------------------------------------------------


def suite_harmonics():
    checks = []
    params = make_params(3, 1.0)
    ang = make_angular_grid(3, 4)
    rad = make_log_grid(d=3, **_GRID_IN)
    rng = np.random.default_rng(7)

    Y = ang.basis(4)
    # mode-k rows carry r^k profiles so the synthesized field is smooth at 0
    degs = np.repeat(np.arange(5), [2 * k + 1 for k in range(5)])
    coeffs = (rng.standard_normal(Y.shape[0])[:, None]
              * rad.r[None, :] ** degs[:, None]
              * np.exp(-rad.r[None, :] ** 2 / 2.0))
    fld = Field(angular=ang, radial=rad, values=Y.T @ coeffs)

    exp = analyze(fld, 4)
    back = synthesize(exp, angular=ang)
    checks.append(_check("harmonics_roundtrip",
                         np.max(np.abs(back.values - fld.values))
                         / np.max(np.abs(fld.values)), 1e-10))
    checks.append(_check("harmonics_parseval",
                         abs(exp.total_norm_sq() - fld.norm() ** 2)
                         / fld.norm() ** 2, 1e-10))

    g = np.exp(-rad.r ** 2 / 2.0)
    pure = Field(angular=ang, radial=rad, values=np.outer(Y[3], g))
    exp_p = analyze(pure, 4)
    leak = max(f.norm() for key, f in exp_p.coeffs.items()
               if key != (1, 3))
    gnorm = rad.norm(g)
    checks.append(_check("harmonics_mode_orthogonality", leak / gnorm, 1e-12))

    wf = apply_W(params, fld, k_max=4, mid_grid=rad)
    checks.append(_check("harmonics_W_unitary",
                         abs(wf.norm() - fld.norm()) / fld.norm(), 1e-5))

    p0 = make_params(3, 0.0)
    wf0 = apply_W(p0, fld, k_max=4, mid_grid=rad)
    checks.append(_check("harmonics_W_a0_identity",
                         _field_gap(wf0, fld) / fld.norm(), 1e-5))

    # intertwining on a small 3-mode field (the full k_max=8, three-multiplier
    # sweep lives in the acceptance battery)
    small = Field(angular=ang, radial=rad,
                  values=(np.outer(Y[0], g) + np.outer(Y[1], rad.r * g)
                          + np.outer(Y[4], rad.r ** 2 * g)))
    m = lambda lam: np.exp(-lam ** 2)
    direct = apply_function_of_La(params, m, small, path="direct", k_max=4,
                                  mid_grid=rad)
    conj = apply_function_of_La(params, m, small, path="conjugated", k_max=4,
                                mid_grid=rad)
    checks.append(_check("harmonics_intertwining_heat",
                         _field_gap(direct, conj) / small.norm(), 1e-5))
    return checks


def _field_gap(f1, f2):
    g = Field(angular=f1.angular, radial=f1.radial,
              values=np.real(f1.values) - np.real(f2.values))
    return g.norm()


SUITES = {
    "specfun": suite_specfun,
    "transforms": suite_transforms,
    "kernels": suite_kernels,
    "riesz": suite_riesz,
    "multiplier": suite_multiplier,
    "harmonics": suite_harmonics,
}


def run_suite(name):
    """Run one suite (or 'all'); returns {suite, checks, pass}."""
    if name == "all":
        checks = []
        for key in SUITES:
            for c in SUITES[key]():
                c = dict(c)
                c["name"] = f"{key}.{c['name']}"
                checks.append(c)
    elif name in SUITES:
        checks = SUITES[name]()
    else:
        raise KeyError(f"unknown suite {name!r}")
    return {
        "suite": name,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
