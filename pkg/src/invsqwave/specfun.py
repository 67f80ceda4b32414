"""Special functions feeding the kernel formulas, plus identity verification.

The workhorses (log-Gamma, polygamma, Bessel J/Y) are delegated to
scipy.special, which meets the accuracy contracts everywhere we need them;
the Gauss hypergeometric series and the Gamma-quotient asymptotics are
implemented here because their budget/asymptotic semantics are specific to
the kernel expansions downstream.
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.special as sp
from scipy.integrate import quad

from .errors import (
    DomainError,
    PoleError,
    BudgetExceededError,
    NonconvergenceError,
)

__all__ = [
    "SeriesBudget",
    "ln_gamma",
    "gamma_ratio",
    "gamma_ratio_asymptotic",
    "polygamma",
    "pochhammer",
    "bessel_j",
    "bessel_y",
    "hankel1",
    "hyp2f1",
    "hyp2f1_near_one_limit",
    "verify_bessel_identities",
]

# switch between lgamma-difference and asymptotic-series evaluation of
# Gamma(z+b)/Gamma(z+c); both branches are in-tolerance in a wide band
# around this point (tested).
_GAMMA_RATIO_SWITCH = 1e4


@dataclass(frozen=True)
class SeriesBudget:
    """Termination policy for the Gauss series."""

    max_terms: int = 100_000
    abs_tol: float = 1e-15
    rel_tol: float = 1e-15

    def __post_init__(self):
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DomainError("tolerances must be positive")


def _is_nonpositive_integer(x, tol=1e-12):
    return x <= tol and abs(x - round(x)) < tol


def ln_gamma(x):
    """log Gamma(x) for x > 0 (vectorized)."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x <= 0.0):
        raise DomainError("ln_gamma requires finite x > 0")
    out = sp.gammaln(x)
    return float(out) if out.ndim == 0 else out


def gamma_ratio_asymptotic(z, b, c):
    """Gamma(z+b)/Gamma(z+c) by the large-z expansion z^{b-c}(1 + C1/z + C2/z^2).

    C1 = (b-c)(b+c-1)/2,
    C2 = (1/12) * binom(b-c, 2) * (3(b+c-1)^2 - (b-c+1)).
    """
    w = b - c
    c1 = w * (b + c - 1.0) / 2.0
    c2 = (w * (w - 1.0) / 2.0) * (3.0 * (b + c - 1.0) ** 2 - (w + 1.0)) / 12.0
    return z ** w * (1.0 + c1 / z + c2 / z ** 2)


def gamma_ratio(z, b, c):
    """Gamma(z+b)/Gamma(z+c).

    Uses log-Gamma differences for moderate z, switching to the asymptotic
    quotient series for large z where the difference of two huge logs would
    waste precision.
    """
    zb, zc = z + b, z + c
    if _is_nonpositive_integer(zb) or _is_nonpositive_integer(zc):
        raise PoleError("gamma_ratio: argument hits a Gamma pole")
    if z > _GAMMA_RATIO_SWITCH and zb > 0 and zc > 0:
        return gamma_ratio_asymptotic(z, b, c)
    sign = sp.gammasgn(zb) * sp.gammasgn(zc)
    return sign * math.exp(sp.gammaln(zb) - sp.gammaln(zc))


def polygamma(m, x):
    """psi^{(m)}(x) for integer m >= 0, x > 0."""
    if m < 0 or m != int(m):
        raise DomainError("polygamma order must be a non-negative integer")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("polygamma requires x > 0")
    out = sp.polygamma(int(m), x)
    return float(out) if out.ndim == 0 else out


def pochhammer(z, n):
    """(z)_n = z (z+1) ... (z+n-1), with (z)_0 = 1."""
    if n < 0 or n != int(n):
        raise DomainError("pochhammer index must be a non-negative integer")
    n = int(n)
    if n == 0:
        return 1.0
    return float(np.prod(z + np.arange(n, dtype=float)))


def bessel_j(nu, x):
    """J_nu(x) for x >= 0, nu >= -1/2."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise DomainError("bessel_j requires x >= 0")
    out = sp.jv(nu, x)
    return float(out) if out.ndim == 0 else out


def bessel_y(nu, x):
    """Y_nu(x) (Weber's function) for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("bessel_y requires x > 0")
    out = sp.yv(nu, x)
    return float(out) if out.ndim == 0 else out


def hankel1(nu, x):
    """H^(1)_nu(x) = J_nu(x) + i Y_nu(x) for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("hankel1 requires x > 0")
    out = sp.hankel1(nu, x)
    return complex(out) if out.ndim == 0 else out


def bessel_j_series(nu, x, n_terms=200):
    """Power-series evaluation of J_nu; reference implementation for tests.

    (x/2)^nu * sum_k (-1)^k (x^2/4)^k / (k! Gamma(nu+k+1)).  Only reliable
    where the alternating sum does not cancel catastrophically (small x/nu).
    """
    if x < 0:
        raise DomainError("bessel_j_series requires x >= 0")
    if x == 0.0:
        return 1.0 if nu == 0 else 0.0
    k = np.arange(n_terms, dtype=float)
    log_terms = k * math.log(x * x / 4.0) - sp.gammaln(k + 1.0) - sp.gammaln(nu + k + 1.0)
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    scale = nu * math.log(x / 2.0)
    return float(np.sum(signs * np.exp(log_terms + scale)))


def hyp2f1(a, b, c, x, budget=None):
    """Gauss series 2F1(a, b; c; x) on 0 <= x < 1."""
    if _is_nonpositive_integer(c):
        raise PoleError("hyp2f1: c is a non-positive integer")
    if not (0.0 <= x < 1.0):
        raise DomainError("hyp2f1 argument must lie in [0, 1)")
    if budget is None:
        budget = SeriesBudget()
    if x == 0.0:
        return 1.0

    total = 1.0
    term = 1.0
    for n in range(budget.max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x
        total += term
        if abs(term) <= budget.abs_tol or abs(term) <= budget.rel_tol * abs(total):
            return total
    # geometric tail estimate from the asymptotic term ratio ~ x
    tail = abs(term) * x / (1.0 - x)
    raise BudgetExceededError(
        f"hyp2f1 did not converge in {budget.max_terms} terms at x={x}",
        partial=total,
        tail_estimate=tail,
    )


def hyp2f1_near_one_limit(a, b, c):
    """lim_{x->1-} (1-x)^{a+b-c} 2F1(a,b;c;x) = G(c)G(a+b-c)/(G(a)G(b)).

    Valid for c - a - b < 0.
    """
    if c - a - b >= 0:
        raise DomainError("near-one law requires c - a - b < 0")
    sign = (
        sp.gammasgn(c) * sp.gammasgn(a + b - c) / (sp.gammasgn(a) * sp.gammasgn(b))
    )
    return sign * math.exp(
        sp.gammaln(c) + sp.gammaln(a + b - c) - sp.gammaln(a) - sp.gammaln(b)
    )


# ---------------------------------------------------------------------------
# integral identities
# ---------------------------------------------------------------------------


def _pair_integral_closed_form(mu, nu, z):
    """Antiderivative of J_mu(z) J_nu(z) / z (indefinite-integral formula)."""
    return (
        -z
        * (sp.jv(mu + 1, z) * sp.jv(nu, z) - sp.jv(mu, z) * sp.jv(nu + 1, z))
        / (mu * mu - nu * nu)
        + sp.jv(mu, z) * sp.jv(nu, z) / (mu + nu)
    )


def _damped_jj_integral(mu, nu, s_arg, r_arg, eps, power=1.0):
    """int_0^inf lam^power exp(-eps lam^2) J_mu(s lam) J_nu(r lam) dlam.

    Composite Gauss-Legendre panels sized well under the J-product
    oscillation scale; the damping makes the truncated tail negligible.
    """
    lam_max = math.sqrt(45.0 / eps)
    panel = min(0.25 * math.pi / (s_arg + r_arg), lam_max / 8.0)
    n_panels = int(math.ceil(lam_max / panel))
    xg, wg = np.polynomial.legendre.leggauss(10)
    edges = np.linspace(0.0, lam_max, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    lam = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()
    vals = (
        lam ** power
        * np.exp(-eps * lam * lam)
        * sp.jv(mu, s_arg * lam)
        * sp.jv(nu, r_arg * lam)
    )
    return float(np.sum(w * vals))


def richardson_zero(eps_list, values):
    """Extrapolate values(eps) -> eps=0 assuming a polynomial error model.

    Returns (limit, stability) where stability is the change in the last
    Neville step; raises if the table is too short.
    """
    eps = np.asarray(eps_list, dtype=float)
    if eps.size < 2:
        raise NonconvergenceError("need at least two damping parameters")
    tab = [np.asarray(values, dtype=float)]
    for m in range(1, eps.size):
        prev = tab[-1]
        nxt = np.empty(eps.size - m)
        for i in range(eps.size - m):
            e0, e1 = eps[i], eps[i + m]
            nxt[i] = (e0 * prev[i + 1] - e1 * prev[i]) / (e0 - e1)
        tab.append(nxt)
    limit = float(tab[-1][0])
    stability = abs(limit - float(tab[-2][0]))
    return limit, stability


def weber_schafheitlin_closed_form(mu, nu, a_arg, b_arg):
    """int_0^inf t J_mu(a t) J_nu(b t) dt for 0 < b < a, via 2F1."""
    if not 0 < b_arg < a_arg:
        raise DomainError("closed form requires 0 < b < a")
    log_pref = (
        math.log(2.0)
        + nu * math.log(b_arg)
        + sp.gammaln((mu + nu) / 2.0 + 1.0)
        - (nu + 2.0) * math.log(a_arg)
        - sp.gammaln(nu + 1.0)
        - sp.gammaln((mu - nu) / 2.0)
    )
    sign = sp.gammasgn((mu + nu) / 2.0 + 1.0) / sp.gammasgn((mu - nu) / 2.0)
    f = hyp2f1(
        (mu + nu) / 2.0 + 1.0,
        (nu - mu) / 2.0 + 1.0,
        nu + 1.0,
        (b_arg / a_arg) ** 2,
    )
    return sign * math.exp(log_pref) * f


def verify_bessel_identities(nu, mu, z_samples=None, s=1.0, lam=1.0):
    """Numerically check the Bessel integral identities; returns max residuals.

    Checked identities:
      wronskian            J_{nu+1} Y_nu - J_nu Y_{nu+1} = 2/(pi z)
      indefinite_integral  closed antiderivative of J_mu J_nu / z
      resolvent            split Y/J product integral against
                           2[(J_nu - J_mu)(s lam)] / ((nu^2-mu^2) pi)
      weber_schafheitlin   damped quadrature vs the 2F1 closed form
    """
    if abs(mu - nu) < 1e-12:
        raise DomainError("identities require mu != nu")
    if z_samples is None:
        z_samples = [0.5, 1.0, 2.0, 5.0]
    report = {}

    res = 0.0
    for z in z_samples:
        w = sp.jv(nu + 1, z) * sp.yv(nu, z) - sp.jv(nu, z) * sp.yv(nu + 1, z)
        res = max(res, abs(w - 2.0 / (math.pi * z)))
    report["wronskian"] = res

    res = 0.0
    for z0, z1 in [(0.5, 2.0), (1.0, 5.0), (2.0, 8.0)]:
        val, err = quad(lambda t: sp.jv(mu, t) * sp.jv(nu, t) / t, z0, z1,
                        limit=200, epsabs=1e-12, epsrel=1e-12)
        if err > 1e-9:
            raise NonconvergenceError(
                f"indefinite-integral quadrature error {err:.2e} on [{z0},{z1}]")
        closed = _pair_integral_closed_form(mu, nu, z1) - _pair_integral_closed_form(mu, nu, z0)
        res = max(res, abs(val - closed))
    report["indefinite_integral"] = res

    # resolvent-function identity; the rho -> 0 end is integrable
    # (J_mu J_nu ~ rho^{mu+nu}).  The closed right side carries a
    # cos((mu-nu) pi/2) J_mu term from the antiderivative's boundary value
    # at infinity (the products Y_{mu+1}J_nu - Y_mu J_{nu+1} do not decay).
    inner, err1 = quad(
        lambda rho: sp.jv(mu, rho * lam) * sp.jv(nu, rho * lam) / rho,
        0.0, s, limit=400, epsabs=1e-11, epsrel=1e-11)
    r_cut = s + 6000.0 / lam
    outer, err2 = quad(
        lambda rho: sp.yv(mu, rho * lam) * sp.jv(nu, rho * lam) / rho,
        s, r_cut, limit=8000, epsabs=1e-11, epsrel=1e-11)
    # non-oscillating part of Y_mu J_nu / rho beyond the cut
    outer += -math.sin((mu - nu) * math.pi / 2.0) / (math.pi * lam * r_cut)
    lhs = sp.yv(mu, s * lam) * inner + sp.jv(mu, s * lam) * outer
    rhs = 2.0 / ((nu * nu - mu * mu) * math.pi) * (
        sp.jv(nu, s * lam)
        - math.cos((mu - nu) * math.pi / 2.0) * sp.jv(mu, s * lam))
    report["resolvent"] = abs(lhs - rhs)

    # Weber-Sonin-Schafheitlin with Gaussian damping + extrapolation
    a_arg, b_arg = 2.0, 1.3
    eps_list = [4e-3 / 4 ** j for j in range(5)]
    # J_mu rides the larger argument a, J_nu the smaller b
    vals = [_damped_jj_integral(mu, nu, a_arg, b_arg, e) for e in eps_list]
    limit, stab = richardson_zero(eps_list, vals)
    if stab > 1e-6:
        raise NonconvergenceError(f"damped-quadrature extrapolation unstable ({stab:.2e})")
    closed = weber_schafheitlin_closed_form(mu, nu, a_arg, b_arg)
    report["weber_schafheitlin"] = abs(limit - closed)

    return report
