"""Wave-operator kernels K_k and modified kernels Ktilde_k.

Off the diagonal the kernels are hypergeometric-type power series

    Ktilde_k = 2 (s/r)^{d/2-d/p+1+mu_k} sin(-pi b_k)/pi * sum A+_{k,n} (s/r)^{2n}   (s<r)
    Ktilde_k = 2 (r/s)^{d/p-d/2+1+nu_k} sin( pi b_k)/pi * sum A-_{k,n} (r/s)^{2n}   (r<s)

Near the diagonal the coefficient split A = 1 +- a/(4(n+1)) + E gives the
closed singular part 1/(1-x^2), a logarithmic part, and a fast-converging
E-tail.  The independent oracle is the Gaussian-damped Weber-Schafheitlin
integral extrapolated in the damping parameter.
"""

from dataclasses import dataclass
import math
import os

import numpy as np
import scipy.special as sp

from .errors import DomainError, NonconvergenceError
from .spectral import SpectralParams, mode_indices
from .specfun import _damped_jj_integral, richardson_zero

__all__ = [
    "KernelQuery",
    "CoeffTable",
    "coeff_A",
    "coeff_table",
    "kernel_ktilde",
    "kernel_quadrature_oracle",
    "diagonal_limit",
    "prefactor_exponents",
    "exponent_sign_predicate",
    "small_ratio_asymptote",
]

DELTA_DIAG = 1e-3
N_MAX_DEFAULT = 20_000

# test hook: multiplies every A+ coefficient, so that the verification
# suites demonstrably catch an injected 1% error
_PERTURB_ENV = "INVSQW_PERTURB_APLUS"


def _aplus_perturbation():
    val = os.environ.get(_PERTURB_ENV)
    return float(val) if val else 1.0


@dataclass(frozen=True)
class KernelQuery:
    params: SpectralParams
    k: int
    p: float
    r: float
    s: float

    def __post_init__(self):
        if not (self.r > 0 and self.s > 0):
            raise DomainError("r, s must be positive")
        if not (1.0 < self.p < math.inf):
            raise DomainError("p must lie in (1, inf)")


@dataclass(frozen=True)
class CoeffTable:
    k: int
    branch: str              # "plus" or "minus"
    n_max: int
    values: np.ndarray       # A_{k,n}
    residuals: np.ndarray    # E_{k,n} = A_{k,n} - 1 -+ a/(4(n+1))


def coeff_A(branch, k, n, params):
    """Single coefficient A^{+-}_{k,n} by direct log-Gamma arithmetic."""
    idx = mode_indices(params, k)
    if branch == "plus":
        val = math.exp(
            sp.gammaln(idx.a_k + n + 1.0)
            + sp.gammaln(idx.b_k + n + 1.0)
            - sp.gammaln(idx.mu_k + n + 1.0)
            - sp.gammaln(n + 1.0)
        )
        return val * _aplus_perturbation()
    if branch == "minus":
        return math.exp(
            sp.gammaln(idx.a_k + n + 1.0)
            + sp.gammaln(1.0 - idx.b_k + n)
            - sp.gammaln(idx.nu_k + n + 1.0)
            - sp.gammaln(n + 1.0)
        )
    raise DomainError("branch must be 'plus' or 'minus'")


def coeff_table(params, k, n_max, branch):
    """A and E arrays for n = 0..n_max by a cumulative log1p recurrence.

    The term ratio A_{n+1}/A_n = ((w+a)(w+b)) / ((w+a+b) w) with w = n+1
    equals 1 + ab/((w+a+b)w) exactly, so log A accumulates without the
    cancellation a naive lgamma difference would suffer at n ~ 1e4.
    """
    idx = mode_indices(params, k)
    a = params.a
    n = np.arange(n_max + 1, dtype=float)
    w = n + 1.0
    if branch == "plus":
        # a_k * b_k = -a/4; denominator (mu_k + w) w
        ln_a0 = (
            sp.gammaln(idx.a_k + 1.0)
            + sp.gammaln(idx.b_k + 1.0)
            - sp.gammaln(idx.mu_k + 1.0)
        )
        increments = np.log1p((-a / 4.0) / ((idx.mu_k + w) * w))
        sign = 1.0
    elif branch == "minus":
        # a_k * (-b_k) = a/4; denominator (nu_k + w) w
        ln_a0 = (
            sp.gammaln(idx.a_k + 1.0)
            + sp.gammaln(1.0 - idx.b_k)
            - sp.gammaln(idx.nu_k + 1.0)
        )
        increments = np.log1p((a / 4.0) / ((idx.nu_k + w) * w))
        sign = -1.0
    else:
        raise DomainError("branch must be 'plus' or 'minus'")
    ln_a = ln_a0 + np.concatenate(([0.0], np.cumsum(increments[:-1])))
    values = np.exp(ln_a)
    residuals = np.expm1(ln_a) - sign * a / (4.0 * w)
    if branch == "plus":
        pert = _aplus_perturbation()
        if pert != 1.0:
            values = values * pert
            residuals = values - 1.0 - a / (4.0 * w)
    return CoeffTable(k=int(k), branch=branch, n_max=int(n_max),
                      values=values, residuals=residuals)


def prefactor_exponents(params, k, p):
    """Branch prefactor exponents (s<r and r<s) of the modified kernel."""
    idx = mode_indices(params, k)
    d = params.d
    below = d / 2.0 - d / p + 1.0 + idx.mu_k
    above = d / p - d / 2.0 + 1.0 + idx.nu_k
    return below, above


def exponent_sign_predicate(params, p):
    """True iff the branch exponents of W *and* W* are all positive at k=0.

    The adjoint kernel swaps mu and nu, so the four conditions together
    reproduce the open interval of the main boundedness theorem.
    """
    idx = mode_indices(params, 0)
    d = params.d
    exps = (
        d / 2.0 - d / p + 1.0 + idx.mu_k,
        d / p - d / 2.0 + 1.0 + idx.nu_k,
        d / 2.0 - d / p + 1.0 + idx.nu_k,
        d / p - d / 2.0 + 1.0 + idx.mu_k,
    )
    return all(e > 0.0 for e in exps)


def _pow_ratio(num, den, beta):
    """(num/den)^beta as exp(beta (ln num - ln den)) for overflow hygiene."""
    return math.exp(beta * (math.log(num) - math.log(den)))


def _resonant_m(idx):
    """m >= 1 when nu_k - mu_k is the even integer 2m, else None.

    There sin(pi b_k) = 0 against a Gamma pole: the below-diagonal series
    terminates after m terms and the above-diagonal kernel vanishes.
    """
    b = idx.b_k
    if b < -0.5 and abs(b - round(b)) < 1e-12:
        return int(round(-b))
    return None


def kernel_ktilde(q, n_max=N_MAX_DEFAULT, delta_diag=DELTA_DIAG):
    """Modified kernel Ktilde_k(r,s) = (s/r)^{-d/p} K_k(r,s) for r != s."""
    params, k = q.params, q.k
    idx = mode_indices(params, k)
    below = q.s < q.r
    x = q.s / q.r if below else q.r / q.s
    if x >= 1.0:
        raise DomainError("kernel is defined off the diagonal only (r != s)")
    beta_b, beta_a = prefactor_exponents(params, k, q.p)
    m_res = _resonant_m(idx)
    if m_res is not None:
        if not below:
            return 0.0
        # lim sin(-pi b) Gamma(b+n+1) = pi (-1)^n / (m-1-n)! for n < m
        total = 0.0
        for n in range(m_res):
            coeff = math.exp(
                sp.gammaln(idx.a_k + n + 1.0)
                - sp.gammaln(idx.mu_k + n + 1.0)
                - sp.gammaln(n + 1.0)
            ) * (-1.0) ** n / math.factorial(m_res - 1 - n)
            total += coeff * x ** (2 * n) * _aplus_perturbation()
        return 2.0 * _pow_ratio(q.s, q.r, beta_b) * total
    if below:
        beta = beta_b
        sin_fac = math.sin(-math.pi * idx.b_k) / math.pi
        branch = "plus"
    else:
        beta = beta_a
        sin_fac = math.sin(math.pi * idx.b_k) / math.pi
        branch = "minus"
    pref = 2.0 * _pow_ratio(min(q.s, q.r), max(q.s, q.r), beta) * sin_fac

    x2 = x * x
    if x < 1.0 - delta_diag:
        # plain series in x^2 with geometrically-estimated tail
        n_eff = min(n_max, max(64, int(35.0 / -math.log(x2)) + 1))
        tab = coeff_table(params, k, n_eff, branch)
        powers = np.exp(np.arange(n_eff + 1) * math.log(x2))
        series = float(np.sum(tab.values * powers))
        tail = abs(tab.values[-1]) * powers[-1] * x2 / (1.0 - x2)
        if tail > 1e-12 * max(1.0, abs(series)):
            raise NonconvergenceError(
                f"series tail bound {tail:.2e} exceeds tolerance at n_max={n_eff}")
        return pref * series

    # near-diagonal decomposition: sum A x^{2n} =
    #   1/(1-x^2) +- (a/4) sum x^{2n}/(n+1) + sum E x^{2n}
    # with sum x^{2n}/(n+1) = -log(1-x^2)/x^2.
    tab = coeff_table(params, k, n_max, branch)
    log_sign = 1.0 if branch == "plus" else -1.0
    singular = 1.0 / (1.0 - x2)
    logpart = log_sign * (params.a / 4.0) * (-math.log1p(-x2)) / x2
    powers = np.exp(np.arange(n_max + 1) * math.log(x2)) if x2 < 1.0 else np.ones(n_max + 1)
    etail = float(np.sum(tab.residuals * powers))
    if _aplus_perturbation() != 1.0 and branch == "plus":
        # the perturbed table no longer satisfies the split identity; fall
        # back to summing the table directly so the hook stays visible
        return pref * float(np.sum(tab.values * powers))
    return pref * (singular + logpart + etail)


def kernel_quadrature_oracle(q, eps_list=None):
    """Damped-quadrature evaluation of Ktilde_k, independent of the series.

    K_k(r,s) = (s^{d/2+1}/r^{d/2-1}) * int_0^inf lam J_{mu_k}(s lam)
    J_{nu_k}(r lam) dlam, computed with exp(-eps lam^2) damping and
    Richardson-extrapolated to eps = 0.
    """
    params, k = q.params, q.k
    idx = mode_indices(params, k)
    d = params.d
    if eps_list is None:
        gap = abs(q.r - q.s)
        eps0 = min(2e-2, gap * gap / 60.0)
        eps_list = [eps0 / 4.0 ** j for j in range(5)]
    vals = [
        _damped_jj_integral(idx.mu_k, idx.nu_k, q.s, q.r, e) for e in eps_list
    ]
    limit, stab = richardson_zero(eps_list, vals)
    scale = abs(limit) + 1e-30
    if stab > 1e-5 * scale and stab > 1e-9:
        raise NonconvergenceError(
            f"oracle extrapolation unstable: last correction {stab:.2e}")
    kernel = limit * q.s ** (d / 2.0 + 1.0) / q.r ** (d / 2.0 - 1.0)
    return kernel * _pow_ratio(q.s, q.r, -d / q.p)


def small_ratio_asymptote(params, k, p, ratio):
    """Leading behavior of Ktilde as s/r -> 0."""
    idx = mode_indices(params, k)
    beta_b, _ = prefactor_exponents(params, k, p)
    sign = sp.gammasgn(idx.a_k + 1.0) / (sp.gammasgn(idx.mu_k + 1.0) * sp.gammasgn(-idx.b_k))
    amp = 2.0 * sign * math.exp(
        sp.gammaln(idx.a_k + 1.0) - sp.gammaln(idx.mu_k + 1.0) - sp.gammaln(-idx.b_k)
    )
    return amp * ratio ** beta_b


def diagonal_limit(params, k, side, p=2.0, j_range=range(4, 13)):
    """Diagonal limit of (1 - x^2) Ktilde_k / prefactor.

    Returns (closed_form, extrapolated, gap).  Closed form is
    (2/pi) sin(pi (nu_k - mu_k)/2) from below and its negative from above.
    """
    idx = mode_indices(params, k)
    if side == "below":
        closed = (2.0 / math.pi) * math.sin(math.pi * (idx.nu_k - idx.mu_k) / 2.0)
    elif side == "above":
        closed = (2.0 / math.pi) * math.sin(math.pi * (idx.mu_k - idx.nu_k) / 2.0)
    else:
        raise DomainError("side must be 'below' or 'above'")
    ts, vals = [], []
    beta_b, beta_a = prefactor_exponents(params, k, p)
    for j in j_range:
        t = 2.0 ** (-j)
        x = 1.0 - t
        if side == "below":
            q = KernelQuery(params=params, k=k, p=p, r=1.0, s=x)
            beta = beta_b
        else:
            q = KernelQuery(params=params, k=k, p=p, r=x, s=1.0)
            beta = beta_a
        val = kernel_ktilde(q) * (1.0 - x * x) / x ** beta
        ts.append(t)
        vals.append(val)
    extrap, _ = richardson_zero(ts, vals)
    return closed, extrap, abs(closed - extrap)
