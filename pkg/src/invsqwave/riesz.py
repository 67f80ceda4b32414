"""Fox H^{2,2}_{4,4} kernels of the Riesz-type operators R^alpha = (-Lap)^{alpha/2} L_a^{-alpha/2}.

On the k-th harmonic subspace the operator acts by a Mellin convolution whose
symbol is a ratio of eight Gamma factors; summing residues over the two pole
families gives the dual power series in s/r (or r/s).  The inverse operator
R^{-beta} uses the same code path with mu_k and nu_k exchanged.
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.special as sp

from .errors import (
    DomainError,
    WindowError,
    ResonanceError,
    PoleError,
    NonconvergenceError,
)
from .spectral import mode_indices
from .specfun import richardson_zero

__all__ = [
    "FoxHInstance",
    "RieszCoeffs",
    "make_foxh_instance",
    "mellin_symbol",
    "riesz_coeffs",
    "kernel_riesz",
    "kernel_even",
    "inverse_mellin_oracle",
    "riesz_diagonal_limit",
]

N_MAX_DEFAULT = 4000


def _orders(params, k, direction):
    """(mu, nu) with the swap applied for the inverse operator."""
    idx = mode_indices(params, k)
    if direction == "forward":
        return idx.mu_k, idx.nu_k
    if direction == "inverse":
        return idx.nu_k, idx.mu_k
    raise DomainError("direction must be 'forward' or 'inverse'")


def _check_window(params, k, alpha, direction):
    # pole separation at k=0 is exactly the theorem window; for the swapped
    # (inverse) kernel the window is -2 nu0 - 2 < beta < d
    if direction == "forward":
        if not (-params.d < alpha < 2.0 + 2.0 * params.nu0):
            raise WindowError(f"alpha={alpha} outside (-d, 2+2*nu0)")
    else:
        if not (-2.0 * params.nu0 - 2.0 < alpha < params.d):
            raise WindowError(f"beta={alpha} outside (-2*nu0-2, d)")


@dataclass(frozen=True)
class FoxHInstance:
    upper: tuple          # four (a_i, alpha_i) pairs
    lower: tuple          # four (b_j, beta_j) pairs
    a_star: float
    Lambda: float
    delta: float
    rho: float
    strip_lo: float       # max pole of the lower families
    strip_hi: float       # min pole of the upper families


def make_foxh_instance(params, k, alpha, direction="forward"):
    _check_window(params, k, alpha, direction)
    mu, nu = _orders(params, k, direction)
    lam0 = params.lambda0
    h = 0.5
    upper = (
        (-(nu + lam0) / 2.0, h),
        (-(mu + lam0 + alpha) / 2.0, h),
        ((nu - lam0) / 2.0, h),
        ((mu - lam0 - alpha) / 2.0, h),
    )
    lower = (
        ((mu - lam0) / 2.0, h),
        ((nu - lam0 - alpha) / 2.0, h),
        (-(mu + lam0) / 2.0, h),
        (-(nu + lam0 + alpha) / 2.0, h),
    )
    # m = n = 2: first two entries of each row are the "active" families
    a_star = sum(a[1] for a in upper[:2]) - sum(a[1] for a in upper[2:]) \
        + sum(b[1] for b in lower[:2]) - sum(b[1] for b in lower[2:])
    Lambda = sum(b[1] for b in lower) - sum(a[1] for a in upper)
    delta = math.prod(b[1] ** b[1] for b in lower) * math.prod(a[1] ** -a[1] for a in upper)
    rho = sum(b[0] for b in lower) - sum(a[0] for a in upper)
    strip_lo = max(-b[0] / b[1] for b in lower[:2])
    strip_hi = min((1.0 - a[0]) / a[1] for a in upper[:2])
    if not strip_lo < strip_hi:
        raise PoleError("pole families are not separated for these parameters")
    return FoxHInstance(upper=upper, lower=lower, a_star=a_star, Lambda=Lambda,
                        delta=delta, rho=rho, strip_lo=strip_lo, strip_hi=strip_hi)


def mellin_symbol(params, k, alpha, z, direction="forward"):
    """The eight-Gamma Mellin symbol H(k, alpha; z); accepts complex z."""
    inst = make_foxh_instance(params, k, alpha, direction)
    z = np.asarray(z, dtype=complex)
    log_num = np.zeros_like(z)
    log_den = np.zeros_like(z)
    args_num = [b + 0.5 * z for (b, _) in inst.lower[:2]]
    args_num += [1.0 - a - 0.5 * z for (a, _) in inst.upper[:2]]
    args_den = [a + 0.5 * z for (a, _) in inst.upper[2:]]
    args_den += [1.0 - b - 0.5 * z for (b, _) in inst.lower[2:]]
    for w in args_num + args_den:
        near_real = np.abs(np.imag(w)) < 1e-8
        on_pole = near_real & (np.real(w) < 0.5) & (
            np.abs(np.real(w) - np.round(np.real(w))) < 1e-8)
        if np.any(on_pole):
            raise PoleError("Mellin symbol evaluated too close to a Gamma pole")
    for w in args_num:
        log_num = log_num + sp.loggamma(w)
    for w in args_den:
        log_den = log_den + sp.loggamma(w)
    out = np.exp(log_num - log_den)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class RieszCoeffs:
    k: int
    alpha: float
    C: float
    A1: np.ndarray
    A2: np.ndarray
    E1: np.ndarray
    E2: np.ndarray


def _c_constant(mu, nu, alpha):
    q = (mu - nu + alpha) / 2.0
    den = math.sin(math.pi * q)
    if abs(den) < 1e-12:
        raise ResonanceError(
            f"resonant parameters: (mu-nu+alpha)/2 = {q} is an integer")
    return 2.0 * math.sin(math.pi * alpha / 2.0) * math.sin(math.pi * (mu - nu) / 2.0) / (math.pi * den)


def _gamma_product_ratio(p_list, q_list, n_max):
    """A_n = prod Gamma(p_i+n+1) / prod Gamma(q_i+n+1) for n = 0..n_max.

    The two quadruples share their first and second power sums, so the term
    ratio is 1 + (de3 w + de4)/prod(w+q_i) with w = n+1 and de3, de4 the
    elementary-symmetric differences.  Small n (where a factor may be
    non-positive) are evaluated directly from signed log-Gamma.
    """
    p = np.asarray(p_list, dtype=float)
    q = np.asarray(q_list, dtype=float)
    n = np.arange(n_max + 1, dtype=float)
    w = n + 1.0

    e3p, e4p = _elem34(p)
    e3q, e4q = _elem34(q)
    de3, de4 = e3p - e3q, e4p - e4q

    # direct evaluation below w_safe, recurrence above
    w_safe = max(1.0, math.floor(-min(p.min(), q.min())) + 2.0)
    n_switch = min(int(w_safe) + 1, n_max)

    A = np.empty(n_max + 1)
    direct_n = n[: n_switch + 1]
    sgn = np.ones_like(direct_n)
    logs = np.zeros_like(direct_n)
    for pi in p:
        sgn *= sp.gammasgn(pi + direct_n + 1.0)
        logs += sp.gammaln(pi + direct_n + 1.0)
    for qi in q:
        sgn *= sp.gammasgn(qi + direct_n + 1.0)
        logs -= sp.gammaln(qi + direct_n + 1.0)
    A[: n_switch + 1] = sgn * np.exp(logs)

    if n_switch < n_max:
        w_tail = w[n_switch:-1]       # w values for ratios A_{n+1}/A_n
        denom = np.ones_like(w_tail)
        for qi in q:
            denom *= w_tail + qi
        incr = np.log1p((de3 * w_tail + de4) / denom)
        ln_a = math.log(A[n_switch]) if A[n_switch] > 0 else None
        if ln_a is None:
            # fall back to direct multiplication if the anchor is negative
            A[n_switch + 1:] = A[n_switch] * np.cumprod(np.exp(incr))
            ln_tail = None
        else:
            ln_tail = ln_a + np.cumsum(incr)
            A[n_switch + 1:] = np.exp(ln_tail)
    else:
        ln_tail = None

    E = A - 1.0
    if ln_tail is not None:
        # avoid cancellation where A ~ 1
        E[n_switch + 1:] = np.expm1(ln_tail)
    return A, E


def _elem34(v):
    """Third and fourth elementary symmetric polynomials of a quadruple."""
    a, b, c, d = v
    e3 = a * b * c + a * b * d + a * c * d + b * c * d
    e4 = a * b * c * d
    return e3, e4


def riesz_coeffs(params, k, alpha, n_max=N_MAX_DEFAULT, direction="forward"):
    """C_k^alpha and the coefficient arrays A1, A2 with residuals E = A - 1."""
    _check_window(params, k, alpha, direction)
    if abs(alpha / 2.0 - round(alpha / 2.0)) < 1e-12:
        raise DomainError("even alpha is handled by kernel_even")
    mu, nu = _orders(params, k, direction)
    C = _c_constant(mu, nu, alpha)
    p1 = [(mu + nu) / 2.0, nu - alpha / 2.0, (nu - mu) / 2.0, -alpha / 2.0]
    q1 = [(nu - mu - alpha) / 2.0, nu, (nu + mu - alpha) / 2.0, 0.0]
    p2 = [mu + alpha / 2.0, (nu + mu) / 2.0, alpha / 2.0, (mu - nu) / 2.0]
    q2 = [(mu - nu + alpha) / 2.0, (nu + mu + alpha) / 2.0, mu, 0.0]
    A1, E1 = _gamma_product_ratio(p1, q1, n_max)
    A2, E2 = _gamma_product_ratio(p2, q2, n_max)
    return RieszCoeffs(k=int(k), alpha=float(alpha), C=C, A1=A1, A2=A2, E1=E1, E2=E2)


def _series_exponents(params, k, alpha, direction, below):
    mu, nu = _orders(params, k, direction)
    lam0 = params.lambda0
    if below:
        return nu + lam0 + 2.0, mu + lam0 + alpha + 2.0
    return mu - lam0, nu - lam0 - alpha


def kernel_riesz(params, k, alpha, r, s, direction="forward",
                 n_max=N_MAX_DEFAULT, coeffs=None, split=False):
    """K^alpha_k(r, s) for r != s by the dual residue series.

    With x the smaller of s/r, r/s:
      s < r:  sum C A1_n x^{nu+lam0+2+2n} - sum C A2_n x^{mu+lam0+alpha+2+2n}
      r < s:  -sum C A2_n x^{mu-lam0+2n} + sum C A1_n x^{nu-lam0-alpha+2n}

    With split=True, returns (main, remainder) where main carries the
    closed-form 1/(1-x^2) part and remainder the E-series.
    """
    if r <= 0 or s <= 0:
        raise DomainError("r, s must be positive")
    below = s < r
    x = s / r if below else r / s
    if x >= 1.0:
        raise DomainError("kernel is defined off the diagonal only")
    x2 = x * x
    n_eff = max(64, int(35.0 / -math.log(x2)) + 1)
    if n_eff > max(n_max, 80_000):
        raise NonconvergenceError(
            f"series needs ~{n_eff} terms at x={x}; too close to the diagonal")
    if coeffs is None or coeffs.A1.size < n_eff + 1:
        coeffs = riesz_coeffs(params, k, alpha, n_max=n_eff, direction=direction)
    C = coeffs.C
    e1, e2 = _series_exponents(params, k, alpha, direction, below)
    lx = math.log(x)
    n = np.arange(n_eff + 1, dtype=float)
    pow1 = np.exp((e1 + 2.0 * n) * lx)
    pow2 = np.exp((e2 + 2.0 * n) * lx)
    if below:
        s1 = float(np.sum(coeffs.A1[: n_eff + 1] * pow1))
        s2 = float(np.sum(coeffs.A2[: n_eff + 1] * pow2))
        total = C * s1 - C * s2
        main = C * (math.exp(e1 * lx) - math.exp(e2 * lx)) / (1.0 - x2)
        rem = C * float(np.sum(coeffs.E1[: n_eff + 1] * pow1)) \
            - C * float(np.sum(coeffs.E2[: n_eff + 1] * pow2))
    else:
        # starred coefficients: h1* = h2 = -C A2 (exponent e1 = mu-lam0),
        # h2* = h1 = C A1 (exponent e2 = nu-lam0-alpha)
        s1 = float(np.sum(coeffs.A2[: n_eff + 1] * pow1))
        s2 = float(np.sum(coeffs.A1[: n_eff + 1] * pow2))
        total = -C * s1 + C * s2
        main = C * (math.exp(e2 * lx) - math.exp(e1 * lx)) / (1.0 - x2)
        rem = -C * float(np.sum(coeffs.E2[: n_eff + 1] * pow1)) \
            + C * float(np.sum(coeffs.E1[: n_eff + 1] * pow2))
    if split:
        return main, rem
    return total


def kernel_even(params, k, m, r, s, direction="forward"):
    """Finite-sum kernels for even order alpha = 2m (m != 0).

    Positive m keeps only the first residue family (n < m); negative m = -|m|
    keeps only the second (n < |m|).  Everything reduces to Pochhammer ratios.
    """
    if m == 0 or m != int(m):
        raise DomainError("kernel_even requires a nonzero integer m")
    m = int(m)
    alpha = 2.0 * m
    _check_window(params, k, alpha, direction)
    mu, nu = _orders(params, k, direction)
    idx_a = (mu + nu) / 2.0
    b_half = (mu - nu) / 2.0
    lam0 = params.lambda0
    below = s < r
    x = s / r if below else r / s
    if x >= 1.0:
        raise DomainError("kernel is defined off the diagonal only")
    lx = math.log(x)
    total = 0.0
    if m > 0:
        # h_{1n} = 2 (-1)^n / n! * (b+m-n-1)...(b-n) * ... for n < m
        for n in range(m):
            coeff = 2.0 * (-1.0) ** n / math.factorial(n)
            coeff *= _poch(b_half - n, m)
            coeff *= _poch(idx_a - m + n + 1.0, m)
            coeff /= math.factorial(m - n - 1)          # Gamma(m - n)
            coeff /= _poch(nu - m + n + 1.0, m)
            exp_ = (nu + lam0 + 2.0 + 2.0 * n) if below else (nu - lam0 - alpha + 2.0 * n)
            total += coeff * math.exp(exp_ * lx)
    else:
        mm = -m
        for n in range(mm):
            coeff = 2.0 * (-1.0) ** n / math.factorial(n)
            coeff *= _poch(-b_half - n, mm)
            coeff *= _poch(idx_a - mm + n + 1.0, mm)
            coeff /= math.factorial(mm - n - 1)
            coeff /= _poch(mu - mm + n + 1.0, mm)
            exp_ = (mu + lam0 + alpha + 2.0 + 2.0 * n) if below else (mu - lam0 + 2.0 * n)
            total += coeff * math.exp(exp_ * lx)
    return total


def _poch(z, n):
    out = 1.0
    for j in range(n):
        out *= z + j
    return out


def inverse_mellin_oracle(params, k, alpha, ratio, contour_re=None,
                          quad_budget=None, direction="forward"):
    """Contour-integral evaluation of the kernel, independent of the series.

    K(ratio) = (1/2 pi i) int ratio^{-z} H(z) dz on Re z = c inside the
    pole-free strip, with ratio = r/s (closing the contour to the right for
    r > s picks up the below-diagonal pole family).  The symbol tends to 1
    at +-i inf, so we integrate (H - 1) with Gaussian damping exp(-eps t^2)
    and extrapolate eps -> 0; the subtracted constant only contributes a
    delta at ratio = 1.
    """
    if ratio <= 0 or ratio == 1.0:
        raise DomainError("oracle requires ratio > 0, ratio != 1")
    inst = make_foxh_instance(params, k, alpha, direction)
    c = contour_re if contour_re is not None else 0.5 * (inst.strip_lo + inst.strip_hi)
    if not inst.strip_lo < c < inst.strip_hi:
        raise PoleError(
            f"contour Re z = {c} outside pole-free strip "
            f"({inst.strip_lo}, {inst.strip_hi})")
    L = math.log(ratio)
    eps0 = min(2e-2, L * L / 140.0)
    eps_list = [eps0 / 4.0 ** j for j in range(5)]
    t_max = math.sqrt(45.0 / eps_list[-1])
    panel = min(2.0, 0.5 / max(abs(L), 0.25))
    n_panels = int(math.ceil(t_max / panel))
    if quad_budget is not None and n_panels * 10 > quad_budget:
        raise NonconvergenceError("contour quadrature exceeds the node budget")
    xg, wg = np.polynomial.legendre.leggauss(10)
    edges = np.linspace(0.0, t_max, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    t = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    wt = (half[:, None] * wg[None, :]).ravel()
    sym = mellin_symbol(params, k, alpha, c + 1j * t, direction) - 1.0
    base = sym * np.exp(-1j * L * t)
    vals = []
    for eps in eps_list:
        integrand = base * np.exp(-eps * t * t)
        vals.append(float(np.sum(wt * np.real(integrand))))
    limit, stab = richardson_zero(eps_list, vals)
    if stab > 1e-5 * (abs(limit) + 1e-12) and stab > 1e-9:
        raise NonconvergenceError(
            f"inverse-Mellin extrapolation unstable ({stab:.2e})")
    return ratio ** (-c) * limit / math.pi


def riesz_diagonal_limit(params, k, alpha, side, direction="forward",
                         j_range=range(4, 12)):
    """Finite diagonal limit of the kernel's main (1/(1-x^2)) part.

    Closed form C_k^alpha (mu_k - nu_k + alpha)/2 from either side; the
    numeric estimate extrapolates (full series - E remainder), which crosses
    the plain-summation and split code paths.
    """
    if side not in ("below", "above"):
        raise DomainError("side must be 'below' or 'above'")
    mu, nu = _orders(params, k, direction)
    coeffs = riesz_coeffs(params, k, alpha, n_max=64, direction=direction)
    closed = coeffs.C * (mu - nu + alpha) / 2.0
    ts, vals = [], []
    for j in j_range:
        t = 2.0 ** (-j)
        x = 1.0 - t
        r, s = (1.0, x) if side == "below" else (x, 1.0)
        _, rem = kernel_riesz(params, k, alpha, r, s,
                              direction=direction, split=True)
        total = kernel_riesz(params, k, alpha, r, s, direction=direction)
        ts.append(t)
        vals.append(total - rem)
    extrap, _ = richardson_zero(ts, vals)
    return closed, extrap, abs(closed - extrap)
