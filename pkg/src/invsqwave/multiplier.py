"""Finite-difference calculus on mode sequences and the dyadic multiplier bounds.

A sequence of mode multipliers {C_k} yields an L^p-bounded operator on the
sphere when sup_k |C_k| and the dyadic sums
2^{j(N-1)} sum_{k=2^j}^{2^{j+1}} |D^N C_k| are uniformly bounded; these are
the quantities reported here, together with the appendix lattice bounds on
the kernel coefficient residuals.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError
from .waveop import coeff_table
from .riesz import riesz_coeffs

__all__ = [
    "SequenceSample",
    "finite_diff",
    "bc_report",
    "smooth_sufficiency_check",
    "product_rule_check",
    "appendix_bound_check",
    "bc_order",
]


@dataclass(frozen=True)
class SequenceSample:
    values: np.ndarray

    @property
    def K(self):
        return self.values.size - 1


def bc_order(d):
    """The difference order N = floor((d-1)/2) + 1 the multiplier theorem uses."""
    return (d - 1) // 2 + 1


def finite_diff(seq, N):
    if N < 1 or N != int(N):
        raise DomainError("difference order must be a positive integer")
    if N > seq.K:
        raise DomainError("sequence too short for this difference order")
    return SequenceSample(values=np.diff(seq.values, int(N)))


def bc_report(seq, N, j_max):
    """sup_k |C_k| and the dyadic quantity 2^{j(N-1)} sum |D^N C| per j <= j_max."""
    if seq.K < 2 ** (j_max + 1) + N:
        raise DomainError(
            f"need K >= 2^(j_max+1)+N = {2 ** (j_max + 1) + N}, got {seq.K}")
    diffs = np.abs(finite_diff(seq, N).values)
    sup_bound = float(np.max(np.abs(seq.values)))
    dyadic = []
    for j in range(j_max + 1):
        lo, hi = 2 ** j, 2 ** (j + 1)
        dyadic.append(float(2.0 ** (j * (N - 1)) * np.sum(diffs[lo: hi + 1])))
    return sup_bound, dyadic


def smooth_sufficiency_check(fn, N, K, h=1e-2):
    """sup_k k^N |D^N fn(k)| against a stencil proxy of sup k^N |fn^(N)(k)|.

    A bounded sequence sampled from a smooth function with
    |fn^(N)| <~ k^{-N} satisfies the dyadic condition; this reports both
    scaled suprema so the surrogate can be eyeballed.
    """
    k = np.arange(1, K + 1, dtype=float)
    stencil = np.array([(-1.0) ** (N - m) * math.comb(N, m) for m in range(N + 1)])
    # unit-step forward differences
    fd = np.zeros_like(k)
    for m in range(N + 1):
        fd += stencil[m] * fn(k + m)
    sup_fd = float(np.max(k ** N * np.abs(fd)))
    # small-step derivative proxy
    dv = np.zeros_like(k)
    for m in range(N + 1):
        dv += stencil[m] * fn(k + m * h)
    sup_deriv = float(np.max(k ** N * np.abs(dv) / h ** N))
    return {"N": N, "sup_scaled_diff": sup_fd, "sup_scaled_derivative": sup_deriv}


def product_rule_check(F, G, N):
    """Leibniz rule D^N(FG)_k = sum_m binom(N,m) D^{N-m}F_k D^m G_{k+N-m}."""
    if F.values.size != G.values.size:
        raise DomainError("sequences must share a common length")
    prod = SequenceSample(values=F.values * G.values)
    lhs = finite_diff(prod, N).values
    n_out = lhs.size
    rhs = np.zeros(n_out)
    for m in range(N + 1):
        df = np.diff(F.values, N - m) if N - m > 0 else F.values
        dg = np.diff(G.values, m) if m > 0 else G.values
        rhs += math.comb(N, m) * df[:n_out] * dg[N - m: N - m + n_out]
    residual = float(np.max(np.abs(lhs - rhs)))
    scale = float(np.max(np.abs(lhs))) or 1.0
    return {"leibniz_residual": residual, "relative": residual / scale}


def appendix_bound_check(params, alpha, N, k_max, n_max):
    """sup over the (k, n) lattice of k^N (n+1) |D^N_k E_{k,n}|.

    With alpha None the wave-operator residuals E+- are used; otherwise the
    Riesz residuals E^alpha_{k,1n}, E^alpha_{k,2n}.
    """
    if N > 3 or k_max > 2 ** 10 or n_max > 10 ** 3:
        raise DomainError("lattice larger than the supported desk scale")
    ks = np.arange(k_max + N + 1)
    if alpha is None:
        mats = {
            "E_plus": np.vstack([
                coeff_table(params, k, n_max, "plus").residuals for k in ks]),
            "E_minus": np.vstack([
                coeff_table(params, k, n_max, "minus").residuals for k in ks]),
        }
    else:
        tabs = [riesz_coeffs(params, k, alpha, n_max=n_max) for k in ks]
        mats = {
            "E_alpha_1": np.vstack([t.E1 for t in tabs]),
            "E_alpha_2": np.vstack([t.E2 for t in tabs]),
        }
    report = {}
    nn = np.arange(n_max + 1, dtype=float) + 1.0
    kk = np.arange(1, k_max + 1, dtype=float)
    for name, mat in mats.items():
        dk = np.diff(mat, N, axis=0)[1: k_max + 1]
        scaled = (kk[:, None] ** N) * nn[None, :] * np.abs(dk)
        i, j = np.unravel_index(np.argmax(scaled), scaled.shape)
        report[name] = {
            "sup": float(scaled[i, j]),
            "argmax_k": int(i + 1),
            "argmax_n": int(j),
        }
    return report
