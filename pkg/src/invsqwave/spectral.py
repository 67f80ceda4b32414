"""Scalar spectral indices for L_a = -Laplace + a/|x|^2 and admissible L^p ranges.

All boundedness theorems are stated through the shift sigma = (d-2)/2 - nu0;
everything here is plain arithmetic on (d, a) plus the open 1/p intervals of
the main theorems.
"""

from dataclasses import dataclass, asdict
import json
import math

from .errors import DomainError, SubcriticalCouplingError, WindowError

__all__ = [
    "SpectralParams",
    "ModeIndices",
    "IndexInterval",
    "make_params",
    "mode_indices",
    "admissible_p",
    "theta_pd",
    "OPERATOR_TAGS",
]

OPERATOR_TAGS = ("W", "W*", "R^alpha", "R^-beta", "W_sobolev", "W*_sobolev")


@dataclass(frozen=True)
class SpectralParams:
    d: int
    a: float
    sigma: float
    nu0: float
    lambda0: float
    p0: float  # d/sigma, +inf when sigma <= 0

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @staticmethod
    def from_json(text):
        obj = json.loads(text)
        return make_params(obj["d"], obj["a"])


@dataclass(frozen=True)
class ModeIndices:
    k: int
    mu_k: float
    nu_k: float
    a_k: float
    b_k: float


@dataclass(frozen=True)
class IndexInterval:
    """Open interval in the 1/p variable; (lo, hi) with lo >= hi meaning empty."""

    lo: float
    hi: float

    @property
    def empty(self):
        return not (self.lo < self.hi)

    def contains(self, inv_p):
        return self.lo < inv_p < self.hi


def make_params(d, a):
    if d != int(d) or d < 2:
        raise DomainError("dimension d must be an integer >= 2")
    d = int(d)
    a = float(a)
    floor = -((d - 2) / 2.0) ** 2
    if a < floor:
        raise SubcriticalCouplingError(
            f"coupling a={a} below the critical threshold {floor}")
    lambda0 = (d - 2) / 2.0
    nu0 = math.sqrt(lambda0 * lambda0 + a)
    sigma = lambda0 - nu0
    p0 = d / sigma if sigma > 0 else math.inf
    return SpectralParams(d=d, a=a, sigma=sigma, nu0=nu0, lambda0=lambda0, p0=p0)


def mode_indices(params, k):
    if k < 0 or k != int(k):
        raise DomainError("mode index k must be a non-negative integer")
    k = int(k)
    mu_k = (params.d - 2) / 2.0 + k
    nu_k = math.sqrt(mu_k * mu_k + params.a)
    a_k = (mu_k + nu_k) / 2.0
    b_k = (mu_k - nu_k) / 2.0
    return ModeIndices(k=k, mu_k=mu_k, nu_k=nu_k, a_k=a_k, b_k=b_k)


def _check_alpha_window(params, alpha):
    if not (-params.d < alpha < 2.0 + 2.0 * params.nu0):
        raise WindowError(
            f"alpha={alpha} outside (-d, 2+2*nu0) = ({-params.d}, {2 + 2 * params.nu0})")


def _check_beta_window(params, beta):
    if not (-2.0 * params.nu0 - 2.0 < beta < params.d):
        raise WindowError(
            f"beta={beta} outside (-2*nu0-2, d) = ({-2 * params.nu0 - 2}, {params.d})")


def admissible_p(params, operator_tag, order=None):
    """Open 1/p interval on which the tagged operator is L^p bounded.

    Tags: "W", "W*" (order ignored); "R^alpha", "W_sobolev" (order = alpha);
    "R^-beta", "W*_sobolev" (order = beta).
    """
    d, sigma = params.d, params.sigma
    if operator_tag in ("W", "W*"):
        return IndexInterval(max(0.0, sigma / d), min(1.0, (d - sigma) / d))
    if order is None:
        raise DomainError(f"operator {operator_tag!r} requires an order parameter")
    order = float(order)
    if operator_tag == "R^alpha":
        _check_alpha_window(params, order)
        return IndexInterval(
            max(0.0, (sigma + order) / d),
            min(1.0, (d - sigma) / d, (d + order) / d),
        )
    if operator_tag == "R^-beta":
        _check_beta_window(params, order)
        return IndexInterval(
            max(0.0, order / d, sigma / d),
            min(1.0, (d - sigma + order) / d),
        )
    if operator_tag == "W_sobolev":
        _check_alpha_window(params, order)
        return IndexInterval(
            max(0.0, sigma / d, (sigma + order) / d),
            min(1.0, (d - sigma) / d, (d + order) / d),
        )
    if operator_tag == "W*_sobolev":
        _check_beta_window(params, order)
        return IndexInterval(
            max(0.0, sigma / d, order / d),
            min(1.0, (d - sigma) / d, (d - sigma + order) / d),
        )
    raise DomainError(f"unknown operator tag {operator_tag!r}")


def theta_pd(p, d):
    if p <= 1:
        raise DomainError("theta_pd requires p > 1")
    return (d + 1.0) / p - (d + 3.0) / 2.0
