"""Fourier coefficients of the degree-2 quaternionic Eisenstein series and the series built from them.

Notation: a_k(H) are the coefficients of E_k (constant term 1), b_k(H) = c_k a_k(H)
those of the normalised series G_k, and A_k(H) those of the p-adic limit G*_k.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import divisors

from quat_eisenstein.arith import bernoulli, require_odd_prime, sigma, sigma_star
from quat_eisenstein.expansion import QExpansion, u_p
from quat_eisenstein.hermitian import HermitianForm, epsilon, rank, two_det

logger = logging.getLogger(__name__)


def require_weight(k: int) -> int:
    if k < 4 or k % 2:
        raise ValueError(f"weight must be even and >= 4, got {k}")
    return k


@dataclass(frozen=True)
class WeightSequence:
    """k_m = k + (p - 1) p^{m-1}."""

    k: int
    p: int
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")

    @property
    def weight(self) -> int:
        return self.k + (self.p - 1) * self.p ** (self.m - 1)


@lru_cache(maxsize=None)
def normalizer(k: int) -> Fraction:
    """c_k = -(2^{k-2} - 1) B_k B_{k-2} / (4k(k-2)), the constant term of G_k."""
    require_weight(k)
    return -(2 ** (k - 2) - 1) * bernoulli(k) * bernoulli(k - 2) / (4 * k * (k - 2))


@lru_cache(maxsize=4096)
def alpha_star(k: int, ell: int) -> Fraction:
    require_weight(k)
    if ell < 0:
        raise ValueError(f"ell must be nonnegative, got {ell}")
    if ell == 0:
        return -2 * k / bernoulli(k)
    bracket = sigma(k - 3, ell) - 2 ** (k - 2) * sigma(k - 3, Fraction(ell, 4))
    return bracket / normalizer(k)


@lru_cache(maxsize=8192)
def _a_from_invariants(k: int, eps: int, D: int) -> Fraction:
    return sum(
        (d ** (k - 1) * alpha_star(k, D // (d * d)) for d in divisors(eps)),
        Fraction(0),
    )


def a_coeff(k: int, H: HermitianForm) -> Fraction:
    """a_k(H) = sum_{d | eps(H)} d^{k-1} alpha*(2 det(H) / d^2), with a_k(O_2) = 1."""
    require_weight(k)
    rank(H)
    if H.is_zero():
        return Fraction(1)
    return _a_from_invariants(k, epsilon(H), two_det(H))


def b_coeff(k: int, H: HermitianForm) -> Fraction:
    return normalizer(k) * a_coeff(k, H)


def A_coeff(k: int, p: int, H: HermitianForm) -> Fraction:  # noqa: N802
    """Coefficient of G*_k at H, by the closed form in each rank."""
    require_weight(k)
    require_odd_prime(p)
    r = rank(H)
    if r == 0:
        return (1 - Fraction(p) ** (k - 1)) * (1 - Fraction(p) ** (k - 3)) * normalizer(k)
    eps = epsilon(H)
    if r == 1:
        return (
            (1 - Fraction(p) ** (k - 3))
            * (2 ** (k - 2) - 1)
            * bernoulli(k - 2)
            / (2 * (k - 2))
            * sigma_star(k - 1, eps, p)
        )
    D = two_det(H)
    total = 0
    for d in divisors(eps):
        if d % p == 0:
            continue
        total += d ** (k - 1) * (
            sigma_star(k - 3, Fraction(D, d * d), p)
            - 2 ** (k - 2) * sigma_star(k - 3, Fraction(D, 4 * d * d), p)
        )
    return Fraction(total)


def unimodular_coefficient(k: int) -> Fraction:
    """-4k(k-2) / ((2^{k-2} - 1) B_k B_{k-2}): a_k(H) at rank 2, eps(H) = 1, 2 det(H) = 1."""
    return 1 / normalizer(k)


def expand_a(k: int, trace_bound: int) -> QExpansion:
    require_weight(k)
    return QExpansion(trace_bound, lambda H: a_coeff(k, H), f"E_{k}")


def expand_b(k: int, trace_bound: int) -> QExpansion:
    require_weight(k)
    return QExpansion(trace_bound, lambda H: b_coeff(k, H), f"G_{k}")


def expand_A(k: int, p: int, trace_bound: int) -> QExpansion:  # noqa: N802
    require_weight(k)
    require_odd_prime(p)
    return QExpansion(trace_bound, lambda H: A_coeff(k, p, H), f"G*_{k}[p={p}]")


def build_F(k: int, p: int, trace_bound: int) -> QExpansion:  # noqa: N802
    """F_k = G_k | U(p) - p^{k-1} G_k, from G_k at trace bound p * trace_bound."""
    require_odd_prime(p)
    G = expand_b(k, p * trace_bound)
    F = u_p(G, p) - p ** (k - 1) * G.truncate(trace_bound)
    F.label = f"F_{k}[p={p}]"
    return F


def build_G_star(k: int, p: int, trace_bound: int) -> QExpansion:  # noqa: N802
    """G*_k = -1/(1 + p^{k-3}) (p^{2(k-3)} F_k - F_k | U(p)), from G_k at p^2 * trace_bound."""
    F = build_F(k, p, p * trace_bound)
    G_star = Fraction(-1, 1 + p ** (k - 3)) * (
        p ** (2 * (k - 3)) * F.truncate(trace_bound) - u_p(F, p)
    )
    G_star.label = f"G*_{k}[p={p}] via U(p)"
    logger.debug("Built %r from F at trace bound %d", G_star, p * trace_bound)
    return G_star
