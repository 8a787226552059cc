"""p-adic convergence tables: G_{k_m} -> G*_k and a_{k_m}(H) -> ã(H)."""

from __future__ import annotations

import logging
from fractions import Fraction

from quat_eisenstein.arith import (
    INFINITY,
    require_feasible_index,
    require_odd_prime,
    sigma_star,
    valuation,
)
from quat_eisenstein.eisenstein import A_coeff, WeightSequence, a_coeff, b_coeff, require_weight
from quat_eisenstein.hermitian import HermitianForm, epsilon, rank, two_det
from quat_eisenstein.models import ConvergenceRow, RationalLimitRow, TranscendentalRow
from quat_eisenstein.padic import PadicNumber, from_rational, tilde_a_limit, tilde_a_value

logger = logging.getLogger(__name__)


def _finite(v: int | float) -> int | None:
    return None if v == INFINITY else int(v)


def transcendental_weight(p: int, m: int) -> int:
    """k_m = 2 + (p - 1) p^{m-1}."""
    return WeightSequence(2, p, m).weight


def convergence_table(k: int, p: int, H: HermitianForm, m_max: int) -> list[ConvergenceRow]:
    """Rows (m, k_m, v_p(b_{k_m}(H) - A_k(H))) for m = 1..m_max."""
    require_weight(k)
    require_odd_prime(p)
    if m_max >= 1:
        require_feasible_index(WeightSequence(k, p, m_max).weight)
    target = A_coeff(k, p, H)
    rows = []
    for m in range(1, m_max + 1):
        km = WeightSequence(k, p, m).weight
        diff = b_coeff(km, H) - target
        rows.append(
            ConvergenceRow(m=m, weight=km, difference=str(diff), valuation=_finite(valuation(diff, p)))
        )
        logger.debug("k=%d p=%d H=%s m=%d: v=%s", k, p, H, m, rows[-1].valuation)
    return rows


def _valuation_against(value: PadicNumber, limit: PadicNumber) -> tuple[int, bool]:
    diff = value - limit
    return int(diff.valuation), diff.is_zero()


def require_transcendental_form(H: HermitianForm) -> None:
    if rank(H) != 2 or epsilon(H) != 1 or two_det(H) != 1:
        raise ValueError(f"{H} must have rank 2, epsilon 1 and 2 det = 1")


def transcendental_table(p: int, H: HermitianForm, m_max: int, N: int) -> list[TranscendentalRow]:
    """Rows (m, k_m, v_p(a_{k_m}(H) - ã)) along k_m = 2 + (p - 1) p^{m-1}.

    Each row reports the valuation against the true limit (``tilde_a_limit``) and
    against the closed form ``tilde_a_value``.
    """
    require_odd_prime(p)
    require_transcendental_form(H)
    if m_max >= 1:
        require_feasible_index(transcendental_weight(p, m_max))
    limit = tilde_a_limit(p, N)
    stated = tilde_a_value(p, N)
    rows = []
    for m in range(1, m_max + 1):
        km = transcendental_weight(p, m)
        coefficient = a_coeff(km, H)
        value = from_rational(coefficient, p, N)
        v_limit, limit_bounded = _valuation_against(value, limit)
        v_stated, stated_bounded = _valuation_against(value, stated)
        rows.append(
            TranscendentalRow(
                m=m,
                weight=km,
                coefficient=str(coefficient),
                valuation_limit=v_limit,
                limit_bounded=limit_bounded,
                valuation_stated=v_stated,
                stated_bounded=stated_bounded,
            )
        )
    return rows


def tilde_a_rational(p: int, H: HermitianForm) -> Fraction:
    """Rational limit of a_{k_m}(H) for rank(H) <= 1: 1 at O_2, -24/(1 - p) sigma*_1(eps) at rank 1."""
    require_odd_prime(p)
    r = rank(H)
    if r == 0:
        return Fraction(1)
    if r == 2:
        raise ValueError(f"{H} has rank 2; its limit is not rational in general")
    return Fraction(-24, 1 - p) * sigma_star(1, epsilon(H), p)


def rank_deficient_table(p: int, H: HermitianForm, m_max: int) -> list[RationalLimitRow]:
    target = tilde_a_rational(p, H)
    if m_max >= 1:
        require_feasible_index(transcendental_weight(p, m_max))
    rows = []
    for m in range(1, m_max + 1):
        km = transcendental_weight(p, m)
        coefficient = a_coeff(km, H)
        rows.append(
            RationalLimitRow(
                m=m,
                weight=km,
                coefficient=str(coefficient),
                valuation=_finite(valuation(coefficient - target, p)),
            )
        )
    return rows


def is_strictly_increasing(valuations: list[int | None]) -> bool:
    """``None`` stands for an exact zero and counts as larger than any integer."""
    for a, b in zip(valuations, valuations[1:]):
        if a is None:
            if b is not None:
                return False
        elif b is not None and b <= a:
            return False
    return True
