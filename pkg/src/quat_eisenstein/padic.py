"""Precision-tracked p-adic numbers, log_p / exp_p and the limit values of the weight-2 ladder.

A ``PadicNumber`` is p^valuation * unit where the unit is known modulo p^precision
(relative precision). A zero carries ``unit == 0`` and ``precision == 0``; its
valuation is the power of p it is known to be divisible by, or ``math.inf`` for an
exact zero.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Union

from quat_eisenstein.arith import (
    INFINITY,
    bernoulli,
    require_feasible_index,
    require_odd_prime,
    valuation,
)
from quat_eisenstein.errors import PadicDomainError

logger = logging.getLogger(__name__)

Precision = Union[int, float]

DEFAULT_PRECISION = 20


def _vp(n: int, p: int) -> int:
    """v_p of a nonzero integer."""
    return int(valuation(n, p))


def _floor_log(n: int, p: int) -> int:
    """Largest e with p^e <= n."""
    e = 0
    while p ** (e + 1) <= n:
        e += 1
    return e


def legendre(n: int, p: int) -> int:
    """v_p(n!)."""
    total = 0
    q = p
    while q <= n:
        total += n // q
        q *= p
    return total


@dataclass(frozen=True)
class PadicNumber:
    p: int
    valuation: Precision
    unit: int
    precision: int

    @classmethod
    def zero(cls, p: int, absolute_precision: Precision = INFINITY) -> PadicNumber:
        return cls(p, absolute_precision, 0, 0)

    @classmethod
    def from_residue(cls, residue: int, p: int, absolute_precision: int) -> PadicNumber:
        """The number known to be congruent to ``residue`` modulo p^absolute_precision."""
        residue %= p**absolute_precision
        if residue == 0:
            return cls.zero(p, absolute_precision)
        v = _vp(residue, p)
        prec = absolute_precision - v
        return cls(p, v, (residue // p**v) % p**prec, prec)

    @property
    def absolute_precision(self) -> Precision:
        return self.valuation + self.precision

    def is_zero(self) -> bool:
        return self.unit == 0

    def is_exact_zero(self) -> bool:
        return self.unit == 0 and self.valuation == INFINITY

    def lift(self) -> Fraction:
        """Rational representative p^v * unit."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.p) ** int(self.valuation) * self.unit

    def residue(self) -> int:
        """Integer representative modulo p^absolute_precision (requires valuation >= 0)."""
        if self.is_zero():
            return 0
        if self.valuation < 0:
            raise ValueError(f"{self} is not integral")
        return self.p ** int(self.valuation) * self.unit

    def digits(self, count: int | None = None) -> list[int]:
        """Base-p digits of the unit part, least significant first."""
        count = self.precision if count is None else min(count, self.precision)
        out = []
        u = self.unit
        for _ in range(count):
            u, d = divmod(u, self.p)
            out.append(d)
        return out

    def __str__(self) -> str:
        if self.is_exact_zero():
            return "0"
        if self.is_zero():
            return f"0 mod {self.p}^({self.valuation})"
        return f"{self.p}^{self.valuation} * {self.unit} mod {self.p}^({self.absolute_precision})"

    def to_json(self) -> dict[str, Any]:
        val = None if self.valuation == INFINITY else self.valuation
        return {"p": self.p, "val": val, "unit": str(self.unit), "prec": self.precision}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> PadicNumber:
        val = INFINITY if data["val"] is None else int(data["val"])
        return cls(int(data["p"]), val, int(data["unit"]), int(data["prec"]))

    def _check(self, other: PadicNumber) -> None:
        if self.p != other.p:
            raise ValueError(f"cannot combine {self.p}-adic and {other.p}-adic numbers")

    def __neg__(self) -> PadicNumber:
        if self.is_zero():
            return self
        mod = self.p**self.precision
        return PadicNumber(self.p, self.valuation, (-self.unit) % mod, self.precision)

    def __add__(self, other: PadicNumber) -> PadicNumber:
        self._check(other)
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        A = min(self.absolute_precision, other.absolute_precision)
        if self.is_zero() or other.is_zero():
            nonzero = other if self.is_zero() else self
            if nonzero.is_zero() or nonzero.valuation >= A:
                return PadicNumber.zero(self.p, A)
            prec = min(nonzero.precision, int(A - nonzero.valuation))
            return PadicNumber(self.p, nonzero.valuation, nonzero.unit % self.p**prec, prec)
        vmin = int(min(self.valuation, other.valuation))
        span = int(A) - vmin
        if span <= 0:
            return PadicNumber.zero(self.p, A)
        mod = self.p**span
        total = (
            self.unit * self.p ** int(self.valuation - vmin)
            + other.unit * self.p ** int(other.valuation - vmin)
        ) % mod
        if total == 0:
            return PadicNumber.zero(self.p, A)
        w = _vp(total, self.p)
        return PadicNumber(self.p, vmin + w, (total // self.p**w) % self.p ** (span - w), span - w)

    def __sub__(self, other: PadicNumber) -> PadicNumber:
        return self + (-other)

    def __mul__(self, other: PadicNumber) -> PadicNumber:
        self._check(other)
        if self.is_exact_zero() or other.is_exact_zero():
            return PadicNumber.zero(self.p)
        if self.is_zero() or other.is_zero():
            return PadicNumber.zero(self.p, self.valuation + other.valuation)
        prec = min(self.precision, other.precision)
        return PadicNumber(
            self.p,
            self.valuation + other.valuation,
            (self.unit * other.unit) % self.p**prec,
            prec,
        )

    def __truediv__(self, other: PadicNumber) -> PadicNumber:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError(f"division by p-adic zero {other}")
        if self.is_exact_zero():
            return self
        if self.is_zero():
            return PadicNumber.zero(self.p, self.valuation - other.valuation)
        prec = min(self.precision, other.precision)
        mod = self.p**prec
        return PadicNumber(
            self.p,
            self.valuation - other.valuation,
            (self.unit * pow(other.unit, -1, mod)) % mod,
            prec,
        )


def from_rational(r: int | Fraction, p: int, N: int) -> PadicNumber:
    """Embed a rational into Q_p with relative precision N."""
    require_odd_prime(p)
    if N < 1:
        raise ValueError(f"precision must be positive, got {N}")
    r = Fraction(r)
    if r == 0:
        return PadicNumber.zero(p)
    v = int(valuation(r, p))
    u = r / Fraction(p) ** v
    mod = p**N
    unit = (u.numerator * pow(u.denominator, -1, mod)) % mod
    return PadicNumber(p, v, unit, N)


def from_int(n: int, p: int, N: int) -> PadicNumber:
    return from_rational(n, p, N)


@dataclass(frozen=True)
class PadicSeriesBudget:
    """Truncation plan for a p-adic power series.

    Every term past ``cutoff`` has valuation >= ``target_precision``; ``guard`` extra
    digits are carried so that exact division by p-powers of the denominators is safe.
    """

    target_precision: int
    cutoff: int
    guard: int

    @classmethod
    def for_log(cls, p: int, w: int, target: int) -> PadicSeriesBudget:
        n = 0
        while (n + 1) * w - _floor_log(n + 1, p) < target:
            n += 1
        return cls(target, n, _floor_log(max(n, 1), p))

    @classmethod
    def for_exp(cls, p: int, w: int, target: int) -> PadicSeriesBudget:
        # v(x^n / n!) >= n w - (n - 1) / (p - 1)
        n = 0
        while (n + 1) * w * (p - 1) - n < target * (p - 1):
            n += 1
        return cls(target, n, legendre(n, p))


def padic_log(x: PadicNumber) -> PadicNumber:
    """log_p(x) = sum_{n >= 1} (-1)^{n+1} (x - 1)^n / n for x = 1 mod p."""
    p = x.p
    if x.is_zero() or x.valuation != 0:
        raise PadicDomainError(f"log_p needs a p-adic unit, got {x}")
    A = int(x.absolute_precision)
    y = x - from_int(1, p, A)
    if y.is_zero():
        return PadicNumber.zero(p, A)
    w = int(y.valuation)
    if w < 1:
        raise PadicDomainError(f"log_p needs x = 1 mod p, got {x}")
    budget = PadicSeriesBudget.for_log(p, w, A)
    mod = p ** (A + budget.guard)
    target_mod = p**A
    Y = y.residue()
    total = 0
    power = 1
    for n in range(1, budget.cutoff + 1):
        power = (power * Y) % mod
        e = _vp(n, p)
        term = (power // p**e) * pow(n // p**e, -1, target_mod)
        total += term if n % 2 else -term
    logger.debug("log_p: p=%d w=%d precision=%d terms=%d", p, w, A, budget.cutoff)
    return PadicNumber.from_residue(total, p, A)


def padic_exp(x: PadicNumber, precision: Optional[int] = None) -> PadicNumber:
    """exp_p(x) = sum_{n >= 0} x^n / n! for v_p(x) >= 1.

    ``precision`` caps the absolute precision of the result; an exact zero maps to 1
    at ``precision`` (default ``DEFAULT_PRECISION``) digits.
    """
    p = x.p
    if precision is not None and precision < 1:
        raise ValueError(f"precision must be positive, got {precision}")
    if x.is_exact_zero():
        return from_int(1, p, precision or DEFAULT_PRECISION)
    A = int(x.absolute_precision)
    if precision is not None:
        A = min(A, precision)
    if x.is_zero():
        return PadicNumber.from_residue(1, p, A)
    if x.valuation < 1:
        raise PadicDomainError(f"exp_p needs v_p(x) >= 1, got {x}")
    w = int(x.valuation)
    budget = PadicSeriesBudget.for_exp(p, w, A)
    mod = p ** (A + budget.guard)
    target_mod = p**A
    X = x.residue()
    total = 1
    power = 1
    factorial_unit = 1
    for n in range(1, budget.cutoff + 1):
        power = (power * X) % mod
        e_n = _vp(n, p)
        factorial_unit = (factorial_unit * (n // p**e_n)) % target_mod
        e = legendre(n, p)
        total += (power // p**e) * pow(factorial_unit, -1, target_mod)
    logger.debug("exp_p: p=%d w=%d precision=%d terms=%d", p, w, A, budget.cutoff)
    return PadicNumber.from_residue(total, p, A)


def leopoldt_quotient(x: int, p: int, m: int, N: int) -> PadicNumber:
    """(x^{p^m} - 1) / p^m, exact, embedded at relative precision N."""
    require_odd_prime(p)
    if (x - 1) % p:
        raise PadicDomainError(f"Leopoldt quotient needs x = 1 mod {p}, got {x}")
    return from_rational(Fraction(x ** (p**m) - 1, p**m), p, N)


def _log_two(p: int, N: int) -> PadicNumber:
    """log_p(2^{p-1}) to relative precision at least N.

    The log is divisible by p, so it is evaluated with guard digits until its
    relative precision reaches N.
    """
    guard = 1
    while True:
        log2 = padic_log(from_int(2 ** (p - 1), p, N + guard))
        if log2.is_zero():
            guard += 1
        elif log2.precision < N:
            guard = int(log2.valuation)
        else:
            return log2


def tilde_a_value(p: int, N: int) -> PadicNumber:
    """-48 p / log_p(2^{p-1}) at relative precision N."""
    require_odd_prime(p)
    if N < 1:
        raise ValueError(f"precision must be positive, got {N}")
    return from_int(-48 * p, p, N) / _log_two(p, N)


def tilde_residual(p: int, N: int) -> PadicNumber:
    """tilde_a_value(p, N) * log_p(2^{p-1}) + 48 p; zero to the working precision."""
    return tilde_a_value(p, N) * _log_two(p, N) + from_int(48 * p, p, N)


def tilde_a_limit(p: int, N: int) -> PadicNumber:
    """lim a_{k_m}(H) for rank-2 H with epsilon(H) = 1 and 2 det(H) = 1.

    The weight-2 limit of k_m / B_{k_m} carries the Euler factor 1 / (1 - p), so this
    is ``tilde_a_value(p, N) / (1 - p)``.
    """
    return tilde_a_value(p, N) / from_int(1 - p, p, N)


def bernoulli_residue_check(p: int, m: int) -> int | float:
    """v_p(B_{(p-1)p^{m-1}} - (p-1)/p)."""
    require_odd_prime(p)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    index = require_feasible_index((p - 1) * p ** (m - 1))
    return valuation(bernoulli(index) - Fraction(p - 1, p), p)

