"""Exact rational arithmetic: Bernoulli numbers, divisor sums and scalar congruences."""

from __future__ import annotations

import json
import logging
import math
import os
import threading
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Callable, Optional, Union

from sympy import divisor_sigma, divisors, isprime, multiplicity

from quat_eisenstein.errors import InfeasibleError

logger = logging.getLogger(__name__)

BigRational = Fraction
Valuation = Union[int, float]

INFINITY: float = math.inf
MAX_BERNOULLI_INDEX = 600
BERNOULLI_CACHE_ENV = "QEIS_BERNOULLI_CACHE_DIR"
_CACHE_FILENAME = "bernoulli_even.json"


def require_odd_prime(p: int) -> int:
    """Return ``p`` unchanged, or raise ``ValueError`` if it is not an odd prime."""
    if isinstance(p, bool) or not isinstance(p, int) or p < 3 or not isprime(p):
        raise ValueError(f"p must be an odd prime, got {p!r}")
    return p


def require_feasible_index(index: int) -> int:
    if index > MAX_BERNOULLI_INDEX:
        raise InfeasibleError(
            f"Bernoulli index {index} exceeds the supported bound {MAX_BERNOULLI_INDEX}"
        )
    return index


def valuation(x: int | Fraction, p: int) -> Valuation:
    """Exact p-adic valuation of a rational; ``INFINITY`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return int(multiplicity(p, abs(x.numerator))) - int(multiplicity(p, x.denominator))


class BernoulliTable:
    """Thread-safe cache of even-index Bernoulli numbers.

    Entries are produced by the defining recurrence
    sum_{j=0}^{n} C(n+1, j) B_j = 0 with B_1 = -1/2. When ``cache_dir`` is set
    the table is loaded from and persisted to ``bernoulli_even.json`` there.
    """

    def __init__(self, cache_dir: Optional[str | Path] = None) -> None:
        self._lock = threading.Lock()
        self._even: list[Fraction] = [Fraction(1)]
        self._cache_path = Path(cache_dir) / _CACHE_FILENAME if cache_dir else None
        if self._cache_path is not None:
            self._load()

    def __len__(self) -> int:
        return len(self._even)

    @property
    def max_index(self) -> int:
        return 2 * (len(self._even) - 1)

    def get(self, m: int) -> Fraction:
        if m < 0:
            raise ValueError(f"Bernoulli index must be nonnegative, got {m}")
        if m == 1:
            return Fraction(-1, 2)
        if m % 2 == 1:
            return Fraction(0)
        half = m // 2
        if half >= len(self._even):
            with self._lock:
                if half >= len(self._even):
                    self._extend(half)
        return self._even[half]

    def _extend(self, half: int) -> None:
        start = len(self._even)
        for i in range(start, half + 1):
            n = 2 * i
            s = Fraction(1) - Fraction(n + 1, 2)
            for j in range(1, i):
                s += comb(n + 1, 2 * j) * self._even[j]
            self._even.append(-s / (n + 1))
        logger.debug("Extended Bernoulli table from B_%d to B_%d", 2 * start - 2, 2 * half)
        if self._cache_path is not None:
            self._save()

    def _load(self) -> None:
        assert self._cache_path is not None
        if not self._cache_path.exists():
            return
        try:
            with open(self._cache_path) as f:
                data = json.load(f)
            entries = [Fraction(v) for v in data["even"]]
        except (OSError, ValueError, KeyError, TypeError) as exc:
            logger.warning("Ignoring unreadable Bernoulli cache %s: %s", self._cache_path, exc)
            return
        if not entries or entries[0] != 1:
            logger.warning("Ignoring stale Bernoulli cache %s", self._cache_path)
            return
        self._even = entries
        logger.debug("Loaded %d Bernoulli entries from %s", len(entries), self._cache_path)

    def _save(self) -> None:
        assert self._cache_path is not None
        try:
            self._cache_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self._cache_path, "w") as f:
                json.dump({"even": [str(b) for b in self._even]}, f)
        except OSError as exc:
            logger.warning("Could not persist Bernoulli cache to %s: %s", self._cache_path, exc)


_table = BernoulliTable(os.environ.get(BERNOULLI_CACHE_ENV) or None)


def configure_bernoulli_cache(cache_dir: Optional[str | Path]) -> BernoulliTable:
    """Replace the process-wide Bernoulli table, optionally backed by ``cache_dir``."""
    global _table
    _table = BernoulliTable(cache_dir)
    return _table


def bernoulli(m: int) -> Fraction:
    """B_m with the convention B_1 = -1/2."""
    return _table.get(m)


def von_staudt_denominator(m: int) -> int:
    """Product of the primes q with (q - 1) | m, for even m >= 2."""
    if m < 2 or m % 2:
        raise ValueError(f"von Staudt-Clausen needs an even index >= 2, got {m}")
    return math.prod(d + 1 for d in divisors(m) if isprime(d + 1))


def _as_natural(m: int | Fraction) -> Optional[int]:
    m = Fraction(m)
    if m.denominator != 1 or m <= 0:
        return None
    return m.numerator


def sigma(k: int, m: int | Fraction) -> int:
    """Sum of d^k over positive divisors d of m; 0 when m is not a positive integer."""
    n = _as_natural(m)
    if n is None:
        return 0
    return int(divisor_sigma(n, k))


def sigma_star(m: int, N: int | Fraction, p: int) -> int:
    """Sum of d^m over positive divisors d of N prime to p; 0 when N is not a positive integer."""
    require_odd_prime(p)
    n = _as_natural(N)
    if n is None:
        return 0
    return sum(d**m for d in divisors(n) if d % p)


def prime_to_p_part(N: int, p: int) -> int:
    return N // p ** int(multiplicity(p, N))


def verify_divisor_split(f: Callable[[int], int], N: int, p: int) -> bool:
    """Check sum_{d | pN} f(d) = sum_{d | N, p !| d} f(d) + sum_{d | N} f(pd)."""
    lhs = sum(f(d) for d in divisors(p * N))
    ds = divisors(N)
    rhs = sum(f(d) for d in ds if d % p) + sum(f(p * d) for d in ds)
    return lhs == rhs


def verify_sigma_twist(m: int, N: int, p: int) -> bool:
    """Check p^{2m} sigma_m(N) - sigma_m(p^2 N) = -(1 + p^m) sigma*_m(N)."""
    lhs = p ** (2 * m) * sigma(m, N) - sigma(m, p * p * N)
    return lhs == -(1 + p**m) * sigma_star(m, N, p)


def kummer_lhs(k: int, p: int) -> Fraction:
    """The Euler-factor corrected quotient (1 - p^{k-1}) B_k / k."""
    if k < 2 or k % 2:
        raise ValueError(f"k must be even and >= 2, got {k}")
    return (1 - Fraction(p) ** (k - 1)) * bernoulli(k) / k


def kummer_valuation(k: int, k2: int, p: int) -> Valuation:
    """v_p of kummer_lhs(k, p) - kummer_lhs(k2, p); ``INFINITY`` when they agree."""
    return valuation(kummer_lhs(k, p) - kummer_lhs(k2, p), p)


def kummer_modulus_exponent(k: int, k2: int, p: int) -> int:
    """Largest e with (p - 1) p^{e-1} | (k2 - k), or 0 if (p - 1) does not divide it."""
    diff = abs(k2 - k)
    if diff == 0:
        raise ValueError("weights must differ")
    if diff % (p - 1):
        return 0
    return 1 + int(multiplicity(p, diff // (p - 1)))


def kummer_pole_valuation(k: int, k2: int, p: int) -> int:
    """Valuation of kummer_lhs(k) - kummer_lhs(k2) on the branch (p - 1) | k.

    There the quotient has a simple pole at weight 0 with residue of valuation -1, so
    the difference has valuation v_p(k2 - k) - 1 - v_p(k) - v_p(k2).
    """
    if k == k2:
        raise ValueError("weights must differ")
    if k % (p - 1) or k2 % (p - 1):
        raise ValueError(f"both weights must be divisible by {p - 1}, got {k} and {k2}")
    return (
        int(multiplicity(p, abs(k2 - k)))
        - 1
        - int(multiplicity(p, k))
        - int(multiplicity(p, k2))
    )
