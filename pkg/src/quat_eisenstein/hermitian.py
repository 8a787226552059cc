"""Hermitian 2x2 forms over the dual of the Hurwitz order.

A ``HermitianForm`` is H = [[n, h], [conj(h), m]] with n, m integers and h in the
trace dual of O. ``IntegralHermitian`` is its counterpart over O itself and is
used for the finite quotients Her_n(O) / p Her_n(O).
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Any, Iterator

from sympy import divisors

from quat_eisenstein.errors import InvariantViolation, LatticeError
from quat_eisenstein.quaternion import (
    ZERO,
    Coords,
    HurwitzQuaternion,
    from_basis,
    in_dual,
    in_hurwitz,
    q_conj,
)

logger = logging.getLogger(__name__)

_LITERAL = re.compile(r"^\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(\[.*\])\s*$")


@dataclass(frozen=True)
class HermitianForm:
    """H = [[n, h], [conj(h), m]] in Her_2 over the dual lattice."""

    n: int
    m: int
    h: HurwitzQuaternion = ZERO

    def __post_init__(self) -> None:
        if not in_dual(self.h):
            raise LatticeError(f"off-diagonal entry {self.h} is not in the dual of O")

    @classmethod
    def parse(cls, literal: str) -> HermitianForm:
        """Parse ``"n,m,[c1,c2,c3,c4]"`` with doubled off-diagonal coordinates."""
        match = _LITERAL.match(literal)
        if match is None:
            raise ValueError(f"invalid Hermitian form literal: {literal!r}")
        return cls(int(match.group(1)), int(match.group(2)), HurwitzQuaternion.parse(match.group(3)))

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> HermitianForm:
        c1, c2, c3, c4 = (int(x) for x in data["h2"])
        return cls(int(data["n"]), int(data["m"]), HurwitzQuaternion((c1, c2, c3, c4)))

    def to_json(self) -> dict[str, Any]:
        return {"n": self.n, "m": self.m, "h2": list(self.h.c)}

    def __str__(self) -> str:
        return f"{self.n},{self.m},{self.h}"

    @property
    def sort_key(self) -> tuple[int, int, Coords]:
        return (self.n + self.m, self.n, self.h.c)

    @property
    def trace(self) -> int:
        return self.n + self.m

    def is_zero(self) -> bool:
        return self.n == 0 and self.m == 0 and self.h.is_zero()

    def is_psd(self) -> bool:
        return self.n >= 0 and self.m >= 0 and two_det(self) >= 0

    def scale(self, d: int) -> HermitianForm:
        return scale(self, d)


def two_det(H: HermitianForm) -> int:
    """2 (nm - N(h)), always an integer on the dual lattice."""
    return 2 * H.n * H.m - sum(x * x for x in H.h.c) // 2


def epsilon(H: HermitianForm) -> int:
    """Largest d with d^{-1} H still in Her_2 over the dual lattice."""
    g = math.gcd(H.n, H.m, *H.h.c)
    if g == 0:
        raise ValueError("epsilon is undefined for the zero form")
    for d in reversed(divisors(g)):
        if sum(x // d for x in H.h.c) % 2 == 0:
            return int(d)
    return 1


def rank(H: HermitianForm) -> int:
    if not H.is_psd():
        raise ValueError(f"form {H} is not positive semidefinite")
    if H.is_zero():
        return 0
    return 1 if two_det(H) == 0 else 2


def scale(H: HermitianForm, d: int) -> HermitianForm:
    return HermitianForm(d * H.n, d * H.m, H.h.scale(d))


def divide_exact(H: HermitianForm, d: int) -> HermitianForm:
    if d <= 0:
        raise ValueError(f"divisor must be positive, got {d}")
    if H.n % d or H.m % d:
        raise LatticeError(f"{H} / {d} has non-integral diagonal")
    h = H.h.divide_exact(d)
    if not in_dual(h):
        raise LatticeError(f"{H} / {d} leaves the dual lattice")
    return HermitianForm(H.n // d, H.m // d, h)


def is_p_multiple(H: HermitianForm, p: int) -> bool:
    """Membership of H in p Her_2 over the dual lattice."""
    try:
        divide_exact(H, p)
    except LatticeError:
        return False
    return True


@dataclass(frozen=True)
class IntegralHermitian:
    """T = [[s, t], [conj(t), u]] in Her_n(O); degree 1 keeps only s."""

    s: int
    u: int = 0
    t: HurwitzQuaternion = field(default=ZERO)
    degree: int = 2

    def __post_init__(self) -> None:
        if self.degree not in (1, 2):
            raise ValueError(f"degree must be 1 or 2, got {self.degree}")
        if not in_hurwitz(self.t):
            raise LatticeError(f"off-diagonal entry {self.t} is not in O")
        if self.degree == 1 and (self.u or not self.t.is_zero()):
            raise ValueError("degree-1 forms carry only the entry s")

    def as_matrix(self) -> tuple[tuple[HurwitzQuaternion, ...], ...]:
        s = HurwitzQuaternion.from_int(self.s)
        if self.degree == 1:
            return ((s,),)
        return ((s, self.t), (q_conj(self.t), HurwitzQuaternion.from_int(self.u)))


def tau_pair(H: HermitianForm, T: IntegralHermitian) -> int:
    """Real part of the diagonal sum of H*T: n s + m u + 2 Re(h conj(t))."""
    pairing2 = sum(x * y for x, y in zip(H.h.c, T.t.c))
    if pairing2 % 2:
        raise InvariantViolation(f"tau({H}, {T}) is not integral")
    return H.n * T.s + H.m * T.u + pairing2 // 2


@lru_cache(maxsize=256)
def _vectors(bound4: int) -> tuple[Coords, ...]:
    """Doubled coordinates c with even sum and sum(c_i^2) <= bound4, in lexicographic order."""
    out: list[Coords] = []
    r1 = math.isqrt(bound4)
    for c1 in range(-r1, r1 + 1):
        rem1 = bound4 - c1 * c1
        r2 = math.isqrt(rem1)
        for c2 in range(-r2, r2 + 1):
            rem2 = rem1 - c2 * c2
            r3 = math.isqrt(rem2)
            for c3 in range(-r3, r3 + 1):
                rem3 = rem2 - c3 * c3
                r4 = math.isqrt(rem3)
                for c4 in range(-r4, r4 + 1):
                    if (c1 + c2 + c3 + c4) % 2 == 0:
                        out.append((c1, c2, c3, c4))
    return tuple(out)


def iter_psd(trace_bound: int) -> Iterator[HermitianForm]:
    """Yield every PSD form with n + m <= trace_bound, ordered by (n + m, n, h)."""
    if trace_bound < 0:
        raise ValueError(f"trace bound must be nonnegative, got {trace_bound}")
    for tr in range(trace_bound + 1):
        for n in range(tr + 1):
            m = tr - n
            for c in _vectors(4 * n * m):
                yield HermitianForm(n, m, HurwitzQuaternion(c))


def enumerate_psd(trace_bound: int) -> list[HermitianForm]:
    forms = list(iter_psd(trace_bound))
    logger.debug("Enumerated %d PSD forms up to trace %d", len(forms), trace_bound)
    return forms


def count_psd(trace_bound: int) -> int:
    return sum(len(_vectors(4 * n * (tr - n))) for tr in range(trace_bound + 1) for n in range(tr + 1))


def enumerate_quotient(n_deg: int, p: int) -> Iterator[IntegralHermitian]:
    """Representatives of Her_n(O) / p Her_n(O): p classes for n = 1, p^6 for n = 2."""
    if n_deg == 1:
        for s in range(p):
            yield IntegralHermitian(s, degree=1)
        return
    if n_deg != 2:
        raise ValueError(f"degree must be 1 or 2, got {n_deg}")
    residues = [from_basis(*coords) for coords in product(range(p), repeat=4)]
    for s in range(p):
        for u in range(p):
            for t in residues:
                yield IntegralHermitian(s, u, t)


def quotient_size(n_deg: int, p: int) -> int:
    """c = p^{n + 2n(n-1)}."""
    return p ** (n_deg + 2 * n_deg * (n_deg - 1))


ZERO_FORM = HermitianForm(0, 0)
H0 = HermitianForm(1, 1, HurwitzQuaternion((1, 1, 0, 0)))
