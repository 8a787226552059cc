"""Half-integral Hamilton quaternions and the Hurwitz order.

A quaternion is stored by its doubled coordinates: ``HurwitzQuaternion((c1, c2, c3, c4))``
stands for (c1 e1 + c2 e2 + c3 e3 + c4 e4) / 2 with e1 = 1, e4 = e2 e3 = -e3 e2 and
e2^2 = e3^2 = -1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from quat_eisenstein.errors import LatticeError

Coords = tuple[int, int, int, int]

_LITERAL = re.compile(r"^\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*$")


@dataclass(frozen=True, order=True)
class HurwitzQuaternion:
    """Element of (1/2)Z^4 in doubled integer coordinates."""

    c: Coords

    def __post_init__(self) -> None:
        if len(self.c) != 4 or not all(isinstance(x, int) for x in self.c):
            raise TypeError(f"expected four integer coordinates, got {self.c!r}")

    @classmethod
    def from_int(cls, n: int) -> HurwitzQuaternion:
        return cls((2 * n, 0, 0, 0))

    @classmethod
    def parse(cls, literal: str) -> HurwitzQuaternion:
        """Parse the literal form ``"[c1,c2,c3,c4]"`` (doubled coordinates)."""
        match = _LITERAL.match(literal)
        if match is None:
            raise ValueError(f"invalid quaternion literal: {literal!r}")
        return cls(tuple(int(g) for g in match.groups()))  # type: ignore[arg-type]

    def __str__(self) -> str:
        return "[" + ",".join(str(x) for x in self.c) + "]"

    def __add__(self, other: HurwitzQuaternion) -> HurwitzQuaternion:
        return q_add(self, other)

    def __sub__(self, other: HurwitzQuaternion) -> HurwitzQuaternion:
        return q_add(self, -other)

    def __neg__(self) -> HurwitzQuaternion:
        return HurwitzQuaternion((-self.c[0], -self.c[1], -self.c[2], -self.c[3]))

    def __mul__(self, other: HurwitzQuaternion) -> HurwitzQuaternion:
        return q_mul(self, other)

    def scale(self, d: int) -> HurwitzQuaternion:
        return HurwitzQuaternion((d * self.c[0], d * self.c[1], d * self.c[2], d * self.c[3]))

    def divide_exact(self, d: int) -> HurwitzQuaternion:
        """Divide by an integer, staying in (1/2)Z^4."""
        if any(x % d for x in self.c):
            raise LatticeError(f"{self} / {d} leaves the half-integral lattice")
        return HurwitzQuaternion((self.c[0] // d, self.c[1] // d, self.c[2] // d, self.c[3] // d))

    def is_zero(self) -> bool:
        return not any(self.c)


def quarter_product(a: HurwitzQuaternion, b: HurwitzQuaternion) -> Coords:
    """Coordinates r of a*b = (r1 e1 + r2 e2 + r3 e3 + r4 e4) / 4."""
    a1, a2, a3, a4 = a.c
    b1, b2, b3, b4 = b.c
    return (
        a1 * b1 - a2 * b2 - a3 * b3 - a4 * b4,
        a1 * b2 + a2 * b1 + a3 * b4 - a4 * b3,
        a1 * b3 - a2 * b4 + a3 * b1 + a4 * b2,
        a1 * b4 + a2 * b3 - a3 * b2 + a4 * b1,
    )


def q_add(a: HurwitzQuaternion, b: HurwitzQuaternion) -> HurwitzQuaternion:
    return HurwitzQuaternion((a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2], a.c[3] + b.c[3]))


def q_mul(a: HurwitzQuaternion, b: HurwitzQuaternion) -> HurwitzQuaternion:
    """Product a*b; raises ``LatticeError`` if it leaves (1/2)Z^4."""
    r = quarter_product(a, b)
    if any(x % 2 for x in r):
        raise LatticeError(f"product {a} * {b} leaves the half-integral lattice")
    return HurwitzQuaternion((r[0] // 2, r[1] // 2, r[2] // 2, r[3] // 2))


def q_conj(a: HurwitzQuaternion) -> HurwitzQuaternion:
    return HurwitzQuaternion((a.c[0], -a.c[1], -a.c[2], -a.c[3]))


def q_norm2(a: HurwitzQuaternion) -> Fraction:
    """Reduced norm N(a) = a * conj(a)."""
    return Fraction(sum(x * x for x in a.c), 4)


def trace_pairing(a: HurwitzQuaternion, b: HurwitzQuaternion) -> Fraction:
    """2 Re(a * conj(b))."""
    return Fraction(sum(x * y for x, y in zip(a.c, b.c)), 2)


def in_hurwitz(a: HurwitzQuaternion) -> bool:
    """Membership in O: doubled coordinates all even or all odd."""
    parity = a.c[0] % 2
    return all(x % 2 == parity for x in a.c)


def in_dual(a: HurwitzQuaternion) -> bool:
    """Membership in the trace dual of O: doubled coordinates have even sum."""
    return sum(a.c) % 2 == 0


def q_mod(a: HurwitzQuaternion, p: int) -> Coords:
    """Coordinates of ``a`` in the basis {e1, e2, e3, omega}, reduced mod p."""
    if not in_hurwitz(a):
        raise LatticeError(f"{a} is not in the Hurwitz order")
    c1, c2, c3, c4 = a.c
    return ((c1 - c4) // 2 % p, (c2 - c4) // 2 % p, (c3 - c4) // 2 % p, c4 % p)


def from_basis(x: int, y: int, z: int, w: int) -> HurwitzQuaternion:
    """x e1 + y e2 + z e3 + w omega."""
    return HurwitzQuaternion((2 * x + w, 2 * y + w, 2 * z + w, w))


ZERO = HurwitzQuaternion((0, 0, 0, 0))
ONE = HurwitzQuaternion((2, 0, 0, 0))
E2 = HurwitzQuaternion((0, 2, 0, 0))
E3 = HurwitzQuaternion((0, 0, 2, 0))
E4 = HurwitzQuaternion((0, 0, 0, 2))
OMEGA = HurwitzQuaternion((1, 1, 1, 1))

ORDER_BASIS: tuple[HurwitzQuaternion, ...] = (ONE, E2, E3, OMEGA)


def _units() -> tuple[HurwitzQuaternion, ...]:
    units = []
    for i in range(4):
        for s in (2, -2):
            c = [0, 0, 0, 0]
            c[i] = s
            units.append(HurwitzQuaternion(tuple(c)))  # type: ignore[arg-type]
    units.extend(HurwitzQuaternion(signs) for signs in product((1, -1), repeat=4))  # type: ignore[arg-type]
    return tuple(units)


HURWITZ_UNITS = _units()


def dual_pairing_oracle(a: HurwitzQuaternion) -> bool:
    """True iff 2 Re(a * conj(t)) is an integer for every t in the basis {e1, e2, e3, omega}."""
    for t in ORDER_BASIS:
        r = quarter_product(a, q_conj(t))
        # 2 Re(a * conj(t)) = r1 / 2
        if r[0] % 2:
            return False
    return True
