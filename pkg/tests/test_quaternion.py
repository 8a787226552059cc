"""Tests for the quaternion module."""

from fractions import Fraction
from itertools import product

import pytest

from quat_eisenstein.errors import LatticeError
from quat_eisenstein.quaternion import (
    E2,
    E3,
    E4,
    HURWITZ_UNITS,
    OMEGA,
    ONE,
    ZERO,
    HurwitzQuaternion,
    dual_pairing_oracle,
    from_basis,
    in_dual,
    in_hurwitz,
    q_conj,
    q_mod,
    q_mul,
    q_norm2,
    quarter_product,
    trace_pairing,
)


def make_quaternion(*c: int) -> HurwitzQuaternion:
    return HurwitzQuaternion(c)  # type: ignore[arg-type]


# elements of O with doubled coordinates in [-3, 3]
SAMPLE_ORDER = [
    q for q in (make_quaternion(*c) for c in product(range(-3, 4), repeat=4)) if in_hurwitz(q)
]


class TestHamiltonProduct:
    def test_unit_relations(self) -> None:
        assert E2 * E2 == -ONE
        assert E3 * E3 == -ONE
        assert E2 * E3 == E4
        assert E3 * E2 == -E4
        assert E4 * E4 == -ONE

    def test_omega_cubed_is_minus_one(self) -> None:
        assert OMEGA * OMEGA * OMEGA == -ONE

    def test_product_leaving_lattice(self) -> None:
        half = make_quaternion(1, 1, 0, 0)
        # ((1 + e2)/2)^2 = e2/2 has doubled coordinates (0, 1, 0, 0)
        assert half * half == make_quaternion(0, 1, 0, 0)
        quarter = make_quaternion(0, 1, 0, 0)
        assert quarter_product(quarter, quarter) == (-1, 0, 0, 0)
        with pytest.raises(LatticeError, match="half-integral"):
            q_mul(quarter, quarter)

    def test_norm_is_multiplicative(self) -> None:
        a = make_quaternion(1, -1, 1, 1)
        b = make_quaternion(2, 4, 0, -2)
        assert q_norm2(a * b) == q_norm2(a) * q_norm2(b)
        assert q_norm2(OMEGA) == 1

    def test_conjugate_product(self) -> None:
        a = make_quaternion(3, 1, -1, 1)
        assert a * q_conj(a) == HurwitzQuaternion.from_int(int(q_norm2(a)))

    def test_conjugation_reverses_products(self) -> None:
        for a in SAMPLE_ORDER:
            for b in SAMPLE_ORDER[::7]:
                assert q_conj(a * b) == q_conj(b) * q_conj(a)

    def test_order_closed_under_products(self) -> None:
        for a in SAMPLE_ORDER:
            for b in SAMPLE_ORDER[::5]:
                assert in_hurwitz(a * b)


class TestLattices:
    def test_units(self) -> None:
        assert len(HURWITZ_UNITS) == 24
        assert len(set(HURWITZ_UNITS)) == 24
        for u in HURWITZ_UNITS:
            assert in_hurwitz(u)
            assert q_norm2(u) == 1

    def test_units_closed_under_product(self) -> None:
        units = set(HURWITZ_UNITS)
        for a in HURWITZ_UNITS[:6]:
            for b in HURWITZ_UNITS:
                assert a * b in units

    def test_membership(self) -> None:
        assert in_hurwitz(OMEGA)
        assert not in_hurwitz(make_quaternion(1, 1, 0, 0))
        assert in_dual(make_quaternion(1, 1, 0, 0))
        assert not in_dual(make_quaternion(1, 0, 0, 0))
        assert in_dual(ZERO)

    def test_dual_matches_pairing_oracle(self) -> None:
        for c in product(range(-4, 5), repeat=4):
            a = make_quaternion(*c)
            assert in_dual(a) == dual_pairing_oracle(a)

    def test_trace_pairing(self) -> None:
        assert trace_pairing(ONE, ONE) == 2
        assert trace_pairing(make_quaternion(1, 1, 0, 0), OMEGA) == 1
        assert trace_pairing(make_quaternion(1, 0, 0, 1), ONE) == Fraction(1)


class TestCoordinates:
    def test_from_basis_roundtrip_mod_p(self) -> None:
        p = 5
        for coords in [(0, 0, 0, 0), (1, 2, 3, 4), (4, 0, 1, 3)]:
            assert q_mod(from_basis(*coords), p) == coords

    def test_quotient_by_three_has_81_classes(self) -> None:
        classes = {q_mod(from_basis(*c), 3) for c in product(range(3), repeat=4)}
        assert len(classes) == 81
        # residues of a wider box of O land in the same 81 classes
        wide = {q_mod(q, 3) for q in SAMPLE_ORDER}
        assert wide == classes

    def test_q_mod_detects_multiples_of_three(self) -> None:
        for a in SAMPLE_ORDER[::3]:
            for b in SAMPLE_ORDER[::11]:
                diff = a - b
                same = all(x % 3 == 0 for x in diff.c) and in_hurwitz(diff.divide_exact(3))
                assert (q_mod(a, 3) == q_mod(b, 3)) == same

    def test_q_mod_rejects_dual_elements(self) -> None:
        with pytest.raises(LatticeError, match="Hurwitz order"):
            q_mod(make_quaternion(1, 1, 0, 0), 3)

    def test_parse_and_format(self) -> None:
        q = HurwitzQuaternion.parse(" [1, -1,0,2] ")
        assert q.c == (1, -1, 0, 2)
        assert str(q) == "[1,-1,0,2]"
        with pytest.raises(ValueError, match="invalid quaternion literal"):
            HurwitzQuaternion.parse("[1,2,3]")

    def test_divide_exact(self) -> None:
        assert make_quaternion(3, 3, 0, 6).divide_exact(3) == make_quaternion(1, 1, 0, 2)
        with pytest.raises(LatticeError):
            make_quaternion(3, 1, 0, 0).divide_exact(3)

    def test_rejects_non_integer_coordinates(self) -> None:
        with pytest.raises(TypeError, match="four integer"):
            HurwitzQuaternion((1, 2, 3))  # type: ignore[arg-type]
