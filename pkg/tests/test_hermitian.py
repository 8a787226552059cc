"""Tests for the hermitian module."""

import pytest

from quat_eisenstein.errors import LatticeError
from quat_eisenstein.hermitian import (
    H0,
    ZERO_FORM,
    HermitianForm,
    IntegralHermitian,
    count_psd,
    divide_exact,
    enumerate_psd,
    enumerate_quotient,
    epsilon,
    is_p_multiple,
    iter_psd,
    quotient_size,
    rank,
    scale,
    tau_pair,
    two_det,
)
from quat_eisenstein.quaternion import HurwitzQuaternion, from_basis


def make_form(n: int, m: int, *h2: int) -> HermitianForm:
    c = tuple(h2) if h2 else (0, 0, 0, 0)
    return HermitianForm(n, m, HurwitzQuaternion(c))  # type: ignore[arg-type]


class TestInvariants:
    def test_h0(self) -> None:
        assert two_det(H0) == 1
        assert epsilon(H0) == 1
        assert rank(H0) == 2

    def test_epsilon(self) -> None:
        assert epsilon(make_form(1, 0)) == 1
        assert epsilon(make_form(3, 0)) == 3
        assert epsilon(make_form(2, 2, 2, 2, 0, 0)) == 2
        # (1, 1, 0, 0) halved leaves the lattice, so 2 cannot be divided out
        assert epsilon(make_form(2, 2, 1, 1, 0, 0)) == 1
        assert epsilon(make_form(6, 0)) == 6

    def test_epsilon_of_zero_form(self) -> None:
        with pytest.raises(ValueError, match="zero form"):
            epsilon(ZERO_FORM)

    def test_rank(self) -> None:
        assert rank(ZERO_FORM) == 0
        assert rank(make_form(1, 0)) == 1
        assert rank(make_form(1, 1, 2, 0, 0, 0)) == 1
        assert rank(make_form(1, 1)) == 2

    def test_rank_rejects_indefinite(self) -> None:
        with pytest.raises(ValueError, match="positive semidefinite"):
            rank(make_form(1, 1, 2, 2, 0, 0))

    def test_off_diagonal_must_be_in_dual(self) -> None:
        with pytest.raises(LatticeError, match="dual"):
            make_form(1, 1, 1, 0, 0, 0)


class TestScaling:
    def test_p_multiples(self) -> None:
        assert is_p_multiple(H0.scale(3), 3)
        assert not is_p_multiple(H0, 3)
        assert is_p_multiple(ZERO_FORM, 5)
        assert is_p_multiple(make_form(3, 6, 6, 0, 0, 0), 3)
        assert not is_p_multiple(make_form(3, 3, 2, 0, 0, 0), 3)

    def test_divide_exact(self) -> None:
        assert divide_exact(make_form(6, 3, 3, 3, 0, 0), 3) == make_form(2, 1, 1, 1, 0, 0)
        with pytest.raises(LatticeError, match="non-integral"):
            divide_exact(make_form(3, 1), 3)

    def test_scaling_laws(self) -> None:
        primitive = [H for H in enumerate_psd(3) if not H.is_zero() and epsilon(H) == 1]
        assert primitive
        for H in primitive:
            for d in range(1, 7):
                dH = scale(H, d)
                assert epsilon(dH) == d
                assert divide_exact(dH, d) == H
                assert rank(dH) == rank(H)
                assert two_det(dH) == d * d * two_det(H)


class TestEnumeration:
    def test_small_counts(self) -> None:
        assert len(enumerate_psd(0)) == 1
        assert len(enumerate_psd(1)) == 3
        assert len(enumerate_psd(2)) == 54
        assert count_psd(2) == 54

    def test_canonical_order(self) -> None:
        forms = enumerate_psd(1)
        assert forms == [ZERO_FORM, make_form(0, 1), make_form(1, 0)]
        keys = [H.sort_key for H in enumerate_psd(3)]
        assert keys == sorted(keys)

    def test_generator_twin(self) -> None:
        assert list(iter_psd(2)) == enumerate_psd(2)

    def test_every_form_is_psd(self) -> None:
        for H in enumerate_psd(3):
            assert H.is_psd()
            assert H.trace <= 3

    def test_negative_bound(self) -> None:
        with pytest.raises(ValueError, match="nonnegative"):
            enumerate_psd(-1)


class TestLiterals:
    def test_parse(self) -> None:
        assert HermitianForm.parse("1,1,[1,1,0,0]") == H0
        assert str(H0) == "1,1,[1,1,0,0]"
        with pytest.raises(ValueError, match="invalid Hermitian form literal"):
            HermitianForm.parse("1;1;[0,0,0,0]")

    def test_json(self) -> None:
        assert H0.to_json() == {"n": 1, "m": 1, "h2": [1, 1, 0, 0]}
        assert HermitianForm.from_json(H0.to_json()) == H0


class TestQuotient:
    def test_sizes(self) -> None:
        assert quotient_size(1, 3) == 3
        assert quotient_size(2, 3) == 729
        assert len(list(enumerate_quotient(2, 3))) == 729
        assert len(set(enumerate_quotient(2, 3))) == 729
        assert len(list(enumerate_quotient(1, 7))) == 7

    def test_degree_three_unsupported(self) -> None:
        with pytest.raises(ValueError, match="degree"):
            list(enumerate_quotient(3, 3))

    def test_tau_pairing(self) -> None:
        T = IntegralHermitian(2, 5, from_basis(0, 1, 0, 0))
        # tau = n s + m u + 2 Re(h conj(t)); h = (e1 + e2)/2, t = e2
        assert tau_pair(H0, T) == 2 + 5 + 1

    def test_tau_pairing_is_integral_on_dual(self) -> None:
        for H in enumerate_psd(2):
            for T in list(enumerate_quotient(2, 3))[:50]:
                assert isinstance(tau_pair(H, T), int)

    def test_integral_form_validation(self) -> None:
        with pytest.raises(LatticeError, match="not in O"):
            IntegralHermitian(1, 1, HurwitzQuaternion((1, 0, 0, 0)))
        with pytest.raises(ValueError, match="only the entry s"):
            IntegralHermitian(1, 2, degree=1)
