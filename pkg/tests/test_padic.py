"""Tests for the padic module."""

import math
from fractions import Fraction

import pytest

from quat_eisenstein.errors import PadicDomainError
from quat_eisenstein.padic import (
    DEFAULT_PRECISION,
    PadicNumber,
    PadicSeriesBudget,
    bernoulli_residue_check,
    from_int,
    from_rational,
    legendre,
    leopoldt_quotient,
    padic_exp,
    padic_log,
    tilde_a_limit,
    tilde_a_value,
    tilde_residual,
)


def make_unit(x: int, p: int = 3, N: int = 10) -> PadicNumber:
    return from_int(x, p, N)


class TestPadicNumber:
    def test_from_rational(self) -> None:
        x = from_rational(Fraction(5, 9), 3, 6)
        assert x.valuation == -2
        assert x.precision == 6
        assert x.unit == 5
        assert x.lift() == Fraction(5, 9)

    def test_exact_zero(self) -> None:
        z = from_rational(0, 5, 4)
        assert z.is_exact_zero()
        assert str(z) == "0"
        assert z.to_json()["val"] is None

    def test_arithmetic(self) -> None:
        a, b = Fraction(7, 3), Fraction(-4, 5)
        pa, pb = from_rational(a, 3, 8), from_rational(b, 3, 8)
        assert ((pa + pb) - from_rational(a + b, 3, 8)).is_zero()
        assert ((pa * pb) - from_rational(a * b, 3, 8)).is_zero()
        assert ((pa / pb) - from_rational(a / b, 3, 8)).is_zero()
        assert (pa - pa).is_zero()

    def test_cancellation_loses_relative_precision(self) -> None:
        x = from_int(1, 3, 5)
        y = from_int(1 + 3**3, 3, 5)
        d = y - x
        assert d.valuation == 3
        assert d.absolute_precision == 5

    def test_zero_to_precision(self) -> None:
        d = from_int(10, 3, 4) - from_int(10 + 81, 3, 4)
        assert d.is_zero() and not d.is_exact_zero()
        assert d.valuation == 4
        assert str(d) == "0 mod 3^(4)"

    def test_residue_and_digits(self) -> None:
        x = from_int(48, 3, 4)
        assert x.residue() == 48
        # 48 = 3 * 16 and 16 = 1 + 2*3 + 1*9
        assert x.digits() == [1, 2, 1, 0]
        assert x.digits(2) == [1, 2]
        assert from_rational(Fraction(1, 3), 3, 2).lift() == Fraction(1, 3)
        with pytest.raises(ValueError, match="not integral"):
            from_rational(Fraction(1, 3), 3, 2).residue()

    def test_json(self) -> None:
        x = from_rational(Fraction(-7, 27), 5, 6)
        assert PadicNumber.from_json(x.to_json()) == x

    def test_mixed_primes_rejected(self) -> None:
        with pytest.raises(ValueError, match="cannot combine"):
            from_int(2, 3, 4) + from_int(2, 5, 4)

    def test_division_by_zero(self) -> None:
        with pytest.raises(ZeroDivisionError):
            from_int(2, 3, 4) / (from_int(5, 3, 2) - from_int(5, 3, 2))

    def test_precision_must_be_positive(self) -> None:
        with pytest.raises(ValueError, match="precision"):
            from_int(2, 3, 0)


class TestLogExp:
    def test_log_of_four(self) -> None:
        assert padic_log(make_unit(4, 3, 4)).residue() % 81 == 48

    def test_log_domain(self) -> None:
        with pytest.raises(PadicDomainError, match="unit"):
            padic_log(make_unit(3))
        with pytest.raises(PadicDomainError, match="1 mod p"):
            padic_log(make_unit(2))

    def test_log_of_one(self) -> None:
        assert padic_log(make_unit(1)).is_zero()

    def test_exp_log_roundtrip(self) -> None:
        for p in (3, 5, 7):
            for x in (1 + p, 1 + 2 * p, 1 + p * p, 2 ** (p - 1)):
                X = from_int(x, p, 10)
                assert (padic_exp(padic_log(X)) - X).is_zero()

    def test_log_homomorphism(self) -> None:
        x, y = make_unit(4), make_unit(7)
        assert (padic_log(x * y) - (padic_log(x) + padic_log(y))).is_zero()

    def test_exp_domain(self) -> None:
        with pytest.raises(PadicDomainError, match="v_p"):
            padic_exp(make_unit(2))
        with pytest.raises(ValueError, match="precision must be positive"):
            padic_exp(make_unit(3), precision=0)

    def test_exp_of_zero_is_one(self) -> None:
        one = padic_exp(from_rational(0, 3, 5))
        assert one.lift() == 1
        assert one.precision == DEFAULT_PRECISION
        assert padic_exp(PadicNumber.zero(5), precision=7) == from_int(1, 5, 7)
        assert padic_exp(PadicNumber.zero(3, 4)) == from_int(1, 3, 4)

    def test_exp_precision_cap(self) -> None:
        x = from_int(3, 3, 12)
        capped = padic_exp(x, precision=4)
        assert capped.absolute_precision == 4
        assert (capped - padic_exp(x)).valuation >= 4

    def test_series_budget(self) -> None:
        budget = PadicSeriesBudget.for_log(3, 1, 10)
        assert budget.cutoff >= 10
        assert legendre(10, 3) == 4
        assert PadicSeriesBudget.for_exp(3, 1, 6).guard == legendre(
            PadicSeriesBudget.for_exp(3, 1, 6).cutoff, 3
        )


class TestLeopoldt:
    def test_known_value(self) -> None:
        q = leopoldt_quotient(4, 3, 1, 8)
        assert q.lift() == 21
        assert (q - padic_log(make_unit(4, 3, 8))).valuation == 3

    def test_valuations_grow(self) -> None:
        log_x = padic_log(make_unit(4, 3, 12))
        vals = [(leopoldt_quotient(4, 3, m, 12) - log_x).valuation for m in range(1, 6)]
        assert vals == [m + 2 for m in range(1, 6)]

    def test_domain(self) -> None:
        with pytest.raises(PadicDomainError, match="1 mod 3"):
            leopoldt_quotient(2, 3, 1, 8)


class TestTildeValue:
    def test_valuations(self) -> None:
        assert tilde_a_value(3, 12).valuation == 1
        assert tilde_a_value(5, 12).valuation == 0

    def test_defining_residual(self) -> None:
        N = 12
        value = tilde_a_value(3, N)
        residual = value * padic_log(make_unit(4, 3, N)) + from_int(144, 3, N)
        assert residual.is_zero()
        assert residual.valuation >= N - 1

    def test_low_precision(self) -> None:
        for N in (1, 2):
            value = tilde_a_value(3, N)
            assert value.valuation == 1
            assert value.precision == N
            assert tilde_residual(3, N).is_zero()
        with pytest.raises(ValueError, match="precision must be positive"):
            tilde_a_value(3, 0)

    def test_wieferich_prime(self) -> None:
        # 2^1092 = 1 mod 1093^2, so the log has valuation 2
        for N in (1, 2, 4):
            value = tilde_a_value(1093, N)
            assert value.valuation == -1
            assert value.precision == N
            assert tilde_residual(1093, N).is_zero()

    def test_digit_count_matches_precision(self) -> None:
        for p, N in ((3, 12), (5, 8), (7, 1)):
            value = tilde_a_value(p, N)
            assert value.precision == N
            assert len(value.digits(N)) == N
            assert tilde_residual(p, N).valuation >= N

    def test_limit_carries_euler_factor(self) -> None:
        N = 10
        assert (tilde_a_limit(5, N) * from_int(-4, 5, N) - tilde_a_value(5, N)).is_zero()

    def test_limit_matches_first_coefficient(self) -> None:
        # a_4(H0) = 1920 agrees with the limit to first order at p = 3
        assert (from_int(1920, 3, 10) - tilde_a_limit(3, 10)).valuation >= 1


class TestBernoulliResidue:
    def test_oracle_values(self) -> None:
        assert [bernoulli_residue_check(3, m) for m in (1, 2, 3)] == [0, 2, 3]
        assert bernoulli_residue_check(5, 1) == 1

    def test_lower_bound(self) -> None:
        for m in range(1, 5):
            assert bernoulli_residue_check(3, m) >= m - 1

    def test_m_positive(self) -> None:
        with pytest.raises(ValueError, match="m must be"):
            bernoulli_residue_check(3, 0)

    def test_not_infinite(self) -> None:
        assert not math.isinf(bernoulli_residue_check(7, 1))
