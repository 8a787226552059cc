"""Truncated q-expansions indexed by PSD Hermitian forms, and the U(p) operator."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Union

from quat_eisenstein.errors import TruncationError
from quat_eisenstein.hermitian import HermitianForm, count_psd, iter_psd

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
CoefficientSource = Callable[[HermitianForm], Fraction]


class QExpansion:
    """Map from every PSD form with n + m <= trace_bound to an exact rational.

    Coefficients are produced by ``source`` on first access and memoised, so the
    expansion is complete but only pays for the keys actually read. Access outside
    the bound raises ``TruncationError``; there is no implicit zero padding.
    """

    def __init__(self, trace_bound: int, source: CoefficientSource, label: str = "") -> None:
        if trace_bound < 0:
            raise ValueError(f"trace bound must be nonnegative, got {trace_bound}")
        self.trace_bound = trace_bound
        self.label = label
        self._source = source
        self._cache: dict[HermitianForm, Fraction] = {}

    @classmethod
    def from_mapping(
        cls, coeffs: Mapping[HermitianForm, Scalar], trace_bound: int, label: str = ""
    ) -> QExpansion:
        """Wrap a fully materialised map; its key set must be exactly the PSD forms up to the bound."""
        expected = set(iter_psd(trace_bound))
        keys = set(coeffs)
        if keys != expected:
            missing = len(expected - keys)
            extra = len(keys - expected)
            raise ValueError(
                f"key set does not match trace bound {trace_bound}: {missing} missing, {extra} extra"
            )
        frozen = {H: Fraction(v) for H, v in coeffs.items()}
        return cls(trace_bound, frozen.__getitem__, label)

    def __repr__(self) -> str:
        return f"QExpansion(label={self.label!r}, trace_bound={self.trace_bound})"

    def __len__(self) -> int:
        return count_psd(self.trace_bound)

    def __contains__(self, H: object) -> bool:
        return isinstance(H, HermitianForm) and H.trace <= self.trace_bound and H.is_psd()

    def __getitem__(self, H: HermitianForm) -> Fraction:
        if H not in self:
            raise TruncationError(f"{H} is outside {self!r}")
        value = self._cache.get(H)
        if value is None:
            value = Fraction(self._source(H))
            self._cache[H] = value
        return value

    def keys(self) -> Iterator[HermitianForm]:
        return iter_psd(self.trace_bound)

    def items(self) -> Iterator[tuple[HermitianForm, Fraction]]:
        for H in self.keys():
            yield H, self[H]

    def materialize(self) -> dict[HermitianForm, Fraction]:
        return dict(self.items())

    def truncate(self, trace_bound: int) -> QExpansion:
        if trace_bound > self.trace_bound:
            raise TruncationError(
                f"cannot extend {self!r} to trace bound {trace_bound}"
            )
        return QExpansion(trace_bound, self.__getitem__, self.label)

    def _require_same_bound(self, other: QExpansion) -> None:
        if self.trace_bound != other.trace_bound:
            raise TruncationError(
                f"trace bounds differ: {self.trace_bound} vs {other.trace_bound}"
            )

    def __add__(self, other: QExpansion) -> QExpansion:
        self._require_same_bound(other)
        return QExpansion(
            self.trace_bound, lambda H: self[H] + other[H], f"({self.label} + {other.label})"
        )

    def __sub__(self, other: QExpansion) -> QExpansion:
        self._require_same_bound(other)
        return QExpansion(
            self.trace_bound, lambda H: self[H] - other[H], f"({self.label} - {other.label})"
        )

    def __mul__(self, scalar: Scalar) -> QExpansion:
        c = Fraction(scalar)
        return QExpansion(self.trace_bound, lambda H: c * self[H], f"{c}*{self.label}")

    __rmul__ = __mul__

    def __neg__(self) -> QExpansion:
        return self * -1

    def mismatches(self, other: QExpansion) -> list[HermitianForm]:
        """Keys on which two expansions of equal bound disagree, in canonical order."""
        self._require_same_bound(other)
        return [H for H in self.keys() if self[H] != other[H]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QExpansion):
            return NotImplemented
        if self.trace_bound != other.trace_bound:
            return False
        return not self.mismatches(other)

    __hash__ = None  # type: ignore[assignment]


def u_p(F: QExpansion, p: int) -> QExpansion:
    """F | U(p): the coefficient at H is the coefficient of F at pH."""
    if F.trace_bound < p:
        raise TruncationError(
            f"U({p}) needs trace bound >= {p}, got {F.trace_bound}"
        )
    logger.debug("Applying U(%d) to %r", p, F)
    return QExpansion(F.trace_bound // p, lambda H: F[H.scale(p)], f"{F.label}|U({p})")
