"""Result records shared by the limit tables, the verify suites and the CLI."""

from __future__ import annotations

from datetime import datetime
from typing import Any, Optional

from pydantic import BaseModel, Field


class CoefficientReport(BaseModel):
    """a_k(H), b_k(H) and optionally A_k(H), as exact rationals in decimal strings."""

    k: int
    H: str
    p: Optional[int] = None
    a: str
    b: str
    A: Optional[str] = None  # noqa: N815


class ConvergenceRow(BaseModel):
    """One m of the weight ladder: v_p(b_{k_m}(H) - A_k(H)); ``None`` when the difference is 0."""

    m: int
    weight: int
    difference: str
    valuation: Optional[int] = None


class RationalLimitRow(BaseModel):
    """v_p(a_{k_m}(H) - limit) for a rank-deficient H with a rational limit."""

    m: int
    weight: int
    coefficient: str
    valuation: Optional[int] = None


class TranscendentalRow(BaseModel):
    """One m of the weight-2 ladder at a rank-2 form with eps = 1 and 2 det = 1.

    A ``*_bounded`` flag means the difference vanished to working precision, so the
    reported valuation is only a lower bound.
    """

    m: int
    weight: int
    coefficient: str
    valuation_limit: int
    limit_bounded: bool = False
    valuation_stated: int
    stated_bounded: bool = False


class PadicReport(BaseModel):
    p: int
    precision: int
    value: dict[str, Any]
    text: str
    digits: str


class TildeReport(BaseModel):
    """ã to N digits with its defining residual and the convergence rows."""

    stated: PadicReport
    limit: PadicReport
    residual: str
    residual_valuation: int
    rows: list[TranscendentalRow] = Field(default_factory=list)


class CheckReport(BaseModel):
    """Outcome of one verification check."""

    check: str
    params: dict[str, Any] = Field(default_factory=dict)
    cases: int = 0
    failures: int = 0
    notes: list[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self) -> dict[str, Any]:
        """Flat JSON record: {"check": ..., <params>, "cases": ..., "failures": ...}."""
        return {"check": self.check, **self.params, "cases": self.cases, "failures": self.failures}

    def fail(self, note: str) -> None:
        self.failures += 1
        if len(self.notes) < 20:
            self.notes.append(note)


class VerifyStats(BaseModel):
    """Verify-run statistics for the human summary."""

    checks_run: int = 0
    checks_failed: int = 0
    total_cases: int = 0
    total_failures: int = 0
    started_at: Optional[datetime] = None
    finished_at: Optional[datetime] = None

    @property
    def duration_seconds(self) -> float:
        if self.started_at and self.finished_at:
            return (self.finished_at - self.started_at).total_seconds()
        return 0.0

    def add(self, report: CheckReport) -> None:
        self.checks_run += 1
        self.total_cases += report.cases
        self.total_failures += report.failures
        if not report.passed:
            self.checks_failed += 1
