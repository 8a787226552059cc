"""Tests for the verify module."""

import io

import pytest
from rich.console import Console

from quat_eisenstein.config import SuiteConfig, VerifySuite
from quat_eisenstein.models import CheckReport
from quat_eisenstein.verify import KUMMER_KNOWN_VALUES, SuiteRunner


def make_config() -> SuiteConfig:
    """Small grids that keep every suite fast."""
    config = SuiteConfig()
    config.bernoulli.max_index = 40
    config.divisor.n_max = 50
    config.divisor.m_max = 3
    config.divisor.f_max_power = 2
    config.kummer.kmax = 60
    config.lemma2.degree1_primes = [3, 5]
    config.lemma2.trace_bound = 1
    config.coset.samples = 10
    config.coset.word_length = 6
    config.gstar.weights = [4]
    config.gstar.primes = [3]
    config.padic.samples = 5
    config.padic.precision = 8
    config.padic.leopoldt_depth = 3
    config.limit.trace_bound = 1
    config.limit.m_max = 3
    config.tilde.m_max = 3
    return config


def make_runner() -> SuiteRunner:
    return SuiteRunner(make_config(), show_progress=False)


def by_check(reports: list[CheckReport], name: str) -> list[CheckReport]:
    return [r for r in reports if r.check == name]


class TestSuites:
    def test_every_suite_passes(self) -> None:
        runner = make_runner()
        for suite in VerifySuite:
            reports = runner.run(suite)
            assert reports, suite
            failing = [(r.check, r.params, r.notes) for r in reports if not r.passed]
            assert failing == [], suite
        assert runner.stats.checks_failed == 0
        assert runner.stats.total_failures == 0
        assert runner.stats.checks_run >= len(VerifySuite)

    def test_bernoulli_counts(self) -> None:
        reports = make_runner().run(VerifySuite.BERNOULLI)
        assert [r.check for r in reports] == ["von_staudt", "bernoulli_recurrence", "bernoulli_residue"]
        assert reports[0].cases == 20
        assert reports[1].cases == 40
        assert reports[2].cases == 8

    def test_kummer_branches(self) -> None:
        reports = make_runner().run(VerifySuite.KUMMER)
        p3 = [r for r in reports if r.params.get("p") == 3]
        # every even weight is on the trivial branch when p = 3
        assert by_check(p3, "kummer")[0].cases == 0
        trivial = by_check(p3, "kummer_trivial_branch")[0]
        assert trivial.cases > 0
        assert trivial.notes
        assert trivial.passed
        assert by_check(reports, "kummer_known_value")[0].passed

    def test_kummer_oracle(self) -> None:
        assert KUMMER_KNOWN_VALUES[(3, 4, 58)] == 2
        known = by_check(make_runner().run(VerifySuite.KUMMER), "kummer_known_value")[0]
        assert known.cases == len(KUMMER_KNOWN_VALUES)
        assert known.passed

    def test_kummer_oracle_mismatch_fails(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setitem(KUMMER_KNOWN_VALUES, (3, 4, 58), 1)
        known = by_check(make_runner().run(VerifySuite.KUMMER), "kummer_known_value")[0]
        assert not known.passed
        assert any("(4, 58)" in note for note in known.notes)

    def test_lemma2_grid(self) -> None:
        reports = make_runner().run(VerifySuite.LEMMA2)
        degree1 = [r for r in reports if r.params["n"] == 1]
        assert [r.cases for r in degree1] == [19, 51]
        degree2 = [r for r in reports if r.params["n"] == 2][0]
        # three forms of trace <= 1, plus the two nonzero multiples
        assert degree2.cases == 5

    def test_coset_samples(self) -> None:
        reports = make_runner().run(VerifySuite.COSET)
        assert len(reports) == 4
        assert all(r.cases == 10 for r in reports)

    def test_gstar_cases(self) -> None:
        (report,) = make_runner().run(VerifySuite.GSTAR)
        assert report.params == {"k": 4, "p": 3, "B": 1}
        assert report.cases == 3

    def test_tilde_reports(self) -> None:
        reports = make_runner().run(VerifySuite.TILDE)
        assert [r.check for r in reports] == ["tilde", "tilde_residual", "tilde_rank_deficient"]
        assert len(reports[0].notes) == 3

    def test_deterministic_records(self) -> None:
        first = [r.record() for r in make_runner().run(VerifySuite.COSET)]
        second = [r.record() for r in make_runner().run(VerifySuite.COSET)]
        assert first == second


class TestStats:
    def test_stats_accumulate(self) -> None:
        runner = make_runner()
        reports = runner.run(VerifySuite.GSTAR)
        assert runner.stats.checks_run == len(reports)
        assert runner.stats.total_cases == sum(r.cases for r in reports)
        assert runner.stats.duration_seconds >= 0.0

    def test_failure_is_counted(self) -> None:
        runner = make_runner()
        report = CheckReport(check="demo", cases=2)
        report.fail("broken")
        runner.stats.add(report)
        assert runner.stats.checks_failed == 1
        assert not report.passed
        assert report.record() == {"check": "demo", "cases": 2, "failures": 1}

    def test_summary_renders(self) -> None:
        buffer = io.StringIO()
        runner = SuiteRunner(make_config(), console=Console(file=buffer, width=120), show_progress=False)
        reports = runner.run(VerifySuite.GSTAR)
        runner.print_summary(reports)
        output = buffer.getvalue()
        assert "Verification Summary" in output
        assert "gstar" in output
