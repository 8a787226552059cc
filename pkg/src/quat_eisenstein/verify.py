"""Verification suites: each check sweeps a grid and counts failures."""

from __future__ import annotations

import logging
import random
from collections.abc import Iterable, Iterator
from contextlib import contextmanager
from datetime import datetime, timezone
from fractions import Fraction
from math import comb
from typing import Callable, Optional, TypeVar

from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn
from rich.table import Table

from quat_eisenstein.arith import (
    INFINITY,
    bernoulli,
    kummer_lhs,
    kummer_modulus_exponent,
    kummer_pole_valuation,
    kummer_valuation,
    prime_to_p_part,
    sigma,
    sigma_star,
    valuation,
    verify_divisor_split,
    verify_sigma_twist,
    von_staudt_denominator,
)
from quat_eisenstein.config import SuiteConfig, VerifySuite
from quat_eisenstein.eisenstein import a_coeff, build_G_star, expand_A, unimodular_coefficient
from quat_eisenstein.hecke import (
    Verdict,
    character_sum,
    coset_rep_check,
    in_gamma0,
    is_symplectic,
    random_integral_hermitian,
    replay_word,
    sample_gamma0,
)
from quat_eisenstein.hermitian import (
    H0,
    ZERO_FORM,
    HermitianForm,
    enumerate_psd,
    is_p_multiple,
    quotient_size,
)
from quat_eisenstein.limits import (
    convergence_table,
    is_strictly_increasing,
    rank_deficient_table,
    transcendental_table,
    transcendental_weight,
)
from quat_eisenstein.models import CheckReport, VerifyStats
from quat_eisenstein.padic import (
    bernoulli_residue_check,
    from_int,
    from_rational,
    leopoldt_quotient,
    padic_exp,
    padic_log,
    tilde_a_value,
    tilde_residual,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")

# frozen values of v_p(B_{(p-1)p^{m-1}} - (p-1)/p)
BERNOULLI_RESIDUE_ORACLE: dict[tuple[int, int], int] = {(3, 1): 0, (3, 2): 2, (3, 3): 3}

# frozen v_p(kummer_lhs(k) - kummer_lhs(k2)), keyed by (p, k, k2)
KUMMER_KNOWN_VALUES: dict[tuple[int, int, int], int] = {
    (5, 6, 10): 1,
    (3, 2, 4): -1,
    (3, 2, 6): -2,
    (3, 2, 8): 0,
    (3, 4, 58): 2,
    (5, 4, 8): -1,
}


class SuiteRunner:
    """Run verification suites and collect ``CheckReport``s."""

    def __init__(
        self,
        config: SuiteConfig,
        console: Optional[Console] = None,
        show_progress: bool = True,
    ) -> None:
        self.config = config
        self.console = console or Console(stderr=True)
        self.show_progress = show_progress
        self.stats = VerifyStats()

    # plumbing

    @contextmanager
    def _progress(self) -> Iterator[Optional[Progress]]:
        if not self.show_progress:
            yield None
            return
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TextColumn("{task.completed}/{task.total}"),
            TimeElapsedColumn(),
            console=self.console,
            transient=True,
        ) as progress:
            yield progress

    def _track(self, items: list[T], description: str) -> Iterable[T]:
        with self._progress() as progress:
            if progress is None:
                yield from items
                return
            task = progress.add_task(description, total=len(items))
            for item in items:
                yield item
                progress.update(task, advance=1)

    def run(self, suite: VerifySuite) -> list[CheckReport]:
        handlers: dict[VerifySuite, Callable[[], list[CheckReport]]] = {
            VerifySuite.BERNOULLI: self.bernoulli,
            VerifySuite.DIVISOR: self.divisor,
            VerifySuite.KUMMER: self.kummer,
            VerifySuite.LEMMA2: self.lemma2,
            VerifySuite.COSET: self.coset,
            VerifySuite.GSTAR: self.gstar,
            VerifySuite.LEOPOLDT: self.leopoldt,
            VerifySuite.PADIC: self.padic,
            VerifySuite.LIMIT: self.limit,
            VerifySuite.TILDE: self.tilde,
        }
        self.stats.started_at = self.stats.started_at or datetime.now(timezone.utc)
        logger.info("Running verify suite %s", suite.value)
        reports = handlers[suite]()
        for report in reports:
            self.stats.add(report)
            if report.passed:
                logger.info("%s %s: %d cases passed", report.check, report.params, report.cases)
            else:
                logger.error(
                    "%s %s: %d of %d cases failed",
                    report.check,
                    report.params,
                    report.failures,
                    report.cases,
                )
        self.stats.finished_at = datetime.now(timezone.utc)
        return reports

    def print_summary(self, reports: list[CheckReport]) -> None:
        table = Table(title="Verification Summary", show_header=True, header_style="bold magenta")
        table.add_column("Check", style="cyan")
        table.add_column("Parameters")
        table.add_column("Cases", justify="right")
        table.add_column("Failures", justify="right")
        for report in reports:
            style = "green" if report.passed else "red"
            params = ", ".join(f"{k}={v}" for k, v in report.params.items())
            failures = f"[{style}]{report.failures}[/{style}]"
            table.add_row(report.check, params, str(report.cases), failures)
        table.caption = f"{self.stats.checks_run} checks in {self.stats.duration_seconds:.1f}s"
        self.console.print(table)

    # exact-arith suites

    def bernoulli(self) -> list[CheckReport]:
        cfg = self.config.bernoulli
        staudt = CheckReport(check="von_staudt", params={"max_index": cfg.max_index})
        recurrence = CheckReport(check="bernoulli_recurrence", params={"max_index": cfg.max_index})
        for m in self._track(list(range(1, cfg.max_index + 1)), "Bernoulli numbers"):
            recurrence.cases += 1
            if sum(comb(m + 1, j) * bernoulli(j) for j in range(m + 1)) != 0:
                recurrence.fail(f"recurrence fails at m={m}")
            if m % 2 == 0:
                staudt.cases += 1
                if bernoulli(m).denominator != von_staudt_denominator(m):
                    staudt.fail(f"denominator of B_{m}")

        residue = CheckReport(check="bernoulli_residue", params={"primes": [3, 5], "m_max": 4})
        for p in (3, 5):
            for m in range(1, 5):
                residue.cases += 1
                v = bernoulli_residue_check(p, m)
                expected = BERNOULLI_RESIDUE_ORACLE.get((p, m))
                if v < m - 1 or (expected is not None and v != expected):
                    residue.fail(f"p={p} m={m}: valuation {v}")
        return [staudt, recurrence, residue]

    def divisor(self) -> list[CheckReport]:
        cfg = self.config.divisor
        reports = []
        for p in cfg.primes:
            split = CheckReport(
                check="divisor_split", params={"p": p, "n_max": cfg.n_max, "powers": cfg.f_max_power}
            )
            twist = CheckReport(
                check="sigma_twist", params={"p": p, "n_max": cfg.n_max, "m_max": cfg.m_max}
            )
            closed = CheckReport(check="sigma_star_closed_form", params={"p": p, "n_max": cfg.n_max})
            for N in self._track(list(range(1, cfg.n_max + 1)), f"Divisor identities p={p}"):
                for j in range(cfg.f_max_power + 1):
                    split.cases += 1
                    if not verify_divisor_split(lambda d, j=j: d**j, N, p):  # type: ignore[misc]
                        split.fail(f"N={N} j={j}")
                for m in range(cfg.m_max + 1):
                    twist.cases += 1
                    if not verify_sigma_twist(m, N, p):
                        twist.fail(f"N={N} m={m}")
                    closed.cases += 1
                    if sigma_star(m, N, p) != sigma(m, prime_to_p_part(N, p)):
                        closed.fail(f"N={N} m={m}")
            reports.extend([split, twist, closed])
        return reports

    def kummer(self) -> list[CheckReport]:
        """Kummer congruences between weights k < k2 <= kmax with (p - 1) | (k2 - k).

        The bound v >= e - 1 (e = exponent of the modulus) is asserted where (p - 1)
        does not divide k. Otherwise the valuation must equal ``kummer_pole_valuation``,
        and the attained minima per e are reported as notes.
        """
        cfg = self.config.kummer
        reports = []
        for p in cfg.primes:
            weights = list(range(2, cfg.kmax + 1, 2))
            values = {k: kummer_lhs(k, p) for k in weights}
            classical = CheckReport(check="kummer", params={"p": p, "kmax": cfg.kmax})
            trivial = CheckReport(check="kummer_trivial_branch", params={"p": p, "kmax": cfg.kmax})
            minima: dict[int, int | float] = {}
            for k in self._track(weights, f"Kummer p={p}"):
                for k2 in range(k + (p - 1), cfg.kmax + 1, p - 1):
                    e = kummer_modulus_exponent(k, k2, p)
                    v = valuation(values[k] - values[k2], p)
                    if k % (p - 1):
                        classical.cases += 1
                        if v < e - 1:
                            classical.fail(f"k={k} k2={k2}: v={v} < {e - 1}")
                    else:
                        trivial.cases += 1
                        minima[e] = min(minima.get(e, INFINITY), v)
                        expected = kummer_pole_valuation(k, k2, p)
                        if v != expected:
                            trivial.fail(f"k={k} k2={k2}: v={v}, expected {expected}")
            trivial.notes.extend(f"e={e}: min v={v}" for e, v in sorted(minima.items()))
            reports.extend([classical, trivial])
        known = CheckReport(check="kummer_known_value", params={"pairs": len(KUMMER_KNOWN_VALUES)})
        for (p, k, k2), expected in KUMMER_KNOWN_VALUES.items():
            known.cases += 1
            if kummer_valuation(k, k2, p) != expected:
                known.fail(f"v_{p} of the ({k}, {k2}) difference is not {expected}")
        reports.append(known)
        return reports

    # hecke suites

    def lemma2(self) -> list[CheckReport]:
        cfg = self.config.lemma2
        reports = []
        for p in cfg.degree1_primes:
            report = CheckReport(check="lemma2", params={"n": 1, "p": p})
            for H in range(2 * p * p + 1):
                report.cases += 1
                result = character_sum(H, p, 1)
                expected = Verdict.FULL_MASS if H % p == 0 else Verdict.ZERO
                if result.verdict is not expected or result.total != quotient_size(1, p):
                    report.fail(f"H={H}: {result.verdict.value}")
            reports.append(report)
        for p in cfg.degree2_primes:
            report = CheckReport(check="lemma2", params={"n": 2, "p": p})
            base = enumerate_psd(cfg.trace_bound)
            forms = base + [H.scale(p) for H in base if not H.is_zero()]
            for H in self._track(forms, f"Character sums p={p}"):
                report.cases += 1
                result = character_sum(H, p, 2)
                expected = Verdict.FULL_MASS if is_p_multiple(H, p) else Verdict.ZERO
                if result.verdict is not expected or result.total != quotient_size(2, p):
                    report.fail(f"H={H}: {result.verdict.value}")
            reports.append(report)
        return reports

    def coset(self) -> list[CheckReport]:
        cfg = self.config.coset
        reports = []
        for n in cfg.degrees:
            for p in cfg.primes:
                report = CheckReport(
                    check="coset",
                    params={"n": n, "p": p, "word_length": cfg.word_length, "seed": cfg.seed},
                )
                rng = random.Random(f"{cfg.seed}:{n}:{p}")
                for i in self._track(list(range(cfg.samples)), f"Coset representatives n={n} p={p}"):
                    report.cases += 1
                    sample = sample_gamma0(n, p, seed=rng.randrange(2**32), word_length=cfg.word_length)
                    M = sample.matrix
                    if not (is_symplectic(M) and in_gamma0(M, p) and M.in_order()):
                        report.fail(f"sample {i} not in Gamma_0({p}): {sample.word}")
                        continue
                    if replay_word(sample.word, n, p) != M:
                        report.fail(f"sample {i} does not replay")
                        continue
                    T = random_integral_hermitian(rng, n)
                    if not coset_rep_check(M, T, p):
                        report.fail(f"sample {i}: {sample.word} T={T}")
                reports.append(report)
        return reports

    # eisenstein suites

    def gstar(self) -> list[CheckReport]:
        cfg = self.config.gstar
        reports = []
        grid = [(k, p) for k in cfg.weights for p in cfg.primes]
        for k, p in self._track(grid, "G* dual path"):
            report = CheckReport(check="gstar", params={"k": k, "p": p, "B": cfg.trace_bound})
            via_operator = build_G_star(k, p, cfg.trace_bound)
            closed_form = expand_A(k, p, cfg.trace_bound)
            for H in closed_form.keys():
                report.cases += 1
                if via_operator[H] != closed_form[H]:
                    report.fail(f"H={H}: {via_operator[H]} != {closed_form[H]}")
            reports.append(report)
        return reports

    def limit(self) -> list[CheckReport]:
        cfg = self.config.limit
        report = CheckReport(
            check="limit", params={"k": cfg.k, "p": cfg.p, "B": cfg.trace_bound, "m_max": cfg.m_max}
        )
        for H in self._track(enumerate_psd(cfg.trace_bound), "Convergence tables"):
            report.cases += 1
            rows = convergence_table(cfg.k, cfg.p, H, cfg.m_max)
            if not is_strictly_increasing([row.valuation for row in rows]):
                report.fail(f"H={H}: {[row.valuation for row in rows]}")
            if H.is_zero() and (cfg.k, cfg.p) == (4, 3) and rows[0].valuation != -2:
                report.fail(f"constant term m=1 valuation {rows[0].valuation}")
        return [report]

    def tilde(self) -> list[CheckReport]:
        cfg = self.config.tilde
        p, N = cfg.p, cfg.precision
        report = CheckReport(check="tilde", params={"p": p, "m_max": cfg.m_max, "N": N})
        rows = transcendental_table(p, H0, cfg.m_max, N)
        for row in rows:
            report.cases += 1
            if Fraction(row.coefficient) != unimodular_coefficient(row.weight):
                report.fail(f"m={row.m}: coefficient disagrees with the closed form")
        report.cases += 1
        if not is_strictly_increasing([row.valuation_limit for row in rows]):
            report.fail(f"valuations {[row.valuation_limit for row in rows]}")
        report.notes.extend(f"m={row.m}: stated-value valuation {row.valuation_stated}" for row in rows)
        if p == 3 and rows:
            report.cases += 1
            if a_coeff(transcendental_weight(3, 1), H0) != 1920:
                report.fail("a_4(H0) != 1920")

        residual = CheckReport(check="tilde_residual", params={"p": p, "N": N}, cases=1)
        r = tilde_residual(p, N)
        if not r.is_zero() or r.valuation < N - 1:
            residual.fail(f"residual {r}")

        rational = CheckReport(check="tilde_rank_deficient", params={"p": p, "m_max": cfg.m_max})
        for H in (ZERO_FORM, HermitianForm(1, 0)):
            rational.cases += 1
            vals = [row.valuation for row in rank_deficient_table(p, H, cfg.m_max)]
            if not is_strictly_increasing(vals):
                rational.fail(f"H={H}: {vals}")
        return [report, residual, rational]

    # padic suites

    def leopoldt(self) -> list[CheckReport]:
        cfg = self.config.padic
        reports = []
        for p in cfg.primes:
            report = CheckReport(check="leopoldt", params={"p": p, "m_max": cfg.leopoldt_depth})
            for x in sorted({1 + p, 2 ** (p - 1)}):
                report.cases += 1
                log_x = padic_log(from_int(x, p, cfg.precision))
                w = int(valuation(x - 1, p))
                vals = [
                    int((leopoldt_quotient(x, p, m, cfg.precision) - log_x).valuation)
                    for m in range(1, cfg.leopoldt_depth + 1)
                ]
                # (x^{p^m} - 1)/p^m - log x = p^m (log x)^2 / 2 + ...
                expected = [m + 2 * w for m in range(1, cfg.leopoldt_depth + 1)]
                if vals != expected:
                    report.fail(f"x={x}: {vals}, expected {expected}")
            reports.append(report)
        known = CheckReport(check="leopoldt_known_value", params={"x": 4, "p": 3, "m": 1}, cases=1)
        if (leopoldt_quotient(4, 3, 1, 6) - padic_log(from_int(4, 3, 6))).valuation != 3:
            known.fail("v_3((4^3 - 1)/3 - log_3 4) != 3")
        reports.append(known)
        return reports

    def padic(self) -> list[CheckReport]:
        cfg = self.config.padic
        N = cfg.precision
        reports = []
        for p in cfg.primes:
            rng = random.Random(f"{cfg.seed}:{p}")
            roundtrip = CheckReport(check="exp_log_roundtrip", params={"p": p, "N": N})
            homomorphism = CheckReport(check="log_homomorphism", params={"p": p, "N": N})
            ring = CheckReport(check="from_rational_homomorphism", params={"p": p, "N": N})
            for _ in self._track(list(range(cfg.samples)), f"p-adic samples p={p}"):
                x = from_int(1 + p * rng.randrange(1, p**N), p, N)
                y = from_int(1 + p * rng.randrange(1, p**N), p, N)
                roundtrip.cases += 1
                if not (padic_exp(padic_log(x)) - x).is_zero():
                    roundtrip.fail(f"x={x}")
                homomorphism.cases += 1
                if not (padic_log(x * y) - (padic_log(x) + padic_log(y))).is_zero():
                    homomorphism.fail(f"x={x} y={y}")
                a = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
                b = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
                ring.cases += 1
                pa, pb = from_rational(a, p, N), from_rational(b, p, N)
                if not (from_rational(a * b, p, N) - pa * pb).is_zero():
                    ring.fail(f"product {a} * {b}")
                if not (from_rational(a + b, p, N) - (pa + pb)).is_zero():
                    ring.fail(f"sum {a} + {b}")
            reports.extend([roundtrip, homomorphism, ring])
        values = CheckReport(check="padic_known_values", cases=3)
        if padic_log(from_int(4, 3, 4)).residue() % 81 != 48:
            values.fail("log_3(4) != 48 mod 81")
        if tilde_a_value(3, 12).valuation != 1:
            values.fail("v_3(tilde a) != 1")
        if tilde_a_value(5, 12).valuation != 0:
            values.fail("v_5(tilde a) != 0")
        reports.append(values)
        return reports
