"""CLI interface for quat-eisenstein."""

from __future__ import annotations

import csv
import io
import json
import logging
import sys
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Optional

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from quat_eisenstein.arith import BERNOULLI_CACHE_ENV, configure_bernoulli_cache
from quat_eisenstein.config import (
    CommandConfig,
    ExportConfig,
    OutputFormat,
    SeriesKind,
    SuiteConfig,
    VerifySuite,
)
from quat_eisenstein.eisenstein import (
    A_coeff,
    a_coeff,
    b_coeff,
    build_F,
    build_G_star,
    expand_a,
    expand_A,
    expand_b,
)
from quat_eisenstein.errors import InvariantViolation, QuatEisensteinError
from quat_eisenstein.expansion import QExpansion
from quat_eisenstein.exporter import (
    ExpansionExporter,
    coefficient_record,
    file_digest,
    load_expansion,
    meta_path,
)
from quat_eisenstein.hermitian import H0, HermitianForm
from quat_eisenstein.limits import convergence_table, transcendental_table
from quat_eisenstein.models import CoefficientReport, PadicReport, TildeReport
from quat_eisenstein.padic import PadicNumber, tilde_a_limit, tilde_a_value, tilde_residual
from quat_eisenstein.verify import SuiteRunner

console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger(__name__)


def setup_logging(level: str) -> None:
    """Configure rich logging on stderr."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, rich_tracebacks=True, show_path=False)],
    )


@contextmanager
def handle_errors() -> Iterator[None]:
    """Exit 1 on a falsified invariant, 2 on a bad invocation or domain error."""
    try:
        yield
    except InvariantViolation as exc:
        err_console.print(f"[red]Invariant violated: {exc}[/red]")
        sys.exit(1)
    except (QuatEisensteinError, ValueError, ZeroDivisionError) as exc:
        err_console.print(f"[red]Error: {exc}[/red]")
        sys.exit(2)


def _format_option(default: OutputFormat) -> Any:
    return click.option(
        "--format", "-f",
        "output_format",
        type=click.Choice([f.value for f in OutputFormat], case_sensitive=False),
        default=default.value,
        show_default=True,
        help="Output format",
    )


def emit_rows(rows: Sequence[dict[str, Any]], output_format: OutputFormat, title: str) -> None:
    """Print flat records as JSON Lines, CSV or a rich table."""
    if output_format is OutputFormat.JSON:
        for row in rows:
            click.echo(json.dumps(row))
    elif output_format is OutputFormat.CSV:
        if not rows:
            return
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        click.echo(buffer.getvalue(), nl=False)
    else:
        table = Table(title=title, show_header=True, header_style="bold magenta")
        if rows:
            for name in rows[0]:
                table.add_column(name, justify="right" if name != "H" else "left")
            for row in rows:
                table.add_row(*("" if v is None else str(v) for v in row.values()))
        console.print(table)


def _padic_report(x: PadicNumber, N: int) -> PadicReport:
    return PadicReport(
        p=x.p,
        precision=N,
        value=x.to_json(),
        text=str(x),
        digits=",".join(str(d) for d in x.digits(N)),
    )


@click.group()
@click.version_option(package_name="quat-eisenstein")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
    help="Logging level [default: WARNING, or log_level from the verify config]",
)
@click.option(
    "--bernoulli-cache",
    type=click.Path(file_okay=False),
    envvar=BERNOULLI_CACHE_ENV,
    default=None,
    help="Directory for the persisted Bernoulli table",
)
@click.pass_context
def main(ctx: click.Context, log_level: Optional[str], bernoulli_cache: Optional[str]) -> None:
    """Exact Fourier coefficients and p-adic limits of quaternionic Eisenstein series of degree 2."""
    ctx.ensure_object(dict)["log_level"] = log_level
    setup_logging(log_level or "WARNING")
    if bernoulli_cache:
        configure_bernoulli_cache(bernoulli_cache)


@main.command()
@click.option("-k", "k", type=int, required=True, help="Even weight >= 4")
@click.option("-H", "H", type=str, required=True, help='Form literal "n,m,[c1,c2,c3,c4]"')
@click.option("-p", "p", type=int, default=None, help="Odd prime; also prints A_k(H)")
@_format_option(OutputFormat.HUMAN)
def coeff(k: int, H: str, p: Optional[int], output_format: str) -> None:  # noqa: N803
    """Print a_k(H), b_k(H) and, with -p, A_k(H).

        quat-eisenstein coeff -k 8 -H "1,1,[1,1,0,0]"
    """
    with handle_errors():
        cfg = CommandConfig(subcommand="coeff", k=k, p=p, H=H, format=output_format)
        form = HermitianForm.parse(H)
        report = CoefficientReport(
            k=k,
            H=str(form),
            p=cfg.p,
            a=str(a_coeff(k, form)),
            b=str(b_coeff(k, form)),
            A=None if cfg.p is None else str(A_coeff(k, cfg.p, form)),
        )
        emit_rows([report.model_dump(exclude_none=True)], cfg.format, f"Coefficients of weight {k}")


def _select_series(
    series: SeriesKind, k: int, p: Optional[int], trace_bound: int, via_operator: bool
) -> QExpansion:
    if series is SeriesKind.EISENSTEIN:
        return expand_a(k, trace_bound)
    if series is SeriesKind.G:
        return expand_b(k, trace_bound)
    if p is None:
        raise ValueError(f"series {series.value} needs a prime -p")
    if series is SeriesKind.F:
        return build_F(k, p, trace_bound)
    if via_operator:
        return build_G_star(k, p, trace_bound)
    return expand_A(k, p, trace_bound)


@main.command()
@click.option("-k", "k", type=int, required=True, help="Even weight >= 4")
@click.option("-p", "p", type=int, default=None, help="Odd prime (series f and gstar)")
@click.option(
    "--series",
    type=click.Choice([s.value for s in SeriesKind], case_sensitive=False),
    default=SeriesKind.G.value,
    show_default=True,
    help="eisenstein: a_k, g: b_k, f: F_k, gstar: A_k",
)
@click.option(
    "--trace-bound", "-B", type=int, default=1, show_default=True, help="Keys with n + m <= B"
)
@click.option(
    "--out", "-o", type=click.Path(dir_okay=False), default=None, help="Output file (stdout if omitted)"
)
@click.option("--via-operator", is_flag=True, help="Build G*_k through U(p) instead of A_k")
@click.option("--compress", is_flag=True, default=False, help="Gzip the output file")
def expand(
    k: int,
    p: Optional[int],
    series: str,
    trace_bound: int,
    out: Optional[str],
    via_operator: bool,
    compress: bool,
) -> None:
    """Write a q-expansion as JSON Lines in canonical key order.

        quat-eisenstein expand -k 4 -p 3 --series gstar -B 1 -o gstar4.jsonl
    """
    with handle_errors():
        CommandConfig(subcommand="expand", k=k, p=p, trace_bound=trace_bound)
        kind = SeriesKind(series)
        expansion = _select_series(kind, k, p, trace_bound, via_operator)
        if out is None:
            for H, value in expansion.items():
                click.echo(json.dumps(coefficient_record(H, value)))
            return
        exporter = ExpansionExporter(ExportConfig(output_path=Path(out), compress=compress))
        meta = {"k": k, "p": p, "series": kind.value, "via_operator": via_operator}
        path = exporter.export(expansion, meta)
        err_console.print(f"[green]✓[/green] {len(expansion)} coefficients written to {path}")


@main.command()
@click.option("-k", "k", type=int, required=True, help="Even weight >= 4")
@click.option("-p", "p", type=int, required=True, help="Odd prime")
@click.option("-H", "H", type=str, required=True, help='Form literal "n,m,[c1,c2,c3,c4]"')
@click.option("-m", "m_max", type=int, default=4, show_default=True, help="Depth of the weight ladder")
@_format_option(OutputFormat.HUMAN)
def limit(k: int, p: int, H: str, m_max: int, output_format: str) -> None:  # noqa: N803
    """Valuations v_p(b_{k_m}(H) - A_k(H)) along k_m = k + (p - 1) p^{m-1}."""
    with handle_errors():
        cfg = CommandConfig(subcommand="limit", k=k, p=p, H=H, m_max=m_max, format=output_format)
        form = HermitianForm.parse(H)
        rows = convergence_table(k, p, form, cfg.m_max)
        emit_rows(
            [row.model_dump() for row in rows],
            cfg.format,
            f"G_(k_m) -> G*_{k} at H = {form}, p = {p}",
        )


@main.command()
@click.option("-p", "p", type=int, required=True, help="Odd prime")
@click.option("-H", "H", type=str, default=None, help="Rank-2 form, eps = 1, 2 det = 1 (default H0)")
@click.option("-m", "m_max", type=int, default=4, show_default=True, help="Depth of the weight ladder")
@click.option("-N", "precision", type=int, default=12, show_default=True, help="p-adic precision")
@_format_option(OutputFormat.HUMAN)
def tilde(
    p: int, H: Optional[str], m_max: int, precision: int, output_format: str  # noqa: N803
) -> None:
    """The transcendental limit ã with its defining residual and the weight-2 ladder."""
    with handle_errors():
        cfg = CommandConfig(
            subcommand="tilde", p=p, H=H, m_max=m_max, precision=precision, format=output_format
        )
        form = HermitianForm.parse(H) if H else H0
        stated = tilde_a_value(p, precision)
        residual = tilde_residual(p, precision)
        report = TildeReport(
            stated=_padic_report(stated, precision),
            limit=_padic_report(tilde_a_limit(p, precision), precision),
            residual=str(residual),
            residual_valuation=int(residual.valuation),
            rows=transcendental_table(p, form, cfg.m_max, precision),
        )
        if cfg.format is OutputFormat.JSON:
            click.echo(report.model_dump_json())
            return
        if cfg.format is OutputFormat.CSV:
            emit_rows([row.model_dump() for row in report.rows], cfg.format, "")
            return
        console.print(f"[bold]ã[/bold] = {report.stated.text}")
        console.print(f"limit ã/(1 - p) = {report.limit.text}")
        console.print(f"ã log_p(2^(p-1)) + 48p = {report.residual}")
        if report.rows:
            title = f"a_(k_m)({form}) -> ã, p = {p}"
            emit_rows([row.model_dump() for row in report.rows], cfg.format, title)


def _apply_overrides(
    config: SuiteConfig,
    k: Optional[int],
    p: Optional[int],
    trace_bound: Optional[int],
    degree: Optional[int],
    kmax: Optional[int],
    samples: Optional[int],
    seed: Optional[int],
    m_max: Optional[int],
    precision: Optional[int],
) -> SuiteConfig:
    if p is not None:
        for section in (config.divisor, config.kummer, config.coset, config.gstar, config.padic):
            section.primes = [p]
        config.lemma2.degree1_primes = [p]
        config.lemma2.degree2_primes = [p]
        config.limit.p = p
        config.tilde.p = p
    if degree is not None:
        if degree == 1:
            config.lemma2.degree2_primes = []
        else:
            config.lemma2.degree1_primes = []
        config.coset.degrees = [degree]  # type: ignore[list-item]
    if k is not None:
        config.gstar.weights = [k]
        config.limit.k = k
    if trace_bound is not None:
        config.gstar.trace_bound = trace_bound
        config.limit.trace_bound = trace_bound
        config.lemma2.trace_bound = trace_bound
    if kmax is not None:
        config.kummer.kmax = kmax
        config.bernoulli.max_index = kmax
    if samples is not None:
        config.coset.samples = samples
        config.padic.samples = samples
    if seed is not None:
        config.coset.seed = seed
        config.padic.seed = seed
    if m_max is not None:
        config.limit.m_max = m_max
        config.tilde.m_max = m_max
    if precision is not None:
        config.padic.precision = precision
        config.tilde.precision = precision
    # re-validate the overridden sections
    return SuiteConfig.model_validate(config.model_dump())


@main.command()
@click.argument("suite", type=click.Choice([s.value for s in VerifySuite], case_sensitive=False))
@click.option("--config", "-c", "config_path", type=click.Path(exists=True), help="YAML suite config")
@click.option("-k", "k", type=int, default=None, help="Weight (gstar, limit)")
@click.option("-p", "p", type=int, default=None, help="Restrict to one odd prime")
@click.option("--trace-bound", "-B", type=int, default=None, help="Trace bound (gstar, limit, lemma2)")
@click.option("-n", "degree", type=click.IntRange(1, 2), default=None, help="Degree (lemma2, coset)")
@click.option("--kmax", type=int, default=None, help="Largest weight (kummer, bernoulli)")
@click.option("--samples", type=int, default=None, help="Samples (coset, padic)")
@click.option("--seed", type=int, default=None, help="Random seed (coset, padic)")
@click.option("-m", "m_max", type=int, default=None, help="Depth of the weight ladder (limit, tilde)")
@click.option("-N", "precision", type=int, default=None, help="p-adic precision (padic, tilde)")
@click.option("--progress/--no-progress", default=True, show_default=True, help="Show a progress bar")
@_format_option(OutputFormat.JSON)
def verify(
    suite: str,
    config_path: Optional[str],
    k: Optional[int],
    p: Optional[int],
    trace_bound: Optional[int],
    degree: Optional[int],
    kmax: Optional[int],
    samples: Optional[int],
    seed: Optional[int],
    m_max: Optional[int],
    precision: Optional[int],
    progress: bool,
    output_format: str,
) -> None:
    """Run a verification suite; exit 0 iff every check passes.

        quat-eisenstein verify gstar -k 4 -p 3 -B 1
    """
    with handle_errors():
        CommandConfig(subcommand="verify", k=k, p=p, format=output_format)
        config = SuiteConfig.from_env_and_file(config_path)
        config = _apply_overrides(
            config, k, p, trace_bound, degree, kmax, samples, seed, m_max, precision
        )
        if click.get_current_context().find_root().obj.get("log_level") is None:
            logging.getLogger().setLevel(config.log_level)
        if config.bernoulli_cache_dir:
            configure_bernoulli_cache(config.bernoulli_cache_dir)
        runner = SuiteRunner(config, console=err_console, show_progress=progress)
        reports = runner.run(VerifySuite(suite))
    fmt = OutputFormat(output_format)
    if fmt is OutputFormat.HUMAN:
        runner.print_summary(reports)
        for report in reports:
            for note in report.notes:
                console.print(f"[dim]{report.check}: {note}[/dim]")
    else:
        emit_rows([report.record() for report in reports], fmt, "")
    if runner.stats.checks_failed:
        sys.exit(1)


@main.command("init-config")
@click.option("--output", "-o", type=click.Path(), default="verify_config.yaml", show_default=True)
def init_config(output: str) -> None:
    """Generate a default YAML verify configuration file."""
    SuiteConfig().to_yaml(output)
    err_console.print(f"[green]✓[/green] Default config written to {output}")
    err_console.print(f"[dim]Edit the file and run: quat-eisenstein verify -c {output} SUITE[/dim]")


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@_format_option(OutputFormat.HUMAN)
def inspect(input_path: str, output_format: str) -> None:
    """Inspect an exported expansion file (JSONL, optionally gzipped)."""
    with handle_errors():
        path = Path(input_path)
        expansion = load_expansion(path)
        summary: dict[str, Any] = {
            "path": str(path),
            "records": len(expansion),
            "trace_bound": expansion.trace_bound,
            "xxh64": file_digest(path),
        }
        sidecar = meta_path(path)
        if sidecar.exists():
            meta = json.loads(sidecar.read_text())
            summary["digest_matches_meta"] = meta.get("xxh64") == summary["xxh64"]
        fmt = OutputFormat(output_format)
        if fmt is not OutputFormat.HUMAN:
            emit_rows([summary], fmt, "")
            return
        console.print(f"[bold]Expansion: {path.name}[/bold]")
        for key, value in summary.items():
            console.print(f"{key}: {value}")
        table = Table(title="Coefficients (first 5)", show_lines=True)
        table.add_column("H", style="cyan")
        table.add_column("coefficient", justify="right")
        for i, (H, value) in enumerate(expansion.items()):
            if i == 5:
                break
            table.add_row(str(H), str(value))
        console.print(table)


if __name__ == "__main__":
    main()
