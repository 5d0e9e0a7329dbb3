from __future__ import annotations
import logging
from enum import Enum
from importlib.metadata import version
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

try:
    # typer >= 0.20 vendors its own copy of click
    from typer._click.exceptions import ClickException
except ImportError:
    from click import ClickException
from rich import print
from rich.console import Console
from rich.logging import RichHandler
from rich.pretty import pretty_repr
from typer import Argument, Exit, Option, Typer, echo
from typer.main import get_command
from typing_extensions import Annotated

from confalg.commands import (
    CHECK_KINDS,
    CONSTRUCTIONS,
    CheckOptions,
    run_check,
    run_construct,
    run_deform_limit,
    run_example_final,
    run_example_polyx,
    run_ybe,
)
from confalg.config import get_defaults
from confalg.errors import EXIT_CHECK_FAILED, report_errors
from confalg.log import LogLevel, LogParam, configure_extra_levels
from confalg.report import Report
from confalg.spec_file import parse_spec, write_spec

logger = logging.getLogger(__name__)

class ReportFormat(str, Enum):
    text = "text"
    json = "json"

#: Unknown values are usage errors, exit status 2
CheckKind = Enum("CheckKind", {kind: kind for kind in sorted(CHECK_KINDS)}, type=str)
Construction = Enum("Construction", {name: name for name in CONSTRUCTIONS}, type=str)

SpecPath = Annotated[Path, Argument(exists=True, dir_okay=False, readable=True, help="Path to a JSON spec file")]
ReportOption = Annotated[ReportFormat, Option(help="Print the report as a rich text tree or as JSON")]
Timing = Annotated[bool, Option("--timing/--no-timing", help="Include timings in the report. Turn this off for reports that must be byte-identical between runs.")]
Window = Annotated[Optional[int], Option(help="Only evaluate identities on basis indices up to this one, counting from 0. Use this for truncated ℕ-indexed families.")]
Alpha = Annotated[str, Option(help="The parameter of the derivation: a rational number such as 1/2, or 'sym' to keep it symbolic")]

context: Dict[Any, Any] = {
    "default_map": get_defaults()
}
app = Typer(name="confalg", pretty_exceptions_enable=False, no_args_is_help=True)
example_app = Typer(name="example", help="Reproduce the built-in worked examples", no_args_is_help=True)
deform_app = Typer(name="deform", help="Formal deformations and their semi-classical limits", no_args_is_help=True)
app.add_typer(example_app)
app.add_typer(deform_app)

def version_callback(value: bool):
    if value:
        print(version("confalg"))
        raise Exit()

@app.callback(context_settings=context)
def common_args(
    log_level: Annotated[
        int, Option(click_type=LogParam(), help="Logging verbosity")
    ] = LogLevel.FEEDBACK.value,
    version: Annotated[
        Optional[bool], Option("--version", callback=version_callback)
    ] = None
):
    configure_extra_levels()
    # Logs go to stderr so that JSON reports on stdout stay parseable
    logging.basicConfig(
        level=log_level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True))],
        force=True
    )

def emit(report: Report, fmt: ReportFormat, timing: bool) -> None:
    """
    Prints a report and exits with status 1 if any of its checks failed
    """
    logger.log(LogLevel.VERBOSE.value, pretty_repr(report.to_dict(timing)))
    if fmt == ReportFormat.json:
        echo(report.to_json(timing))
    else:
        report.render(Console(), timing)
    if not report.passed:
        for check in report.checks:
            witness = check.first_witness()
            if not check.passed and not check.diagnostic and witness is not None:
                logger.warning(f"{check.name} failed: {witness}")
        raise Exit(EXIT_CHECK_FAILED)
    logger.log(LogLevel.FEEDBACK.value, f"All {len(report.checks)} checks passed")

@app.command(context_settings=context)
def check(
    file: SpecPath,
    kind: Annotated[CheckKind, Option(help="The kind of structure the file should hold")],
    window: Window = None,
    split: Annotated[Optional[int], Option(help="For manin-triple: how many leading basis elements span the first subalgebra. Defaults to half the rank.")] = None,
    op: Annotated[Optional[str], Option(help="For derivation: the operation the linear map D should be a derivation of")] = None,
    report: ReportOption = ReportFormat.text,
    timing: Timing = True,
):
    """
    Checks that a spec file holds a structure of the given kind
    """
    with report_errors():
        spec = parse_spec(file)
        result = run_check(spec, kind.value, CheckOptions(window=window, split=split, op=op), ["check", file.name, "--kind", kind.value])
    emit(result, report, timing)

@app.command(context_settings=context)
def construct(
    pipeline: Annotated[Construction, Argument(help="The construction to run")],
    file: SpecPath,
    output: Annotated[Path, Option("--output", "-o", dir_okay=False, help="Where to write the constructed spec file")],
    report: ReportOption = ReportFormat.text,
    timing: Timing = True,
):
    """
    Builds a new structure from the one in a spec file and writes it as a spec file
    """
    with report_errors():
        spec = parse_spec(file)
        out, result = run_construct(pipeline.value, spec, ["construct", pipeline.value, file.name])
        write_spec(out, output)
    logger.log(LogLevel.FEEDBACK.value, f"Wrote {output}")
    emit(result, report, timing)

@app.command(context_settings=context)
def ybe(
    file: SpecPath,
    report: ReportOption = ReportFormat.text,
    timing: Timing = True,
):
    """
    Checks the Yang-Baxter type equation and the coboundary bialgebra conditions for the r-matrix in a spec file
    """
    with report_errors():
        result = run_ybe(parse_spec(file), ["ybe", file.name])
    emit(result, report, timing)

@example_app.command(name="final", context_settings=context)
def example_final(
    alpha: Alpha = "sym",
    claim: Annotated[bool, Option(help="Also compare with the semidirect PGD-bialgebra construction, as a diagnostic")] = True,
    report: ReportOption = ReportFormat.text,
    timing: Timing = True,
):
    """
    Builds every stage of the final example, from a Zinbiel algebra with a derivation to a coboundary Poisson conformal bialgebra
    """
    with report_errors():
        result = run_example_final(alpha, claim, ["example", "final", "--alpha", alpha])
    emit(result, report, timing)

@example_app.command(name="polyx", context_settings=context)
def example_polyx(
    q: Annotated[str, Option(help="The parameter q: a rational number, or 'sym' to keep it symbolic")] = "0",
    degree: Annotated[int, Option(min=1, help="Check every identity on monomials of degree up to this one")] = 8,
    report: ReportOption = ReportFormat.text,
    timing: Timing = True,
):
    """
    Checks the differential Novikov-Poisson bialgebra on polynomials in x and its Poisson conformal bialgebra
    """
    with report_errors():
        result = run_example_polyx(q, degree, ["example", "polyx", "--q", q, "--degree", str(degree)])
    emit(result, report, timing)

@deform_app.command(name="limit", context_settings=context)
def deform_limit(
    file: SpecPath,
    order: Annotated[Optional[int], Option(help="Truncation order to use instead of the one in the file")] = None,
    report: ReportOption = ReportFormat.text,
    timing: Timing = True,
):
    """
    Checks a truncated deformation power by power and computes its semi-classical limit
    """
    with report_errors():
        result = run_deform_limit(parse_spec(file), order, ["deform", "limit", file.name])
    emit(result, report, timing)

def run_command(argv: Sequence[str]) -> int:
    """
    Runs the CLI in-process and returns its exit status instead of exiting
    """
    args: List[str] = list(argv)
    try:
        status = get_command(app).main(args=args, prog_name="confalg", standalone_mode=False)
    except ClickException as e:
        e.show()
        return e.exit_code
    return status if isinstance(status, int) else 0
