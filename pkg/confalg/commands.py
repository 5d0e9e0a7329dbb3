"""
The work behind each CLI command. Every function returns a [`Report`][confalg.report.Report] and never prints,
so commands can be driven from Python as well as from the shell.
"""
from __future__ import annotations
from dataclasses import dataclass, replace
from time import perf_counter
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import logging

from confalg.bridges import (
    full_pipeline_final_example,
    pgd_coalgebra_to_conformal,
    pgd_bialgebra_to_conf_bialgebra,
    pgd_to_conformal,
    polyx_example,
    pre_pgd_to_pre_poisson_conformal,
)
from confalg.builtins import Parameter
from confalg.conformal import (
    ConfAlgebra,
    ConfBiKind,
    ConfCoKind,
    ConfRepKind,
    ConfStructureKind,
    bialgebra_double,
    check_conf_bialgebra,
    check_conf_coalgebra,
    check_conf_representation,
    check_conf_structure,
    check_manin_triple,
    display_coproducts,
    display_products,
    dual_conf_algebra,
    dual_conf_coalgebra,
)
from confalg.deform import (
    TruncatedCoDeformation,
    TruncatedDeformation,
    check_truncated_asi,
    check_truncated_codeformation,
    check_truncated_deformation,
    semiclassical_limit,
)
from confalg.errors import ConfalgError, SpecFileError
from confalg.findim import (
    BiKind,
    CoKind,
    StructureKind,
    associated_pgd_of_pre_pgd,
    check_derivation,
    check_fin_bialgebra,
    check_fin_coalgebra,
    check_fin_structure,
    claim_semidirect_pgd_bialgebra,
    display_fin,
    star_closure,
    zinbiel_derivation_to_pre_pgd,
)
from confalg.log import LogLevel
from confalg.report import CheckReport, Report, Witness
from confalg.spec_file import SpecFile, dump_spec, parse_spec_text
from confalg.ybe import (
    associated_poisson_conformal,
    canonical_pcybe_solution,
    check_coboundary_conditions,
    check_pcybe,
    check_r_matrix_o_operator,
    is_skew,
    with_coboundary,
)

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class CheckOptions:
    """
    Settings that only some check kinds use
    """
    window: Optional[int] = None
    "Only evaluate identities on basis indices up to this one (0-based), for ℕ-indexed families"
    split: Optional[int] = None
    "For Manin triples, the number of leading basis elements spanning the first subalgebra; half the rank by default"
    op: Optional[str] = None
    "For derivations, the operation the map must be a derivation of; the first operation by default"

CheckFn = Callable[[SpecFile, CheckOptions], CheckReport]

def _manin(spec: SpecFile, options: CheckOptions) -> CheckReport:
    D = spec.require_conf()
    if spec.form is None:
        raise SpecFileError("A Manin triple check needs a 'form' section")
    k = D.rank // 2 if options.split is None else options.split
    return check_manin_triple(D, (range(k), range(k, D.rank)), spec.form)

def _derivation(spec: SpecFile, options: CheckOptions) -> CheckReport:
    A = spec.require_fin()
    op = options.op or next(iter(sorted(A.ops)), None)
    if op is None:
        raise SpecFileError("A derivation check needs an operation in the 'fin' section")
    return check_derivation(A, op, window=options.window)

def _representation(kind: ConfRepKind) -> CheckFn:
    def run(spec: SpecFile, options: CheckOptions) -> CheckReport:
        if spec.rep is None:
            raise SpecFileError("A representation check needs a 'rep' section")
        return check_conf_representation(spec.require_conf(), spec.rep, kind)
    return run

def _check_kinds() -> Dict[str, CheckFn]:
    kinds: Dict[str, CheckFn] = {}
    for fk in StructureKind:
        kinds[fk.value] = lambda s, o, k=fk: check_fin_structure(k, s.require_fin(), o.window)
    for ck in CoKind:
        kinds[ck.value] = lambda s, o, k=ck: check_fin_coalgebra(k, s.require_fin(), o.window)
    for bk in BiKind:
        kinds[bk.value] = lambda s, o, k=bk: check_fin_bialgebra(k, s.require_fin(), o.window)
    for sk in ConfStructureKind:
        kinds[sk.value] = lambda s, o, k=sk: check_conf_structure(k, s.require_conf(), o.window)
    for cck in ConfCoKind:
        kinds[cck.value] = lambda s, o, k=cck: check_conf_coalgebra(k, s.require_conf(), o.window)
    for cbk in ConfBiKind:
        kinds[cbk.value] = lambda s, o, k=cbk: check_conf_bialgebra(k, s.require_conf(), o.window)
    for rk in ConfRepKind:
        kinds[rk.value] = _representation(rk)
    kinds["derivation"] = _derivation
    kinds["manin-triple"] = _manin
    return kinds

#: Every value `check --kind` accepts
CHECK_KINDS: Dict[str, CheckFn] = _check_kinds()

def run_check(spec: SpecFile, kind: str, options: CheckOptions = CheckOptions(), command: Sequence[str] = ()) -> Report:
    """
    Runs one check kind on a spec file

    Raises:
        ConfalgError: if the kind is unknown or the spec file lacks what the kind needs
    """
    if kind not in CHECK_KINDS:
        raise ConfalgError(f"Unknown check kind {kind!r}")
    start = perf_counter()
    check = CHECK_KINDS[kind](spec, options)
    return Report(
        command=list(command) or ["check", "--kind", kind],
        checks=[check],
        timing={"check": perf_counter() - start},
    )

def _pgd_coalgebra(spec: SpecFile) -> SpecFile:
    A = spec.require_fin()
    delta, Delta = pgd_coalgebra_to_conformal(A)
    if "dot" in A.ops and "circ" in A.ops:
        conf = pgd_to_conformal(A).with_coops(delta=delta, Delta=Delta)
    else:
        conf = ConfAlgebra(rank=A.dim, coops={"delta": delta, "Delta": Delta}, names=A.names, params=A.params)
    return SpecFile(conf=conf)

def _canonical(spec: SpecFile) -> SpecFile:
    double, r = canonical_pcybe_solution(spec.require_conf())
    return SpecFile(conf=double, rmatrix=r)

def _double(spec: SpecFile) -> SpecFile:
    double, r = bialgebra_double(spec.require_conf())
    return SpecFile(conf=double, rmatrix=r)

def _claim(spec: SpecFile) -> SpecFile:
    fin, r = claim_semidirect_pgd_bialgebra(spec.require_fin())
    return SpecFile(fin=fin, conf=pgd_bialgebra_to_conf_bialgebra(fin, check=False), rmatrix=r)

#: Every pipeline `construct` accepts, from input spec to output spec
CONSTRUCTIONS: Dict[str, Callable[[SpecFile], SpecFile]] = {
    "star": lambda s: SpecFile(fin=star_closure(s.require_fin())),
    "associated-pgd": lambda s: SpecFile(fin=associated_pgd_of_pre_pgd(s.require_fin())),
    "zinbiel-derivation": lambda s: SpecFile(fin=zinbiel_derivation_to_pre_pgd(s.require_fin())),
    "pgd-conformal": lambda s: SpecFile(conf=pgd_to_conformal(s.require_fin())),
    "pgd-coalgebra-conformal": _pgd_coalgebra,
    "pre-poisson-conformal": lambda s: SpecFile(conf=pre_pgd_to_pre_poisson_conformal(s.require_fin())),
    "associated-poisson": lambda s: SpecFile(conf=associated_poisson_conformal(s.require_conf())),
    "canonical-solution": _canonical,
    "bialgebra-double": _double,
    "claim": _claim,
    "dual-coalgebra": lambda s: SpecFile(conf=dual_conf_coalgebra(s.require_conf())),
    "dual-algebra": lambda s: SpecFile(conf=dual_conf_algebra(s.require_conf())),
}

def _displays(spec: SpecFile) -> Dict[str, Dict[str, str]]:
    displays: Dict[str, Dict[str, str]] = {}
    if spec.fin is not None:
        displays["fin"] = display_fin(spec.fin)
    if spec.conf is not None:
        displays["conf"] = {**display_products(spec.conf), **display_coproducts(spec.conf)}
    if spec.rmatrix is not None and spec.conf is not None:
        displays["rmatrix"] = {"r": spec.rmatrix.format(spec.conf.names)}
    return displays

def _round_trip(spec: SpecFile) -> CheckReport:
    report = CheckReport(name="round-trip")
    text = dump_spec(spec)
    if dump_spec(parse_spec_text(text)) != text:
        report.witnesses.append(Witness(identity="round-trip", indices=(), residual={"text": "written and reread files differ"}))
    return report

def run_construct(pipeline: str, spec: SpecFile, command: Sequence[str] = ()) -> Tuple[SpecFile, Report]:
    """
    Runs a construction pipeline, returning the output spec file and a report that displays it and confirms it
    reads back unchanged

    Raises:
        PreconditionError: if the input fails the check the construction requires
    """
    if pipeline not in CONSTRUCTIONS:
        raise ConfalgError(f"Unknown pipeline {pipeline!r}")
    start = perf_counter()
    out = CONSTRUCTIONS[pipeline](spec)
    name = f"{spec.name} {pipeline}".strip() if spec.name else pipeline
    out = replace(out, name=name, description=f"Output of the {pipeline} construction")
    logger.log(LogLevel.VERBOSE.value, f"Constructed {name}")
    return out, Report(
        command=list(command) or ["construct", pipeline],
        checks=[_round_trip(out)],
        displays=_displays(out),
        timing={"construct": perf_counter() - start},
    )

def run_ybe(spec: SpecFile, command: Sequence[str] = ()) -> Report:
    """
    Checks the Yang-Baxter type equation for the `rmatrix` of a spec file, the conditions that make its coboundary
    coproducts a Poisson conformal bialgebra and, for a skew `r`, its agreement with the O-operator criterion
    """
    A, r = spec.require_conf(), spec.require_rmatrix()
    start = perf_counter()
    checks = [check_pcybe(A, r), check_coboundary_conditions(A, r)]
    if is_skew(r):
        o_operator = check_r_matrix_o_operator(A, r)
        o_operator.diagnostic = True
        checks.append(o_operator)
    return Report(
        command=list(command) or ["ybe"],
        checks=checks,
        displays={"coboundary coproducts": display_coproducts(with_coboundary(A, r))},
        timing={"ybe": perf_counter() - start},
    )

def run_example_final(alpha: Parameter = "sym", claim: bool = True, command: Sequence[str] = ()) -> Report:
    """
    Reproduces the final example from its Zinbiel algebra with a derivation, showing every intermediate structure
    """
    start = perf_counter()
    example = full_pipeline_final_example(alpha, claim)
    displays = {
        "pre-pgd": display_fin(example.pre_pgd),
        "pgd": display_fin(example.pgd),
        **example.displays(),
    }
    return Report(
        command=list(command) or ["example", "final", "--alpha", str(alpha)],
        checks=example.checks,
        displays=displays,
        timing={"example": perf_counter() - start},
    )

def run_example_polyx(q: Parameter = 0, degree: int = 8, command: Sequence[str] = ()) -> Report:
    """
    Checks the polynomial algebra family for one value of `q` within the degree window
    """
    start = perf_counter()
    example = polyx_example(q, degree)
    return Report(
        command=list(command) or ["example", "polyx", "--q", str(q), "--degree", str(degree)],
        checks=example.checks,
        notes=example.notes,
        timing={"example": perf_counter() - start},
    )

def run_deform_limit(spec: SpecFile, order: Optional[int] = None, command: Sequence[str] = ()) -> Report:
    """
    Checks a truncated deformation power by power and, if it passes, computes and checks its semi-classical limit.

    Params:
        order: Truncation order to use instead of the one in the file
    """
    D, C = spec.require_deform()
    if order is not None:
        D = TruncatedDeformation(D.base, order, D.corrections)
        C = TruncatedCoDeformation(C.base, order, C.corrections)
    start = perf_counter()
    checks: List[CheckReport] = [
        check_truncated_deformation(D),
        check_truncated_codeformation(C),
        check_truncated_asi(D, C),
    ]
    displays: Dict[str, Dict[str, str]] = {}
    notes: List[str] = []
    if all(c.passed for c in checks):
        limit, report = semiclassical_limit(D, C, check=False)
        checks.append(report)
        displays["semi-classical limit"] = {**display_products(limit), **display_coproducts(limit)}
    else:
        notes.append("the deformation fails below the truncation order, so no limit was computed")
    return Report(
        command=list(command) or ["deform", "limit"],
        checks=checks,
        displays=displays,
        notes=notes,
        timing={"deform": perf_counter() - start},
    )
