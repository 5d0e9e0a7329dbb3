"""
Verdicts of identity checks, and the evaluator that produces them
"""
from __future__ import annotations
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple
import json
import logging

from rich.console import Console
from rich.text import Text
from rich.tree import Tree
from tqdm import tqdm

from confalg.config import thread_count
from confalg.log import LogLevel, progress_enabled
from confalg.tensor import Tensor

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class Witness:
    """
    One violated instance of an identity
    """
    identity: str
    "Stable identifier of the identity, such as `ND3`, `jacobi` or `thq1`"
    indices: Tuple[int, ...]
    "1-based basis indices the identity was evaluated on"
    residual: Dict[str, str] = field(hash=False)
    "Nonzero part of `lhs - rhs`, from basis label to canonical polynomial string"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "identity": self.identity,
            "indices": list(self.indices),
            "residual": dict(self.residual),
        }

    def __str__(self) -> str:
        where = ", ".join(str(i) for i in self.indices)
        terms = "; ".join(f"{label}: {poly}" for label, poly in self.residual.items())
        return f"{self.identity} at ({where}) leaves {terms}"

@dataclass
class CheckReport:
    """
    The verdict of one check. Composite checks nest the reports of their components as children.
    """
    name: str
    witnesses: List[Witness] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    children: List[CheckReport] = field(default_factory=list)
    #: Diagnostic reports are shown but never change the verdict of their parent
    diagnostic: bool = False

    @property
    def passed(self) -> bool:
        return not self.witnesses and all(child.passed for child in self.children if not child.diagnostic)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def first_witness(self) -> Optional[Witness]:
        """
        The first witness of this report, or of the first failing child
        """
        if self.witnesses:
            return self.witnesses[0]
        for child in self.children:
            if not child.diagnostic and not child.passed:
                return child.first_witness()
        return None

    def failed_identities(self) -> List[str]:
        """
        Sorted identifiers of every identity with a witness, diagnostics excluded
        """
        found = {w.identity for w in self.witnesses}
        for child in self.children:
            if not child.diagnostic:
                found.update(child.failed_identities())
        return sorted(found)

    def child(self, name: str) -> CheckReport:
        for c in self.children:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "name": self.name,
            "verdict": self.verdict,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }
        if self.notes:
            out["notes"] = list(self.notes)
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        if self.diagnostic:
            out["diagnostic"] = True
        return out

    def log(self) -> None:
        logger.log(LogLevel.VERBOSE.value, f"{self.name}: {self.verdict}")
        witness = self.first_witness()
        if witness is not None:
            logger.warning(f"{self.name} failed: {witness}")

def composite(name: str, children: Iterable[CheckReport], notes: Sequence[str] = ()) -> CheckReport:
    """
    A report with no identities of its own that passes iff all of its children pass
    """
    return CheckReport(name=name, children=list(children), notes=list(notes))

@dataclass(frozen=True)
class Identity:
    """
    A multilinear identity to evaluate on basis tuples
    """
    id: str
    "Identifier used in witnesses"
    arity: int
    "Number of basis elements the identity takes"
    residual: Callable[..., Tensor]
    "Maps 0-based basis indices to `lhs - rhs`; zero iff the identity holds there"
    spans: Optional[Tuple[Tuple[int, ...], ...]] = None
    "Index range of each argument, for identities whose arguments come from different bases"

def run_identities(
    name: str,
    identities: Sequence[Identity],
    indices: Sequence[int],
    labels: Sequence[str],
    notes: Sequence[str] = (),
) -> CheckReport:
    """
    Evaluates every identity on every tuple of basis indices and collects the violations.

    Params:
        name: Name of the resulting report
        identities: The identities to evaluate
        indices: 0-based basis indices each slot of a tuple ranges over
        labels: Display name of every basis vector, used to label residuals
        notes: Copied into the report

    Returns:
        A report whose witnesses are listed in identity order, then in lexicographic tuple order
    """
    tasks: List[Tuple[int, Tuple[int, ...]]] = []
    for which, identity in enumerate(identities):
        logger.debug(f"{name}: evaluating {identity.id}")
        tuples = product(*identity.spans) if identity.spans is not None else product(indices, repeat=identity.arity)
        tasks.extend((which, t) for t in tuples)

    def work(task: Tuple[int, Tuple[int, ...]]) -> Tuple[int, Tuple[int, ...], Tensor]:
        which, t = task
        return which, t, identities[which].residual(*t)

    threads = min(thread_count(), max(1, len(tasks)))
    progress: Dict[str, Any] = dict(total=len(tasks), desc=name, disable=not progress_enabled(), leave=False)
    if threads == 1:
        results = list(tqdm(map(work, tasks), **progress))
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            # map preserves submission order, so reports stay deterministic
            results = list(tqdm(executor.map(work, tasks), **progress))

    report = CheckReport(name=name, notes=list(notes))
    for which, t, residual in results:
        if residual:
            report.witnesses.append(Witness(
                identity=identities[which].id,
                indices=tuple(i + 1 for i in t),
                residual=residual.labelled(labels),
            ))
    report.log()
    return report

@dataclass
class Report:
    """
    Everything a CLI command prints: the checks it ran and the structures it computed
    """
    command: List[str]
    checks: List[CheckReport] = field(default_factory=list)
    displays: Dict[str, Dict[str, str]] = field(default_factory=dict)
    "Named tables of computed values, such as structure constants, from label to polynomial string"
    notes: List[str] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.diagnostic)

    def to_dict(self, timing: bool = True) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "command": list(self.command),
            "verdict": "pass" if self.passed else "fail",
            "checks": [c.to_dict() for c in self.checks],
            "displays": {k: dict(v) for k, v in self.displays.items()},
            "notes": list(self.notes),
        }
        if timing:
            out["timing"] = {k: round(v, 3) for k, v in self.timing.items()}
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2, ensure_ascii=False)

    def render(self, console: Console, timing: bool = True) -> None:
        """
        Prints the report as a tree
        """
        root = Tree(Text(f"confalg {' '.join(self.command)}: {'pass' if self.passed else 'fail'}"))
        for check in self.checks:
            _add_check(root, check)
        for name, values in self.displays.items():
            branch = root.add(Text(name))
            for label, poly in values.items():
                branch.add(Text(f"{label} = {poly}"))
        for note in self.notes:
            root.add(Text(f"note: {note}"))
        if timing:
            for name, seconds in self.timing.items():
                root.add(Text(f"{name}: {seconds:.3f}s"))
        console.print(root)

def _add_check(parent: Tree, check: CheckReport) -> None:
    suffix = " (diagnostic)" if check.diagnostic else ""
    node = parent.add(Text(f"{check.name}: {check.verdict}{suffix}", style="green" if check.passed else "red"))
    for note in check.notes:
        node.add(Text(f"note: {note}"))
    for witness in check.witnesses:
        node.add(Text(str(witness)))
    for child in check.children:
        _add_check(node, child)
