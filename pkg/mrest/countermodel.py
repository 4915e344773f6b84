"""Countermodel extraction and verification.

The final line of a valid MRes-T refutation carries one T-graph per
universal, and together they form a winning strategy for the universal
player. This module pulls those graphs out and verifies strategies by
brute force over the existential assignments, both for whole countermodels
and for every intermediate line of a proof.
"""

import itertools
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from core.config import get_settings
from core.errors import InvalidProofError, PrefixError, ResourceCapError
from mrest.checker import MResTChecker, MResTLine
from mrest.tgraph import TGraph, tg_eval
from qbf.model import Qbf, clause_falsified, lit_sign, lit_var
from strategy.values import TriVal

logger = logging.getLogger(__name__)


@dataclass
class CountermodelReport:
    """Outcome of verifying a strategy set.

    Attributes:
        holds: True iff every existential assignment, completed by the
            strategies (* read as 0), falsifies some matrix clause.
        counterexample: An existential assignment the strategies fail on.
        ambiguous: Assignments that were only refuted thanks to a * read
            as 0. On strategies extracted from valid proofs this list stays
            empty.
        checked: Number of existential assignments enumerated.
    """

    holds: bool
    counterexample: dict[int, bool] | None = None
    ambiguous: list[dict[int, bool]] = field(default_factory=list)
    checked: int = 0


def extract_countermodel(q: Qbf, proof: Sequence[MResTLine]) -> dict[int, TGraph]:
    """The final line's graphs of a valid refutation.

    Raises:
        InvalidProofError: If the proof does not check.
    """
    checked = MResTChecker(q).run(proof)
    if not checked.report.valid:
        raise InvalidProofError(
            f"cannot extract a countermodel: {checked.report.reason.value if checked.report.reason else 'invalid'}"
            f" at line {checked.report.failing_line}",
            checked.report,
        )
    return dict(checked.lines[-1].graphs)


def check_countermodel(q: Qbf, strategies: Mapping[int, TGraph]) -> CountermodelReport:
    """Verify strategies against every complete existential assignment.

    Universals without a strategy are treated as constant *.

    Raises:
        ResourceCapError: If q has more existentials than the configured cap.
        PrefixError: If a strategy reads a variable that is not an
            existential left of its universal.
    """
    cap = get_settings().countermodel_var_cap
    if len(q.existentials) > cap:
        raise ResourceCapError(f"{len(q.existentials)} existentials exceed the cap of {cap}")
    for u, graph in strategies.items():
        q.require_universal(u)
        for var in graph.support:
            if not (q.is_existential(var) and q.order.left_of(var, u)):
                raise PrefixError(f"strategy for {u} reads {var}, which is not an existential left of it")

    report = CountermodelReport(holds=True)
    for bits in itertools.product((False, True), repeat=len(q.existentials)):
        alpha = dict(zip(q.existentials, bits))
        report.checked += 1
        full = dict(alpha)
        defaulted: set[int] = set()
        for u in q.universals:
            graph = strategies.get(u)
            value = tg_eval(graph, alpha) if graph is not None else TriVal.STAR
            if value is TriVal.STAR:
                defaulted.add(u)
                full[u] = False
            else:
                full[u] = value.as_bool()

        falsified = [c for c in q.matrix if clause_falsified(c, full)]
        if not falsified:
            report.holds = False
            report.counterexample = alpha
            logger.info("Strategies fail on %s", alpha)
            return report
        if all(c.vars & defaulted for c in falsified):
            report.ambiguous.append(alpha)

    if report.ambiguous:
        logger.warning(
            "%d assignments were refuted only through a * read as 0", len(report.ambiguous)
        )
    return report


def verify_countermodel(q: Qbf, strategies: Mapping[int, TGraph]) -> bool:
    """True iff the strategies form a countermodel (see check_countermodel)."""
    return check_countermodel(q, strategies).holds


@dataclass(frozen=True)
class SoundnessViolation:
    """A line whose strategies fail to falsify the matrix under some assignment."""

    line: int
    assignment: dict[int, bool]


def line_soundness_violations(q: Qbf, lines: Sequence[MResTLine]) -> list[SoundnessViolation]:
    """Check every line of a completed proof against the matrix.

    For line i and every complete existential assignment falsifying C_i,
    the universals set to the non-* values of the line's strategies must
    already falsify some matrix clause. Universals the strategies leave at
    * stay unassigned.

    Args:
        q: The formula.
        lines: Completed lines (clauses and graphs present), e.g.
            CheckedProof.lines.

    Raises:
        ResourceCapError: If q has more existentials than the configured cap.
    """
    cap = get_settings().countermodel_var_cap
    if len(q.existentials) > cap:
        raise ResourceCapError(f"{len(q.existentials)} existentials exceed the cap of {cap}")

    violations: list[SoundnessViolation] = []
    for index, line in enumerate(lines, 1):
        fixed = {lit_var(lit): not lit_sign(lit) for lit in line.clause.literals}
        free = [x for x in q.existentials if x not in fixed]
        for bits in itertools.product((False, True), repeat=len(free)):
            alpha = {**fixed, **dict(zip(free, bits))}
            full = dict(alpha)
            for u, graph in line.graphs.items():
                value = tg_eval(graph, alpha)
                if value.is_set:
                    full[u] = value.as_bool()
            if not any(clause_falsified(c, full) for c in q.matrix):
                violations.append(SoundnessViolation(index, alpha))
    return violations
