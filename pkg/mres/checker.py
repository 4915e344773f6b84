"""MRes proof lines and checker.

An MRes line pairs an existential clause with one merge map per universal.
Axioms carry falsifying-literal leaves. A resolution on pivot x combines the
premises' maps per universal u: when x is right of u the maps must be
selectable (isomorphic, or one of them trivial); when x is left of u the
proof chooses between select and merge.

Lines may omit their clause and maps; the checker then derives them from
the rule, which is how proofs read from .mrs files are checked.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from core.errors import MergeMapError, PrefixError, SelectBlockedError
from mres.merge_map import MergeMap, mm_isomorphic, mm_merge, mm_select
from proofs.formats import ProofEntry
from proofs.reporting import ReportBuilder
from proofs.rules import (
    Axiom,
    LineRejected,
    MergeChoice,
    Rule,
    check_stated_clause,
    derive_clause,
)
from qbf.model import Clause, Qbf, falsifying_u_literal
from schemas.report import CheckReport, ReasonCode

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MResLine:
    """One MRes line.

    Attributes:
        rule: How the line was derived.
        clause: Existential clause, or None to derive it.
        maps: Merge map per universal, or None to derive them.
    """

    rule: Rule
    clause: Clause | None = None
    maps: Mapping[int, MergeMap] | None = None


def lines_from_entries(entries: Sequence[ProofEntry]) -> list[MResLine]:
    return [MResLine(rule=e.rule, clause=e.clause) for e in entries]


def check_mres(q: Qbf, proof: Sequence[MResLine]) -> CheckReport:
    """Check an MRes proof line by line, stopping at the first failure.

    Returns:
        A CheckReport; valid iff every line passes and the last clause is empty.
    """
    report, _ = MResChecker(q).run(proof)
    return report


class MResChecker:
    """Replays and checks MRes proofs against one formula."""

    def __init__(self, q: Qbf) -> None:
        self.q = q

    def run(self, proof: Sequence[MResLine]) -> tuple[CheckReport, list[MResLine]]:
        """Check proof and return the report with the completed lines.

        Completed lines carry derived clauses and maps. Only lines up to the
        first failure are completed.
        """
        builder = ReportBuilder(len(proof))
        done: list[MResLine] = []
        for index, line in enumerate(proof, 1):
            if builder.failed:
                builder.skip(index)
                continue
            try:
                done.append(self._check_line(index, line, done))
                builder.ok(index)
            except LineRejected as rejected:
                builder.fail(index, rejected.reason, rejected.message)

        if not builder.failed:
            if not done:
                builder.fail_whole(ReasonCode.NO_REFUTATION, "empty proof", None)
            elif not done[-1].clause.is_empty:
                builder.fail_whole(
                    ReasonCode.NO_REFUTATION,
                    f"last clause {done[-1].clause} is not empty",
                    len(done),
                )
        width = max((line.clause.width for line in done), default=0)
        return builder.build(max_width=width), done

    # ── Private helpers ───────────────────────────────────────────────────────

    def _check_line(self, index: int, line: MResLine, done: list[MResLine]) -> MResLine:
        q = self.q
        expected = derive_clause(q, index, line.rule, [d.clause for d in done])
        clause = check_stated_clause(line.clause, expected, line.rule)

        if isinstance(line.rule, Axiom):
            matrix_clause = q.clause(line.rule.index)
            derived = {
                u: MergeMap.leaf(u, falsifying_u_literal(q, matrix_clause, u)) for u in q.universals
            }
            mismatch = ReasonCode.BAD_AXIOM
        else:
            derived = {u: self._combine(index, line.rule, u, done) for u in q.universals}
            mismatch = ReasonCode.BAD_MERGE

        if line.maps is None:
            return MResLine(line.rule, clause, derived)
        for u in q.universals:
            if u not in line.maps:
                raise LineRejected(ReasonCode.MISSING_STRATEGY, f"no merge map for {u}")
            if not mm_isomorphic(line.maps[u], derived[u]):
                raise LineRejected(mismatch, f"merge map for {u} differs from the rule's map")
        return MResLine(line.rule, clause, dict(line.maps))

    def _combine(self, index: int, rule, u: int, done: list[MResLine]) -> MergeMap:
        mj, mk = done[rule.j - 1].maps[u], done[rule.k - 1].maps[u]
        choice = rule.choice(u)
        if choice is MergeChoice.MERGE:
            if not self.q.order.left_of(rule.pivot, u):
                raise LineRejected(
                    ReasonCode.BAD_MERGE, f"merge on {rule.pivot}, which is right of {u}"
                )
            try:
                return mm_merge(mj, mk, index, rule.pivot, self.q)
            except (MergeMapError, PrefixError) as exc:
                raise LineRejected(ReasonCode.BAD_MERGE, str(exc)) from None
        try:
            return mm_select(mj, mk)
        except SelectBlockedError:
            raise LineRejected(
                ReasonCode.BLOCKED_SELECT,
                f"maps for {u} of lines {rule.j} and {rule.k} are neither isomorphic nor trivial",
            ) from None
