"""MRes-T proof lines, checker and regularity.

Graphs in MRes-T are forced by the rules: an axiom line gets a falsifying
literal leaf per universal, and a resolution on x gets, per universal u,

    IfElse(x, hi = T_k, lo = T_j)   when x is left of u
    Hash(T_j, T_k)                  when x is right of u

where line j contains x and line k contains ¬x. A Hash step is only legal
when the two operand strategies are consistent; that check is a brute-force
comparison of function tables and is the only expensive part of checking.

Lines may omit clauses and graphs; the checker rebuilds them. Lines that
state them must match the rebuilt ones node for node.
"""

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from core.errors import GraphEvalError, ResourceCapError, TGraphError
from mrest.tgraph import TGraph, THash, TIfElse, TLeaf, tg_table
from proofs.formats import ProofEntry
from proofs.reporting import ReportBuilder
from proofs.rules import (
    Axiom,
    LineRejected,
    Resolution,
    Rule,
    check_stated_clause,
    derive_clause,
)
from qbf.model import Clause, Qbf, falsifying_u_literal
from schemas.report import CheckReport, ReasonCode
from strategy.table import StrategyTable, strat_consistent

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MResTLine:
    """One MRes-T line.

    Attributes:
        rule: How the line was derived.
        clause: Existential clause, or None to derive it.
        graphs: T-graph per universal, or None to derive them.
    """

    rule: Rule
    clause: Clause | None = None
    graphs: Mapping[int, TGraph] | None = None


@dataclass
class CheckedProof:
    """A checker run: the report plus the lines as rebuilt by the checker.

    Attributes:
        report: The verdict.
        lines: Completed lines. Building continues past the first failing
            line whenever the rules still determine the next line, so this
            can be longer than the valid prefix.
        complete: True when every input line could be built.
    """

    report: CheckReport
    lines: list[MResTLine] = field(default_factory=list)
    complete: bool = True


def lines_from_entries(entries: Sequence[ProofEntry]) -> list[MResTLine]:
    return [MResTLine(rule=e.rule, clause=e.clause) for e in entries]


def check_mrest(q: Qbf, proof: Sequence[MResTLine]) -> CheckReport:
    """Check an MRes-T proof; valid iff every line passes and the last clause is empty."""
    return MResTChecker(q).run(proof).report


class MResTChecker:
    """Rebuilds and checks MRes-T proofs against one formula.

    Function tables of each (line, universal) pair are cached for the
    lifetime of the checker, so a checker can be reused by incremental
    callers such as proof search.
    """

    def __init__(self, q: Qbf) -> None:
        self.q = q
        self._tables: dict[tuple[int, int], StrategyTable] = {}

    def run(self, proof: Sequence[MResTLine]) -> CheckedProof:
        """Check every line, stopping the checks (not the rebuilding) at the first failure."""
        self._tables.clear()
        builder = ReportBuilder(len(proof))
        done: list[MResTLine] = []
        complete = True

        for index, line in enumerate(proof, 1):
            try:
                built, violation = self.build_line(index, line, done, check=not builder.failed)
            except LineRejected as rejected:
                if builder.failed:
                    builder.skip(index)
                else:
                    builder.fail(index, rejected.reason, rejected.message)
                for rest in range(index + 1, len(proof) + 1):
                    builder.skip(rest)
                complete = False
                break
            done.append(built)
            if builder.failed:
                builder.skip(index)
            elif violation is not None:
                builder.fail(index, violation.reason, violation.message)
            else:
                builder.ok(index)
                logger.debug("Line %d ok: %s", index, built.clause)

        if not builder.failed:
            if not done:
                builder.fail_whole(ReasonCode.NO_REFUTATION, "empty proof", None)
            elif not done[-1].clause.is_empty:
                builder.fail_whole(
                    ReasonCode.NO_REFUTATION, f"last clause {done[-1].clause} is not empty", len(done)
                )

        report = builder.build(
            max_width=max((line.clause.width for line in done), default=0),
            regular=regularity(done, self.q.existentials) if complete else None,
            node_count=node_counts(done, self.q.universals),
        )
        return CheckedProof(report=report, lines=done, complete=complete)

    # ── Line construction ─────────────────────────────────────────────────────

    def build_line(
        self,
        index: int,
        line: MResTLine,
        done: Sequence[MResTLine],
        check: bool = True,
    ) -> tuple[MResTLine, LineRejected | None]:
        """Build line `index` from the completed earlier lines.

        Args:
            index: 1-based line index.
            line: The input line (clause and graphs optional).
            done: Completed lines 1..index-1.
            check: When False, skip the consistency oracle (used after a
                failure, where only the rebuilt graphs matter).

        Returns:
            The completed line and the first rule violation found in it, or
            None when the line checks.

        Raises:
            LineRejected: When the line cannot be built at all (bad
                reference, missing pivot, tautology, conflicting node ids).
        """
        q = self.q
        violation: LineRejected | None = None
        expected_clause = derive_clause(q, index, line.rule, [d.clause for d in done])
        try:
            clause = check_stated_clause(line.clause, expected_clause, line.rule)
        except LineRejected as rejected:
            violation, clause = rejected, expected_clause

        graphs: dict[int, TGraph] = {}
        for u in q.universals:
            expected = self._expected_graph(index, line.rule, u, done)
            actual = expected
            if line.graphs is not None:
                stated = line.graphs.get(u)
                if stated is None:
                    violation = violation or LineRejected(
                        ReasonCode.MISSING_STRATEGY, f"no T-graph for {u}"
                    )
                else:
                    actual = stated
                    violation = violation or self._compare(line.rule, u, stated, expected)
            graphs[u] = actual
            if check and violation is None and isinstance(line.rule, Resolution):
                violation = self._check_union(line.rule, u, actual, done)

        return MResTLine(line.rule, clause, graphs), violation

    def line_table(self, index: int, u: int, done: Sequence[MResTLine]) -> StrategyTable:
        """Function table of T^u at line `index` (1-based), cached."""
        key = (index, u)
        if key not in self._tables:
            self._tables[key] = tg_table(done[index - 1].graphs[u])
        return self._tables[key]

    def forget(self, from_index: int) -> None:
        """Drop cached tables of lines from_index onwards (callers that backtrack)."""
        for key in [k for k in self._tables if k[0] >= from_index]:
            del self._tables[key]

    # ── Private helpers ───────────────────────────────────────────────────────

    def _expected_graph(self, index: int, rule: Rule, u: int, done: Sequence[MResTLine]) -> TGraph:
        q = self.q
        if isinstance(rule, Axiom):
            return TGraph.leaf(u, falsifying_u_literal(q, q.clause(rule.index), u), node_id=index)
        tj, tk = done[rule.j - 1].graphs[u], done[rule.k - 1].graphs[u]
        try:
            if q.order.left_of(rule.pivot, u):
                return TGraph.ifelse(rule.pivot, hi=tk, lo=tj, node_id=index)
            return TGraph.hash(tj, tk, node_id=index)
        except TGraphError as exc:
            raise LineRejected(ReasonCode.WRONG_NODE_KIND, str(exc)) from None

    def _compare(self, rule: Rule, u: int, stated: TGraph, expected: TGraph) -> LineRejected | None:
        got, want = stated.root_node, expected.root_node
        if isinstance(rule, Axiom):
            if stated.root != expected.root or got != want:
                return LineRejected(
                    ReasonCode.BAD_AXIOM,
                    f"axiom graph for {u} must be the leaf {want.value.value} with id {expected.root}",
                )
            return None
        if type(got) is not type(want):
            return LineRejected(
                ReasonCode.WRONG_NODE_KIND,
                f"graph for {u} has a {_kind(got)} root where the rule forces {_kind(want)}",
            )
        if stated.root != expected.root or got != want:
            return LineRejected(
                ReasonCode.WRONG_NODE_KIND, f"{_kind(got)} root for {u} is wired differently from the rule"
            )
        forged = _first_difference(stated, expected)
        if forged is not None:
            return LineRejected(
                ReasonCode.WRONG_NODE_KIND,
                f"node {forged} of the graph for {u} differs from the graph built by the rules",
            )
        return None

    def _check_union(
        self, rule: Resolution, u: int, actual: TGraph, done: Sequence[MResTLine]
    ) -> LineRejected | None:
        if not isinstance(actual.root_node, THash):
            return None
        try:
            tj = self.line_table(rule.j, u, done)
            tk = self.line_table(rule.k, u, done)
            consistent = strat_consistent(tj, tk)
        except ResourceCapError as exc:
            return LineRejected(ReasonCode.UNVERIFIABLE_LINE, str(exc))
        except GraphEvalError as exc:
            return LineRejected(ReasonCode.INCONSISTENT_UNION, str(exc))
        if not consistent:
            return LineRejected(
                ReasonCode.INCONSISTENT_UNION,
                f"strategies for {u} of lines {rule.j} and {rule.k} are inconsistent",
            )
        return None


def _first_difference(stated: TGraph, expected: TGraph) -> int | None:
    """Smallest node id reachable in either graph whose definitions disagree."""
    ids = sorted(set(stated.nodes) | set(expected.nodes))
    for node_id in ids:
        if stated.nodes.get(node_id) != expected.nodes.get(node_id):
            return node_id
    return None


def _kind(node) -> str:
    if isinstance(node, TLeaf):
        return "leaf"
    if isinstance(node, TIfElse):
        return "if-else"
    return "hash"


# ── Proof shape ───────────────────────────────────────────────────────────────

def regularity(proof: Sequence[MResTLine], pivots: Iterable[int]) -> bool:
    """True iff no two resolutions on the same pivot from `pivots` lie on one path to the last line.

    Lines the last line does not depend on are ignored, as are references
    to missing or later lines.
    """
    if not proof:
        return True
    wanted = set(pivots)
    ancestors: list[int] = []
    for index, line in enumerate(proof, 1):
        mask = 0
        rule = line.rule
        if isinstance(rule, Resolution):
            for ref in (rule.j, rule.k):
                if 1 <= ref < index:
                    mask |= ancestors[ref - 1] | (1 << ref)
        ancestors.append(mask)

    live = ancestors[-1] | (1 << len(proof))
    by_pivot: dict[int, int] = {}
    for index, line in enumerate(proof, 1):
        rule = line.rule
        if not (live >> index & 1) or not isinstance(rule, Resolution) or rule.pivot not in wanted:
            continue
        same = by_pivot.get(rule.pivot, 0)
        if ancestors[index - 1] & same:
            return False
        by_pivot[rule.pivot] = same | (1 << index)
    return True


def node_counts(proof: Sequence[MResTLine], universals: Iterable[int]) -> dict[int, int]:
    """Distinct T-graph nodes per universal across all lines."""
    counts: dict[int, int] = {}
    for u in universals:
        ids: set[int] = set()
        for line in proof:
            if line.graphs is not None and u in line.graphs:
                ids.update(line.graphs[u].nodes)
        counts[u] = len(ids)
    return counts
