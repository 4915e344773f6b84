"""Bounded MRes-T proof search.

Iterative deepening over rule scripts of 1, 2, ..., max_lines lines. Only
scripts in a normal form are enumerated; every shortest refutation can be
rearranged into it without changing its length:

  * all axioms come first, in strictly increasing matrix order;
  * two consecutive resolutions where the second does not use the first
    appear in increasing (j, k, pivot) order;
  * no line repeats an earlier line's clause and strategy functions;
  * every line but the last is used later, so at any point the number of
    unused lines is at most the number of lines still to come plus one;
  * the empty clause appears only on the last line.

Candidate resolutions are tried narrowest resolvent first. Lines are built
incrementally with one MResTChecker, so a candidate costs one line check.
"""

import logging
from dataclasses import dataclass, field

from core.config import get_settings
from core.errors import ResourceCapError, SearchBudgetExceeded, SearchSoundnessError
from mrest.checker import MResTChecker, MResTLine, check_mrest
from proofs.rules import Axiom, LineRejected, Resolution, Rule, resolvent
from qbf.model import Qbf
from schemas.report import ReasonCode

logger = logging.getLogger(__name__)


def bounded_search(q: Qbf, max_lines: int, node_budget: int | None = None) -> list[MResTLine] | None:
    """The first MRes-T refutation of at most max_lines lines, or None.

    None means no refutation within the bound exists.

    Raises:
        ResourceCapError: If q has more existentials than the search cap.
        SearchBudgetExceeded: If the node budget runs out first.
        SearchSoundnessError: If the proof found fails the checker.
    """
    settings = get_settings()
    if len(q.existentials) > settings.search_existential_cap:
        raise ResourceCapError(
            f"{len(q.existentials)} existentials exceed the search cap of {settings.search_existential_cap}"
        )
    search = _Search(q, node_budget or settings.search_node_budget)
    for length in range(1, max_lines + 1):
        found = search.run(length)
        logger.debug("Depth %d: %d nodes so far", length, search.nodes)
        if found is not None:
            report = check_mrest(q, found)
            if not report.valid:
                reason = report.reason.value if report.reason else "unknown"
                raise SearchSoundnessError(f"search produced an invalid proof: {reason}")
            logger.info("Found a %d-line refutation after %d nodes", length, search.nodes)
            return found
    logger.info("No refutation within %d lines (%d nodes)", max_lines, search.nodes)
    return None


@dataclass
class _Search:
    q: Qbf
    budget: int
    nodes: int = 0
    checker: MResTChecker = field(init=False)
    lines: list[MResTLine] = field(default_factory=list)
    uses: list[int] = field(default_factory=list)
    signatures: list[tuple | None] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.checker = MResTChecker(self.q)

    def run(self, length: int) -> list[MResTLine] | None:
        self.lines.clear()
        self.uses.clear()
        self.signatures.clear()
        self.checker.forget(1)
        return self._extend(length)

    def _extend(self, length: int) -> list[MResTLine] | None:
        position = len(self.lines) + 1
        for rule in self._candidates(length):
            self.nodes += 1
            if self.nodes > self.budget:
                raise SearchBudgetExceeded(f"search budget of {self.budget} nodes exhausted")
            try:
                built, violation = self.checker.build_line(position, MResTLine(rule), self.lines)
            except LineRejected:
                continue
            if violation is not None:
                if violation.reason is ReasonCode.UNVERIFIABLE_LINE:
                    logger.warning("Skipping line %d: %s", position, violation.message)
                continue
            if built.clause.is_empty != (position == length):
                continue
            if not self._push(rule, built, length):
                continue
            if position == length:
                return list(self.lines)
            found = self._extend(length)
            if found is not None:
                return found
            self._pop(rule)
        return None

    def _candidates(self, length: int) -> list[Rule]:
        out: list[Rule] = []
        axioms_only = all(isinstance(line.rule, Axiom) for line in self.lines)
        if axioms_only:
            last = self.lines[-1].rule.index if self.lines else 0
            out.extend(Axiom(c) for c in range(last + 1, len(self.q.matrix) + 1))

        previous = self.lines[-1].rule if self.lines else None
        position = len(self.lines) + 1
        ranked: list[tuple[int, int, int, int]] = []
        for j, line_j in enumerate(self.lines, 1):
            for x in line_j.clause.literals:
                if x < 0 or not self.q.is_existential(x):
                    continue
                for k, line_k in enumerate(self.lines, 1):
                    if k == j or not line_k.clause.contains(-x):
                        continue
                    if isinstance(previous, Resolution) and position - 1 not in (j, k):
                        if (j, k, x) <= (previous.j, previous.k, previous.pivot):
                            continue
                    merged = resolvent(line_j.clause, line_k.clause, x)
                    if merged.is_tautology:
                        continue
                    ranked.append((merged.width, j, k, x))
        ranked.sort()
        out.extend(Resolution(j, k, x) for _, j, k, x in ranked)
        return out

    def _push(self, rule: Rule, built: MResTLine, length: int) -> bool:
        position = len(self.lines) + 1
        done = self.lines + [built]
        signature = self._signature(position, built, done)
        if signature is not None and signature in self.signatures:
            self.checker.forget(position)
            return False
        self.lines.append(built)
        self.uses.append(0)
        self.signatures.append(signature)
        if isinstance(rule, Resolution):
            self.uses[rule.j - 1] += 1
            self.uses[rule.k - 1] += 1
        unused = sum(1 for count in self.uses if count == 0)
        if unused > length - position + 1:
            self._pop(rule)
            return False
        return True

    def _pop(self, rule: Rule) -> None:
        position = len(self.lines)
        self.lines.pop()
        self.uses.pop()
        self.signatures.pop()
        if isinstance(rule, Resolution):
            self.uses[rule.j - 1] -= 1
            self.uses[rule.k - 1] -= 1
        self.checker.forget(position)

    def _signature(self, position: int, built: MResTLine, done: list[MResTLine]) -> tuple | None:
        try:
            tables = tuple(
                self.checker.line_table(position, u, done).minimize() for u in self.q.universals
            )
        except ResourceCapError:
            return None
        return (built.clause.literal_set, tables)
