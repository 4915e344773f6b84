"""Rule records shared by MRes, MRes-T and rule scripts.

A proof line is derived either by downloading a matrix clause (Axiom) or by
resolving two earlier lines on an existential pivot (Resolution). Which
strategy object accompanies the clause depends on the proof system; the
clause side of a step is the same everywhere and is derived here.
"""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum

from core.errors import UnknownVariableError
from qbf.model import Clause, Literal, Qbf, existential_subclause
from schemas.report import ReasonCode


class MergeChoice(str, Enum):
    """How an MRes line combines merge maps for a pivot left of u."""

    SELECT = "S"
    MERGE = "M"


@dataclass(frozen=True)
class Axiom:
    """Download matrix clause `index` (1-based)."""

    index: int


@dataclass(frozen=True)
class Resolution:
    """Resolve lines j and k (1-based) on pivot; the pivot occurs positively in line j.

    Attributes:
        choices: MRes only. Select/Merge per universal for pivots left of u.
            Universals without an entry default to Select.
    """

    j: int
    k: int
    pivot: int
    choices: Mapping[int, MergeChoice] = field(default_factory=dict)

    def choice(self, u: int) -> MergeChoice:
        return self.choices.get(u, MergeChoice.SELECT)


Rule = Axiom | Resolution


class LineRejected(Exception):
    """Internal signal from a line check: the line fails with this reason.

    Checkers catch it and turn it into a failed LineStatus; it never escapes
    the checker modules.
    """

    def __init__(self, reason: ReasonCode, message: str):
        super().__init__(message)
        self.reason = reason
        self.message = message


def resolvent(cj: Clause, ck: Clause, pivot: Literal) -> Clause:
    """(cj minus pivot) followed by (ck minus ¬pivot), duplicates dropped."""
    return Clause(
        tuple(lit for lit in cj.literals if lit != pivot)
        + tuple(lit for lit in ck.literals if lit != -pivot)
    )


def derive_clause(q: Qbf, index: int, rule: Rule, previous: Sequence[Clause]) -> Clause:
    """The clause a rule produces at line `index`, given the earlier clauses.

    Args:
        q: The formula being refuted.
        index: 1-based index of the line being derived.
        rule: The line's rule.
        previous: Clauses of lines 1..index-1.

    Raises:
        LineRejected: bad-axiom, bad-reference, pivot-universal,
            bad-resolvent or tautological-resolvent.
    """
    if isinstance(rule, Axiom):
        if not 1 <= rule.index <= len(q.matrix):
            raise LineRejected(ReasonCode.BAD_AXIOM, f"matrix has no clause {rule.index}")
        return existential_subclause(q, q.clause(rule.index))

    for ref in (rule.j, rule.k):
        if not 1 <= ref < index:
            raise LineRejected(
                ReasonCode.BAD_REFERENCE, f"line {index} cites line {ref}, not an earlier line"
            )
    try:
        universal = q.is_universal(rule.pivot)
    except UnknownVariableError:
        raise LineRejected(
            ReasonCode.BAD_RESOLVENT, f"pivot {rule.pivot} is not quantified"
        ) from None
    if universal:
        raise LineRejected(ReasonCode.PIVOT_UNIVERSAL, f"pivot {rule.pivot} is universal")

    cj, ck = previous[rule.j - 1], previous[rule.k - 1]
    if not cj.contains(rule.pivot):
        raise LineRejected(
            ReasonCode.BAD_RESOLVENT, f"line {rule.j} does not contain {rule.pivot}"
        )
    if not ck.contains(-rule.pivot):
        raise LineRejected(
            ReasonCode.BAD_RESOLVENT, f"line {rule.k} does not contain {-rule.pivot}"
        )
    result = resolvent(cj, ck, rule.pivot)
    if result.is_tautology:
        raise LineRejected(
            ReasonCode.TAUTOLOGICAL_RESOLVENT, f"resolvent {result} is tautological"
        )
    return result


def check_stated_clause(
    stated: Clause | None, expected: Clause, rule: Rule
) -> Clause:
    """Compare an explicitly written clause with the derived one.

    Returns:
        The clause the line carries: the stated one when given.

    Raises:
        LineRejected: When the stated clause differs (as a set) from the
            derived clause.
    """
    if stated is None:
        return expected
    if not stated.same_literals(expected):
        reason = ReasonCode.BAD_AXIOM if isinstance(rule, Axiom) else ReasonCode.BAD_RESOLVENT
        raise LineRejected(reason, f"stated clause {stated} differs from derived clause {expected}")
    return stated
