"""Independent checker for eFrege+∀red certificates.

Line rules:

    AX   the formula is the rendering of the cited matrix clause
    EXT  the variable is a well-formed extension name, has not occurred
         before, does not occur in its definition, and every variable of
         the definition sits at or left of its prefix level
    INF  at most `max_premises` earlier lines, and their conjunction
         entails the formula (truth tables over at most `entail_var_cap`
         variables)
    RED  u is universal, nothing in the premise sits right of u, and the
         formula is the premise with u replaced by the stated constant

A certificate is valid iff every line passes and the last formula is F.
Exceeding the variable budget makes the verdict unknown, not invalid.
"""

import logging
from collections.abc import Sequence

from core.config import get_settings
from core.errors import ResourceCapError, UnknownVariableError
from efrege.certificate import AxiomRef, EFregeLine, ExtDef, ForallRed, Infer
from efrege.extensions import ExtendedPrefix, clause_formula
from efrege.formula import FALSE, TRUE, Iff, Var, entails, substitute, variables
from proofs.reporting import ReportBuilder
from qbf.model import Qbf
from schemas.report import CheckReport, ReasonCode

logger = logging.getLogger(__name__)


class _Rejected(Exception):
    def __init__(self, reason: ReasonCode, message: str) -> None:
        super().__init__(message)
        self.reason = reason
        self.message = message


def check_efrege(q: Qbf, cert: Sequence[EFregeLine]) -> CheckReport:
    """Check a certificate against q, whose prefix is extended by the EXT lines."""
    settings = get_settings()
    prefix = ExtendedPrefix(q)
    seen: set[str] = set()
    builder = ReportBuilder(len(cert))

    for position, line in enumerate(cert, 1):
        if builder.failed:
            builder.skip(position)
            continue
        try:
            _check_line(q, prefix, seen, cert, position, line, settings.max_premises, settings.entail_var_cap)
        except _Rejected as rejected:
            builder.fail(position, rejected.reason, rejected.message)
            continue
        seen |= variables(line.formula)
        builder.ok(position)

    if not builder.failed:
        if not cert:
            builder.fail_whole(ReasonCode.NO_REFUTATION, "empty certificate", None)
        elif cert[-1].formula != FALSE:
            builder.fail_whole(ReasonCode.NO_REFUTATION, "last formula is not F", len(cert))
    return builder.build()


def _check_line(
    q: Qbf,
    prefix: ExtendedPrefix,
    seen: set[str],
    cert: Sequence[EFregeLine],
    position: int,
    line: EFregeLine,
    max_premises: int,
    var_cap: int,
) -> None:
    if line.index != position:
        raise _Rejected(ReasonCode.BAD_REFERENCE, f"line carries index {line.index}")
    rule = line.rule

    if isinstance(rule, ExtDef):
        _check_extension(prefix, seen, line, rule)
        return

    unknown = sorted(name for name in variables(line.formula) if prefix.level(name) is None)
    if unknown:
        raise _Rejected(ReasonCode.BAD_PLACEMENT, f"variables {unknown} are not in the prefix")

    if isinstance(rule, AxiomRef):
        if not 1 <= rule.clause <= len(q.matrix):
            raise _Rejected(ReasonCode.BAD_REFERENCE, f"matrix has no clause {rule.clause}")
        if line.formula != clause_formula(q.clause(rule.clause)):
            raise _Rejected(ReasonCode.BAD_AXIOM_FORMULA, f"formula is not matrix clause {rule.clause}")
        return

    if isinstance(rule, Infer):
        if len(rule.premises) > max_premises:
            raise _Rejected(
                ReasonCode.TOO_MANY_PREMISES, f"{len(rule.premises)} premises, at most {max_premises} allowed"
            )
        _check_references(rule.premises, position)
        premises = [cert[p - 1].formula for p in rule.premises]
        try:
            if not entails(premises, line.formula, var_cap):
                raise _Rejected(ReasonCode.NOT_ENTAILED, f"formula does not follow from lines {list(rule.premises)}")
        except ResourceCapError as exc:
            raise _Rejected(ReasonCode.VARIABLE_BUDGET, str(exc)) from None
        return

    _check_reduction(q, prefix, cert, position, line, rule)


def _check_references(refs: Sequence[int], position: int) -> None:
    for ref in refs:
        if not 1 <= ref < position:
            raise _Rejected(ReasonCode.BAD_REFERENCE, f"line {ref} is not an earlier line")


def _check_extension(prefix: ExtendedPrefix, seen: set[str], line: EFregeLine, rule: ExtDef) -> None:
    name = rule.var
    if prefix.qbf_var(name) is not None or name in seen or prefix.is_defined(name):
        raise _Rejected(ReasonCode.NOT_FRESH, f"{name} has occurred before")
    if line.formula != Iff(Var(name), rule.definition):
        raise _Rejected(ReasonCode.NOT_ENTAILED, f"line formula is not the definition of {name}")
    used = variables(rule.definition)
    if name in used:
        raise _Rejected(ReasonCode.NOT_FRESH, f"{name} occurs in its own definition")
    level = prefix.placement(name)
    if level is None:
        raise _Rejected(ReasonCode.BAD_PLACEMENT, f"{name} does not name an extension of a universal")
    for var in sorted(used):
        var_level = prefix.level(var)
        if var_level is None:
            raise _Rejected(ReasonCode.BAD_PLACEMENT, f"definition of {name} uses unknown {var}")
        if var_level > level:
            raise _Rejected(ReasonCode.BAD_PLACEMENT, f"definition of {name} uses {var}, which is right of it")
    prefix.define(name, level)


def _check_reduction(
    q: Qbf, prefix: ExtendedPrefix, cert: Sequence[EFregeLine], position: int, line: EFregeLine, rule: ForallRed
) -> None:
    _check_references((rule.premise,), position)
    try:
        if not q.is_universal(rule.u):
            raise _Rejected(ReasonCode.BAD_REDUCTION, f"{rule.u} is not universal")
    except UnknownVariableError:
        raise _Rejected(ReasonCode.BAD_REDUCTION, f"{rule.u} is not quantified") from None
    premise = cert[rule.premise - 1].formula
    u_level = 2 * q.order.block_of(rule.u)
    right = sorted(name for name in variables(premise) if (prefix.level(name) or 0) > u_level)
    if right:
        raise _Rejected(ReasonCode.BAD_REDUCTION, f"premise mentions {right}, right of {rule.u}")
    if line.formula != substitute(premise, str(rule.u), TRUE if rule.value else FALSE):
        raise _Rejected(
            ReasonCode.BAD_REDUCTION, f"formula is not line {rule.premise} with {rule.u} set to {int(rule.value)}"
        )
