"""Rule scripts and conversions into MRes-T.

A RuleScript is the representation-free skeleton of a proof: which matrix
clause each axiom downloads and which lines each resolution combines on
which pivot. That skeleton is all MRes-T needs, since its graphs are forced
by the rules. So any proof whose steps are sound for some strategy
representation converts line for line into an MRes-T proof, and MRes
proofs convert by simply forgetting their merge maps.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from core.errors import ConversionError, ProofStructureError
from mres.checker import MResLine, check_mres
from mrest.checker import MResTChecker, MResTLine
from proofs.formats import MRT, ProofEntry, parse_proof, serialize_proof
from proofs.rules import Axiom, Resolution, Rule
from qbf.model import Qbf
from schemas.report import ReasonCode

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RuleScript:
    """An ordered list of Axiom / Resolution records.

    Raises:
        ProofStructureError: If a resolution cites a line that is not
            strictly earlier, or an index is not positive.
    """

    lines: tuple[Rule, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lines", tuple(self.lines))
        for index, rule in enumerate(self.lines, 1):
            if isinstance(rule, Axiom):
                if rule.index < 1:
                    raise ProofStructureError(f"line {index}: matrix index must be positive")
                continue
            if not (1 <= rule.j < index and 1 <= rule.k < index):
                raise ProofStructureError(f"line {index}: references must point to earlier lines")
            if rule.pivot < 1:
                raise ProofStructureError(f"line {index}: pivot must be a positive variable id")

    def __len__(self) -> int:
        return len(self.lines)

    @classmethod
    def from_text(cls, text: str | bytes) -> "RuleScript":
        """Read an .mrt document; stated clauses are ignored."""
        return cls(tuple(entry.rule for entry in parse_proof(text, MRT)))

    @classmethod
    def from_proof(cls, proof: Sequence[MResLine | MResTLine]) -> "RuleScript":
        return cls(tuple(_strip(line.rule) for line in proof))

    def to_text(self) -> str:
        return serialize_proof((ProofEntry(rule) for rule in self.lines), MRT)


def _strip(rule: Rule) -> Rule:
    if isinstance(rule, Resolution) and rule.choices:
        return Resolution(rule.j, rule.k, rule.pivot)
    return rule


def mres_to_script(q: Qbf, proof: Sequence[MResLine]) -> RuleScript:
    """Drop merge maps and select/merge annotations from a valid MRes proof.

    Raises:
        ConversionError: If the proof fails check_mres.
    """
    report = check_mres(q, proof)
    if not report.valid:
        raise ConversionError(
            f"MRes proof is invalid at line {report.failing_line}: {report.reason.value}", report
        )
    return RuleScript.from_proof(proof)


def script_to_mrest(q: Qbf, script: RuleScript, require_refutation: bool = True) -> list[MResTLine]:
    """Replay a script as an MRes-T proof and check it.

    Args:
        q: The formula the script refutes.
        script: The rule skeleton.
        require_refutation: When False, a script that checks line by line
            but does not end in the empty clause is still converted.

    Returns:
        Completed MRes-T lines (clauses and graphs), one per script line.

    Raises:
        ConversionError: If the replayed proof fails check_mrest (bad or
            tautological resolvent, inconsistent union, ...).
    """
    checked = MResTChecker(q).run([MResTLine(rule) for rule in script.lines])
    report = checked.report
    acceptable = report.valid or (
        not require_refutation and report.reason is ReasonCode.NO_REFUTATION
    )
    if not acceptable:
        raise ConversionError(
            f"script does not replay as MRes-T: {report.reason.value} at line {report.failing_line}"
            f" ({report.message})",
            report,
        )
    logger.info("Converted %d-line script to MRes-T", len(script))
    return checked.lines


def mres_to_mrest(q: Qbf, proof: Sequence[MResLine]) -> list[MResTLine]:
    """MRes to MRes-T, line for line."""
    return script_to_mrest(q, mres_to_script(q, proof))
