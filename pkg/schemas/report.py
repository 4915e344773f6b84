"""Checker report schemas.

Every checker in the toolkit (MRes, MRes-T, eFrege+∀red) returns a
CheckReport. Reports cross the library boundary: the CLI prints them as
key: value lines or serializes them as JSON, so they are pydantic models.
"""

from enum import Enum

from pydantic import BaseModel, Field


class Verdict(str, Enum):
    """Whole-proof outcome.

    Values:
        VALID: Every line passed and the proof ends in the empty clause
            (or the false formula, for certificates).
        INVALID: Some line failed, or no refutation was derived.
        UNKNOWN: A resource cap stopped the checker before it could decide.
    """

    VALID = "valid"
    INVALID = "invalid"
    UNKNOWN = "unknown"


class ReasonCode(str, Enum):
    """Why a line failed. Values are the strings printed by the CLI."""

    BAD_AXIOM = "bad-axiom"
    BAD_RESOLVENT = "bad-resolvent"
    TAUTOLOGICAL_RESOLVENT = "tautological-resolvent"
    INCONSISTENT_UNION = "inconsistent-union"
    WRONG_NODE_KIND = "wrong-node-kind"
    PIVOT_UNIVERSAL = "pivot-universal"
    BAD_REFERENCE = "bad-reference"
    BLOCKED_SELECT = "blocked-select"
    BAD_MERGE = "bad-merge"
    MISSING_STRATEGY = "missing-strategy"
    NO_REFUTATION = "no-refutation"
    UNVERIFIABLE_LINE = "unverifiable-line"
    # certificate checker
    NOT_ENTAILED = "not-entailed"
    TOO_MANY_PREMISES = "too-many-premises"
    NOT_FRESH = "not-fresh"
    BAD_PLACEMENT = "bad-placement"
    BAD_REDUCTION = "bad-reduction"
    BAD_AXIOM_FORMULA = "bad-axiom-formula"
    VARIABLE_BUDGET = "variable-budget"


class LineState(str, Enum):
    OK = "ok"
    FAILED = "failed"
    SKIPPED = "skipped"


class LineStatus(BaseModel):
    """Outcome for one proof or certificate line.

    Attributes:
        index: 1-based line index.
        status: ok, failed, or skipped (lines after the first failure are
            not checked).
        reason: Reason code when status is failed.
        message: Human-readable detail for failed lines.
    """

    index: int = Field(ge=1)
    status: LineState
    reason: ReasonCode | None = None
    message: str | None = None


class CheckReport(BaseModel):
    """Result of running one checker over one proof.

    Attributes:
        verdict: valid, invalid or unknown.
        lines: Per-line statuses, in line order.
        failing_line: Index of the first failing line. None when valid, or
            when the proof is empty.
        reason: Reason code of the first failure.
        message: Human-readable description of the first failure.
        size: Number of proof lines (|π| = m).
        max_width: Largest clause width in the proof. 0 for certificates.
        regular: Regularity over all existential pivots (MRes-T only).
        node_count: Distinct T-graph nodes per universal, keyed by
            variable id (MRes-T only).
        elapsed_ms: Wall-clock checking time.
    """

    verdict: Verdict
    lines: list[LineStatus] = Field(default_factory=list)
    failing_line: int | None = None
    reason: ReasonCode | None = None
    message: str | None = None
    size: int = 0
    max_width: int = 0
    regular: bool | None = None
    node_count: dict[int, int] = Field(default_factory=dict)
    elapsed_ms: float = 0.0

    @property
    def valid(self) -> bool:
        return self.verdict is Verdict.VALID


class JsonReport(BaseModel):
    """The versioned object printed by `--json`.

    Attributes:
        schema_version: Serialized as "schema". Bumped on breaking changes.
    """

    model_config = {"populate_by_name": True}

    schema_version: int = Field(default=1, alias="schema")
    verdict: str
    failing_line: int | None = None
    reason: str | None = None
    size: int | None = None
    width: int | None = None
    regular: bool | None = None

    @classmethod
    def from_report(cls, report: CheckReport) -> "JsonReport":
        return cls(
            verdict=report.verdict.value,
            failing_line=report.failing_line,
            reason=report.reason.value if report.reason else None,
            size=report.size,
            width=report.max_width,
            regular=report.regular,
        )
