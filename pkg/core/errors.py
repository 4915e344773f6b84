"""Exception hierarchy for the toolkit.

Every error the library raises derives from ToolkitError so the CLI can map
failures onto exit codes with a single except clause per family. Checkers do
NOT raise on invalid proofs; they return a CheckReport. Exceptions are for
malformed input, misuse of an operation, and resource caps.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from schemas.report import CheckReport


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class ParseError(ToolkitError):
    """Raised when a text format (QDIMACS, .mrs, .mrt, .efr, graph dump) is malformed.

    Carries the offending line so callers can report it without re-reading
    the input.

    Attributes:
        line_no: 1-based line number in the input, or None when the error
            concerns the document as a whole (e.g. clause count mismatch).
        raw: The raw text of the offending line (or the whole input).
    """

    def __init__(self, message: str, raw: str = "", line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.raw = raw
        self.line_no = line_no


class QbfStructureError(ToolkitError):
    """Raised when a Qbf would violate its structural invariants."""


class UnknownVariableError(ToolkitError, KeyError):
    """Raised when a variable id is not quantified, or has the wrong quantifier."""

    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class PrefixError(ToolkitError):
    """Raised when an operation needs a variable left of u (or existential) and it is not."""


class AssignmentError(ToolkitError):
    """Raised when an assignment does not cover the variables an evaluation needs."""


class InconsistentError(ToolkitError):
    """Raised when two three-valued values or strategies clash (0 against 1)."""


class GraphEvalError(InconsistentError):
    """Raised when a Hash node of a T-graph sees 0 on one input and 1 on the other."""


class ResourceCapError(ToolkitError):
    """Raised when a configured cap (support size, variable budget, ...) is exceeded."""


class SearchBudgetExceeded(ResourceCapError):
    """Raised when bounded proof search exhausts its node budget without closing."""


class SearchSoundnessError(ToolkitError):
    """Raised when a refutation found by search fails the MRes-T checker."""


class SelectBlockedError(ToolkitError):
    """Raised when select is applied to non-isomorphic, non-trivial merge maps."""


class MergeMapError(ToolkitError):
    """Raised for malformed merge maps (dangling ids, conflicting line tags)."""


class TGraphError(ToolkitError):
    """Raised for malformed T-graphs (dangling ids, cycles, conflicting node ids)."""


class ProofStructureError(ToolkitError):
    """Raised when a proof cannot even be replayed (bad references, missing clause)."""


class InvalidProofError(ToolkitError):
    """Raised when an operation that needs a valid proof is given one that does not check.

    Attributes:
        report: The failing CheckReport.
    """

    def __init__(self, message: str, report: CheckReport | None = None):
        super().__init__(message)
        self.report = report


class ConversionError(ToolkitError):
    """Raised when a conversion's input or output fails its checker.

    Attributes:
        report: The CheckReport that caused the failure, when one exists.
    """

    def __init__(self, message: str, report: CheckReport | None = None):
        super().__init__(message)
        self.report = report


class EmissionError(ToolkitError):
    """Raised when certificate emission is requested for a proof that does not check."""

    def __init__(self, message: str, report: CheckReport | None = None):
        super().__init__(message)
        self.report = report
