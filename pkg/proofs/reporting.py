"""Append-only collection of line verdicts for one checker run.

Each checker walks its proof once, records one status per line, stops
checking at the first failure and marks the remaining lines skipped.
"""

import logging
import time

from schemas.report import CheckReport, LineState, LineStatus, ReasonCode, Verdict

logger = logging.getLogger(__name__)


class ReportBuilder:
    """Collects line statuses and produces the final CheckReport.

    Attributes:
        size: Number of lines in the proof being checked.
    """

    def __init__(self, size: int) -> None:
        self.size = size
        self._statuses: list[LineStatus] = []
        self._failure: LineStatus | None = None
        self._unknown = False
        self._failing_line: int | None = None
        self._started = time.perf_counter()

    @property
    def failed(self) -> bool:
        return self._failure is not None

    def ok(self, index: int) -> None:
        self._statuses.append(LineStatus(index=index, status=LineState.OK))

    def fail(self, index: int, reason: ReasonCode, message: str) -> None:
        """Record the first failure. Later calls are ignored."""
        if self._failure is not None:
            return
        status = LineStatus(index=index, status=LineState.FAILED, reason=reason, message=message)
        self._statuses.append(status)
        self._failure = status
        self._failing_line = index
        self._unknown = reason in (ReasonCode.UNVERIFIABLE_LINE, ReasonCode.VARIABLE_BUDGET)
        logger.info("Line %d rejected (%s): %s", index, reason.value, message)

    def skip(self, index: int) -> None:
        self._statuses.append(LineStatus(index=index, status=LineState.SKIPPED))

    def fail_whole(self, reason: ReasonCode, message: str, index: int | None) -> None:
        """Record a failure that concerns the proof rather than one line (e.g. no refutation)."""
        if self._failure is not None:
            return
        self._failure = LineStatus(index=index or 1, status=LineState.FAILED, reason=reason, message=message)
        self._failing_line = index
        logger.info("Proof rejected (%s): %s", reason.value, message)

    def build(self, **stats) -> CheckReport:
        """Produce the report. Extra keyword arguments fill the stats fields."""
        if self._failure is None:
            verdict = Verdict.VALID
        elif self._unknown:
            verdict = Verdict.UNKNOWN
        else:
            verdict = Verdict.INVALID
        return CheckReport(
            verdict=verdict,
            lines=self._statuses,
            failing_line=self._failing_line,
            reason=self._failure.reason if self._failure else None,
            message=self._failure.message if self._failure else None,
            size=self.size,
            elapsed_ms=(time.perf_counter() - self._started) * 1000,
            **stats,
        )
