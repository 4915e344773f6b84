"""Text formats for MRes (.mrs) and MRes-T (.mrt) proofs.

    c comment
    p mrt <#lines>              (or `p mrs <#lines>`)
    A <matrix-index> [lits 0]
    R <j> <k> <pivot> [u:S|u:M]* [lits 0]

Lines are numbered implicitly from 1. The clause part is optional; when
present the checkers verify it, when absent they derive it. Select/Merge
annotations are only meaningful in .mrs files. A rule script is an .mrt
file without clauses.

A proof bundle is a QDIMACS document followed by a proof section, so one
stream can carry both the formula and its refutation.
"""

from collections.abc import Iterable
from dataclasses import dataclass

from core.errors import ParseError
from proofs.rules import Axiom, MergeChoice, Resolution, Rule
from qbf.model import Clause

MRS = "mrs"
MRT = "mrt"


@dataclass(frozen=True)
class ProofEntry:
    """One parsed line: its rule and the clause it states (if any)."""

    rule: Rule
    clause: Clause | None = None


def parse_proof(text: str | bytes, kind: str = MRT) -> list[ProofEntry]:
    """Parse an .mrs or .mrt document.

    Args:
        text: The document.
        kind: "mrs" or "mrt"; the header must match.

    Raises:
        ParseError: On a missing or mismatched header, malformed rule line,
            annotations in an .mrt file, or a line count that differs from
            the header.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    declared: int | None = None
    entries: list[ProofEntry] = []

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if declared is not None:
                raise ParseError("second header line", raw, line_no)
            if len(tokens) != 3 or tokens[1] != kind:
                raise ParseError(f"expected header 'p {kind} <#lines>'", raw, line_no)
            declared = _int(tokens[2], raw, line_no)
            continue
        if declared is None:
            raise ParseError("rule line before the header", raw, line_no)
        entries.append(_parse_rule_line(tokens, kind, raw, line_no))

    if declared is None:
        raise ParseError(f"missing 'p {kind}' header", text[:80])
    if declared != len(entries):
        raise ParseError(f"header declares {declared} lines, found {len(entries)}", text[:80])
    return entries


def serialize_proof(entries: Iterable[ProofEntry], kind: str = MRT, with_clauses: bool = False) -> str:
    """Render entries in the .mrs/.mrt grammar."""
    entries = list(entries)
    out = [f"p {kind} {len(entries)}"]
    for entry in entries:
        rule = entry.rule
        if isinstance(rule, Axiom):
            parts = ["A", str(rule.index)]
        else:
            parts = ["R", str(rule.j), str(rule.k), str(rule.pivot)]
            if kind == MRS:
                parts += [f"{u}:{c.value}" for u, c in sorted(rule.choices.items())]
        if with_clauses and entry.clause is not None:
            parts.append(str(entry.clause))
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


def split_bundle(text: str | bytes) -> tuple[str, str | None]:
    """Split a bundle into (QDIMACS text, proof text or None).

    The proof section starts at the first `p mrt` / `p mrs` header.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.splitlines(keepends=True)
    for i, raw in enumerate(lines):
        tokens = raw.split()
        if len(tokens) >= 2 and tokens[0] == "p" and tokens[1] in (MRT, MRS):
            return "".join(lines[:i]), "".join(lines[i:])
    return text, None


# ── Private helpers ───────────────────────────────────────────────────────────

def _int(token: str, raw: str, line_no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", raw, line_no) from None


def _parse_clause(tokens: list[str], raw: str, line_no: int) -> Clause | None:
    if not tokens:
        return None
    literals = [_int(t, raw, line_no) for t in tokens]
    if literals[-1] != 0 or 0 in literals[:-1]:
        raise ParseError("clause must be a single 0-terminated literal list", raw, line_no)
    return Clause(tuple(literals[:-1]))


def _parse_rule_line(tokens: list[str], kind: str, raw: str, line_no: int) -> ProofEntry:
    head = tokens[0]
    if head == "A":
        if len(tokens) < 2:
            raise ParseError("axiom line needs a matrix index", raw, line_no)
        rule = Axiom(_int(tokens[1], raw, line_no))
        return ProofEntry(rule, _parse_clause(tokens[2:], raw, line_no))

    if head == "R":
        if len(tokens) < 4:
            raise ParseError("resolution line needs <j> <k> <pivot>", raw, line_no)
        j, k, pivot = (_int(t, raw, line_no) for t in tokens[1:4])
        if pivot <= 0:
            raise ParseError("pivot must be a positive variable id", raw, line_no)
        rest = tokens[4:]
        choices: dict[int, MergeChoice] = {}
        while rest and ":" in rest[0]:
            if kind != MRS:
                raise ParseError("select/merge annotations are only allowed in .mrs", raw, line_no)
            var_text, _, choice_text = rest.pop(0).partition(":")
            try:
                choice = MergeChoice(choice_text)
            except ValueError:
                raise ParseError(f"unknown choice {choice_text!r}, expected S or M", raw, line_no) from None
            choices[_int(var_text, raw, line_no)] = choice
        rule = Resolution(j, k, pivot, choices)
        return ProofEntry(rule, _parse_clause(rest, raw, line_no))

    raise ParseError(f"unknown rule {head!r}, expected A or R", raw, line_no)
