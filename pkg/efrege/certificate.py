"""eFrege+∀red certificate lines and the .efr text format.

    c comment
    <idx> AX  <clause-index> <formula>
    <idx> EXT <var> <definition>
    <idx> INF <i1> [i2 i3 i4] <formula>
    <idx> RED <i> <u> <0|1> <formula>

Indices run 1, 2, 3, ... in file order. An EXT line asserts
`(<-> var definition)`; its text only carries the definition.
"""

from collections.abc import Iterable
from dataclasses import dataclass

from core.errors import ParseError
from efrege.formula import (
    NAME_RE,
    Formula,
    Iff,
    Var,
    format_formula,
    parse_formula,
    tokenize,
    trailing_formula_start,
)


@dataclass(frozen=True)
class AxiomRef:
    """Introduces matrix clause `clause` (1-based)."""

    clause: int


@dataclass(frozen=True)
class ExtDef:
    var: str
    definition: Formula


@dataclass(frozen=True)
class Infer:
    premises: tuple[int, ...]


@dataclass(frozen=True)
class ForallRed:
    premise: int
    u: int
    value: bool


CertRule = AxiomRef | ExtDef | Infer | ForallRed


@dataclass(frozen=True)
class EFregeLine:
    index: int
    formula: Formula
    rule: CertRule

    @classmethod
    def extension(cls, index: int, var: str, definition: Formula) -> "EFregeLine":
        return cls(index, Iff(Var(var), definition), ExtDef(var, definition))


def format_line(line: EFregeLine) -> str:
    rule = line.rule
    if isinstance(rule, ExtDef):
        return f"{line.index} EXT {rule.var} {format_formula(rule.definition)}"
    if isinstance(rule, AxiomRef):
        head = f"AX {rule.clause}"
    elif isinstance(rule, Infer):
        head = " ".join(["INF", *(str(p) for p in rule.premises)])
    else:
        head = f"RED {rule.premise} {rule.u} {int(rule.value)}"
    return f"{line.index} {head} {format_formula(line.formula)}"


def serialize_certificate(lines: Iterable[EFregeLine]) -> str:
    return "".join(format_line(line) + "\n" for line in lines)


def parse_certificate(text: str | bytes) -> list[EFregeLine]:
    """Parse an .efr document.

    Raises:
        ParseError: On malformed lines, or indices that are not 1, 2, 3, ...
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines: list[EFregeLine] = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.split()[0] == "c":
            continue
        try:
            lines.append(_parse_line(stripped, len(lines) + 1))
        except ParseError as exc:
            raise ParseError(str(exc), raw, line_no) from None
    return lines


def _parse_line(text: str, expected: int) -> EFregeLine:
    tokens = tokenize(text)
    if len(tokens) < 3:
        raise ParseError("expected '<idx> <kind> ... <formula>'", text)
    index = _int(tokens[0])
    if index != expected:
        raise ParseError(f"line index {index} out of sequence, expected {expected}", text)
    kind, rest = tokens[1], tokens[2:]
    start = trailing_formula_start(rest)
    fields, formula = rest[:start], parse_formula(rest[start:])

    if kind == "EXT":
        if len(fields) != 1 or not NAME_RE.fullmatch(fields[0]):
            raise ParseError("expected 'EXT <var> <definition>'", text)
        return EFregeLine.extension(index, fields[0], formula)
    if kind == "AX":
        if len(fields) != 1:
            raise ParseError("expected 'AX <clause-index> <formula>'", text)
        return EFregeLine(index, formula, AxiomRef(_int(fields[0])))
    if kind == "INF":
        return EFregeLine(index, formula, Infer(tuple(_int(f) for f in fields)))
    if kind == "RED":
        if len(fields) != 3 or fields[2] not in ("0", "1"):
            raise ParseError("expected 'RED <i> <u> <0|1> <formula>'", text)
        return EFregeLine(index, formula, ForallRed(_int(fields[0]), _int(fields[1]), fields[2] == "1"))
    raise ParseError(f"unknown line kind {kind!r}", text)


def _int(token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}") from None
