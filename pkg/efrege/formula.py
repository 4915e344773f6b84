"""Propositional formulas for eFrege+∀red certificates.

Formulas are immutable trees. The text syntax is a parenthesized prefix
grammar:

    T | F | <name> | (~ f) | (& f g) | (| f g) | (-> f g) | (<-> f g) | (^ f g)

Names match [A-Za-z0-9_]+. Entailment is decided semantically with bitset
truth tables: each variable is an integer whose 2^n bits list its value in
every row, so one Python big-int operation evaluates a connective on all
rows at once.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from core.errors import ParseError, ResourceCapError

NAME_RE = re.compile(r"[A-Za-z0-9_]+")
_TOKEN_RE = re.compile(r"\s*(<->|->|[()~&|^]|[A-Za-z0-9_]+)")


class _Printable:
    def __str__(self) -> str:
        return format_formula(self)  # type: ignore[arg-type]


@dataclass(frozen=True, repr=False)
class Const(_Printable):
    value: bool

    def __repr__(self) -> str:
        return "T" if self.value else "F"


@dataclass(frozen=True, repr=False)
class Var(_Printable):
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Not(_Printable):
    arg: Formula


@dataclass(frozen=True)
class And(_Printable):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(_Printable):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(_Printable):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(_Printable):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Xor(_Printable):
    left: Formula
    right: Formula


Formula = Const | Var | Not | And | Or | Implies | Iff | Xor
Binary = And | Or | Implies | Iff | Xor

TRUE = Const(True)
FALSE = Const(False)

_SYMBOL: dict[type, str] = {And: "&", Or: "|", Implies: "->", Iff: "<->", Xor: "^"}
_BINARY: dict[str, type] = {sym: cls for cls, sym in _SYMBOL.items()}


# ── Builders ──────────────────────────────────────────────────────────────────

def lit(name: str, positive: bool = True) -> Formula:
    return Var(name) if positive else Not(Var(name))


def conj(items: Iterable[Formula]) -> Formula:
    """Right-nested conjunction; T when empty."""
    parts = list(items)
    if not parts:
        return TRUE
    out = parts[-1]
    for f in reversed(parts[:-1]):
        out = And(f, out)
    return out


def disj(items: Iterable[Formula]) -> Formula:
    """Right-nested disjunction; F when empty."""
    parts = list(items)
    if not parts:
        return FALSE
    out = parts[-1]
    for f in reversed(parts[:-1]):
        out = Or(f, out)
    return out


def guarded(conditions: Sequence[Formula], body: Formula) -> Formula:
    """conditions → body, or just body when there are no conditions."""
    return Implies(conj(conditions), body) if conditions else body


# ── Structure ─────────────────────────────────────────────────────────────────

def variables(f: Formula) -> frozenset[str]:
    names: set[str] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            names.add(node.name)
        elif isinstance(node, Not):
            stack.append(node.arg)
        elif not isinstance(node, Const):
            stack.extend((node.left, node.right))
    return frozenset(names)


def substitute(f: Formula, name: str, value: Formula) -> Formula:
    """Replace every occurrence of the variable `name` by `value`."""
    if isinstance(f, Var):
        return value if f.name == name else f
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.arg, name, value))
    return type(f)(substitute(f.left, name, value), substitute(f.right, name, value))


# ── Semantics ─────────────────────────────────────────────────────────────────

def evaluate(f: Formula, assignment: Mapping[str, bool]) -> bool:
    """Truth value under a complete assignment of f's variables.

    Raises:
        KeyError: If a variable of f is unassigned.
    """
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Var):
        return assignment[f.name]
    if isinstance(f, Not):
        return not evaluate(f.arg, assignment)
    a, b = evaluate(f.left, assignment), evaluate(f.right, assignment)
    if isinstance(f, And):
        return a and b
    if isinstance(f, Or):
        return a or b
    if isinstance(f, Implies):
        return (not a) or b
    if isinstance(f, Iff):
        return a == b
    return a != b


def _column(k: int, rows: int) -> int:
    """Bitset of variable k over `rows` rows: bit r is set iff bit k of r is."""
    block = 1 << k
    mask = ((1 << block) - 1) << block
    width = block << 1
    while width < rows:
        mask |= mask << width
        width <<= 1
    return mask


def truth_mask(f: Formula, columns: Mapping[str, int], full: int) -> int:
    if isinstance(f, Const):
        return full if f.value else 0
    if isinstance(f, Var):
        return columns[f.name]
    if isinstance(f, Not):
        return full ^ truth_mask(f.arg, columns, full)
    a, b = truth_mask(f.left, columns, full), truth_mask(f.right, columns, full)
    if isinstance(f, And):
        return a & b
    if isinstance(f, Or):
        return a | b
    if isinstance(f, Implies):
        return (full ^ a) | b
    if isinstance(f, Iff):
        return full ^ (a ^ b)
    return a ^ b


def entails(premises: Sequence[Formula], conclusion: Formula, var_cap: int) -> bool:
    """True iff every assignment satisfying all premises satisfies the conclusion.

    Raises:
        ResourceCapError: If more than var_cap distinct variables occur.
    """
    names = sorted(set().union(variables(conclusion), *(variables(p) for p in premises)))
    if len(names) > var_cap:
        raise ResourceCapError(f"{len(names)} variables exceed the entailment cap of {var_cap}")
    rows = 1 << len(names)
    full = (1 << rows) - 1
    columns = {name: _column(k, rows) for k, name in enumerate(names)}
    holds = full
    for p in premises:
        holds &= truth_mask(p, columns, full)
        if not holds:
            return True
    return holds & ~truth_mask(conclusion, columns, full) == 0


# ── Text form ─────────────────────────────────────────────────────────────────

def format_formula(f: Formula) -> str:
    if isinstance(f, Const):
        return "T" if f.value else "F"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        return f"(~ {format_formula(f.arg)})"
    return f"({_SYMBOL[type(f)]} {format_formula(f.left)} {format_formula(f.right)})"


def tokenize(text: str) -> list[str]:
    """Split formula text into tokens.

    Raises:
        ParseError: On characters outside the grammar.
    """
    tokens: list[str] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} in formula", text)
        tokens.append(match.group(1))
        pos = match.end()
    return tokens


def parse_formula(text: str | Sequence[str]) -> Formula:
    """Parse one formula from text (or an already tokenized sequence).

    Raises:
        ParseError: On malformed input or trailing tokens.
    """
    tokens = tokenize(text) if isinstance(text, str) else list(text)
    raw = " ".join(tokens)
    formula, pos = _parse(tokens, 0, raw)
    if pos != len(tokens):
        raise ParseError(f"unexpected {tokens[pos]!r} after formula", raw)
    return formula


def _parse(tokens: Sequence[str], pos: int, raw: str) -> tuple[Formula, int]:
    if pos >= len(tokens):
        raise ParseError("formula ends early", raw)
    token = tokens[pos]
    if token == "T":
        return TRUE, pos + 1
    if token == "F":
        return FALSE, pos + 1
    if NAME_RE.fullmatch(token):
        return Var(token), pos + 1
    if token != "(":
        raise ParseError(f"unexpected {token!r} in formula", raw)
    if pos + 1 >= len(tokens):
        raise ParseError("formula ends early", raw)
    op = tokens[pos + 1]
    if op == "~":
        arg, pos = _parse(tokens, pos + 2, raw)
        node: Formula = Not(arg)
    elif op in _BINARY:
        left, pos = _parse(tokens, pos + 2, raw)
        right, pos = _parse(tokens, pos, raw)
        node = _BINARY[op](left, right)
    else:
        raise ParseError(f"unknown connective {op!r}", raw)
    if pos >= len(tokens) or tokens[pos] != ")":
        raise ParseError("missing ')'", raw)
    return node, pos + 1


def trailing_formula_start(tokens: Sequence[str]) -> int:
    """Index where the last complete formula of a token list begins.

    Certificate lines end in a formula preceded by integer fields; a bare
    numeric name is itself a formula, so the formula is located from the
    right: a final ')' is matched back to its '(' and anything else is a
    single-token formula.

    Raises:
        ParseError: If the parentheses do not balance.
    """
    if not tokens:
        raise ParseError("missing formula")
    if tokens[-1] != ")":
        return len(tokens) - 1
    depth = 0
    for pos in range(len(tokens) - 1, -1, -1):
        if tokens[pos] == ")":
            depth += 1
        elif tokens[pos] == "(":
            depth -= 1
            if depth == 0:
                return pos
    raise ParseError("unbalanced parentheses", " ".join(tokens))
