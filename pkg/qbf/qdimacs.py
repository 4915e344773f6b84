"""QDIMACS reader and writer.

Accepted input:

    c name 1 x11          optional display name for variable 1
    p cnf <vars> <clauses>
    e 1 0                 prefix lines, before any clause
    a 2 0
    1 2 0                 clauses, 0-terminated (may span lines)

Unquantified matrix variables go to an implicit outermost existential block.
Serialization is byte-stable and round-trips through parse_qdimacs.
"""

import logging

from core.errors import ParseError, QbfStructureError
from qbf.model import Block, Clause, Qbf, Quantifier, lit_var

logger = logging.getLogger(__name__)


def parse_qdimacs(text: str | bytes) -> Qbf:
    """Parse QDIMACS text into a Qbf.

    Args:
        text: The document, as str or UTF-8 bytes.

    Returns:
        The parsed Qbf. Adjacent blocks with the same quantifier are merged.

    Raises:
        ParseError: Malformed p-line, prefix after clauses, variable out of
            the declared range, tautological clause, duplicate
            quantification, unterminated clause, or a clause count that
            does not match the p-line.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    num_vars: int | None = None
    num_clauses = 0
    names: dict[int, str] = {}
    blocks: list[Block] = []
    quantified: set[int] = set()
    clauses: list[Clause] = []
    pending: list[int] = []
    pending_line = 0

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            _read_comment(line, names, line_no)
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise ParseError("second p-line", raw, line_no)
            num_vars, num_clauses = _read_problem_line(line, raw, line_no)
            continue
        if num_vars is None:
            raise ParseError("content before the p-line", raw, line_no)

        head = line.split()[0]
        if head in ("e", "a"):
            if clauses or pending:
                raise ParseError("quantifier line after the first clause", raw, line_no)
            variables = _read_ints(line.split()[1:], raw, line_no)
            if not variables or variables[-1] != 0:
                raise ParseError("prefix line must end with 0", raw, line_no)
            variables = variables[:-1]
            for var in variables:
                if not 1 <= var <= num_vars:
                    raise ParseError(f"variable {var} outside 1..{num_vars}", raw, line_no)
                if var in quantified:
                    raise ParseError(f"variable {var} quantified twice", raw, line_no)
                quantified.add(var)
            _append_block(blocks, Quantifier(head), tuple(variables))
            continue

        for lit in _read_ints(line.split(), raw, line_no):
            if lit == 0:
                clause = Clause(tuple(pending))
                if clause.is_tautology:
                    raise ParseError("tautological clause", raw, line_no)
                clauses.append(clause)
                pending = []
                continue
            if not 1 <= lit_var(lit) <= num_vars:
                raise ParseError(f"literal {lit} outside 1..{num_vars}", raw, line_no)
            if not pending:
                pending_line = line_no
            pending.append(lit)

    if num_vars is None:
        raise ParseError("missing p-line", text[:80])
    if pending:
        raise ParseError("unterminated clause", " ".join(map(str, pending)), pending_line)
    if len(clauses) != num_clauses:
        raise ParseError(f"p-line declares {num_clauses} clauses, found {len(clauses)}", text[:80])

    free = sorted({lit_var(lit) for c in clauses for lit in c} - quantified)
    if free:
        logger.debug("Placing free variables %s in an outermost existential block", free)
        if blocks and blocks[0].quantifier is Quantifier.EXISTS:
            blocks[0] = Block(Quantifier.EXISTS, tuple(free) + blocks[0].variables)
        else:
            blocks.insert(0, Block(Quantifier.EXISTS, tuple(free)))

    try:
        return Qbf(blocks=tuple(blocks), matrix=tuple(clauses), var_names=names, num_vars=num_vars)
    except QbfStructureError as exc:
        raise ParseError(str(exc), text[:80]) from exc


def serialize_qdimacs(q: Qbf) -> str:
    """Render q as QDIMACS. Output is deterministic for a given Qbf."""
    out: list[str] = []
    for var in sorted(q.var_names):
        out.append(f"c name {var} {q.var_names[var]}")
    out.append(f"p cnf {q.num_vars} {len(q.matrix)}")
    for block in q.blocks:
        out.append(" ".join([block.quantifier.value, *map(str, block.variables), "0"]))
    for clause in q.matrix:
        out.append(str(clause))
    return "\n".join(out) + "\n"


# ── Private helpers ───────────────────────────────────────────────────────────

def _read_comment(line: str, names: dict[int, str], line_no: int) -> None:
    parts = line.split(maxsplit=3)
    if len(parts) == 4 and parts[1] == "name":
        try:
            names[int(parts[2])] = parts[3].strip()
        except ValueError:
            raise ParseError("bad variable id in name comment", line, line_no) from None


def _read_problem_line(line: str, raw: str, line_no: int) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 4 or parts[1] != "cnf":
        raise ParseError("malformed p-line, expected 'p cnf <vars> <clauses>'", raw, line_no)
    try:
        num_vars, num_clauses = int(parts[2]), int(parts[3])
    except ValueError:
        raise ParseError("malformed p-line counts", raw, line_no) from None
    if num_vars < 0 or num_clauses < 0:
        raise ParseError("negative p-line counts", raw, line_no)
    return num_vars, num_clauses


def _read_ints(tokens: list[str], raw: str, line_no: int) -> list[int]:
    try:
        return [int(tok) for tok in tokens]
    except ValueError:
        raise ParseError("expected integers", raw, line_no) from None


def _append_block(blocks: list[Block], quantifier: Quantifier, variables: tuple[int, ...]) -> None:
    if not variables:
        return
    if blocks and blocks[-1].quantifier is quantifier:
        blocks[-1] = Block(quantifier, blocks[-1].variables + variables)
    else:
        blocks.append(Block(quantifier, variables))
