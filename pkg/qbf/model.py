"""QBF data model and prefix-order queries.

A Qbf is a closed prenex CNF: alternating quantifier blocks over dense
positive variable ids, and a matrix of clauses. Literals are DIMACS signed
integers throughout the toolkit (v for the positive literal, -v for the
negative one); the helpers below are the only place that interprets them.

All objects are immutable after construction and safe to share.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

from core.errors import AssignmentError, QbfStructureError, UnknownVariableError
from strategy.values import TriVal

Literal = int


def lit_var(lit: Literal) -> int:
    return lit if lit > 0 else -lit


def lit_sign(lit: Literal) -> bool:
    """True for a positive literal."""
    return lit > 0


def negate(lit: Literal) -> Literal:
    return -lit


class Quantifier(str, Enum):
    EXISTS = "e"
    FORALL = "a"


@dataclass(frozen=True)
class Clause:
    """An ordered, duplicate-free disjunction of literals.

    Duplicates are dropped on construction (first occurrence wins).
    Tautologies are representable so resolution can report them; parsers
    reject them.
    """

    literals: tuple[Literal, ...] = ()

    def __post_init__(self) -> None:
        seen: dict[int, None] = {}
        for lit in self.literals:
            if lit == 0:
                raise ValueError("0 is not a literal")
            seen.setdefault(lit, None)
        object.__setattr__(self, "literals", tuple(seen))

    @classmethod
    def of(cls, *literals: Literal) -> Clause:
        return cls(tuple(literals))

    @cached_property
    def literal_set(self) -> frozenset[Literal]:
        return frozenset(self.literals)

    @property
    def vars(self) -> frozenset[int]:
        return frozenset(lit_var(lit) for lit in self.literals)

    @property
    def width(self) -> int:
        return len(self.vars)

    @property
    def is_empty(self) -> bool:
        return not self.literals

    @property
    def is_tautology(self) -> bool:
        lits = self.literal_set
        return any(-lit in lits for lit in lits)

    def contains(self, lit: Literal) -> bool:
        return lit in self.literal_set

    def same_literals(self, other: Clause) -> bool:
        """Set equality; the order of literals is presentation only."""
        return self.literal_set == other.literal_set

    def __iter__(self):
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __str__(self) -> str:
        return " ".join(str(lit) for lit in self.literals) + " 0" if self.literals else "0"


@dataclass(frozen=True)
class Block:
    quantifier: Quantifier
    variables: tuple[int, ...]


@dataclass(frozen=True)
class PrefixOrder:
    """Block index per quantified variable.

    y ≤ x iff level(y) ≤ level(x); variables of one block are mutually
    equivalent, so left_of is strict and irreflexive within a block.
    """

    level: Mapping[int, int]

    def block_of(self, var: int) -> int:
        try:
            return self.level[var]
        except KeyError:
            raise UnknownVariableError(f"variable {var} is not quantified") from None

    def left_of(self, y: int, x: int) -> bool:
        return self.block_of(y) < self.block_of(x)


def left_of(order: PrefixOrder, y: int, x: int) -> bool:
    """True iff y's block is strictly left of x's block.

    Raises:
        UnknownVariableError: If either variable is not quantified.
    """
    return order.left_of(y, x)


@dataclass(frozen=True)
class Qbf:
    """A closed prenex CNF formula.

    Attributes:
        blocks: Alternating quantifier blocks, outermost first.
        matrix: The clauses. Matrix indices used by proofs are 1-based.
        var_names: Display names; ids without an entry print as the id.
        num_vars: Declared variable count (at least the largest id used).

    Raises:
        QbfStructureError: If blocks do not alternate, are empty, overlap,
            or a matrix variable is unquantified.
    """

    blocks: tuple[Block, ...]
    matrix: tuple[Clause, ...] = ()
    var_names: Mapping[int, str] = field(default_factory=dict)
    num_vars: int = 0

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for i, block in enumerate(self.blocks):
            if not block.variables:
                raise QbfStructureError(f"block {i} is empty")
            if i and block.quantifier is self.blocks[i - 1].quantifier:
                raise QbfStructureError(f"blocks {i - 1} and {i} do not alternate")
            for var in block.variables:
                if var < 1:
                    raise QbfStructureError(f"variable id {var} is not positive")
                if var in seen:
                    raise QbfStructureError(f"variable {var} is quantified twice")
                seen.add(var)
        for index, clause in enumerate(self.matrix, 1):
            missing = clause.vars - seen
            if missing:
                raise QbfStructureError(
                    f"clause {index} uses unquantified variables {sorted(missing)}"
                )
        names = {var: text for var, text in self.var_names.items() if text != str(var)}
        object.__setattr__(self, "var_names", names)
        highest = max(seen, default=0)
        if self.num_vars < highest:
            object.__setattr__(self, "num_vars", highest)

    @classmethod
    def build(
        cls,
        prefix: Iterable[tuple[Quantifier | str, Iterable[int]]],
        clauses: Iterable[Iterable[Literal]],
        var_names: Mapping[int, str] | None = None,
    ) -> Qbf:
        """Convenience constructor that merges adjacent same-quantifier blocks.

        Example:
            Qbf.build([("e", [1]), ("a", [2]), ("e", [3])], [[3, 1, 2], [3, -1]])
        """
        blocks: list[Block] = []
        for quant, variables in prefix:
            quant = Quantifier(quant)
            variables = tuple(variables)
            if not variables:
                continue
            if blocks and blocks[-1].quantifier is quant:
                blocks[-1] = Block(quant, blocks[-1].variables + variables)
            else:
                blocks.append(Block(quant, variables))
        return cls(
            blocks=tuple(blocks),
            matrix=tuple(Clause(tuple(c)) for c in clauses),
            var_names=dict(var_names or {}),
        )

    # ── Prefix queries ────────────────────────────────────────────────────────

    @cached_property
    def order(self) -> PrefixOrder:
        return PrefixOrder(
            {var: i for i, block in enumerate(self.blocks) for var in block.variables}
        )

    @cached_property
    def _quantifier(self) -> dict[int, Quantifier]:
        return {var: block.quantifier for block in self.blocks for var in block.variables}

    @cached_property
    def variables(self) -> tuple[int, ...]:
        """All quantified variables in prefix order."""
        return tuple(var for block in self.blocks for var in block.variables)

    @cached_property
    def existentials(self) -> tuple[int, ...]:
        return tuple(v for v in self.variables if self._quantifier[v] is Quantifier.EXISTS)

    @cached_property
    def universals(self) -> tuple[int, ...]:
        return tuple(v for v in self.variables if self._quantifier[v] is Quantifier.FORALL)

    def quantifier_of(self, var: int) -> Quantifier:
        try:
            return self._quantifier[var]
        except KeyError:
            raise UnknownVariableError(f"variable {var} is not quantified") from None

    def is_universal(self, var: int) -> bool:
        return self.quantifier_of(var) is Quantifier.FORALL

    def is_existential(self, var: int) -> bool:
        return self.quantifier_of(var) is Quantifier.EXISTS

    def require_universal(self, var: int) -> None:
        if not self.is_universal(var):
            raise UnknownVariableError(f"variable {var} is not universal")

    def left_existentials(self, u: int) -> tuple[int, ...]:
        """L_Q(u): the existential variables left of u, in prefix order."""
        level = self.order.block_of(u)
        return tuple(x for x in self.existentials if self.order.level[x] < level)

    def name(self, var: int) -> str:
        return self.var_names.get(var, str(var))

    def clause(self, index: int) -> Clause:
        """Matrix clause by 1-based index."""
        if not 1 <= index <= len(self.matrix):
            raise IndexError(f"matrix has no clause {index}")
        return self.matrix[index - 1]


# ── Clause-level queries ──────────────────────────────────────────────────────

def existential_subclause(q: Qbf, c: Clause) -> Clause:
    """Drop the universal literals of c, keeping order."""
    return Clause(tuple(lit for lit in c.literals if q.is_existential(lit_var(lit))))


def falsifying_u_literal(q: Qbf, c: Clause, u: int) -> TriVal:
    """0 if u occurs positively in c, 1 if negatively, * if not at all.

    Raises:
        UnknownVariableError: If u is not universal in q.
    """
    q.require_universal(u)
    if c.contains(u):
        return TriVal.ZERO
    if c.contains(-u):
        return TriVal.ONE
    return TriVal.STAR


def clause_falsified(c: Clause, assignment: Mapping[int, bool]) -> bool:
    """True iff every literal of c is assigned and false.

    Unassigned variables keep the clause alive.
    """
    for lit in c.literals:
        value = assignment.get(lit_var(lit))
        if value is None or value == lit_sign(lit):
            return False
    return True


def matrix_eval(q: Qbf, alpha: Mapping[int, bool]) -> bool:
    """True iff every matrix clause is satisfied by the complete assignment alpha.

    Raises:
        AssignmentError: If alpha misses a quantified variable.
    """
    missing = [v for v in q.variables if v not in alpha]
    if missing:
        raise AssignmentError(f"assignment misses variables {missing}")
    return not any(clause_falsified(c, alpha) for c in q.matrix)
