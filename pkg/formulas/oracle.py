"""Game-tree oracle for small QBFs.

A closed prenex QBF is a game: the players assign the quantifier blocks in
prefix order, the existential player wins iff the matrix ends up satisfied.
The formula is false iff the universal player has a winning strategy. The
oracle solves the game by memoized search and, when the universal player
wins, records for every universal and every assignment of the existentials
left of it the set of winning values, following one canonical line of
universal play (the first winning block move in row order).
"""

import itertools
import logging
from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache

from core.config import get_settings
from core.errors import ResourceCapError
from mrest.tgraph import TGraph, tgraph_from_table
from qbf.model import Qbf, Quantifier, lit_sign, lit_var
from strategy.table import StrategyTable
from strategy.values import TriVal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CountermodelOracle:
    """Winning universal moves along canonical play.

    Attributes:
        q: The formula.
        viable: Per universal, winning values keyed by the values of
            q.left_existentials(u), in that order.
        chosen: Per universal, the canonical move under the same keys.
    """

    q: Qbf
    viable: Mapping[int, Mapping[tuple[bool, ...], frozenset[TriVal]]]
    chosen: Mapping[int, Mapping[tuple[bool, ...], TriVal]]

    def _key(self, u: int, assignment: Mapping[int, bool]) -> tuple[bool, ...]:
        return tuple(assignment[x] for x in self.q.left_existentials(u))

    def viable_moves(self, u: int, assignment: Mapping[int, bool]) -> frozenset[TriVal]:
        return self.viable[u][self._key(u, assignment)]

    def table(self, u: int) -> StrategyTable:
        """The canonical strategy of u as a table over its left existentials."""
        return StrategyTable.from_function(
            u, self.q.left_existentials(u), lambda a: self.chosen[u][self._key(u, a)]
        )

    def canonical_tables(self) -> dict[int, StrategyTable]:
        return {u: self.table(u) for u in self.q.universals}

    def strategies(self) -> dict[int, TGraph]:
        """Canonical strategies as decision-tree T-graphs."""
        return {u: tgraph_from_table(table) for u, table in self.canonical_tables().items()}


def brute_force_countermodel(q: Qbf) -> CountermodelOracle | None:
    """Solve q's game; None when the existential player wins (q is true).

    Raises:
        ResourceCapError: If q has more variables than the oracle cap.
    """
    cap = get_settings().oracle_var_cap
    if len(q.variables) > cap:
        raise ResourceCapError(f"{len(q.variables)} variables exceed the oracle cap of {cap}")

    game = _Game(q)
    if not game.universal_wins(0, ()):
        logger.info("Existential player wins: the formula is true")
        return None
    viable: dict[int, dict[tuple[bool, ...], frozenset[TriVal]]] = {u: {} for u in q.universals}
    chosen: dict[int, dict[tuple[bool, ...], TriVal]] = {u: {} for u in q.universals}
    game.collect(0, (), viable, chosen)
    return CountermodelOracle(q, viable, chosen)


def is_false(q: Qbf) -> bool:
    return brute_force_countermodel(q) is not None


class _Game:
    def __init__(self, q: Qbf) -> None:
        self.q = q
        self.blocks = q.blocks
        self.order = q.variables
        self.existential_positions = [
            pos for pos, var in enumerate(self.order) if q.is_existential(var)
        ]
        self.universal_wins = lru_cache(maxsize=None)(self._universal_wins)

    def _status(self, values: tuple[bool, ...]) -> bool | None:
        """True if some clause is already false, False if all are true, else None."""
        assignment = dict(zip(self.order, values))
        undecided = False
        for clause in self.q.matrix:
            satisfied = False
            open_literal = False
            for x in clause.literals:
                value = assignment.get(lit_var(x))
                if value is None:
                    open_literal = True
                elif value == lit_sign(x):
                    satisfied = True
                    break
            if satisfied:
                continue
            if not open_literal:
                return True
            undecided = True
        return None if undecided else False

    def _universal_wins(self, level: int, values: tuple[bool, ...]) -> bool:
        status = self._status(values)
        if status is not None:
            return status
        block = self.blocks[level]
        moves = itertools.product((False, True), repeat=len(block.variables))
        if block.quantifier is Quantifier.EXISTS:
            return all(self.universal_wins(level + 1, values + bits) for bits in moves)
        return any(self.universal_wins(level + 1, values + bits) for bits in moves)

    def collect(
        self,
        level: int,
        values: tuple[bool, ...],
        viable: dict[int, dict[tuple[bool, ...], frozenset[TriVal]]],
        chosen: dict[int, dict[tuple[bool, ...], TriVal]],
    ) -> None:
        if level == len(self.blocks):
            return
        block = self.blocks[level]
        moves = list(itertools.product((False, True), repeat=len(block.variables)))
        if block.quantifier is Quantifier.EXISTS:
            for bits in moves:
                self.collect(level + 1, values + bits, viable, chosen)
            return
        winning = [bits for bits in moves if self.universal_wins(level + 1, values + bits)]
        key = tuple(values[pos] for pos in self.existential_positions if pos < len(values))
        for offset, u in enumerate(block.variables):
            viable[u][key] = frozenset(TriVal.from_bool(bits[offset]) for bits in winning)
            chosen[u][key] = TriVal.from_bool(winning[0][offset])
        self.collect(level + 1, values + winning[0], viable, chosen)
