"""Explicit strategy tables and the three strategy operations.

A StrategyTable lists, for one universal u, the value in {0, 1, *} chosen
for every complete assignment of its support. Tables are the ground-truth
semantics of the toolkit: merge maps and T-graphs are compared by compiling
them to tables, never to each other.

Row layout: the support is kept sorted by variable id, and row i assigns
support[k] the bit (i >> (n - 1 - k)) & 1, so support[0] is the most
significant bit.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass

from core.config import get_settings
from core.errors import AssignmentError, InconsistentError, PrefixError, ResourceCapError
from qbf.model import Qbf
from strategy.values import TriVal

logger = logging.getLogger(__name__)


def _normalize(support: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(support)))


def check_support_cap(size: int) -> None:
    """Raise ResourceCapError when a support of this size may not be tabulated."""
    cap = get_settings().table_support_cap
    if size > cap:
        raise ResourceCapError(f"support of {size} variables exceeds the table cap of {cap}")


@dataclass(frozen=True)
class StrategyTable:
    """The function table of one universal's strategy.

    Attributes:
        u: The universal variable this table assigns.
        support: Sorted existential variables the table reads.
        rows: 2^len(support) values, indexed as described in the module doc.
    """

    u: int
    support: tuple[int, ...]
    rows: tuple[TriVal, ...]

    def __post_init__(self) -> None:
        if list(self.support) != sorted(set(self.support)):
            raise ValueError(f"support must be sorted and duplicate-free: {self.support}")
        if len(self.rows) != 1 << len(self.support):
            raise ValueError(
                f"table over {len(self.support)} variables needs "
                f"{1 << len(self.support)} rows, got {len(self.rows)}"
            )

    # ── Constructors ─────────────────────────────────────────────────────────

    @classmethod
    def constant(cls, u: int, value: TriVal | str, support: Iterable[int] = ()) -> StrategyTable:
        sup = _normalize(support)
        check_support_cap(len(sup))
        return cls(u, sup, (TriVal(value),) * (1 << len(sup)))

    @classmethod
    def from_function(
        cls,
        u: int,
        support: Iterable[int],
        fn: Callable[[dict[int, bool]], TriVal],
    ) -> StrategyTable:
        """Tabulate fn over every complete assignment of support."""
        sup = _normalize(support)
        check_support_cap(len(sup))
        return cls(u, sup, tuple(fn(a) for a in iter_assignments(sup)))

    @classmethod
    def of(
        cls,
        u: int,
        support: Iterable[int],
        rows: Mapping[tuple[int, ...], TriVal | str],
    ) -> StrategyTable:
        """Build from rows keyed by bit tuples in sorted-support order.

        Example:
            StrategyTable.of(u, [x], {(0,): "0", (1,): "*"})
        """
        sup = _normalize(support)
        values = []
        for bits in itertools.product((0, 1), repeat=len(sup)):
            if bits not in rows:
                raise ValueError(f"missing row {bits}")
            values.append(TriVal(rows[bits]))
        return cls(u, sup, tuple(values))

    # ── Queries ──────────────────────────────────────────────────────────────

    def value(self, assignment: Mapping[int, bool]) -> TriVal:
        """Look up the row selected by assignment (extra variables are ignored).

        Raises:
            AssignmentError: If a support variable is unassigned.
        """
        index = 0
        for var in self.support:
            try:
                bit = assignment[var]
            except KeyError:
                raise AssignmentError(f"variable {var} unassigned") from None
            index = (index << 1) | int(bool(bit))
        return self.rows[index]

    @property
    def is_trivial(self) -> bool:
        return all(v is TriVal.STAR for v in self.rows)

    def items(self) -> Iterator[tuple[dict[int, bool], TriVal]]:
        return zip(iter_assignments(self.support), self.rows)

    def extend(self, support: Iterable[int]) -> StrategyTable:
        """The same function over the union of its support and support."""
        target = _normalize(set(support) | set(self.support))
        if target == self.support:
            return self
        check_support_cap(len(target))
        n = len(target)
        positions = [n - 1 - target.index(v) for v in self.support]
        rows = []
        for idx in range(1 << n):
            old = 0
            for p in positions:
                old = (old << 1) | ((idx >> p) & 1)
            rows.append(self.rows[old])
        return StrategyTable(self.u, target, tuple(rows))

    def restrict(self, var: int, value: bool) -> StrategyTable:
        """Fix var := value and drop it from the support."""
        if var not in self.support:
            return self
        rest = tuple(v for v in self.support if v != var)
        return StrategyTable.from_function(self.u, rest, lambda a: self.value({**a, var: value}))

    def minimize(self) -> StrategyTable:
        """Drop every support variable the table does not depend on."""
        table = self
        for var in self.support:
            low, high = table.restrict(var, False), table.restrict(var, True)
            if low.rows == high.rows:
                table = low
        return table

    def same_function(self, other: StrategyTable) -> bool:
        """Equality as functions, comparing over the union of supports."""
        if self.u != other.u:
            return False
        joint = set(self.support) | set(other.support)
        return self.extend(joint).rows == other.extend(joint).rows

    def dump(self, names: Callable[[int], str] | None = None) -> str:
        """Debug dump: a support header, then `<bits> -> <value>` per row."""
        label = names or str
        header = f"u {label(self.u)} support " + " ".join(label(v) for v in self.support)
        lines = [header.rstrip()]
        for index, value in enumerate(self.rows):
            bits = format(index, f"0{len(self.support)}b") if self.support else "."
            lines.append(f"{bits} -> {value.value}")
        return "\n".join(lines) + "\n"


def iter_assignments(support: tuple[int, ...] | list[int]) -> Iterator[dict[int, bool]]:
    """Complete assignments of support in row order."""
    for bits in itertools.product((False, True), repeat=len(support)):
        yield dict(zip(support, bits))


# ── Strategy operations ───────────────────────────────────────────────────────

def _same_universal(h: StrategyTable, h2: StrategyTable) -> None:
    if h.u != h2.u:
        raise ValueError(f"tables are for different universals ({h.u} and {h2.u})")


def strat_consistent(h: StrategyTable, h2: StrategyTable) -> bool:
    """True iff the two strategies never answer 0 and 1 on the same assignment.

    Compared over complete assignments of the union of the supports.

    Raises:
        ValueError: If the tables are for different universals.
        ResourceCapError: If the union support exceeds the table cap.
    """
    _same_universal(h, h2)
    joint = set(h.support) | set(h2.support)
    a, b = h.extend(joint), h2.extend(joint)
    return all(x.consistent_with(y) for x, y in zip(a.rows, b.rows))


def strat_union(h: StrategyTable, h2: StrategyTable) -> StrategyTable:
    """Pointwise join of two consistent strategies.

    Raises:
        InconsistentError: If the strategies clash on some assignment.
    """
    _same_universal(h, h2)
    joint = set(h.support) | set(h2.support)
    a, b = h.extend(joint), h2.extend(joint)
    rows = []
    for index, (x, y) in enumerate(zip(a.rows, b.rows)):
        if not x.consistent_with(y):
            raise InconsistentError(f"strategies for {h.u} clash on row {index}")
        rows.append(x.join(y))
    return StrategyTable(h.u, a.support, tuple(rows))


def strat_ifelse(
    h: StrategyTable,
    h2: StrategyTable,
    x: int,
    q: Qbf | None = None,
) -> StrategyTable:
    """h where x = 1, h2 where x = 0; x joins the support.

    The operands need not be consistent.

    Args:
        h: Strategy used when x is true.
        h2: Strategy used when x is false.
        x: The branching variable.
        q: When given, x must be existential and left of the universal.
            Without it the tables are treated as plain functions of their
            support.

    Raises:
        PrefixError: If q is given and x is not an existential left of u.
    """
    _same_universal(h, h2)
    if q is not None and not (q.is_existential(x) and q.order.left_of(x, h.u)):
        raise PrefixError(f"variable {x} is not an existential left of {h.u}")
    joint = set(h.support) | set(h2.support) | {x}
    a, b = h.extend(joint), h2.extend(joint)
    bit = len(a.support) - 1 - a.support.index(x)
    rows = tuple(
        a.rows[i] if (i >> bit) & 1 else b.rows[i] for i in range(len(a.rows))
    )
    return StrategyTable(h.u, a.support, rows)
