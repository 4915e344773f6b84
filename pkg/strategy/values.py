"""Three-valued values and partial assignments.

A universal variable's strategy may leave it unset. Unset is written * and is
compatible with both Boolean values; two set values are compatible only when
they are equal. Everything else in the toolkit (merge maps, T-graphs, the
strategy tables they compile to) builds on the join defined here.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum

from core.errors import InconsistentError


class TriVal(str, Enum):
    """A value in {0, 1, *}.

    Extends str so values print as "0", "1", "*" in dumps and reports.
    """

    ZERO = "0"
    ONE = "1"
    STAR = "*"

    @classmethod
    def from_bool(cls, value: bool) -> TriVal:
        return cls.ONE if value else cls.ZERO

    @classmethod
    def parse(cls, text: str) -> TriVal:
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"not a three-valued literal: {text!r}") from None

    @property
    def is_set(self) -> bool:
        return self is not TriVal.STAR

    def as_bool(self) -> bool:
        """Return the Boolean value. * has none."""
        if self is TriVal.STAR:
            raise ValueError("* has no Boolean value")
        return self is TriVal.ONE

    def consistent_with(self, other: TriVal) -> bool:
        return self is TriVal.STAR or other is TriVal.STAR or self is other

    def join(self, other: TriVal) -> TriVal:
        """Union of two consistent values: join(a, *) = a, join(a, a) = a.

        Raises:
            InconsistentError: On 0 against 1.
        """
        if self is TriVal.STAR:
            return other
        if other is TriVal.STAR or other is self:
            return self
        raise InconsistentError(f"cannot join {self.value} with {other.value}")


@dataclass(frozen=True)
class PartialAssignment:
    """A map from variables to {0, 1, *} over a declared support.

    Variables outside the support, and support variables missing from
    values, read as *. Only set values are stored, so two assignments with
    the same set values and support compare equal.

    Attributes:
        support: The variables this assignment speaks about.
        values: The non-* entries, keyed by variable id.
    """

    support: frozenset[int] = frozenset()
    values: Mapping[int, TriVal] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {v: t for v, t in self.values.items() if t is not TriVal.STAR}
        stray = set(cleaned) - set(self.support)
        if stray:
            raise ValueError(f"values outside support: {sorted(stray)}")
        object.__setattr__(self, "values", cleaned)

    @classmethod
    def of(cls, values: Mapping[int, TriVal | bool], support: Iterable[int] | None = None) -> PartialAssignment:
        """Build from a mapping that may mix TriVal and bool entries.

        The support defaults to the mapping's keys.
        """
        converted = {
            v: (TriVal.from_bool(t) if isinstance(t, bool) else t) for v, t in values.items()
        }
        sup = frozenset(support) if support is not None else frozenset(converted)
        return cls(support=sup | frozenset(converted), values=converted)

    def get(self, var: int) -> TriVal:
        return self.values.get(var, TriVal.STAR)

    def __hash__(self) -> int:
        return hash((self.support, frozenset(self.values.items())))


def assign_consistent(eps: PartialAssignment, delta: PartialAssignment) -> bool:
    """True iff the assignments never disagree on a variable both set."""
    small, large = (eps, delta) if len(eps.values) <= len(delta.values) else (delta, eps)
    return all(large.get(v).consistent_with(t) for v, t in small.values.items())


def assign_union(eps: PartialAssignment, delta: PartialAssignment) -> PartialAssignment:
    """Pointwise join of two consistent assignments.

    Raises:
        InconsistentError: If some variable is 0 in one input and 1 in the other.
    """
    merged = dict(eps.values)
    for var, value in delta.values.items():
        try:
            merged[var] = merged.get(var, TriVal.STAR).join(value)
        except InconsistentError:
            raise InconsistentError(f"assignments clash on variable {var}") from None
    return PartialAssignment(support=eps.support | delta.support, values=merged)
