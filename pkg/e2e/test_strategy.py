"""Three-valued strategy semantics.

Partial assignments, strategy tables and the union / if-else operations,
checked exhaustively over every table on up to two variables and on a
seeded sample of three-variable tables. Merge maps and T-graphs are
compared against the tables they compile to.
"""

import itertools
import random
from collections.abc import Iterator

import pytest

from core.errors import InconsistentError, PrefixError, ResourceCapError, SelectBlockedError
from mres.merge_map import MergeMap, mm_isomorphic, mm_merge, mm_select, mm_table
from mrest.tgraph import TGraph, tg_table, tgraph_from_table
from strategy.table import StrategyTable, strat_consistent, strat_ifelse, strat_union
from strategy.values import PartialAssignment, TriVal, assign_consistent, assign_union

U = 9
VALUES = (TriVal.ZERO, TriVal.ONE, TriVal.STAR)


# ── Helpers ──────────────────────────────────────────────────────────────────

def all_tables(support: tuple[int, ...]) -> list[StrategyTable]:
    return [
        StrategyTable(U, support, rows)
        for rows in itertools.product(VALUES, repeat=1 << len(support))
    ]


def sampled_tables(support: tuple[int, ...], count: int, seed: int = 7) -> list[StrategyTable]:
    rng = random.Random(seed)
    return [
        StrategyTable(U, support, tuple(rng.choice(VALUES) for _ in range(1 << len(support))))
        for _ in range(count)
    ]


def small_pairs():
    tables = all_tables(()) + all_tables((1,)) + all_tables((1, 2))
    return itertools.product(tables, repeat=2)


def random_merge_map(rng: random.Random, tags: Iterator[int], depth: int) -> MergeMap:
    """A merge map built by random merge and select steps over variables 1..6."""
    if depth == 0 or rng.random() < 0.3:
        return MergeMap.leaf(U, rng.choice(VALUES))
    lo = random_merge_map(rng, tags, depth - 1)
    hi = random_merge_map(rng, tags, depth - 1)
    if rng.random() < 0.2:
        try:
            return mm_select(lo, hi)
        except SelectBlockedError:
            return lo
    return mm_merge(lo, hi, next(tags), rng.randint(1, 6))


# ── Values and assignments ───────────────────────────────────────────────────

class TestTriVal:
    def test_join_with_star_is_identity(self):
        for v in VALUES:
            assert v.join(TriVal.STAR) is v
            assert TriVal.STAR.join(v) is v

    def test_zero_against_one_clashes(self):
        assert not TriVal.ZERO.consistent_with(TriVal.ONE)
        with pytest.raises(InconsistentError, match="cannot join"):
            TriVal.ZERO.join(TriVal.ONE)

    def test_star_has_no_bool(self):
        with pytest.raises(ValueError, match="no Boolean"):
            TriVal.STAR.as_bool()

    def test_parse_rejects_unknown(self):
        with pytest.raises(ValueError, match="three-valued"):
            TriVal.parse("2")


class TestPartialAssignment:
    def test_stars_are_not_stored(self):
        eps = PartialAssignment.of({1: True, 2: TriVal.STAR})
        assert eps.values == {1: TriVal.ONE}
        assert eps.get(2) is TriVal.STAR

    def test_union_of_consistent_assignments(self):
        eps = PartialAssignment.of({1: True}, support=[1, 2])
        delta = PartialAssignment.of({2: False})
        assert assign_consistent(eps, delta)
        merged = assign_union(eps, delta)
        assert merged.get(1) is TriVal.ONE and merged.get(2) is TriVal.ZERO

    def test_union_clash_raises(self):
        with pytest.raises(InconsistentError, match="variable 1"):
            assign_union(PartialAssignment.of({1: True}), PartialAssignment.of({1: False}))

    def test_values_outside_support_rejected(self):
        with pytest.raises(ValueError, match="outside support"):
            PartialAssignment(support=frozenset({1}), values={2: TriVal.ONE})


# ── Tables ───────────────────────────────────────────────────────────────────

class TestStrategyTable:
    def test_row_order_puts_first_support_variable_highest(self):
        h = StrategyTable.of(U, [1, 2], {(0, 0): "0", (0, 1): "1", (1, 0): "*", (1, 1): "1"})
        assert h.value({1: False, 2: True}) is TriVal.ONE
        assert h.value({1: True, 2: False}) is TriVal.STAR

    def test_extend_keeps_function(self):
        h = StrategyTable.of(U, [2], {(0,): "0", (1,): "1"})
        wide = h.extend([1, 3])
        assert wide.support == (1, 2, 3)
        assert all(wide.value(a) is h.value(a) for a, _ in wide.items())

    def test_minimize_drops_unused_variables(self):
        h = StrategyTable.constant(U, "1", [1, 2])
        assert h.minimize().support == ()

    def test_wrong_row_count_rejected(self):
        with pytest.raises(ValueError, match="needs 2 rows"):
            StrategyTable(U, (1,), (TriVal.ONE,))

    def test_support_cap(self, monkeypatch):
        monkeypatch.setenv("MRT_TABLE_SUPPORT_CAP", "2")
        with pytest.raises(ResourceCapError, match="cap"):
            StrategyTable.constant(U, "*", [1, 2, 3])

    def test_dump(self):
        h = StrategyTable.of(U, [1], {(0,): "0", (1,): "*"})
        assert h.dump() == "u 9 support 1\n0 -> 0\n1 -> *\n"


class TestUnionAlgebra:
    def test_union_commutative_on_all_small_pairs(self):
        for h, h2 in small_pairs():
            if strat_consistent(h, h2):
                assert strat_union(h, h2).same_function(strat_union(h2, h))
            else:
                with pytest.raises(InconsistentError):
                    strat_union(h, h2)

    def test_union_idempotent_with_star_identity(self):
        for support in [(), (1,), (1, 2)]:
            for h in all_tables(support):
                assert strat_union(h, h).same_function(h)
                assert strat_union(h, StrategyTable.constant(U, "*")).same_function(h)

    def test_union_on_three_variable_sample(self):
        tables = sampled_tables((1, 2, 3), 60)
        for h, h2 in itertools.product(tables, repeat=2):
            if strat_consistent(h, h2):
                joined = strat_union(h, h2)
                assert joined.same_function(strat_union(h2, h))
                assert strat_consistent(joined, h) and strat_consistent(joined, h2)

    def test_consistency_is_symmetric(self):
        for h, h2 in small_pairs():
            assert strat_consistent(h, h2) == strat_consistent(h2, h)

    def test_different_universals_rejected(self):
        with pytest.raises(ValueError, match="different universals"):
            strat_consistent(StrategyTable.constant(1, "*"), StrategyTable.constant(2, "*"))


class TestIfElse:
    def test_restriction_laws(self):
        tables = all_tables(()) + all_tables((2,))
        for h, h2 in itertools.product(tables, repeat=2):
            branched = strat_ifelse(h, h2, 1)
            assert branched.restrict(1, True).same_function(h)
            assert branched.restrict(1, False).same_function(h2)

    def test_operands_need_not_be_consistent(self):
        h = strat_ifelse(StrategyTable.constant(U, "1"), StrategyTable.constant(U, "0"), 1)
        assert h.rows == (TriVal.ZERO, TriVal.ONE)

    def test_prefix_checked_when_formula_given(self, xuy):
        h = StrategyTable.constant(2, "0")
        with pytest.raises(PrefixError, match="not an existential left"):
            strat_ifelse(h, h, 3, q=xuy)


# ── Representations against tables ───────────────────────────────────────────

class TestRepresentations:
    def test_isomorphic_maps_have_equal_tables_and_are_consistent(self):
        a = mm_merge(MergeMap.leaf(U, "0"), MergeMap.leaf(U, "1"), 4, 1)
        b = mm_merge(MergeMap.leaf(U, "0"), MergeMap.leaf(U, "1"), 7, 1)
        assert mm_isomorphic(a, b)
        assert mm_table(a).same_function(mm_table(b))
        assert strat_consistent(mm_table(a), mm_table(b))

    def test_isomorphism_implies_equal_tables_on_random_maps(self):
        pool = [
            random_merge_map(random.Random(seed), itertools.count(start), depth=3)
            for seed in range(40)
            for start in (100, 500)
        ]
        tables = [mm_table(m) for m in pool]
        isomorphic = 0
        for (m, h), (m2, h2) in itertools.combinations(zip(pool, tables), 2):
            if mm_isomorphic(m, m2):
                isomorphic += 1
                assert h.same_function(h2)
                assert strat_consistent(h, h2)
        assert isomorphic >= 40

    def test_consistency_does_not_imply_isomorphism(self):
        # xuy hash proof, lines 3 and 6: x=0 -> 0 / x=1 -> * against x=0 -> * / x=1 -> 1
        h3 = mm_merge(MergeMap.leaf(2, "0"), MergeMap.leaf(2, "*"), 3, 1)
        h6 = mm_merge(MergeMap.leaf(2, "*"), MergeMap.leaf(2, "1"), 6, 1)
        assert strat_consistent(mm_table(h3), mm_table(h6))
        assert not mm_isomorphic(h3, h6)

    def test_tgraph_from_table_is_complete(self):
        for h in all_tables((1, 2)):
            graph = tgraph_from_table(h)
            assert tg_table(graph).same_function(h)

    def test_tgraph_union_matches_table_union(self):
        lo = TGraph.leaf(U, "0", node_id=1)
        hi = TGraph.leaf(U, "*", node_id=2)
        left = TGraph.ifelse(1, hi=hi, lo=lo, node_id=3)
        right = TGraph.leaf(U, "0", node_id=4)
        joined = TGraph.hash(left, right, node_id=5)
        assert tg_table(joined).same_function(strat_union(tg_table(left), tg_table(right)))
