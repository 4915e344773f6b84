"""QBF model and QDIMACS codec tests.

Covers prefix queries, clause helpers, strict parsing with line numbers,
and byte-stable serialization. Pure in-memory; no fixtures beyond the
golden QDIMACS files.
"""

import itertools
import random

import pytest

from conftest import fixture_text
from core.errors import AssignmentError, ParseError, QbfStructureError, UnknownVariableError
from qbf.model import (
    Block,
    Clause,
    Qbf,
    Quantifier,
    clause_falsified,
    existential_subclause,
    falsifying_u_literal,
    matrix_eval,
)
from qbf.qdimacs import parse_qdimacs, serialize_qdimacs
from strategy.values import TriVal


# ── Helpers ──────────────────────────────────────────────────────────────────

def make_qdimacs(*body: str, header: str = "p cnf 3 2") -> str:
    return "\n".join([header, *body]) + "\n"


def q_names(q: Qbf) -> list[str]:
    return [q.name(v) for v in q.variables]


# ── Model ────────────────────────────────────────────────────────────────────

class TestQbfModel:
    def test_build_merges_adjacent_blocks(self):
        q = Qbf.build([("e", [1]), ("e", [2]), ("a", [3])], [[1, 3]])
        assert [b.quantifier for b in q.blocks] == [Quantifier.EXISTS, Quantifier.FORALL]
        assert q.blocks[0].variables == (1, 2)

    def test_prefix_queries_on_xuy(self, xuy):
        assert q_names(xuy) == ["x", "u", "y"]
        assert xuy.existentials == (1, 3)
        assert xuy.universals == (2,)
        assert xuy.left_existentials(2) == (1,)
        assert xuy.order.left_of(1, 2)
        assert not xuy.order.left_of(3, 2)

    def test_same_block_is_not_left_of(self):
        q = Qbf.build([("e", [1, 2]), ("a", [3])], [[1, 2, 3]])
        assert not q.order.left_of(1, 2)
        assert not q.order.left_of(2, 1)

    def test_prefix_order_on_random_prefixes(self):
        rng = random.Random(11)
        for _ in range(1000):
            variables = list(range(1, rng.randint(1, 6) + 1))
            rng.shuffle(variables)
            quantifier = rng.choice(["e", "a"])
            prefix, expected = [], {}
            while variables:
                size = rng.randint(1, len(variables))
                block, variables = variables[:size], variables[size:]
                expected.update({v: len(prefix) for v in block})
                prefix.append((quantifier, block))
                quantifier = "a" if quantifier == "e" else "e"
            q = Qbf.build(prefix, [])
            order = q.order
            for v, level in expected.items():
                assert order.block_of(v) == level
                assert q.is_universal(v) is (prefix[level][0] == "a")
            for y, x in itertools.product(expected, repeat=2):
                assert order.left_of(y, x) is (expected[y] < expected[x])
            assert not any(order.left_of(v, v) for v in expected)
            for a, b, c in itertools.product(expected, repeat=3):
                if order.left_of(a, b) and order.left_of(b, c):
                    assert order.left_of(a, c)

    def test_non_alternating_blocks_rejected(self):
        with pytest.raises(QbfStructureError, match="do not alternate"):
            Qbf(blocks=(Block(Quantifier.EXISTS, (1,)), Block(Quantifier.EXISTS, (2,))))

    def test_unquantified_matrix_variable_rejected(self):
        with pytest.raises(QbfStructureError, match="unquantified"):
            Qbf.build([("e", [1])], [[1, 2]])

    def test_unknown_variable_raises(self, xuy):
        with pytest.raises(UnknownVariableError, match="not quantified"):
            xuy.is_universal(9)

    def test_require_universal_rejects_existential(self, xuy):
        with pytest.raises(UnknownVariableError, match="not universal"):
            xuy.require_universal(1)


class TestClauses:
    def test_duplicates_dropped(self):
        assert Clause.of(1, 2, 1).literals == (1, 2)

    def test_tautology_detected(self):
        assert Clause.of(1, -1).is_tautology
        assert not Clause.of(1, 2).is_tautology

    def test_zero_is_not_a_literal(self):
        with pytest.raises(ValueError, match="not a literal"):
            Clause.of(1, 0)

    def test_existential_subclause_drops_universals(self, xuy):
        assert existential_subclause(xuy, Clause.of(3, 1, 2)).literals == (3, 1)

    def test_falsifying_u_literal(self, xuy):
        assert falsifying_u_literal(xuy, Clause.of(3, 1, 2), 2) is TriVal.ZERO
        assert falsifying_u_literal(xuy, Clause.of(-3, -1, -2), 2) is TriVal.ONE
        assert falsifying_u_literal(xuy, Clause.of(3, -1), 2) is TriVal.STAR

    def test_clause_falsified_needs_every_literal_assigned(self):
        c = Clause.of(1, -2)
        assert clause_falsified(c, {1: False, 2: True})
        assert not clause_falsified(c, {1: False})

    def test_matrix_eval(self, xuy):
        assert not matrix_eval(xuy, {1: True, 2: True, 3: True})
        assert matrix_eval(xuy, {1: True, 2: False, 3: True})

    def test_matrix_eval_requires_complete_assignment(self, xuy):
        with pytest.raises(AssignmentError, match="misses"):
            matrix_eval(xuy, {1: True})


# ── QDIMACS ──────────────────────────────────────────────────────────────────

class TestParseQdimacs:
    def test_xyuab_parses(self, xyuab):
        assert len(xyuab.matrix) == 7
        assert xyuab.universals == (3,)
        assert xyuab.left_existentials(3) == (1, 2)
        assert xyuab.name(4) == "a"

    def test_free_variables_go_to_outer_existential_block(self):
        q = parse_qdimacs(make_qdimacs("a 2 0", "1 2 0", "3 -2 0"))
        assert q.blocks[0].quantifier is Quantifier.EXISTS
        assert set(q.blocks[0].variables) == {1, 3}

    def test_clause_may_span_lines(self):
        q = parse_qdimacs(make_qdimacs("e 1 2 3 0", "1", "2 0", "-3 0"))
        assert q.matrix[0].literals == (1, 2)

    def test_bytes_input(self):
        q = parse_qdimacs(fixture_text("xuy.qdimacs").encode("utf-8"))
        assert len(q.variables) == 3

    @pytest.mark.parametrize(
        "text, message",
        [
            (make_qdimacs("e 1 0", "1 -1 0", "2 0"), "tautological"),
            (make_qdimacs("e 1 0", "1 4 0", "2 0"), "outside"),
            (make_qdimacs("e 1 0", "e 1 0", "1 0", "2 0"), "quantified twice"),
            (make_qdimacs("1 0", "e 2 0", "2 0"), "after the first clause"),
            (make_qdimacs("e 1 0", "1 0"), "declares 2 clauses"),
            (make_qdimacs("e 1 0", "1 0", "2"), "unterminated"),
            ("e 1 0\n1 0\n", "before the p-line"),
            ("", "missing p-line"),
        ],
    )
    def test_malformed_input_rejected(self, text, message):
        with pytest.raises(ParseError, match=message):
            parse_qdimacs(text)

    def test_parse_error_carries_line_number(self):
        with pytest.raises(ParseError) as info:
            parse_qdimacs(make_qdimacs("e 1 2 3 0", "1 2 0", "1 -1 0"))
        assert info.value.line_no == 4
        assert "1 -1 0" in info.value.raw


class TestSerializeQdimacs:
    def test_round_trip_preserves_formula(self, xyuab):
        again = parse_qdimacs(serialize_qdimacs(xyuab))
        assert again == xyuab

    def test_serialization_is_byte_stable(self, xuy):
        text = serialize_qdimacs(xuy)
        assert serialize_qdimacs(parse_qdimacs(text)) == text

    def test_names_written_as_comments(self, xuy):
        text = serialize_qdimacs(xuy)
        assert text.startswith("c name 1 x\nc name 2 u\nc name 3 y\np cnf 3 4\n")
