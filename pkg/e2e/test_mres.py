"""MRes checker tests: merge maps, select and merge.

The hash-proof steps are rejected by MRes at the last line, because
the two strategies for u there are consistent but not isomorphic. The
MRes transcription of the branch proof checks.
"""

import pytest

from conftest import load_mres
from core.errors import MergeMapError, PrefixError, SelectBlockedError
from mres.checker import MResChecker, MResLine, check_mres
from mres.merge_map import (
    MergeMap,
    MMBranch,
    MMLeaf,
    mm_eval,
    mm_isomorphic,
    mm_merge,
    mm_select,
    mm_table,
)
from proofs.rules import Axiom, MergeChoice, Resolution
from schemas.report import LineState, ReasonCode, Verdict
from strategy.values import TriVal


# ── Merge maps ───────────────────────────────────────────────────────────────

class TestMergeMaps:
    def test_leaf_ids_are_fixed(self):
        with pytest.raises(MergeMapError, match="must have id"):
            MergeMap(2, {5: MMLeaf(TriVal.ONE)}, 5)

    def test_merge_branches_on_pivot(self):
        m = mm_merge(MergeMap.leaf(2, "0"), MergeMap.leaf(2, "1"), 4, 1)
        assert m.root_node == MMBranch(var=1, lo=-1, hi=-2, line_tag=4)
        assert mm_eval(m, {1: False}) is TriVal.ZERO
        assert mm_eval(m, {1: True}) is TriVal.ONE

    def test_merge_rejects_reused_tag(self):
        m = mm_merge(MergeMap.leaf(2, "0"), MergeMap.leaf(2, "1"), 4, 1)
        with pytest.raises(MergeMapError, match="tagged 4"):
            mm_merge(m, MergeMap.leaf(2, "*"), 4, 1)

    def test_merge_checks_the_prefix_when_given_a_formula(self, xuy):
        assert mm_merge(MergeMap.leaf(2, "0"), MergeMap.leaf(2, "1"), 4, 1, xuy).root == 4
        with pytest.raises(PrefixError, match="not an existential left of 2"):
            mm_merge(MergeMap.leaf(2, "0"), MergeMap.leaf(2, "1"), 4, 3, xuy)

    def test_select_prefers_non_trivial(self):
        star, zero = MergeMap.leaf(2, "*"), MergeMap.leaf(2, "0")
        assert mm_select(star, zero) == zero
        assert mm_select(zero, star) == zero

    def test_select_blocked_on_different_maps(self):
        with pytest.raises(SelectBlockedError, match="neither isomorphic nor trivial"):
            mm_select(MergeMap.leaf(2, "0"), MergeMap.leaf(2, "1"))

    def test_isomorphism_ignores_line_tags(self):
        a = mm_merge(MergeMap.leaf(2, "0"), MergeMap.leaf(2, "1"), 3, 1)
        b = mm_merge(MergeMap.leaf(2, "0"), MergeMap.leaf(2, "1"), 8, 1)
        assert mm_isomorphic(a, b)
        assert not mm_isomorphic(a, MergeMap.leaf(2, "0"))

    def test_table_of_merge_map(self):
        m = mm_merge(MergeMap.leaf(2, "0"), MergeMap.leaf(2, "*"), 3, 1)
        assert mm_table(m).rows == (TriVal.ZERO, TriVal.STAR)


# ── Checker ──────────────────────────────────────────────────────────────────

class TestCheckMres:
    def test_hash_proof_steps_blocked_at_last_line(self, xuy):
        report = check_mres(xuy, load_mres("hash_proof.mrs"))
        assert report.verdict is Verdict.INVALID
        assert report.failing_line == 7
        assert report.reason is ReasonCode.BLOCKED_SELECT
        assert [s.status for s in report.lines[:6]] == [LineState.OK] * 6

    def test_hash_proof_steps_blocked_even_with_merges(self, xuy):
        proof = load_mres("hash_proof.mrs")
        proof[2] = MResLine(Resolution(1, 2, 1, {2: MergeChoice.MERGE}))
        proof[5] = MResLine(Resolution(4, 5, 1, {2: MergeChoice.MERGE}))
        report = check_mres(xuy, proof)
        assert report.failing_line == 7
        assert report.reason is ReasonCode.BLOCKED_SELECT

    def test_branch_proof_transcription_valid(self, xyuab):
        report, lines = MResChecker(xyuab).run(load_mres("branch_proof.mrs"))
        assert report.valid
        assert report.size == 13
        final = mm_table(lines[-1].maps[3])
        assert final.value({1: False, 2: False}) is TriVal.ZERO
        assert final.value({1: True, 2: False}) is TriVal.ONE
        assert final.value({1: False, 2: True}) is TriVal.ONE

    def test_merge_on_right_pivot_rejected(self, xyuab):
        proof = load_mres("branch_proof.mrs")
        proof[6] = MResLine(Resolution(3, 6, 4, {3: MergeChoice.MERGE}))
        report = check_mres(xyuab, proof)
        assert report.failing_line == 7
        assert report.reason is ReasonCode.BAD_MERGE

    def test_stated_map_must_match(self, xuy):
        proof = [MResLine(Axiom(1), maps={2: MergeMap.leaf(2, "1")})]
        report = check_mres(xuy, proof)
        assert report.reason is ReasonCode.BAD_AXIOM

    def test_missing_map(self, xuy):
        report = check_mres(xuy, [MResLine(Axiom(1), maps={})])
        assert report.reason is ReasonCode.MISSING_STRATEGY

    def test_non_refutation(self, xuy):
        report = check_mres(xuy, [MResLine(Axiom(1))])
        assert report.verdict is Verdict.INVALID
        assert report.reason is ReasonCode.NO_REFUTATION

    def test_empty_proof(self, xuy):
        report = check_mres(xuy, [])
        assert report.reason is ReasonCode.NO_REFUTATION
        assert report.failing_line is None
