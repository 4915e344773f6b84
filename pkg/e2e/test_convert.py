"""Rule scripts and conversions into MRes-T.

Replaying the hash and branch scripts reproduces the golden proofs
line for line; MRes proofs convert by forgetting their merge maps, and the
converted proofs carry countermodels that verify.
"""

import pytest

from conftest import fixture_text, load_mres
from convert.script import RuleScript, mres_to_mrest, mres_to_script, script_to_mrest
from core.errors import ConversionError, ProofStructureError
from mrest.checker import check_mrest
from mrest.countermodel import verify_countermodel
from mrest.tgraph import THash, TIfElse, TLeaf
from proofs.formats import MRT, parse_proof
from proofs.rules import Axiom, Resolution
from schemas.report import ReasonCode
from strategy.values import TriVal


# ── Helpers ──────────────────────────────────────────────────────────────────

def stated_clauses(name: str):
    return [entry.clause for entry in parse_proof(fixture_text(name), MRT)]


# ── RuleScript ───────────────────────────────────────────────────────────────

class TestRuleScript:
    def test_from_text_ignores_clauses(self):
        script = RuleScript.from_text(fixture_text("hash_proof.mrt"))
        assert len(script) == 7
        assert script.lines[6] == Resolution(3, 6, 3)

    def test_to_text(self):
        script = RuleScript((Axiom(1), Axiom(2), Resolution(1, 2, 1)))
        assert script.to_text() == "p mrt 3\nA 1\nA 2\nR 1 2 1\n"

    def test_forward_reference_rejected(self):
        with pytest.raises(ProofStructureError, match="earlier lines"):
            RuleScript((Axiom(1), Resolution(1, 2, 1)))

    def test_bad_axiom_index_rejected(self):
        with pytest.raises(ProofStructureError, match="positive"):
            RuleScript((Axiom(0),))

    def test_from_proof_drops_annotations(self):
        script = RuleScript.from_proof(load_mres("branch_proof.mrs"))
        assert script.lines[9] == Resolution(9, 8, 1)
        assert not script.lines[9].choices


# ── Conversions ──────────────────────────────────────────────────────────────

class TestScriptToMrest:
    def test_hash_proof_line_for_line(self, xuy):
        lines = script_to_mrest(xuy, RuleScript.from_text(fixture_text("hash_proof.mrt")))
        assert [line.clause for line in lines] == stated_clauses("hash_proof.mrt")
        roots = [line.graphs[2].root_node for line in lines]
        assert roots[:2] == [TLeaf(TriVal.ZERO), TLeaf(TriVal.STAR)]
        assert roots[2] == TIfElse(1, hi=2, lo=1)
        assert roots[5] == TIfElse(1, hi=5, lo=4)
        assert roots[6] == THash(3, 6)

    def test_branch_proof_line_for_line(self, xyuab):
        lines = script_to_mrest(xyuab, RuleScript.from_text(fixture_text("branch_proof.mrt")))
        assert [line.clause for line in lines] == stated_clauses("branch_proof.mrt")
        roots = [line.graphs[3].root_node for line in lines]
        assert roots[6] == THash(3, 6)
        assert roots[9] == TIfElse(1, hi=8, lo=9)
        assert roots[11] == THash(10, 11)
        assert roots[12] == TIfElse(2, hi=7, lo=12)

    def test_inconsistent_script_raises(self, xuy):
        with pytest.raises(ConversionError, match="inconsistent-union at line 7") as info:
            script_to_mrest(xuy, RuleScript.from_text(fixture_text("broken.mrt")))
        assert info.value.report.reason is ReasonCode.INCONSISTENT_UNION

    def test_partial_script_needs_flag(self, xuy):
        script = RuleScript((Axiom(1), Axiom(2), Resolution(1, 2, 1)))
        with pytest.raises(ConversionError, match="no-refutation"):
            script_to_mrest(xuy, script)
        lines = script_to_mrest(xuy, script, require_refutation=False)
        assert lines[-1].clause.literals == (3,)


class TestMresToMrest:
    def test_branch_proof_transcription(self, xyuab):
        lines = mres_to_mrest(xyuab, load_mres("branch_proof.mrs"))
        assert check_mrest(xyuab, lines).valid
        assert verify_countermodel(xyuab, dict(lines[-1].graphs))

    def test_same_script_as_the_mrest_proof(self, xyuab):
        script = mres_to_script(xyuab, load_mres("branch_proof.mrs"))
        assert script == RuleScript.from_text(fixture_text("branch_proof.mrt"))

    def test_invalid_mres_proof_rejected(self, xuy):
        with pytest.raises(ConversionError, match="blocked-select") as info:
            mres_to_mrest(xuy, load_mres("hash_proof.mrs"))
        assert info.value.report.failing_line == 7

    def test_mrest_accepts_what_mres_rejects(self, xuy):
        script = RuleScript.from_proof(load_mres("hash_proof.mrs"))
        assert check_mrest(xuy, script_to_mrest(xuy, script)).valid
