"""Command-line surface: outputs and exit codes.

Each test calls cli.run() in-process and reads stdout/stderr through
capsys. Exit codes: 0 valid, 1 rejected, 2 usage/parse/IO, 3 cap or internal
failure.
"""

import io
import json

from cli import build_parser, run
from conftest import FIXTURES, fixture_text
from proofs.formats import MRT, parse_proof
from schemas.report import CheckReport, ReasonCode, Verdict


# ── Helpers ──────────────────────────────────────────────────────────────────

def fx(name: str) -> str:
    return str(FIXTURES / name)


def run_out(capsys, *argv: str) -> tuple[int, str, str]:
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def feed_stdin(monkeypatch, text: str) -> None:
    monkeypatch.setattr("sys.stdin", io.StringIO(text))


# ── Parsing and usage ────────────────────────────────────────────────────────

class TestUsage:
    def test_parse_summary(self, capsys):
        code, out, _ = run_out(capsys, "parse", fx("xyuab.qdimacs"))
        assert code == 0
        assert "variables: 5\n" in out
        assert "prefix: e2 a1 e2\n" in out

    def test_parse_emit(self, capsys):
        code, out, _ = run_out(capsys, "parse", fx("xuy.qdimacs"), "--emit")
        assert code == 0
        assert "p cnf 3 4\n" in out

    def test_unknown_command(self, capsys):
        assert run(["frobnicate"]) == 2

    def test_missing_command(self, capsys):
        assert run([]) == 2

    def test_help_exits_cleanly(self, capsys):
        assert run(["--help"]) == 0

    def test_convert_direction_parsed(self):
        parser = build_parser()
        args = parser.parse_args(["convert", "mres-to-mrest", "a.qdimacs", "b.mrs"])
        assert args.direction == "mres-to-mrest"

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run_out(capsys, "parse", str(tmp_path / "nope.qdimacs"))
        assert code == 2
        assert "error" in err

    def test_malformed_qdimacs(self, capsys, tmp_path):
        path = tmp_path / "bad.qdimacs"
        path.write_text("p cnf 1 1\ne 1 0\n1 2 0\n", encoding="utf-8")
        assert run_out(capsys, "parse", str(path))[0] == 2

    def test_invalid_configuration(self, capsys, monkeypatch):
        monkeypatch.setenv("MRT_ENTAIL_VAR_CAP", "abc")
        code, _, err = run_out(capsys, "parse", fx("xuy.qdimacs"))
        assert code == 2
        assert "invalid configuration" in err


# ── Checking ─────────────────────────────────────────────────────────────────

class TestCheckCommands:
    def test_check_mrest_valid(self, capsys):
        code, out, _ = run_out(capsys, "check-mrest", fx("xyuab.qdimacs"), fx("branch_proof.mrt"))
        assert code == 0
        assert out.startswith("verdict: valid\nsize: 13\n")
        assert "width: 3\n" in out
        assert "regular: yes\n" in out
        assert "nodes[u]: 13\n" in out

    def test_check_mrest_invalid(self, capsys):
        code, out, err = run_out(capsys, "check-mrest", fx("xuy.qdimacs"), fx("broken.mrt"))
        assert code == 1
        assert "failing_line: 7\n" in out
        assert "reason: inconsistent-union\n" in out
        assert "inconsistent-union" in err

    def test_json_matches_plain(self, capsys):
        code, out, _ = run_out(capsys, "check-mrest", fx("xuy.qdimacs"), fx("broken.mrt"), "--json")
        assert code == 1
        data = json.loads(out)
        assert data["schema"] == 1
        assert (data["verdict"], data["failing_line"], data["reason"]) == ("invalid", 7, "inconsistent-union")

    def test_bundle_on_stdin(self, capsys, monkeypatch):
        feed_stdin(monkeypatch, fixture_text("xyuab.qdimacs") + fixture_text("branch_proof.mrt"))
        code, out, _ = run_out(capsys, "check-mrest", "-")
        assert code == 0
        assert "verdict: valid" in out

    def test_bundle_without_proof(self, capsys):
        assert run_out(capsys, "check-mrest", fx("xyuab.qdimacs"))[0] == 2

    def test_check_mres(self, capsys):
        assert run_out(capsys, "check-mres", fx("xyuab.qdimacs"), fx("branch_proof.mrs"))[0] == 0
        code, out, _ = run_out(capsys, "check-mres", fx("xuy.qdimacs"), fx("hash_proof.mrs"))
        assert code == 1
        assert "reason: blocked-select\n" in out

    def test_stats_pretty(self, capsys):
        code, out, _ = run_out(capsys, "stats", fx("xyuab.qdimacs"), fx("branch_proof.mrt"), "--pretty")
        assert code == 0
        assert "verdict" in out and "regular" in out


# ── Conversion and certificates ──────────────────────────────────────────────

class TestPipelines:
    def test_convert_mres_to_mrest(self, capsys):
        code, out, _ = run_out(capsys, "convert", "mres-to-mrest", fx("xyuab.qdimacs"), fx("branch_proof.mrs"))
        assert code == 0
        expected = [e.clause for e in parse_proof(fixture_text("branch_proof.mrt"), MRT)]
        assert [e.clause for e in parse_proof(out, MRT)] == expected

    def test_convert_rejects_blocked_proof(self, capsys):
        code, _, err = run_out(capsys, "convert", "mres-to-mrest", fx("xuy.qdimacs"), fx("hash_proof.mrs"))
        assert code == 1
        assert "blocked-select" in err

    def test_emit_then_check_certificate(self, capsys, tmp_path):
        code, cert, _ = run_out(capsys, "emit-efrege", fx("xuy.qdimacs"), fx("hash_proof.mrt"))
        assert code == 0
        path = tmp_path / "hash_proof.efr"
        path.write_text(cert, encoding="utf-8")
        code, out, _ = run_out(capsys, "check-efrege", fx("xuy.qdimacs"), str(path))
        assert code == 0
        assert "verdict: valid" in out

    def test_emit_refuses_invalid_proof(self, capsys):
        code, out, _ = run_out(capsys, "emit-efrege", fx("xuy.qdimacs"), fx("broken.mrt"))
        assert code == 1
        assert out == ""

    def test_certificate_over_budget_is_unknown(self, capsys, monkeypatch, tmp_path):
        monkeypatch.setenv("MRT_ENTAIL_VAR_CAP", "1")
        path = tmp_path / "wide.efr"
        path.write_text("1 INF (| 1 (| 3 (~ 3)))\n", encoding="utf-8")
        code, out, _ = run_out(capsys, "check-efrege", fx("xuy.qdimacs"), str(path))
        assert code == 3
        assert "verdict: unknown\n" in out

    def test_extract_then_verify(self, capsys, tmp_path):
        code, dump, _ = run_out(capsys, "extract-strategy", fx("xyuab.qdimacs"), fx("branch_proof.mrt"))
        assert code == 0
        path = tmp_path / "branch_proof.strat"
        path.write_text(dump, encoding="utf-8")
        code, out, _ = run_out(capsys, "verify-countermodel", fx("xyuab.qdimacs"), str(path))
        assert code == 0
        assert out == "countermodel: holds\nchecked: 16\n"

    def test_verify_reports_counterexample(self, capsys, tmp_path):
        path = tmp_path / "zero.strat"
        path.write_text("graph 2\n1 LEAF 0\nend\n", encoding="utf-8")
        code, out, _ = run_out(capsys, "verify-countermodel", fx("xuy.qdimacs"), str(path))
        assert code == 1
        assert "counterexample: x=1 y=1\n" in out


# ── Generation and search ────────────────────────────────────────────────────

class TestGenerateAndSearch:
    def test_gen_cr(self, capsys):
        code, out, _ = run_out(capsys, "gen-cr", "1")
        assert code == 0
        assert "p cnf 4 4\n" in out
        assert out.endswith("-3 0\n-4 0\n")

    def test_search_output_checks(self, capsys, monkeypatch, tmp_path):
        formula = tmp_path / "cr1.qdimacs"
        formula.write_text(run_out(capsys, "gen-cr", "1")[1], encoding="utf-8")
        code, bundle, _ = run_out(capsys, "search", str(formula), "--max-lines", "8")
        assert code == 0
        feed_stdin(monkeypatch, bundle)
        code, out, _ = run_out(capsys, "check-mrest", "-")
        assert code == 0
        assert "size: 7\n" in out

    def test_search_proof_failing_the_checker_exits_3(self, capsys, monkeypatch, tmp_path):
        formula = tmp_path / "cr1.qdimacs"
        formula.write_text(run_out(capsys, "gen-cr", "1")[1], encoding="utf-8")
        rejected = CheckReport(verdict=Verdict.INVALID, reason=ReasonCode.NO_REFUTATION)
        monkeypatch.setattr("formulas.search.check_mrest", lambda q, proof: rejected)
        code, out, err = run_out(capsys, "search", str(formula), "--max-lines", "8")
        assert code == 3
        assert out == ""
        assert "internal error" in err

    def test_search_proof_only(self, capsys):
        code, out, _ = run_out(capsys, "search", fx("xuy.qdimacs"), "--max-lines", "7", "--proof-only")
        assert code == 0
        assert out.startswith("p mrt 7\n")

    def test_search_none(self, capsys):
        code, out, _ = run_out(capsys, "search", fx("xuy.qdimacs"), "--max-lines", "3")
        assert code == 1
        assert out == "search: none\n"

    def test_search_cap_exit_code(self, capsys, monkeypatch):
        monkeypatch.setenv("MRT_SEARCH_EXISTENTIAL_CAP", "1")
        code, _, err = run_out(capsys, "search", fx("xuy.qdimacs"), "--max-lines", "7")
        assert code == 3
        assert "resource cap" in err
