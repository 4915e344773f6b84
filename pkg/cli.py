"""mrest-toolkit command line.

Every pipeline stage as a subcommand. Reports go to stdout as `key: value`
lines (or one JSON object with --json); diagnostics go to stderr.

Exit codes: 0 valid / true, 1 invalid / false, 2 usage, parse or I/O
error, 3 resource cap exceeded or an internal check failed (verdict unknown).

Usage:
    uv run python cli.py check-mrest fixtures/xyuab.qdimacs fixtures/branch_proof.mrt
    uv run python cli.py gen-cr 1 | uv run python cli.py search - --max-lines 8 \\
        | uv run python cli.py check-mrest -
"""

import argparse
import logging
import sys
from collections.abc import Sequence

from pydantic import ValidationError
from rich.console import Console

from convert.script import mres_to_mrest
from core.config import get_settings
from core.errors import (
    ConversionError,
    EmissionError,
    InvalidProofError,
    ParseError,
    ResourceCapError,
    SearchSoundnessError,
    ToolkitError,
)
from core.logging_setup import configure_logging
from display.report import format_report, lines_table, print_failure, stats_table
from efrege.certificate import parse_certificate, serialize_certificate
from efrege.checker import check_efrege
from efrege.emitter import emit_efrege
from formulas.cr import gen_cr
from formulas.search import bounded_search
from mres import checker as mres_checker
from mrest import checker as mrest_checker
from mrest.countermodel import check_countermodel, extract_countermodel
from mrest.dump import dump_strategies, parse_strategies
from proofs.formats import MRS, MRT, ProofEntry, parse_proof, serialize_proof, split_bundle
from qbf.model import Qbf
from qbf.qdimacs import parse_qdimacs, serialize_qdimacs
from schemas.report import CheckReport, JsonReport, Verdict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_ERROR = 2
EXIT_CAP = 3

_VERDICT_EXIT = {Verdict.VALID: EXIT_OK, Verdict.INVALID: EXIT_REJECT, Verdict.UNKNOWN: EXIT_CAP}

err = Console(stderr=True)


# ── Input helpers ─────────────────────────────────────────────────────────────

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _load_qbf(path: str) -> Qbf:
    text, _ = split_bundle(_read(path))
    return parse_qdimacs(text)


def _load_with_proof(args: argparse.Namespace, kind: str) -> tuple[Qbf, list[ProofEntry]]:
    """The formula and proof, from two files or from one bundle."""
    if args.proof is None:
        qdimacs, proof = split_bundle(_read(args.qdimacs))
        if proof is None:
            raise ParseError(f"{args.qdimacs} has no 'p {kind}' section and no proof file was given")
    else:
        qdimacs, proof = _read(args.qdimacs), _read(args.proof)
    return parse_qdimacs(qdimacs), parse_proof(proof, kind)


def _emit_report(report: CheckReport, args: argparse.Namespace, q: Qbf, what: str) -> int:
    if getattr(args, "json", False):
        print(JsonReport.from_report(report).model_dump_json(by_alias=True))
    else:
        sys.stdout.write(format_report(report, q.name))
    print_failure(err, report, what)
    return _VERDICT_EXIT[report.verdict]


# ── Subcommands ───────────────────────────────────────────────────────────────

def _cmd_parse(args: argparse.Namespace) -> int:
    q = _load_qbf(args.qdimacs)
    prefix = " ".join(f"{block.quantifier.value}{len(block.variables)}" for block in q.blocks)
    print(f"variables: {len(q.variables)}")
    print(f"existentials: {len(q.existentials)}")
    print(f"universals: {len(q.universals)}")
    print(f"clauses: {len(q.matrix)}")
    print(f"prefix: {prefix}")
    if args.emit:
        sys.stdout.write(serialize_qdimacs(q))
    return EXIT_OK


def _cmd_check_mres(args: argparse.Namespace) -> int:
    q, entries = _load_with_proof(args, MRS)
    report = mres_checker.check_mres(q, mres_checker.lines_from_entries(entries))
    return _emit_report(report, args, q, "MRes proof")


def _cmd_check_mrest(args: argparse.Namespace) -> int:
    q, entries = _load_with_proof(args, MRT)
    report = mrest_checker.check_mrest(q, mrest_checker.lines_from_entries(entries))
    return _emit_report(report, args, q, "MRes-T proof")


def _cmd_stats(args: argparse.Namespace) -> int:
    q, entries = _load_with_proof(args, MRT)
    report = mrest_checker.check_mrest(q, mrest_checker.lines_from_entries(entries))
    if args.pretty:
        out = Console()
        out.print(stats_table(report, "MRes-T proof", q.name))
        out.print(lines_table(report))
        return _VERDICT_EXIT[report.verdict]
    return _emit_report(report, args, q, "MRes-T proof")


def _cmd_convert(args: argparse.Namespace) -> int:
    q, entries = _load_with_proof(args, MRS)
    lines = mres_to_mrest(q, mres_checker.lines_from_entries(entries))
    sys.stdout.write(
        serialize_proof((ProofEntry(line.rule, line.clause) for line in lines), MRT, with_clauses=True)
    )
    return EXIT_OK


def _cmd_emit_efrege(args: argparse.Namespace) -> int:
    q, entries = _load_with_proof(args, MRT)
    cert = emit_efrege(q, mrest_checker.lines_from_entries(entries), force=args.force)
    sys.stdout.write(serialize_certificate(cert))
    return EXIT_OK


def _cmd_check_efrege(args: argparse.Namespace) -> int:
    q = _load_qbf(args.qdimacs)
    report = check_efrege(q, parse_certificate(_read(args.certificate)))
    return _emit_report(report, args, q, "certificate")


def _cmd_gen_cr(args: argparse.Namespace) -> int:
    sys.stdout.write(serialize_qdimacs(gen_cr(args.n).qbf))
    return EXIT_OK


def _cmd_extract(args: argparse.Namespace) -> int:
    q, entries = _load_with_proof(args, MRT)
    strategies = extract_countermodel(q, mrest_checker.lines_from_entries(entries))
    sys.stdout.write(dump_strategies(strategies))
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    q = _load_qbf(args.qdimacs)
    result = check_countermodel(q, parse_strategies(_read(args.strategies)))
    print(f"countermodel: {'holds' if result.holds else 'fails'}")
    print(f"checked: {result.checked}")
    if result.counterexample is not None:
        bits = " ".join(f"{q.name(x)}={int(v)}" for x, v in result.counterexample.items())
        print(f"counterexample: {bits}")
    if result.ambiguous:
        print(f"ambiguous: {len(result.ambiguous)}")
    return EXIT_OK if result.holds else EXIT_REJECT


def _cmd_search(args: argparse.Namespace) -> int:
    q = _load_qbf(args.qdimacs)
    found = bounded_search(q, args.max_lines)
    if found is None:
        print("search: none")
        err.print(f"[yellow]No refutation with at most {args.max_lines} lines.[/yellow]")
        return EXIT_REJECT
    script = serialize_proof((ProofEntry(line.rule) for line in found), MRT)
    if not args.proof_only:
        sys.stdout.write(serialize_qdimacs(q))
    sys.stdout.write(script)
    err.print(f"[green]Found a {len(found)}-line refutation.[/green]")
    return EXIT_OK


# ── Parser ────────────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mrt", description="MRes-T proof toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_proof(name: str, help_text: str, handler, json_flag: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("qdimacs", help="QDIMACS file, or a bundle when no proof file is given ('-' = stdin)")
        p.add_argument("proof", nargs="?", help="proof file")
        if json_flag:
            p.add_argument("--json", action="store_true", help="print the report as JSON")
        p.set_defaults(handler=handler)
        return p

    p = sub.add_parser("parse", help="parse and summarize a QDIMACS file")
    p.add_argument("qdimacs")
    p.add_argument("--emit", action="store_true", help="also print the normalized QDIMACS")
    p.set_defaults(handler=_cmd_parse)

    with_proof("check-mres", "check an MRes proof (.mrs)", _cmd_check_mres)
    with_proof("check-mrest", "check an MRes-T proof (.mrt)", _cmd_check_mrest)
    stats = with_proof("stats", "proof statistics", _cmd_stats)
    stats.add_argument("--pretty", action="store_true", help="render rich tables")

    convert = sub.add_parser("convert", help="convert proofs between systems")
    convert_sub = convert.add_subparsers(dest="direction", required=True)
    p = convert_sub.add_parser("mres-to-mrest", help="MRes (.mrs) to MRes-T (.mrt)")
    p.add_argument("qdimacs")
    p.add_argument("proof", nargs="?")
    p.set_defaults(handler=_cmd_convert)

    emit = with_proof("emit-efrege", "emit an eFrege+∀red certificate", _cmd_emit_efrege, json_flag=False)
    emit.add_argument("--force", action="store_true", help="emit even if the proof does not check")

    p = sub.add_parser("check-efrege", help="check an eFrege+∀red certificate (.efr)")
    p.add_argument("qdimacs")
    p.add_argument("certificate")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_check_efrege)

    p = sub.add_parser("gen-cr", help="print CR_n as QDIMACS")
    p.add_argument("n", type=int)
    p.set_defaults(handler=_cmd_gen_cr)

    with_proof("extract-strategy", "dump the countermodel of a valid proof", _cmd_extract, json_flag=False)

    p = sub.add_parser("verify-countermodel", help="verify a strategy dump against a formula")
    p.add_argument("qdimacs")
    p.add_argument("strategies")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("search", help="bounded MRes-T proof search")
    p.add_argument("qdimacs")
    p.add_argument("--max-lines", type=int, required=True)
    p.add_argument("--proof-only", action="store_true", help="print the script without the formula")
    p.set_defaults(handler=_cmd_search)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR

    try:
        configure_logging(get_settings())
    except ValidationError as exc:
        err.print(f"[bold red]invalid configuration:[/bold red] {exc}")
        return EXIT_ERROR

    try:
        return args.handler(args)
    except ResourceCapError as exc:
        err.print(f"[bold yellow]resource cap:[/bold yellow] {exc}")
        return EXIT_CAP
    except SearchSoundnessError as exc:
        err.print(f"[bold red]internal error:[/bold red] {exc}")
        return EXIT_CAP
    except (InvalidProofError, ConversionError, EmissionError) as exc:
        if exc.report is not None:
            print_failure(err, exc.report, "input proof")
        err.print(f"[bold red]rejected:[/bold red] {exc}")
        return EXIT_REJECT
    except (ToolkitError, ValueError, OSError) as exc:
        err.print(f"[bold red]error:[/bold red] {exc}")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
