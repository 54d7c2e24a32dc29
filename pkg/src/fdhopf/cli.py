"""Command-line front end: ``construct``, ``verify`` and ``summary``.

Exit codes: 0 when every check passes (skips allowed), 1 when a check
fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import fnmatch
import json
import sys

from . import interchange
from .constructions import NotPrimitive, drinfeld_double, group_algebra, taft
from .cyclotomic import NotADivisor
from .hopf import AntipodeNotInvertible, NoAntipode
from .pipeline import run_pipeline
from .report import FAIL, VerificationReport
from .spectral import render_grid

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _factors(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad factor list {text!r}") from None
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("factors must be positive integers")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fdhopf", description="Exact verification of finite-dimensional Hopf algebras.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="write an interchange file for a bundled construction")
    kinds = c.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    g = kinds.add_parser("group", help="group algebra of a finite abelian group")
    g.add_argument("--factors", type=_factors, required=True, help="invariant factors, e.g. 3,3")
    t = kinds.add_parser("taft", help="Taft algebra T(zeta_n^e)")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--xi-exponent", type=int, default=1)
    dbl = kinds.add_parser("double", help="Drinfeld double of an interchange file")
    dbl.add_argument("--input", required=True)
    for sp in (g, t, dbl):
        sp.add_argument("-o", "--output", required=True)

    v = sub.add_parser("verify", help="run the verification pipeline")
    v.add_argument("input")
    v.add_argument("--report", required=True)
    v.add_argument("--checks", default=None,
                   help="comma-separated check-id patterns to keep (fnmatch syntax)")
    v.add_argument("--cyclotomic-order", type=int, default=None,
                   help="widen the field to Q(zeta_N); N must be a multiple of the file's order")
    v.add_argument("--seed", type=int, default=0, help="seed for the random trace-formula endomorphisms")

    s = sub.add_parser("summary", help="print a verification report as a table")
    s.add_argument("report")
    return p


def _cmd_construct(args) -> int:
    try:
        if args.kind == "group":
            H = group_algebra(args.factors)
        elif args.kind == "taft":
            H = taft(args.n, args.xi_exponent)
        else:
            base = interchange.read(args.input)
            if base.antipode is None:
                from .hopf import solve_antipode
                base = base.with_antipode(solve_antipode(base))
            H = drinfeld_double(base)
    except (NotPrimitive, ValueError, OSError, AntipodeNotInvertible, NoAntipode) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    interchange.write(H, args.output)
    print(f"wrote {H.name} (dim {H.dim}, cyclotomic order {H.cyc_order}) to {args.output}")
    return EXIT_OK


def _filtered(report: VerificationReport, patterns) -> VerificationReport:
    if not patterns:
        return report
    return VerificationReport([e for e in report if any(fnmatch.fnmatchcase(e.check_id, p) for p in patterns)])


def _write_report(path, report: VerificationReport) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report.dumps() + "\n")


def _cmd_verify(args) -> int:
    try:
        H = interchange.read(args.input)
        if args.cyclotomic_order is not None:
            if args.cyclotomic_order < 1 or args.cyclotomic_order % H.cyc_order:
                raise NotADivisor(f"--cyclotomic-order {args.cyclotomic_order} is not a multiple of {H.cyc_order}")
            H = H.coerce(args.cyclotomic_order)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    patterns = [p.strip() for p in args.checks.split(",")] if args.checks else None
    try:
        _write_report(args.report, VerificationReport())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    def stage(rep):
        _write_report(args.report, _filtered(rep, patterns))

    report = _filtered(run_pipeline(H, on_stage=stage, seed=args.seed), patterns)
    _write_report(args.report, report)
    print(str(report))
    return EXIT_FAIL if any(e.status == FAIL for e in report) else EXIT_OK


def render_summary(entries: list) -> str:
    width = max((len(e["check-id"]) for e in entries), default=8)
    lines = []
    grids = []
    for e in entries:
        line = f"{e['check-id'].ljust(width)}  {e['status'].upper():7s} {e.get('reason', '')}".rstrip()
        lines.append(line)
        w = e.get("witness")
        if e["status"] == FAIL and w:
            lines.append(" " * (width + 2) + "witness: " + json.dumps(w, sort_keys=True))
        if e.get("table"):
            grids.append(render_grid(e["table"]))
    if grids:
        lines.append("")
        lines.append("grading dimensions dim H_{a,i,j}:")
        lines.extend(grids)
    return "\n".join(lines)


def _cmd_summary(args) -> int:
    try:
        with open(args.report, encoding="utf-8") as fh:
            entries = json.load(fh)
        if not isinstance(entries, list) or not all(
                isinstance(e, dict) and "check-id" in e and "status" in e for e in entries):
            raise ValueError("report must be an array of check entries")
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(render_summary(entries))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"construct": _cmd_construct, "verify": _cmd_verify, "summary": _cmd_summary}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
