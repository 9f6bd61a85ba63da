"""Command-line entry point: ``frobalg params|quotient|search|verify``.

Exit codes: 0 success, 1 invariant or verification failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time

from .field import InvalidParameter, NoRootOfUnity, find_parameters, make_prime_field, params_for_field
from .quotient import ClassCapExceeded, build_quotient, cross_field_audit, search_min_prime
from .suite import quotient_checks, run_suite, table_rows

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2

CSV_COLUMNS = ["k", "l", "i_dim", "i_bound", "j_dim", "j_bound", "t_dim", "quot_dim", "lower_bound"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def _params(args):
    """ConstructionParams from --p plus the optional --q / --mode / --noncoprime."""
    q = getattr(args, "q", None)
    if q is not None:
        ctx = make_prime_field(q)
        return params_for_field(args.p, ctx)
    mode = "noncoprime" if getattr(args, "noncoprime", False) else getattr(args, "mode", "lazard")
    return find_parameters(args.p, mode)


def _invocation(args, params, **extra):
    out = {
        "command": args.command,
        "p": params.p,
        "field": params.ctx.describe(),
        "q": params.q,
        "omega": str(params.omega),
        "r": params.r,
    }
    out.update(extra)
    return out


def _checks_json(checks):
    return [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _report_failures(checks):
    failed = [c for c in checks if not c.passed]
    for c in failed:
        print(f"FAILED {c.name}: {c.detail}".rstrip(": "), file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# -- commands -----------------------------------------------------------------


def cmd_params(args):
    params = find_parameters(args.p, args.mode)
    out = {"p": params.p, "q": params.q, "omega": str(params.omega), "r": params.r}
    if not params.ctx.is_prime_field:
        out["field"] = params.ctx.describe()
    sys.stdout.write(json.dumps(out, separators=(",", ":")) + "\n")
    return EXIT_OK


def _structure_constants_json(q):
    A, B, D, C = q.structure_constants
    return {
        "p": q.p,
        "field": q.ctx.describe(),
        "representatives": [
            {"index": n, "degree": k, "monomial": str(b)} for n, (k, b) in enumerate(q.representatives())
        ],
        "layout": "[e_a, e_b] = sum over records (a, b, d, c) of c * e_d",
        "records": [[int(a), int(b), int(d), q.ctx.render(int(c))] for a, b, d, c in zip(A, B, D, C)],
    }


def cmd_quotient(args):
    params = _params(args)
    started = time.perf_counter()
    try:
        q = build_quotient(params, args.max_degree)
    except ClassCapExceeded as exc:
        print(f"FAILED class_cap: {exc}", file=sys.stderr)
        return EXIT_FAIL
    elapsed = time.perf_counter() - started
    rows = table_rows(q)
    checks = quotient_checks(q)
    notes = list(q.notes)
    if q.truncated:
        notes.append(f"stopped at degree {args.max_degree} before the quotient vanished; class not determined")
    audit = None
    if args.audit_q is not None:
        audit = cross_field_audit(params.p, [params.ctx, make_prime_field(args.audit_q)])
        if len({tuple(v) for v in audit.values()}) > 1:
            notes.append("quotient dimensions differ between the audited fields")

    if args.structure_constants:
        with open(args.structure_constants, "w", encoding="utf-8") as fh:
            fh.write(_dump(_structure_constants_json(q)))

    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(["" if row[c] is None else row[c] for c in CSV_COLUMNS])
        buf.write(f"# class={'' if q.nilpotency_class is None else q.nilpotency_class}\n")
        if args.timing:
            buf.write(f"# seconds={elapsed:.3f}\n")
        text = buf.getvalue()
    else:
        report = {
            "invocation": _invocation(args, params, max_degree=args.max_degree),
            "rows": rows,
            "class": q.nilpotency_class,
            "checks": _checks_json(checks),
            "passed": all(c.passed for c in checks),
            "notes": notes,
        }
        if audit is not None:
            report["audit"] = audit
        if args.timing:
            report["timing"] = {"build_seconds": round(elapsed, 3)}
        text = _dump(report)
    _emit(text, args.out)
    return _report_failures(checks)


def cmd_search(args):
    if args.max_p < 3:
        raise UsageError("--max-p must be at least 3")
    res = search_min_prime(args.target_class, args.mode, args.max_p)
    out = {"command": "search", "class": args.target_class, "mode": args.mode, "max_p": args.max_p, "p": res.p}
    out["bound" if args.mode == "bound" else "computed_class"] = res.value
    if not res.found:
        out["message"] = f"not found below {args.max_p}"
    sys.stdout.write(_dump(out))
    return EXIT_OK


def cmd_verify(args):
    params = _params(args)
    started = time.perf_counter()
    q, checks, notes = run_suite(params.p, args.seed, args.trials, args.noncoprime, params=params)
    elapsed = time.perf_counter() - started
    report = {
        "invocation": _invocation(args, params, seed=args.seed, trials=args.trials),
        "rows": table_rows(q) if q is not None else [],
        "class": q.nilpotency_class if q is not None else None,
        "checks": _checks_json(checks),
        "passed": all(c.passed for c in checks),
        "notes": notes,
    }
    if args.timing:
        report["timing"] = {"total_seconds": round(elapsed, 3)}
    _emit(_dump(report), args.out)
    return _report_failures(checks)


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frobalg", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("params", help="deterministic construction parameters")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--mode", choices=["lazard", "noncoprime"], default="lazard")
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("quotient", help="dimension table and class of the quotient")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--mode", choices=["lazard", "noncoprime"], default="lazard")
    sp.add_argument("--q", type=int, help="use the prime field GF(Q) instead (Q = 1 mod p)")
    sp.add_argument("--max-degree", type=_positive)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--audit-q", type=int, help="also build over GF(Q2) and compare dimensions")
    sp.add_argument("--structure-constants", metavar="FILE", help="write structure constants as JSON")
    sp.add_argument("--out", metavar="FILE")
    sp.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    sp.set_defaults(func=cmd_quotient)

    sp = sub.add_parser("search", help="least prime reaching a target class")
    sp.add_argument("--class", dest="target_class", type=_positive, required=True)
    sp.add_argument("--max-p", type=int, default=50)
    sp.add_argument("--mode", choices=["bound", "exact"], default="bound")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("verify", help="run the full invariant suite")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=_positive, default=1000)
    sp.add_argument("--noncoprime", action="store_true", help="work over the non-coprime extension field")
    sp.add_argument("--q", type=int, help="use the prime field GF(Q) instead (Q = 1 mod p)")
    sp.add_argument("--out", metavar="FILE")
    sp.add_argument("--timing", action="store_true")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"frobalg: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_INVALID
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InvalidParameter, NoRootOfUnity, UsageError) as exc:
        print(f"frobalg: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # any other defect is a failure, never a stray exit code
        print(f"frobalg: failure: {exc!r}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
