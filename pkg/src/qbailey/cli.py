"""Command-line entry point: ``qbailey {list,verify,verify-all,expand,oracle}``.

Exit status is 0 when everything checked passes, 1 when a check fails and 2 for
usage or evaluation errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .corpus import Report, register_all, verify_all, verify_identity
from .errors import QSeriesError, UnknownIdentity
from .rings import RingTag

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qbailey", description="Exact verification of q-series identities.")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def fmt(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("list", help="list registered identities")
    sp.add_argument("--filter", default=None, help="id glob/substring or key=value (group, ring, k, m, t, ...)")
    fmt(sp)

    sp = sub.add_parser("verify", help="verify one identity")
    sp.add_argument("--id", required=True)
    sp.add_argument("--order", type=nonneg, default=None, help="truncation order (default: the record's own, usually 50)")
    sp.add_argument("--timing", action="store_true", help="report wall time in millis (otherwise 0)")
    fmt(sp)

    sp = sub.add_parser("verify-all", help="verify every (or every matching) identity")
    sp.add_argument("--filter", default=None)
    sp.add_argument("--order", type=nonneg, default=None)
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    sp.add_argument("--timing", action="store_true")
    fmt(sp)

    sp = sub.add_parser("expand", help="expand an expression written in the series language")
    sp.add_argument("--expr", required=True)
    sp.add_argument("--ring", default="integers", help="integers, laurent, or cycloM for M in 1,2,3,4,6")
    sp.add_argument("--order", type=nonneg, default=50)

    sp = sub.add_parser("oracle", help="compare a product side with partition counts")
    sp.add_argument("--check", required=True, help="identity id")
    sp.add_argument("--nmax", type=nonneg, default=30)
    fmt(sp)
    return p


def nonneg(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return n


def report_line(r: Report) -> str:
    if r.status == "pass":
        return f"PASS  {r.id}  order={r.order}"
    if r.status == "fail":
        e, a, b = r.mismatch
        return f"FAIL  {r.id}  order={r.order}  first mismatch at q^{e}: lhs={a} rhs={b}"
    return f"ERROR {r.id}  order={r.order}  {r.message}"


def status_code(reports) -> int:
    statuses = {r.status for r in reports}
    if "error" in statuses:
        return EXIT_ERROR
    return EXIT_FAIL if "fail" in statuses else EXIT_OK


def emit(out, obj):
    out.write(json.dumps(obj, indent=2) + "\n")


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except UnknownIdentity as exc:
        print(f"error: unknown identity {exc.args[0]!r}", file=sys.stderr)
        return EXIT_ERROR
    except (QSeriesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def cmd_list(args, out) -> int:
    items = register_all().select(args.filter)
    if args.format == "json":
        emit(out, [{"id": i.id, "title": i.title, "group": i.group, "ring": i.ring.name, "order": i.order} for i in items])
    else:
        width = max((len(i.id) for i in items), default=0)
        for i in items:
            out.write(f"{i.id:<{width}}  [{i.group}, {i.ring.name}]  {i.title}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    r = verify_identity(args.id, args.order, timing=args.timing)
    if args.format == "json":
        emit(out, r.to_json())
    else:
        out.write(report_line(r) + "\n")
        if r.message:
            print(r.message, file=sys.stderr)
    return status_code([r])


def cmd_verify_all(args, out) -> int:
    reports = verify_all(args.order, args.filter, jobs=args.jobs, timing=args.timing)
    if args.format == "json":
        emit(out, [r.to_json() for r in reports])
    else:
        for r in reports:
            out.write(report_line(r) + "\n")
        counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "error")}
        out.write(f"{counts['pass']} passed, {counts['fail']} failed, {counts['error']} errors\n")
    return status_code(reports)


def cmd_expand(args, out) -> int:
    from .dsl import evaluate, parse

    ring = RingTag.parse(args.ring)
    s = evaluate(parse(args.expr), ring, args.order)
    for line in s.lines():
        out.write(line + "\n")
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    from .oracle import oracle_check_product

    r = oracle_check_product(args.check, args.nmax)
    if args.format == "json":
        emit(out, r.to_json())
    elif r.passed:
        out.write(f"PASS  {r.id}  n<={r.nmax}  {'; '.join(r.filters)}\n")
    else:
        n, c, count, label = r.mismatch
        out.write(f"FAIL  {r.id}  at n={n}: series {c}, partitions ({label}) {count}\n")
    return EXIT_OK if r.passed else EXIT_FAIL


COMMANDS = {
    "list": cmd_list,
    "verify": cmd_verify,
    "verify-all": cmd_verify_all,
    "expand": cmd_expand,
    "oracle": cmd_oracle,
}


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
