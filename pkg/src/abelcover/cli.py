"""``abelcover`` command line.

Exit status: 0 success, 1 verification mismatch, 2 invalid input,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cayley import CayleySpec, InvalidCayleySpec
from .counting import count_subgroups_of_order, count_subgroups_of_type, resolve_triple
from .covercount import CoverQuery, OrderMismatch, count_coverings
from .fixtures import FIXTURES, fixture
from .oracle import (
    DEFAULT_COVERING_BUDGET,
    BudgetExceeded,
    covering_census,
    covering_instance,
    enumerate_covering_subgroups,
)
from .partitions import GroupType, partition
from .verify import DEFAULT_QUOTIENT_BOUND, SUITES, run_criteria

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def parse_partition(text: str):
    text = text.strip()
    if text in ("", "0", "()"):
        return ()
    try:
        return partition(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad partition {text!r}: {exc}") from None


def parse_group_type(text: str) -> GroupType:
    try:
        return GroupType.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad group type {text!r}: {exc}") from None


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def load_spec(text: str) -> CayleySpec:
    """A fixture name, a path to a JSON file, or an inline JSON document."""
    if text in FIXTURES:
        return fixture(text)
    path = Path(text)
    if not text.lstrip().startswith("{") and path.is_file():
        text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"spec is neither a fixture name, a file, nor valid JSON: {exc}") from None
    return CayleySpec.from_json(data)


class Output:
    def __init__(self, fmt: str, stream=None):
        self.json = fmt == "json-lines"
        self.stream = stream or sys.stdout

    def record(self, plain: str, **fields) -> None:
        line = json.dumps(fields, separators=(",", ":")) if self.json else plain
        print(line, file=self.stream)

    def raw(self, line: str) -> None:
        print(line, file=self.stream)


def cmd_count_subgroups(args, out: Output) -> int:
    alpha, beta = parse_partition(args.alpha), parse_partition(args.beta)
    if args.gamma is None:
        n = count_subgroups_of_type(args.p, alpha, beta)
        out.record(str(n), count=str(n))
        return EXIT_OK
    gamma = parse_partition(args.gamma)
    n, method = resolve_triple(args.p, alpha, beta, gamma, budget=args.budget)
    out.record(f"{n}\nmethod: {method}", count=str(n), method=method)
    return EXIT_OK


def cmd_count_by_order(args, out: Output) -> int:
    n = count_subgroups_of_order(args.p, parse_partition(args.alpha), args.r)
    out.record(str(n), count=str(n))
    return EXIT_OK


def _query(args) -> CoverQuery:
    spec = load_spec(args.spec)
    kernel = parse_group_type(args.kernel) if args.kernel is not None else None
    total = parse_group_type(args.total) if args.total is not None else None
    if total is not None and kernel is None:
        raise UsageError("--total requires --kernel")
    return CoverQuery(spec, kernel, total, args.folds)


def cmd_count_coverings(args, out: Output) -> int:
    query = _query(args)
    n, factors = count_coverings(query, budget=args.covering_budget)
    out.record(str(n), count=str(n))
    if args.explain:
        for f in factors:
            out.raw(json.dumps(f.to_json(), separators=(",", ":")))
    return EXIT_OK


def cmd_enumerate_coverings(args, out: Output) -> int:
    query = _query(args)
    subgroups = enumerate_covering_subgroups(
        query.spec, query.kernel_type, query.total_type, query.folds, budget=args.covering_budget
    )
    if subgroups:
        ctx, entries = covering_census(
            query.spec, kernel_type=query.kernel_type, folds=query.folds, budget=args.covering_budget
        )
        types = {e.d.key: e for e in entries}
    for i, d in enumerate(subgroups):
        entry = types[d.key]
        elements = d.element_set
        out.record(
            " ".join("(" + ",".join(map(str, x)) + ")" for x in elements),
            index=i,
            modulus=ctx.modulus,
            kernel=str(entry.kernel_type),
            total=str(entry.total_type),
            elements=[list(x) for x in elements],
        )
        if args.graphs:
            out.raw(covering_instance(query.spec, d).dump())
    if not out.json:
        out.raw(f"# {len(subgroups)} covering subgroup(s)")
    return EXIT_OK


def cmd_verify(args, out: Output) -> int:
    ok = True
    for report in run_criteria(SUITES[args.suite], quotient_bound=args.quotient_bound, budget=args.covering_budget):
        ok &= report.passed
        out.record(
            report.line(),
            criterion=report.number,
            title=report.title,
            passed=report.passed,
            checked=report.checked,
            failures=report.failures,
            aborted=report.aborted,
        )
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abelcover", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("plain", "json-lines"), default="plain")
    parser.add_argument(
        "--budget", type=positive_int, default=None,
        help="element limit for subgroup enumeration in triple counts (default 4096; 6561 for p=3)",
    )
    parser.add_argument(
        "--covering-budget", type=positive_int, default=DEFAULT_COVERING_BUDGET,
        help="element limit for the ambient group of covering enumeration (default 65536)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count-subgroups", help="subgroups of a p-group by type, or by type and quotient type")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--alpha", required=True, help='ambient type, e.g. "2,1"')
    p.add_argument("--beta", required=True, help="subgroup type")
    p.add_argument("--gamma", help="quotient type")
    p.set_defaults(run=cmd_count_subgroups)

    p = sub.add_parser("count-by-order", help="subgroups of order p^r")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(run=cmd_count_by_order)

    for name, run, extra in (
        ("count-coverings", cmd_count_coverings, "explain"),
        ("enumerate-coverings", cmd_enumerate_coverings, "graphs"),
    ):
        p = sub.add_parser(name)
        p.add_argument("--spec", required=True, help="fixture name, JSON file, or inline JSON")
        mode = p.add_mutually_exclusive_group(required=True)
        mode.add_argument("--kernel", help='covering transformation group type, e.g. "2:[1];3:[1]"')
        mode.add_argument("--folds", type=positive_int)
        p.add_argument("--total", help="total group type (with --kernel)")
        if extra == "explain":
            p.add_argument("--explain", action="store_true", help="print one JSON record per prime factor")
        else:
            p.add_argument("--graphs", action="store_true", help="dump each covering graph")
        p.set_defaults(run=run)

    p = sub.add_parser("verify", help="run formula-versus-oracle checks")
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    p.add_argument(
        "--quotient-bound", type=positive_int, default=DEFAULT_QUOTIENT_BOUND,
        help="largest group order for the exhaustive quotient-typing check",
    )
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.format)
    try:
        return args.run(args, out)
    except BudgetExceeded as exc:
        print(f"abelcover: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidCayleySpec, OrderMismatch, UsageError, ValueError) as exc:
        print(f"abelcover: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
