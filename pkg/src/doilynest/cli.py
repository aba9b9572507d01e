"""Command line entry point.

    doilynest geometry --k 3 --json out.json --dot out.dot --verify-paper
    doilynest oracle --k 3
    doilynest conjecture --k 6 --json k6.json

Exit codes: 0 all checks passed, 1 usage or I/O error, 2 structural
violation, 3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from .cliques import DEFAULT_MAX_K, CaseTooLarge
from .oracle import MAX_ORACLE_K, agreement
from .pauli import commutes_index
from .report import PUBLISHED, emit_dot, emit_json, expected_counts, run_pipeline

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_CAP = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_run_options(p):
    p.add_argument("--k", type=int, required=True, help="case parameter, d = 2^k (k >= 2)")
    p.add_argument("--json", metavar="PATH", help="write the full report as JSON")
    p.add_argument("--dot", metavar="PATH", help="write the collinearity graph as DOT")
    p.add_argument("--verify-paper", action="store_true",
                   help="compare maximal sets with the published listings (k = 2, 3)")
    p.add_argument("--max-k", type=int, default=DEFAULT_MAX_K, metavar="CAP",
                   help=f"refuse cases above this k (default {DEFAULT_MAX_K})")
    p.add_argument("--threads", type=int, default=None, metavar="N",
                   help="worker threads for the graph build (default: $THREADS or 1)")
    p.add_argument("--normalize-timings", action="store_true",
                   help="zero all timings so repeated runs give identical JSON")
    p.add_argument("--contract-twins", action="store_true",
                   help="merge vertices with equal closed neighbourhoods before clique search")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="doilynest", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_run_options(sub.add_parser("geometry", help="compute and check the geometry for one k"))
    _add_run_options(sub.add_parser("conjecture", help="run k >= 6 against the extrapolated counts"))
    oracle = sub.add_parser("oracle", help="cross-check commutation against dense matrices")
    oracle.add_argument("--k", type=int, required=True)
    return parser


def _threads(value):
    if value is not None:
        return value
    env = os.environ.get("THREADS")
    return int(env) if env and env.isdigit() else None


def _summary(report) -> None:
    print(f"k\t{report.k}")
    print(f"mode\t{report.mode}")
    for name, value in report.counts.items():
        want = report.expected.get(name)
        mark = "" if want is None else ("\tok" if report.matches.get(name) else f"\texpected {want}")
        print(f"{name}\t{value}{mark}")
    print(f"nesting\t{report.nesting['verified']}")
    if report.listings is not None:
        print(f"listings\t{report.listings.get('ok')}")
    print(f"violations\t{len(report.violations)}")
    for v in report.violations:
        print(f"  [{v['stage']}] {v['kind']}", file=sys.stderr)


def _run(args, conjecture: bool) -> int:
    if args.k < 2:
        print("error: k must be >= 2", file=sys.stderr)
        return EXIT_USAGE
    for opt in ("json", "dot"):
        if getattr(args, opt) == "":
            print(f"error: --{opt} needs a non-empty path", file=sys.stderr)
            return EXIT_USAGE
    if conjecture:
        logging.getLogger("doilynest").setLevel(logging.INFO)
        if args.k in PUBLISHED:
            logging.getLogger(__name__).info("k=%d has published counts; comparing anyway", args.k)
        logging.getLogger(__name__).info("extrapolated counts: %s", expected_counts(args.k))
    try:
        report = run_pipeline(args.k, max_k=args.max_k, threads=_threads(args.threads),
                              verify_paper=args.verify_paper, contract_twins=args.contract_twins)
    except CaseTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except MemoryError:
        print("error: out of memory", file=sys.stderr)
        return EXIT_CAP
    try:
        if args.json:
            emit_json(report, args.json, normalize_timings=args.normalize_timings)
        if args.dot:
            emit_dot(report.snapshot, args.dot, report.doilies)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _summary(report)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _oracle(args) -> int:
    if not 2 <= args.k <= MAX_ORACLE_K:
        print(f"error: oracle runs for 2 <= k <= {MAX_ORACLE_K}", file=sys.stderr)
        return EXIT_CAP if args.k > MAX_ORACLE_K else EXIT_USAGE
    checked, bad = agreement(args.k, lambda i, j: commutes_index(i, j, args.k))
    print(f"pairs\t{checked}")
    print(f"disagreements\t{len(bad)}")
    for i, j in bad[:20]:
        print(f"  {i} {j}", file=sys.stderr)
    return EXIT_OK if not bad else EXIT_VIOLATION


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "oracle":
        return _oracle(args)
    return _run(args, conjecture=args.command == "conjecture")


if __name__ == "__main__":
    sys.exit(main())
