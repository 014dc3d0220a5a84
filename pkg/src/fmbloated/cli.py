"""Command line front end: ``build``, ``count``, ``bench`` and ``stats``.

Exit codes: 0 success, 1 usage or invalid input, 2 I/O failure, 3 bad index
file.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from .bench import DEFAULT_QUERIES, BenchConfig, index_stats, parse_lengths, run_bench, write_csv
from .linear import MinimizerParams, build_linear
from .serialize import FormatError, load, save
from .store import StoreConfig
from .superlinear import Scheme, build_superlinear
from .text import InvalidInputError, as_pattern, load_text

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_FORMAT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fmbloated", description="FM-bloated q-gram full-text index")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="build an index and write it to disk")
    b.add_argument("--input", required=True, type=Path)
    b.add_argument("--variant", required=True, choices=["superlinear", "linear"])
    b.add_argument("--scheme", choices=["pow2", "fib"], default="pow2")
    b.add_argument("--max-len", type=int, default=None, help="longest stored q-gram (superlinear)")
    b.add_argument("--q", type=int, default=None, help="window length (linear)")
    b.add_argument("--p", type=int, default=None, help="minimizer length (linear)")
    b.add_argument("--qa-len", type=int, default=StoreConfig.qa_len)
    b.add_argument("--bs-threshold", type=int, default=StoreConfig.bs_threshold)
    b.add_argument("--output", required=True, type=Path)

    c = sub.add_parser("count", help="count pattern occurrences")
    c.add_argument("--index", required=True, type=Path)
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--pattern")
    src.add_argument("--pattern-file", type=Path)
    c.add_argument("--verbose", action="store_true", help="also print steps and the final [sp, ep]")

    r = sub.add_parser("bench", help="time count queries on patterns sampled from the text")
    r.add_argument("--index", required=True, type=Path)
    r.add_argument("--lengths", default="10..128")
    r.add_argument("--queries", type=int, default=DEFAULT_QUERIES)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--csv", type=Path, default=None, help="output file (default: stdout)")

    s = sub.add_parser("stats", help="print index statistics")
    s.add_argument("--index", required=True, type=Path)
    return ap


def _store_config(args) -> StoreConfig:
    return StoreConfig(qa_len=args.qa_len, bs_threshold=args.bs_threshold)


def cmd_build(args) -> int:
    try:
        config = _store_config(args)
        if args.variant == "superlinear":
            if args.q is not None or args.p is not None:
                raise UsageError("--q/--p only apply to the linear variant")
            scheme = Scheme(args.scheme, args.max_len)
        else:
            if args.max_len is not None:
                raise UsageError("--max-len only applies to the superlinear variant")
            params = MinimizerParams(args.q if args.q is not None else 8, args.p if args.p is not None else 3)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = load_text(args.input)
    if args.variant == "superlinear":
        index = build_superlinear(text, scheme, config)
    else:
        index = build_linear(text, params, config)
    written = save(index, args.output)
    for line in index_stats(index, written).as_lines():
        print(line)
    return EXIT_OK


def _read_patterns(args) -> List[bytes]:
    if args.pattern is not None:
        return [as_pattern(os.fsencode(args.pattern))]
    lines = args.pattern_file.read_bytes().split(b"\n")
    return [as_pattern(line) for line in lines if line]


def cmd_count(args) -> int:
    index = load(args.index)
    for pat in _read_patterns(args):
        res = index.count(pat)
        if args.verbose:
            print(f"{res.count}\tsteps={res.steps}\tsp={res.sp}\tep={res.ep}")
        else:
            print(res.count)
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        config = BenchConfig(parse_lengths(args.lengths), args.queries, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    index = load(args.index)
    rows = run_bench(index, config)
    if args.csv is None:
        write_csv(rows, sys.stdout)
    else:
        with open(args.csv, "w", newline="") as fh:
            write_csv(rows, fh)
    return EXIT_OK


def cmd_stats(args) -> int:
    index = load(args.index)
    for line in index_stats(index, args.index.stat().st_size).as_lines():
        print(line)
    return EXIT_OK


COMMANDS = {"build": cmd_build, "count": cmd_count, "bench": cmd_bench, "stats": cmd_stats}


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InvalidInputError) as exc:
        print(f"fmbloated: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormatError as exc:
        print(f"fmbloated: bad index file: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"fmbloated: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
