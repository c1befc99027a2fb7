"""Command-line entry point.

Exit codes: 0 ok, 1 diff mismatch, 2 usage, 3 parse error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import io
from .miner import ConfigError, MinerConfig, Strategy, mine
from .model import as_fraction
from .oracle import OracleConfig, OracleLimitError, oracle_mine
from .bounds import RrsPolicy

EXIT_OK, EXIT_DIFF, EXIT_USAGE, EXIT_PARSE, EXIT_IO = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _xi(text: str):
    try:
        x = as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < x <= 1:
        raise argparse.ArgumentTypeError(f"xi must lie in (0, 1], got {text}")
    return x


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hauspg", description="High average-utility sequential pattern mining.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def dataset_args(p):
        p.add_argument("--input", required=True)
        p.add_argument("--eu", help="external utility table (quantity format)")
        p.add_argument("--format", choices=["spmf", "quantity"], help="override auto-detection")

    m = sub.add_parser("mine", help="mine HAUSPs")
    dataset_args(m)
    m.add_argument("--xi", type=_xi, required=True)
    m.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.TRSAU.value)
    m.add_argument("--rrs-policy", choices=[p.value for p in RrsPolicy], default=RrsPolicy.GLOBAL.value)
    m.add_argument("--max-len", type=_positive)
    m.add_argument("--output", required=True)
    m.add_argument("--stats")
    m.add_argument("--trace", action="store_true", help="print one bound line per candidate to stderr")

    o = sub.add_parser("oracle", help="brute-force HAUSPs for small inputs")
    dataset_args(o)
    o.add_argument("--xi", type=_xi, required=True)
    o.add_argument("--max-len", type=_positive, required=True)
    o.add_argument("--output", required=True)

    d = sub.add_parser("diff", help="compare two result files as sets")
    d.add_argument("a")
    d.add_argument("b")

    g = sub.add_parser("gen", help="duplicate a dataset or generate a synthetic one")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--input")
    src.add_argument("--synthetic", type=_positive, metavar="N", help="number of random sequences")
    g.add_argument("--eu")
    g.add_argument("--format", choices=["spmf", "quantity"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--dup", type=_positive, default=1)
    g.add_argument("--output", required=True)

    b = sub.add_parser("bench", help="run a grid of thresholds and strategies")
    dataset_args(b)
    b.add_argument("--xi-list", required=True, help="comma-separated thresholds")
    b.add_argument("--strategies", default="rsau,trsau,advance", help="comma-separated strategies")
    b.add_argument("--rrs-policy", choices=[p.value for p in RrsPolicy], default=RrsPolicy.GLOBAL.value)
    b.add_argument("--max-len", type=_positive)
    b.add_argument("--output", help="stats blocks go here instead of stdout")
    return ap


def _load(args):
    return io.load_dataset(args.input, args.eu, args.format)


def _cmd_mine(args) -> int:
    d, names = _load(args)
    cfg = MinerConfig(args.xi, args.strategy, args.rrs_policy, args.max_len, trace=args.trace)
    results, stats = mine(d, cfg, names)
    io.write_results(results, args.output, names)
    if args.trace:
        for line in stats.trace:
            print(line, file=sys.stderr)
    if args.stats:
        rec = io.stats_record(stats, cfg, d)
        rec["results"] = args.output
        Path(args.stats).write_text(io.format_stats(rec))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    d, names = _load(args)
    results = oracle_mine(d, OracleConfig(args.max_len, args.xi))
    io.write_results(results, args.output, names)
    return EXIT_OK


def _cmd_diff(args) -> int:
    a = set(io.read_results(args.a))
    b = set(io.read_results(args.b))
    if a == b:
        return EXIT_OK
    for s, au in sorted(a - b, key=str):
        print(f"< {s} {io.fraction_text(au)}")
    for s, au in sorted(b - a, key=str):
        print(f"> {s} {io.fraction_text(au)}")
    return EXIT_DIFF


def _cmd_gen(args) -> int:
    if args.synthetic:
        d = io.synthetic_dataset(args.synthetic, args.seed)
    else:
        d, _ = io.load_dataset(args.input, args.eu, args.format)
    io.write_dataset(io.duplicate_dataset(d, args.dup), args.output)
    return EXIT_OK


def _cmd_bench(args) -> int:
    d, names = _load(args)
    try:
        xis = [_xi(x) for x in args.xi_list.split(",") if x.strip()]
        strategies = [Strategy(s.strip()) for s in args.strategies.split(",") if s.strip()]
    except (argparse.ArgumentTypeError, ValueError) as exc:
        raise UsageError(f"bench: {exc}") from None
    blocks = []
    for strategy in strategies:
        for xi in xis:
            cfg = MinerConfig(xi, strategy, args.rrs_policy, args.max_len)
            _, stats = mine(d, cfg, names)
            blocks.append(io.format_stats(io.stats_record(stats, cfg, d)))
    text = "\n".join(blocks)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"mine": _cmd_mine, "oracle": _cmd_oracle, "diff": _cmd_diff, "gen": _cmd_gen, "bench": _cmd_bench}


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigError, OracleLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except io.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        # model-level validation of parsed content
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main():
    sys.exit(cli_main())
