"""``lsra`` command line: solve, bench and gen."""

from __future__ import annotations

import argparse
import sys

from .bench import bench_dir, run_file
from .generator import generate_planted
from .search import SearchConfig
from .search.config import ABLATIONS

EXIT_SAT, EXIT_UNKNOWN, EXIT_ERROR = 0, 1, 2


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cutoff", type=float, default=1200.0, help="seconds per instance")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--L", dest="L", type=int, default=20, help="mode switching factor")
    p.add_argument("--K", dest="K", type=int, default=3, help="operations sampled when escaping")
    p.add_argument("--sp", type=float, default=0.0003, help="weight smoothing probability")
    p.add_argument("--init", choices=("zero", "random"), default="zero")
    p.add_argument("--ablation", choices=sorted(ABLATIONS), default="none")
    p.add_argument("--validate", choices=("on", "off"), default="on")
    p.add_argument("--stats", metavar="PATH", default=None,
                   help="write the tie histogram as CSV k,step_count ('-' for stderr)")


def _config(args) -> SearchConfig:
    return SearchConfig.with_ablation(
        args.ablation,
        L=args.L,
        K=args.K,
        sp=args.sp,
        cutoff_seconds=args.cutoff,
        max_steps=args.max_steps,
        seed=args.seed,
        init=args.init,
    )


def _write_stats(path: str, histogram: dict[int, int]) -> None:
    text = "k,step_count\n" + "".join(f"{k},{n}\n" for k, n in sorted(histogram.items()))
    if path == "-":
        sys.stderr.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_solve(args) -> int:
    result = run_file(args.file, _config(args), validate=args.validate == "on")
    if result.answer == "error":
        print(f"error: {result.diagnostic}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(result.output)
    if args.stats and result.stats is not None:
        _write_stats(args.stats, result.stats.tie_histogram)
    return EXIT_SAT if result.answer == "sat" else EXIT_UNKNOWN


def _cmd_bench(args) -> int:
    report = bench_dir(args.dir, _config(args), jobs=args.jobs, validate=args.validate == "on")
    csv_text = report.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.stats:
        _write_stats(args.stats, report.tie_histogram())
    for r in report.rows:
        if r.diagnostic:
            print(f"{r.instance}: {r.diagnostic}", file=sys.stderr)
    return EXIT_SAT


def _cmd_gen(args) -> int:
    sys.stdout.write(generate_planted(args.kind, args.n_vars, args.n_clauses, args.seed, args.bools))
    return EXIT_SAT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lsra", description="Local search for QF_LRA and multilinear QF_NRA.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one SMT-LIB 2 file")
    p.add_argument("file")
    _add_search_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bench", help="run every .smt2 file of a directory, CSV to stdout")
    p.add_argument("dir")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None, help="CSV output path")
    _add_search_flags(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("gen", help="print a random planted satisfiable instance")
    p.add_argument("kind", choices=("lra", "mra"))
    p.add_argument("n_vars", type=int)
    p.add_argument("n_clauses", type=int)
    p.add_argument("seed", type=int)
    p.add_argument("--bools", type=int, default=0, help="number of Boolean variables to mix in")
    p.set_defaults(func=_cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_SAT
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
