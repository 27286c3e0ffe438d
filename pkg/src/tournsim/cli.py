"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage/config error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import majorization
from .config import PRESET_DESCRIPTIONS, Config, preset, preset_names, read_config, render_config
from .core import read_tournament
from .errors import CapExceededError, ConfigError, ParseError, TournsimError
from .models import parse_model
from .montecarlo import analytic_limit_check, exact_probability, render_csv, run_experiment
from .solutions import ALL_SOLUTIONS, Solution, solve

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _UsageError(Exception):
    pass


def _solution_list(values):
    try:
        return [Solution.parse(v) for v in values] if values else list(ALL_SOLUTIONS)
    except TournsimError as exc:
        raise _UsageError(str(exc)) from None


def cmd_solve(args) -> int:
    try:
        T = read_tournament(args.path)
    except ParseError as exc:
        print(f"error: {args.path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    for s in _solution_list(args.solution):
        print(f"{s.value}: {solve(s, T)}")
    return EXIT_OK


def _summary(result) -> str:
    rows = [("n", "p", "solution", "selects_all", "fraction")]
    for c in result.cells:
        p = "" if c.p_value is None else f"{c.p_value:.4g}"
        rows.append((str(c.n), p, c.solution.value, f"{c.selects_all}/{c.trials}", f"{c.fraction:.4f}"))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in rows]
    return "\n".join(lines)


def cmd_simulate(args) -> int:
    if bool(args.config) == bool(args.preset):
        raise _UsageError("give exactly one of CONFIG or --preset")
    cfg = preset(args.preset) if args.preset else read_config(args.config)
    plan = cfg.plan
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["root_seed"] = args.seed
    if overrides:
        from dataclasses import replace

        try:
            plan = replace(plan, **overrides)
        except TournsimError as exc:
            raise ConfigError(str(exc)) from None
    out = args.out or cfg.out
    if args.show_config:
        print(render_config(Config(plan, out)), end="")
        return EXIT_OK
    result = run_experiment(plan, workers=args.workers)
    text = render_csv(result)
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text, encoding="utf-8", newline="\n")
        except OSError as exc:
            print(f"error: cannot write {out}: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"# {plan.model}  seed={plan.root_seed}  trials={plan.trials}  ({result.seconds:.1f}s)")
        print(_summary(result))
        print(f"wrote {out}")
    return EXIT_OK


def cmd_exact(args) -> int:
    model = parse_model(args.model)
    sols = _solution_list(args.solution)
    for s in sols:
        value = exact_probability(model, s, args.n)
        print(f"{value:.12g}" if len(sols) == 1 else f"{s.value}: {value:.12g}")
    return EXIT_OK


def cmd_verify_lemmas(args) -> int:
    which = args.lemma or ["7", "9", "6"]
    reports = []
    for lemma in which:
        if lemma == "7":
            reports.append(majorization.check_transitive_degrees(args.max_n))
        elif lemma == "9":
            reports.append(majorization.check_equalizing_moves(args.max_vector_length, args.max_sum))
        else:
            reports.append(majorization.check_subset_sums(args.trials, args.seed))
    for r in reports:
        print(r.line())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_presets(args) -> int:
    if args.show:
        print(render_config(preset(args.show)), end="")
        return EXIT_OK
    for name in preset_names():
        print(f"{name:12s} {PRESET_DESCRIPTIONS[name]}")
    return EXIT_OK


def cmd_limit(args) -> int:
    report = analytic_limit_check(args.c, args.n, args.trials, args.seed, args.workers)
    print(f"Condorcet model p={args.c:g}/n, n={args.n}, {args.trials} trials")
    for r in report.rows:
        print(f"{r.solution.value:5s} empirical={r.empirical:.4f} limit={r.target:.4f} "
              f"stderr={r.stderr:.4f} z={r.z:+.2f}")
    return EXIT_OK


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tournsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="evaluate tournament solutions on a tournament file")
    p.add_argument("path")
    p.add_argument("--solution", "-s", action="append", help="COND, CNL, TC, UC or UCinf (repeatable)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("simulate", help="run a Monte Carlo experiment and write CSV")
    p.add_argument("config", nargs="?")
    p.add_argument("--preset")
    p.add_argument("--trials", type=_positive)
    p.add_argument("--seed", type=_u64)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--out")
    p.add_argument("--show-config", action="store_true", help="print the resolved config and exit")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("exact", help="exact selects-all probability by enumeration (n <= 6)")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--solution", "-s", action="append")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("verify-lemmas", help="brute-force checks of the majorization lemmas")
    p.add_argument("--lemma", action="append", choices=["6", "7", "9"])
    p.add_argument("--max-n", type=_positive, default=5, help="tournament size bound (lemma 7)")
    p.add_argument("--max-vector-length", type=_positive, default=4, help="vector length bound (lemma 9)")
    p.add_argument("--max-sum", type=int, default=8, help="component sum bound (lemma 9)")
    p.add_argument("--trials", type=_positive, default=1000, help="random pairs (lemma 6)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_lemmas)

    p = sub.add_parser("presets", help="list the bundled figure presets")
    p.add_argument("--show", metavar="NAME", help="print one preset as a config file")
    p.set_defaults(func=cmd_presets)

    p = sub.add_parser("limit", help="Condorcet model at p=c/n against its limit probabilities")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--n", type=_positive, default=1000)
    p.add_argument("--trials", type=_positive, default=10_000)
    p.add_argument("--seed", type=_u64, default=None)
    p.add_argument("--workers", type=_positive, default=1)
    p.set_defaults(func=cmd_limit)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", 0) is None and args.command == "limit":
        from .montecarlo import DEFAULT_SEED

        args.seed = DEFAULT_SEED
    try:
        return args.func(args)
    except (_UsageError, ConfigError, CapExceededError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TournsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
