"""Command line entry point: ``modecollapse <subcommand> ...``.

Exit status is 0 on success, 1 on invalid input and 2 when a check fails
(infeasible factorization, violated bound).
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import blackwell, veegan
from .bounds import bounds_curve, bounds_curve_to_csv, packing_sweep, sweep_to_csv
from .distributions import (
    KL_SMOOTHING, DiscreteDist, PiecewiseUniformDist, common_refinement, load_dist, pack,
    total_variation,
)
from .evaluation import frequency_csv, kl_report, load_counts, sample_packed, sample_synthetic
from .region import dtv_from_boundary, region_area, region_boundary

EXIT_OK, EXIT_INVALID, EXIT_CHECK_FAILED = 0, 1, 2


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _load_pair(paths):
    if len(paths) != 2:
        raise ValueError("expected exactly two inputs: -i TARGET -i GENERATED")
    p, q = (load_dist(path) for path in paths)
    if isinstance(p, PiecewiseUniformDist) and isinstance(q, PiecewiseUniformDist):
        return common_refinement(p, q)
    if isinstance(p, DiscreteDist) and isinstance(q, DiscreteDist):
        return p, q
    raise ValueError("inputs must both be discrete ('atoms') or both piecewise ('segments')")


def _load_matrix(path):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("rows", data.get("matrix"))
    return np.array(data, dtype=np.float64)


def _fmt(value):
    return repr(float(value))


def cmd_region(args):
    p, q = _load_pair(args.input)
    if args.m > 1:
        p, q = pack(p, args.m).atoms, pack(q, args.m).atoms
    boundary = region_boundary(p, q)
    _emit(boundary.to_csv(), args.out)
    if args.out is not None:
        print(f"dtv={_fmt(dtv_from_boundary(boundary))} area={_fmt(region_area(boundary))}")
    return EXIT_OK


def cmd_dtv(args):
    p, q = _load_pair(args.input)
    if args.m > 1:
        p, q = pack(p, args.m).atoms, pack(q, args.m).atoms
    result = {"m": args.m, "dtv": total_variation(p, q)}
    _emit(json.dumps(result) + "\n", args.out)
    return EXIT_OK


def cmd_pack_sweep(args):
    p, q = _load_pair(args.input)
    _emit(sweep_to_csv(packing_sweep(p, q, args.m)), args.out)
    return EXIT_OK


def cmd_bounds(args):
    _emit(bounds_curve_to_csv(bounds_curve(args.tau, args.m)), args.out)
    return EXIT_OK


def cmd_blackwell(args):
    if len(args.input) != 2:
        raise ValueError("expected exactly two inputs: -i B -i C")
    b, c = (_load_matrix(path) for path in args.input)
    result = blackwell.is_more_informative(
        b, c, payoff_trials=args.trials, seed=args.seed, tol=args.tol)
    doc = {"verdict": result.verdict.value}
    if result.mixing is not None:
        doc["mixing"] = result.mixing.tolist()
    if result.witness is not None:
        doc["witness"] = {"payoff": result.witness.payoff.tolist(),
                          "prior": result.witness.prior.tolist(),
                          "payoff_gap": result.payoff_gap}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    if args.out is not None:
        print(result.verdict.value)
    return EXIT_OK if result.verdict is blackwell.Verdict.MORE_INFORMATIVE else EXIT_CHECK_FAILED


def cmd_veegan_check(args):
    if args.random:
        rng = np.random.default_rng(args.seed)
        configs = [veegan.random_config(rng, int(rng.integers(2, 6)), int(rng.integers(2, 6)))
                   for _ in range(args.random)]
    elif args.input:
        configs = [veegan.load_config(path) for path in args.input]
    else:
        raise ValueError("give -i CONFIG or --random N")
    lines = ["index,lhs,rhs,gap,holds,matched"]
    failed = False
    for i, cfg in enumerate(configs):
        report = veegan.verify_bound(cfg, tol=args.tol)
        matched = veegan.matched_optimum_check(cfg, tol=max(args.tol, 1e-12))
        failed |= not report.holds
        lines.append(f"{i},{_fmt(report.lhs)},{_fmt(report.rhs)},{_fmt(report.gap)},"
                     f"{report.holds},{matched}")
    text = "\n".join(lines) + "\n"
    if len(configs) == 1:
        diag = veegan.optimum_diagnostics(configs[0])
        text += "".join(f"# {key}={_fmt(value)}\n" for key, value in diag.items())
    _emit(text, args.out)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _named_input(item):
    name, sep, path = item.partition("=")
    if not sep:
        return Path(item).stem, item
    return name, path


def cmd_kl_eval(args):
    reference = load_counts(args.reference)
    generated = []
    for item in args.input:
        name, path = _named_input(item)
        generated.append((name, load_counts(path)))
    report = kl_report(generated, reference, smoothing=args.smoothing,
                       reference_name=Path(args.reference).stem, log_base=args.log_base)
    sys.stdout.write(report.format_table())
    if args.out is not None:
        text = report.to_csv() if str(args.out).endswith(".csv") else report.to_json()
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def cmd_sample(args):
    if len(args.input) != 1:
        raise ValueError("expected exactly one input distribution")
    dist = load_dist(args.input[0])
    if not isinstance(dist, PiecewiseUniformDist):
        raise ValueError("sampling needs a piecewise-uniform ('segments') distribution")
    bins = args.bins if args.bins else dist.breakpoints
    if args.m > 1:
        counts = sample_packed(dist, args.n, args.m, bins, args.seed)
    else:
        counts = sample_synthetic(dist, args.n, bins, args.seed)
    _emit(frequency_csv(counts), args.out)
    return EXIT_OK


def _log_base(text):
    if text in ("e", "nat", "nats"):
        return None
    value = float(text)
    if value <= 0 or value == 1:
        raise argparse.ArgumentTypeError("log base must be positive and not 1")
    return None if value == math.e else value


class _Parser(argparse.ArgumentParser):
    # Usage errors are invalid input (1); status 2 is reserved for failed checks.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(
        prog="modecollapse", description="Mode-collapse metrics for discrete and piecewise-uniform laws.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, inputs=True):
        sp = sub.add_parser(name, help=help_text)
        if inputs:
            sp.add_argument("-i", "--input", action="append", default=[], metavar="PATH")
        sp.add_argument("--out", default=None, metavar="PATH")
        sp.set_defaults(func=func)
        return sp

    sp = add("region", cmd_region, "collapse-region boundary as epsilon,delta CSV")
    sp.add_argument("--m", type=int, default=1, help="packing degree")
    sp = add("dtv", cmd_dtv, "total variation of a (packed) pair")
    sp.add_argument("--m", type=int, default=1)
    sp = add("pack-sweep", cmd_pack_sweep, "packed TV, area and bounds for m = 1..M")
    sp.add_argument("--m", type=int, default=6)
    sp = add("bounds", cmd_bounds, "lower/upper packed-TV envelope", inputs=False)
    sp.add_argument("--tau", type=float, nargs="+", required=True)
    sp.add_argument("--m", type=int, default=6)
    sp = add("blackwell", cmd_blackwell, "is B more informative than C?")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--tol", type=float, default=blackwell.FACTORIZE_TOL)
    sp = add("veegan-check", cmd_veegan_check, "verify the reconstructor objective bound")
    sp.add_argument("--random", type=int, default=0, metavar="N")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=veegan.BOUND_TOL)
    sp = add("kl-eval", cmd_kl_eval, "average KL of label histograms against a reference")
    sp.add_argument("--reference", required=True, metavar="PATH")
    sp.add_argument("--smoothing", type=float, default=KL_SMOOTHING)
    sp.add_argument("--log-base", type=_log_base, default=None)
    sp = add("sample", cmd_sample, "seeded synthetic histogram of a piecewise-uniform law")
    sp.add_argument("--n", type=int, default=10000)
    sp.add_argument("--bins", type=float, nargs="+", default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--m", type=int, default=1, help="histogram m-tuples of consecutive draws")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
