"""Command-line front end.

Subcommands: gen (emit path CSVs), analyze (single-path reports), mc (run a
Monte Carlo experiment), suite (the acceptance battery).  Exit codes:
0 success, 1 config error, 2 runtime numeric error, 3 I/O error.
Diagnostics go to stderr; data only ever goes to files.  The JUMPMG_OUT
environment variable overrides any --out flag.
"""

import argparse
import json
import os
import sys

from ._util import atomic_write_text
from .characteristics import characteristics_report
from .config import ConfigError, load_experiment
from .events import classify, crossing_localizer
from .generators import CoxSpec, OneShotSpec, RandomWalkSpec, gen_cox, gen_oneshot, gen_random_walk
from .integrands import pos_tail, sq_cap_abs, sq_cap_one, square, x_minus_log
from .montecarlo import run_trials, write_outputs
from .paths import write_path_csv
from .transforms import transform_bundle


class NumericError(RuntimeError):
    pass


def _outdir(args) -> str:
    out = os.environ.get("JUMPMG_OUT") or args.out
    os.makedirs(out, exist_ok=True)
    return out


def _generate(exp, seed: int):
    gen = exp.generator
    if isinstance(gen, RandomWalkSpec):
        return gen_random_walk(gen, seed), None
    if isinstance(gen, CoxSpec):
        return gen_cox(gen, seed)
    if isinstance(gen, OneShotSpec):
        return gen_oneshot(gen, seed), None
    raise ConfigError(f"cannot generate from {type(gen).__name__}")


def cmd_gen(args) -> int:
    exp = load_experiment(args.config, seed=args.seed)
    out = _outdir(args)
    for k in range(args.count):
        path, _ = _generate(exp, exp.base_seed + k)
        write_path_csv(path, os.path.join(out, f"path_{k:05d}.csv"))
    return 0


def cmd_analyze(args) -> int:
    exp = load_experiment(args.config, seed=args.seed)
    out = _outdir(args)
    path, rho = _generate(exp, exp.base_seed)
    write_path_csv(path, os.path.join(out, "path.csv"))
    spec = exp.generator
    fs = [sq_cap_abs(), sq_cap_one(), pos_tail(exp.params.kappa), square(), x_minus_log()]
    characteristics_report(spec, path, fs, rho=rho).write_csv(
        os.path.join(out, "characteristics.csv"))
    bundle = transform_bundle(spec, path, rho)
    bundle.write_csv(os.path.join(out, "transforms.csv"))
    cls = classify(path, exp.params)
    loc = crossing_localizer(path, exp.params.levels)
    report = {
        "verdict": cls.verdict.value,
        "limit": cls.limit,
        "final_value": cls.final_value,
        "oscillation": cls.oscillation,
        "window_sup": cls.window_sup,
        "window_inf": cls.window_inf,
        "tau_j": bundle.tau_j,
        "y_defined": bundle.y_values is not None,
        "rho": rho,
        "localizer": {
            "levels": list(map(float, loc.levels)),
            "crossing_times": [None if not t == t else float(t) for t in loc.crossing_times],
            "coverage": loc.coverage,
            "domination_holds": loc.domination_holds(),
        },
    }
    atomic_write_text(os.path.join(out, "report.json"),
                      json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_mc(args) -> int:
    exp = load_experiment(args.config, seed=args.seed, threads=args.threads)
    result = run_trials(exp)
    write_outputs(result, _outdir(args))
    return 0


def cmd_suite(args) -> int:
    from .suite import run_suite

    results = run_suite(quick=args.quick, threads=args.threads or 1, stream=sys.stderr)
    if args.out:
        out = _outdir(args)
        lines = [r.line() for r in results]
        atomic_write_text(os.path.join(out, "suite.txt"), "\n".join(lines) + "\n")
    return 0 if all(r.passed for r in results) else 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jumpmg",
                                 description="jump-martingale simulation and verification")
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="emit sample paths as CSV")
    gen.add_argument("--config", required=True)
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--out", required=True)
    gen.add_argument("--count", type=int, default=1)
    gen.set_defaults(fn=cmd_gen)

    an = sub.add_parser("analyze", help="single-path reports")
    an.add_argument("--config", required=True)
    an.add_argument("--seed", type=int, default=None)
    an.add_argument("--out", required=True)
    an.set_defaults(fn=cmd_analyze)

    mc = sub.add_parser("mc", help="run a Monte Carlo experiment")
    mc.add_argument("--config", required=True)
    mc.add_argument("--seed", type=int, default=None)
    mc.add_argument("--out", required=True)
    mc.add_argument("--threads", type=int, default=None)
    mc.set_defaults(fn=cmd_mc)

    st = sub.add_parser("suite", help="run the acceptance battery")
    st.add_argument("--quick", action="store_true",
                    help="reduced trial counts (smoke run)")
    st.add_argument("--threads", type=int, default=None)
    st.add_argument("--out", default=None)
    st.set_defaults(fn=cmd_suite)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; the contract says 1
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ArithmeticError, NumericError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
