"""Backend benchmark: compiled kernel vs NumPy fallback.

Run as ``python -m jumpmg.bench [--trials N] [--horizon N]``.
"""

import argparse
import time

import numpy as np

from . import kernels, rng
from .generators import RandomWalkSpec
from .presets import PRule, XRule


def time_backend(backend: str, spec: RandomWalkSpec, trials: int, base_seed: int) -> float:
    m = spec.model
    out = np.empty(kernels.N_FIELDS)
    u = np.empty(spec.horizon)
    t0 = time.perf_counter()
    for i in range(trials):
        rng.trial_generator(base_seed, i).random(out=u)
        kernels.rw_summary(m.x, m.b, m.p, u, m.gamma, m.big_gamma,
                           w_start=spec.horizon * 9 // 10, out=out, backend=backend)
    return time.perf_counter() - t0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="compare kernel backends")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--horizon", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    spec = RandomWalkSpec(XRule("neg_geom"), PRule("geom", {"base": 4.0}), args.horizon)
    spec.model  # build outside the timed region
    avail = kernels.available_backends()
    print(f"walk summary kernel, horizon={args.horizon}, trials={args.trials}")
    base = None
    for backend in avail:
        secs = time_backend(backend, spec, args.trials, args.seed)
        rate = args.trials * args.horizon / secs / 1e6
        note = ""
        if backend == "py":
            base = secs
        elif base is not None:
            note = f"  ({base / secs:.1f}x over py)"
        print(f"  {backend:3s}: {secs:8.3f}s  {rate:8.1f} M events/s{note}")
    if "cy" not in avail:
        print("  compiled kernel not built; only the fallback was timed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
