#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure numpy fallback.

Both backends consume identical counter-based randomness, so outputs
match (up to libm rounding); only throughput differs.  Run after
building the extension:

    python bench/benchmark_kernels.py [--n-paths 20000] [--steps 2048]
"""

import argparse
import time

import numpy as np

from shc._kernels import fallback, laws

try:
    from shc._kernels import _core
    HAVE_CORE = True
except ImportError:
    HAVE_CORE = False

CASES = [
    ("gauss 1d sup", "running_sup",
     (laws.GAUSS1D, np.array([1.0])), {}),
    ("stable(1.5) 1d sup", "running_sup",
     (laws.STABLE1D, np.array([1.5, 1.0])), {}),
    ("cauchy 1d sup", "running_sup",
     (laws.STABLE1D, np.array([1.0, 1.0])), {}),
    ("brownian disk exit+bridge", "disk_exit",
     (laws.GAUSS2D, np.array([1.0, 0.0, 1.0])),
     {"bridge": True}),
    ("stable(0.5) disk exit", "disk_exit",
     (laws.STABLE2D, np.array([0.5, 1.0])), {}),
    ("cauchy interval exit", "interval_exit",
     (laws.STABLE1D, np.array([1.0, 1.0])), {}),
]


def run_case(impl, kind, law, params, n_paths, steps, dt, **kw):
    if kind == "running_sup":
        return impl.running_sup(law, params, 1, 1, 0, n_paths, steps, dt,
                                True)
    if kind == "disk_exit":
        x0 = np.tile([[0.5, 0.0]], (n_paths, 1))
        if impl is fallback:
            return impl.disk_exit(law, params, 1, 1, 0, n_paths, steps, dt,
                                  x0, (0.0, 0.0), 1.0, False,
                                  kw.get("bridge", False), True)
        return impl.disk_exit(law, params, 1, 1, 0, n_paths, steps, dt,
                              x0, 0.0, 0.0, 1.0, False,
                              kw.get("bridge", False), True)
    if kind == "interval_exit":
        return impl.interval_exit(law, params, 1, 1, 0, n_paths, steps, dt,
                                  0.2, True)
    raise ValueError(kind)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-paths", type=int, default=20_000)
    ap.add_argument("--steps", type=int, default=2048)
    ap.add_argument("--t", type=float, default=1e-3)
    args = ap.parse_args()
    dt = args.t / args.steps
    cells = args.n_paths * args.steps

    print(f"{args.n_paths} paths x {args.steps} steps "
          f"({cells/1e6:.1f}M cells, antithetic pairs)")
    header = f"{'case':32s} {'fallback':>12s} {'compiled':>12s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for name, kind, (law, params), kw in CASES:
        # fallback at a reduced path count, scaled up
        scale = 8
        t0 = time.perf_counter()
        run_case(fallback, kind, law, params, args.n_paths // scale,
                 args.steps, dt, **kw)
        fb = (time.perf_counter() - t0) * scale
        if HAVE_CORE:
            t0 = time.perf_counter()
            run_case(_core, kind, law, params, args.n_paths, args.steps, dt,
                     **kw)
            co = time.perf_counter() - t0
            print(f"{name:32s} {cells/fb/1e6:9.2f} M/s {cells/co/1e6:9.2f} M/s"
                  f" {fb/co:7.1f}x")
        else:
            print(f"{name:32s} {cells/fb/1e6:9.2f} M/s {'-':>12s} {'-':>8s}")
    if not HAVE_CORE:
        print("\ncompiled extension not built; showing fallback only")


if __name__ == "__main__":
    main()
