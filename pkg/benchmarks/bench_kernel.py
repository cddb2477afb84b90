"""Benchmark the compiled simulation kernel against the pure-Python one.

Runs the same batch of paths through both kernels, verifies the
outputs are bit-identical, and reports throughput.  Run from the
repository root:

    python3 benchmarks/bench_kernel.py [--paths N] [--dt DT]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from snlevy import (LevyModel, ScaleFunction, build_two_sided,
                    measure_from_dict)
from snlevy.montecarlo import RULE_TILDE, SimConfig, engine
from snlevy.montecarlo import _kernel_py

try:
    from snlevy.montecarlo import _simcore
except ImportError:
    _simcore = None


def run_with(kernel, boundary, model, config):
    saved = engine.backend.advance
    engine.backend.advance = kernel
    try:
        t0 = time.perf_counter()
        res = engine.run_paths(boundary, model, config, RULE_TILDE)
        elapsed = time.perf_counter() - t0
    finally:
        engine.backend.advance = saved
    return res, elapsed


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--paths", type=int, default=200)
    ap.add_argument("--dt", type=float, default=1e-4)
    args = ap.parse_args()

    model = LevyModel(1.0, 0.0)
    measure = measure_from_dict(
        {"atoms": [[-1.0, 0.5], [1.0, 0.5]]})
    scale = ScaleFunction(model, 4.0, 1e-4)
    boundary = build_two_sided(measure, scale)
    config = SimConfig(dt=args.dt, t_max=50.0, n_paths=args.paths,
                       seed=42, eps=0.01)

    res_py, t_py = run_with(_kernel_py.advance, boundary, model, config)
    steps = res_py.n_steps
    print(f"python   : {t_py:8.3f} s  "
          f"({steps / t_py / 1e6:7.2f} Msteps/s)")

    if _simcore is None:
        print("compiled : extension not built, skipping")
        return

    res_c, t_c = run_with(_simcore.advance, boundary, model, config)
    print(f"compiled : {t_c:8.3f} s  "
          f"({steps / t_c / 1e6:7.2f} Msteps/s)")
    print(f"speedup  : {t_py / t_c:8.1f}x")

    for name in ("t", "x", "l", "sup", "status"):
        a, b = getattr(res_py, name), getattr(res_c, name)
        if not np.array_equal(a, b):
            raise SystemExit(f"MISMATCH in {name}")
    print("outputs  : bit-identical")


if __name__ == "__main__":
    main()
