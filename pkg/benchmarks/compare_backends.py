"""Benchmark: compiled kernels vs pure-numpy fallback.

Times killed-path simulation with summary extraction, and the conditioned
post-minimum integrator, on identical per-path streams; verifies along the
way that both backends produce bit-identical output.

Usage: python benchmarks/compare_backends.py [--quick]
"""
import argparse
import time

import numpy as np

from levyfluct import (CompoundPoissonExp, LevyModel, SimConfig, brownian,
                       build_evaluator)
from levyfluct._backend import HAVE_COMPILED
from levyfluct.paths import path_summaries, post_rho_probe_samples

CASES = [
    ("BM, gamma=0.5, dt=1e-3", brownian(0.0, 1.0), 0.5, 1e-3, 4000),
    ("BM, gamma=0.5, dt=1e-4", brownian(0.0, 1.0), 0.5, 1e-4, 800),
    ("BM, gamma=4, dt=1e-3 (short paths)", brownian(0.0, 1.0), 4.0, 1e-3, 40_000),
    ("CPExp(1,2), gamma=0.5, dt=1e-3", LevyModel(1.0, 1.0, CompoundPoissonExp(1.0, 2.0)),
     0.5, 1e-3, 4000),
]


def time_paths(backend, model, gamma, dt, n_paths):
    cfg = SimConfig(model=model, gamma=gamma, dt=dt, n_paths=n_paths, seed=1234)
    t0 = time.perf_counter()
    s = path_summaries(cfg, level_b=1.0, probe_lag=0.25, workers=1, backend=backend)
    return time.perf_counter() - t0, s


def time_sde(backend, n_paths):
    model = brownian(0.0, 1.0)
    ev = build_evaluator(model, 0.5, x_max=4.0)
    cfg = SimConfig(model=model, gamma=0.5, dt=1e-3, n_paths=n_paths, seed=77)
    t0 = time.perf_counter()
    out = post_rho_probe_samples(ev, cfg, level=2.0, eps=2e-3, n_paths=n_paths,
                                 probe_lag=0.25, workers=1, backend=backend)
    return time.perf_counter() - t0, out[0]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="quarter-size runs")
    args = parser.parse_args()

    if not HAVE_COMPILED:
        print("compiled kernels unavailable; nothing to compare")
        return

    print(f"{'case':<40} {'numpy':>10} {'compiled':>10} {'speedup':>8}  identical")
    for label, model, gamma, dt, n in CASES:
        if args.quick:
            n = max(n // 4, 100)
        t_py, s_py = time_paths("python", model, gamma, dt, n)
        t_c, s_c = time_paths("compiled", model, gamma, dt, n)
        same = np.array_equal(s_py.data, s_c.data, equal_nan=True)
        print(f"{label:<40} {n / t_py:>8.0f}/s {n / t_c:>8.0f}/s "
              f"{t_py / t_c:>7.2f}x  {same}")

    n = 100 if args.quick else 400
    t_py, z_py = time_sde("python", n)
    t_c, z_c = time_sde("compiled", n)
    same = np.array_equal(z_py, z_c)
    print(f"{'conditioned dynamics, level=2':<40} {n / t_py:>8.0f}/s "
          f"{n / t_c:>8.0f}/s {t_py / t_c:>7.2f}x  {same}")


if __name__ == "__main__":
    main()
