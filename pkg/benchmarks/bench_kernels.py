#!/usr/bin/env python3
"""Compare the numba and pure-numpy kernel backends.

Times the stencil kernels, the fused system application, and a full unwrap
on each backend and prints a table of per-call times with the speedup.

    python3 benchmarks/bench_kernels.py [--size 512] [--repeats 50]
"""

import argparse
import time

import numpy as np

from phaseirls import kernels
from phaseirls.irls import unwrap
from phaseirls.synth import SceneSpec, add_phase_noise, generate_scene, wrap_scene


def time_call(fn, repeats):
    fn()  # warm any jit path and the cache
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def benchmark(size, repeats):
    rng = np.random.Generator(np.random.Philox(key=np.uint64(7)))
    u = rng.standard_normal((size, size))
    vv = rng.standard_normal((size - 1, size))
    vh = rng.standard_normal((size, size - 1))
    dv = rng.uniform(0, 1e6, (size - 1, size))
    dh = rng.uniform(0, 1e6, (size, size - 1))

    spec = SceneSpec("gaussian-bumps", 128, 128, amplitude=8.0, feature_scale=16.0, seed=3)
    scene = add_phase_noise(wrap_scene(generate_scene(spec)), 0.2, 4)

    cases = {
        "diff_rows": lambda: kernels.diff_rows(u),
        "diff_cols": lambda: kernels.diff_cols(u),
        "adj_diff_rows": lambda: kernels.adj_diff_rows(vv),
        "adj_diff_cols": lambda: kernels.adj_diff_cols(vh),
        "apply_system": lambda: kernels.apply_system_blocks(u, vv, vh, dv, dh, 100.0),
        "unwrap 128x128": lambda: unwrap(scene),
    }

    results = {}
    for backend in kernels.available_backends():
        kernels.select_backend(backend)
        results[backend] = {
            name: time_call(fn, repeats if name != "unwrap 128x128" else max(1, repeats // 10))
            for name, fn in cases.items()
        }

    width = max(len(name) for name in cases)
    backends = list(results)
    header = f"{'kernel':<{width}}  " + "  ".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"  {'speedup':>8}"
    print(f"grid {size}x{size}, best of {repeats} calls, times in ms")
    print(header)
    print("-" * len(header))
    for name in cases:
        row = f"{name:<{width}}  "
        row += "  ".join(f"{results[b][name] * 1e3:12.3f}" for b in backends)
        if len(backends) == 2:
            a, b = (results[backends[0]][name], results[backends[1]][name])
            row += f"  {a / b:8.2f}x"
        print(row)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=512)
    parser.add_argument("--repeats", type=int, default=50)
    args = parser.parse_args()
    benchmark(args.size, args.repeats)
