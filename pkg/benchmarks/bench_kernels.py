"""Time the compiled and numpy kernels on the same workload.

    python benchmarks/bench_kernels.py [--frames 64] [--symbols 1000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from chaosqam import kernels
from chaosqam.chaosmap import make_map


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--frames", type=int, default=64)
    parser.add_argument("--symbols", type=int, default=1000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--p", type=float, default=0.5)
    args = parser.parse_args()

    m = make_map(args.p)
    rng = np.random.default_rng(0)
    syms = rng.integers(0, 8, (args.frames, args.symbols), dtype=np.int8)
    clean = kernels.modulate_rails(syms, 0.0, m.contraction, m.levels)
    received = clean + 1.5 * rng.standard_normal(clean.shape)
    steps = args.frames * args.symbols

    print(f"workload: {args.frames} rails x {args.symbols} symbols, p={args.p}")
    print(f"{'backend':8} {'kernel':10} {'seconds':>10} {'Msym/s':>8}")
    results = {}
    for backend in kernels.available_backends():
        for name, fn in (
            ("modulate", lambda: kernels.modulate_rails(syms, 0.0, m.contraction, m.levels, backend=backend)),
            ("viterbi", lambda: kernels.viterbi_rails(received, 0.0, m.contraction, m.levels, backend=backend)),
        ):
            t = best_of(fn, args.repeat)
            results[backend, name] = t
            print(f"{backend:8} {name:10} {t:10.4f} {steps / t / 1e6:8.2f}")
    if len(kernels.available_backends()) == 2:
        for name in ("modulate", "viterbi"):
            print(f"speedup {name}: {results['python', name] / results['cython', name]:.1f}x")


if __name__ == "__main__":
    main()
