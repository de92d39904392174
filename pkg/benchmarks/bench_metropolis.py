"""Compare the compiled and pure-Python Metropolis kernels.

    python benchmarks/bench_metropolis.py --n 5 10 25 --sweeps 20000
"""
import argparse
import time

import numpy as np

from dysongas import _metropolis_py, montecarlo

try:
    from dysongas import _metropolis
except ImportError:
    _metropolis = None


def bench(kernel, n, sweeps, seed=0):
    rng = np.random.default_rng(seed)
    c = montecarlo.initial_configuration(n, seed)
    x, y = (a.copy() for a in c.xy())
    normals = rng.standard_normal((sweeps, n, 2))
    uniforms = rng.random((sweeps, n))
    t0 = time.perf_counter()
    out = kernel.run_block(x, y, normals, uniforms, 0.5 / np.sqrt(n))
    return time.perf_counter() - t0, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[5, 10, 25])
    ap.add_argument("--sweeps", type=int, default=20_000)
    args = ap.parse_args()
    if _metropolis is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")
        return
    print(f"{'N':>4} {'python s':>10} {'cython s':>10} {'speedup':>8}  identical")
    for n in args.n:
        t_py, out_py = bench(_metropolis_py, n, args.sweeps)
        t_cy, out_cy = bench(_metropolis, n, args.sweeps)
        print(f"{n:>4} {t_py:>10.3f} {t_cy:>10.4f} {t_py / t_cy:>8.1f}  {out_py == out_cy}")


if __name__ == "__main__":
    main()
