"""Compiled kernels against the numpy fallback on the diagram workload.

    python3 benchmarks/bench_kernels.py [--n 300] [--repeat 5]

Times the grid evaluation of all four mechanism functions and the bisection
of every bracketed cell edge, the two steps behind ``capillary_diagram``,
then the whole diagram once per backend in a fresh interpreter (the backend
is fixed at import).
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from whitham_mi import _kernels_py

try:
    from whitham_mi import _kernels as compiled
except ImportError:
    compiled = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workload(mod, n):
    xs = np.linspace(0.05, 32.0, n)
    ys = np.linspace(1e-3, 3.0, n)
    X, Y = np.meshgrid(xs, ys)
    x, y = X.ravel(), Y.ravel()
    plane, fam = mod.PLANE_CAPILLARY, mod.FAMILY_CAPILLARY

    def grid():
        return [mod.mechanism_values(plane, fam, 1.0, m, x, y) for m in (1, 2, 3, 4)]

    vals = grid()
    brackets = []
    for m, v in zip((1, 2, 3, 4), vals):
        S = np.sign(v.reshape(X.shape))
        mask = S[:-1] * S[1:] < 0
        brackets.append((m, X[:-1][mask], Y[:-1][mask], X[1:][mask], Y[1:][mask]))

    def bisect():
        for m, x0, y0, x1, y1 in brackets:
            mod.bisect_segments(plane, fam, 1.0, m, x0, y0, x1, y1, tol=1e-13)

    return grid, bisect, sum(len(b[1]) for b in brackets)


DIAGRAM = """
import time
from whitham_mi import BACKEND, capillary_diagram
t0 = time.perf_counter()
capillary_diagram(resolution={n})
print(BACKEND, time.perf_counter() - t0)
"""


def diagram_time(backend, n):
    env = dict(os.environ, WHITHAM_MI_BACKEND=backend, WHITHAM_MI_THREADS="1")
    out = subprocess.run([sys.executable, "-c", DIAGRAM.format(n=n)], env=env,
                         capture_output=True, text=True, check=True).stdout.split()
    return out[0], float(out[1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=300, help="grid points per axis")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    mods = [("python", _kernels_py)] + ([("compiled", compiled)] if compiled else [])
    results = {}
    for name, mod in mods:
        grid, bisect, nb = workload(mod, args.n)
        results[name] = (best_of(grid, args.repeat), best_of(bisect, args.repeat))
    print(f"grid {args.n}x{args.n}, 4 mechanisms, {nb} brackets")
    print(f"{'backend':<10}{'grid [ms]':>12}{'bisect [ms]':>14}")
    for name, (g, b) in results.items():
        print(f"{name:<10}{1e3 * g:>12.2f}{1e3 * b:>14.2f}")
    if compiled is None:
        print("compiled extension not built; only the fallback was timed")
    else:
        (gp, bp), (gc, bc) = results["python"], results["compiled"]
        print(f"speed-up: grid x{gp / gc:.1f}, bisect x{bp / bc:.1f}")
    for backend in ("python", "compiled"):
        used, t = diagram_time(backend, args.n)
        print(f"capillary_diagram(resolution={args.n}) with {used}: {t:.2f} s")


if __name__ == "__main__":
    main()
