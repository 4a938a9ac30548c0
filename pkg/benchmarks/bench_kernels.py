"""Compare the compiled modular RREF kernel with the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 64 128 256] [--repeat 3]

Part one times ``rref_modp`` on random dense matrices (both backends, same
input, results compared).  Part two times a full derivation-space solve
of a large dual extension under each backend in a fresh interpreter, since
the backend is fixed at import.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from derput import _kernels_py, kernels
from derput.linalg import PRIMES

try:
    from derput import _kernels
except ImportError:
    _kernels = None

SOLVE_SNIPPET = """
import time
from derput import kernels
from derput.algebra import dual_extension_algebra
from derput.dersolve import solve
from derput.verify import InstanceSpec, generate_instance
q = generate_instance(InstanceSpec({seed}, 6, 8))
t = dual_extension_algebra(q)
t0 = time.perf_counter()
for kind in ("der", "jordan"):
    solve(t, kind)
print(kernels.BACKEND, t.dim, time.perf_counter() - t0)
"""


def bench_matrix(n, repeat, rng):
    p = PRIMES[0]
    rows = n + n // 2
    a = rng.integers(0, p, size=(rows, n), dtype=np.int64)
    # rank-deficient on purpose: nullspace work is the common case
    a[rows // 2:] = 0
    out = {}
    for name, mod in (("python", _kernels_py), ("cython", _kernels)):
        if mod is None:
            continue
        best = float("inf")
        for _ in range(repeat):
            b = a.copy()
            t0 = time.perf_counter()
            rank, piv = mod.rref_modp(b, p)
            best = min(best, time.perf_counter() - t0)
        out[name] = (best, rank, b)
    if len(out) == 2:
        assert np.array_equal(out["python"][2], out["cython"][2]), "backends disagree"
    return {k: v[0] for k, v in out.items()}


def bench_solve(seed):
    res = {}
    for force_python in (True, False):
        env = {k: v for k, v in os.environ.items() if k != "DERPUT_PURE_PYTHON"}
        if force_python:
            env["DERPUT_PURE_PYTHON"] = "1"
        out = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET.format(seed=seed)],
                             env=env, capture_output=True, text=True, check=True).stdout.split()
        res[out[0]] = (int(out[1]), float(out[2]))
    return res


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 384])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=9, help="instance seed for the solve benchmark")
    args = ap.parse_args()
    print(f"active backend: {kernels.BACKEND}")
    if _kernels is None:
        print("compiled kernel not built; only the fallback is timed")
    rng = np.random.default_rng(0)
    print(f"{'cols':>6} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.sizes:
        r = bench_matrix(n, args.repeat, rng)
        py, cy = r.get("python"), r.get("cython")
        sp = f"{py / cy:8.1f}" if cy else "       -"
        print(f"{n:6d} {py:10.4f} {cy if cy is not None else float('nan'):10.4f} {sp}")
    print()
    print("der + jordan solve, dual extension of a 6-vertex instance:")
    for backend, (dim, secs) in sorted(bench_solve(args.seed).items()):
        print(f"  {backend:7s} dim={dim} {secs:.2f} s")


if __name__ == "__main__":
    main()
