"""Time the compiled evaluation kernels against the numpy fallback.

Run with ``python3 benchmarks/bench_core.py``.
"""

import argparse
import timeit

import numpy as np

from ortho2c import _core_py

try:
    from ortho2c import _core
except ImportError:
    _core = None


def bench(label, fn, repeat):
    best = min(timeit.repeat(fn, number=1, repeat=repeat))
    print(f"{label:<40s} {best * 1e3:9.3f} ms")
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=20000)
    parser.add_argument("--degree", type=int, default=12)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    z = (rng.normal(size=args.points) + 1j * rng.normal(size=args.points)) * 0.5
    exps = [(m - k, k) for m in range(args.degree + 1) for k in range(m + 1)]
    a = np.array([e[0] for e in exps], dtype=np.int64)
    b = np.array([e[1] for e in exps], dtype=np.int64)
    c = rng.normal(size=len(exps)) + 1j * rng.normal(size=len(exps))

    backends = [("python", _core_py)] + ([("cython", _core)] if _core is not None else [])
    times = {}
    for name, mod in backends:
        times[(name, "table")] = bench(f"{name}: monomial_table", lambda: mod.monomial_table(z, args.degree), args.repeat)
        times[(name, "terms")] = bench(f"{name}: eval_terms", lambda: mod.eval_terms(a, b, c, z), args.repeat)
    if _core is None:
        print("compiled extension not built; only the fallback was timed")
        return
    for kind in ("table", "terms"):
        print(f"speedup {kind}: {times[('python', kind)] / times[('cython', kind)]:.2f}x")


if __name__ == "__main__":
    main()
