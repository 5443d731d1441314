"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported directly, so the environment flag does not
matter here. The first numba call (compilation) is excluded.
"""
import argparse
import timeit

import numpy as np

from geocycle import _kernels
from geocycle.families import platonic_cycle
from geocycle.quadrature import gauss_legendre


def cases():
    gx, gw = (np.asarray(v) for v in gauss_legendre(32))
    for solid, t in (("cube", 3), ("icosa", 5), ("dodeca", 5)):
        P = np.ascontiguousarray(platonic_cycle(solid).points)
        yield f"objective {solid} t={t}", "objective", (P, t, gx, gw)
        yield f"fd_gradient {solid} t={t}", "fd_gradient", (P, t, 1e-6, gx, gw)
        yield f"legendre_terms {solid} t={t}", "legendre_terms", (P, t, gx, gw)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = {"numpy": _kernels.numpy_impl}
    if _kernels.jit_impl is not None:
        impls["numba"] = _kernels.jit_impl
    print(f"{'kernel':32s}" + "".join(f"{k:>14s}" for k in impls) + ("   speedup" if len(impls) == 2 else ""))
    for label, name, a in cases():
        row = {}
        for key, mod in impls.items():
            fn = getattr(mod, name)
            fn(*a)  # warm-up / compile
            number = 3
            best = min(timeit.repeat(lambda: fn(*a), number=number, repeat=args.repeat)) / number
            row[key] = best
        line = f"{label:32s}" + "".join(f"{row[k] * 1e3:11.3f} ms" for k in impls)
        if len(row) == 2:
            line += f"   {row['numpy'] / row['numba']:7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
