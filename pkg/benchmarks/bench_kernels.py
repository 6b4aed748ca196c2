"""Time the compiled and pure-Python kernel backends on the same inputs.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""
import argparse
import timeit

import numpy as np

from bergman_rigidity import kernels


def _cases(rng):
    m = 1024
    t = np.arange(m) / m
    src = np.exp(2j * np.pi * t) * (1 + 0.1 * np.cos(6 * np.pi * t))
    dz = np.gradient(src, t)
    tangent = dz / np.abs(dz)
    ds = np.abs(dz) / m
    dzw = dz / m
    dens = rng.standard_normal((m, 8)) + 1j * rng.standard_normal((m, 8))
    targets = 0.8 * np.sqrt(rng.random(2000)) * np.exp(2j * np.pi * rng.random(2000))
    z = (0.55 + 0.4 * rng.random(400)) * np.exp(2j * np.pi * rng.random(400))
    w = (0.55 + 0.4 * rng.random(400)) * np.exp(2j * np.pi * rng.random(400))
    zz, ww = np.meshgrid(z, w)
    return {
        "kerzman_stein_matrix (1024 nodes)": lambda b: b.kerzman_stein_matrix(src, tangent, ds),
        "cauchy_sum (2000 x 1024 x 8)": lambda b: b.cauchy_sum(targets, src, dzw, dens, 1),
        "annulus_green (400 x 400)": lambda b: b.annulus_green(zz.ravel(), ww.ravel(), 0.25, 20),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = {"python": kernels.get_backend("python")}
    try:
        backends["cython"] = kernels.get_backend("cython")
    except ImportError:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':36s}" + "".join(f"{k:>12s}" for k in backends) + "     speedup")
    for name, fn in _cases(np.random.default_rng(0)).items():
        times = {k: min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat)) for k, b in backends.items()}
        ratio = f"{times['python'] / times['cython']:10.1f}x" if "cython" in times else ""
        print(f"{name:36s}" + "".join(f"{t * 1e3:10.1f}ms" for t in times.values()) + ratio)


if __name__ == "__main__":
    main()
