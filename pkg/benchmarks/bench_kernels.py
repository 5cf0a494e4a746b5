"""Compare the compiled gate kernels with the numpy fallback.

Usage: PYTHONPATH=src python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from qhtt.linalg import _pykernels

try:
    from qhtt.linalg import _ckernels
except ImportError:
    _ckernels = None

H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def state(n, k, seed=0):
    rng = np.random.default_rng(seed)
    return np.ascontiguousarray(rng.normal(size=(2**n, k)) + 1j * rng.normal(size=(2**n, k)))


def bench(mod, n, k, repeat):
    v = state(n, k)
    t1 = min(timeit.repeat(lambda: mod.apply_1q(v, H, n // 2), number=20, repeat=repeat)) / 20
    t2 = min(timeit.repeat(lambda: mod.apply_2q(v, CX, n - 1, 0), number=20, repeat=repeat)) / 20
    return t1, t2


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
        return
    # kernels must agree before timing means anything
    for n, k in ((3, 1), (5, 4)):
        a, b = state(n, k), state(n, k)
        _pykernels.apply_2q(a, CX, n - 1, 0, 1 << 1, 0)
        _ckernels.apply_2q(b, CX, n - 1, 0, 1 << 1, 0)
        assert np.allclose(a, b)
    print(f"{'registers':>9} {'columns':>7} {'kernel':>6} {'python us':>10} {'cython us':>10} {'speedup':>8}")
    for n, k in ((4, 1), (4, 17), (8, 1), (8, 17), (12, 1), (12, 17)):
        py = bench(_pykernels, n, k, args.repeat)
        cy = bench(_ckernels, n, k, args.repeat)
        for name, tp, tc in (("1q", py[0], cy[0]), ("2q", py[1], cy[1])):
            print(f"{n:>9} {k:>7} {name:>6} {tp * 1e6:>10.1f} {tc * 1e6:>10.1f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
