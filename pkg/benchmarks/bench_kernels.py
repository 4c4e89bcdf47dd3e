"""Compare the compiled and interpreted enumeration kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Each case runs once through the numba kernels and once through the plain
Python kernels (exact object arrays); counts must agree.
"""
import argparse
import time
from contextlib import contextmanager

from grasscount import kernels
from grasscount.counting import duality_count, enumerate_primitive
from grasscount.lattice import identity_lattice, random_lattice


@contextmanager
def interpreted():
    saved = kernels.fp_enumerate_nb, kernels.subset_keys_nb
    kernels.fp_enumerate_nb = kernels.subset_keys_nb = None
    try:
        yield
    finally:
        kernels.fp_enumerate_nb, kernels.subset_keys_nb = saved


CASES = [
    ("P(Z^3, 1, H^2=400)", lambda: enumerate_primitive(identity_lattice(3), 1, 400).count),
    ("P(Z^4, 2, H^2=16)", lambda: enumerate_primitive(identity_lattice(4), 2, 16).count),
    ("P(random:4:7, 2, H^2=200)", lambda: enumerate_primitive(random_lattice(4, 7), 2, 200).count),
    ("P(Z^4, 3, H^2=100) via dual", lambda: duality_count(identity_lattice(4), 3, 100).count),
]


def timed(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not kernels.numba_active():
        print("numba disabled (GRASSCOUNT_NUMBA=0 or not installed); only the interpreted path runs")
    # compile outside the timed region
    enumerate_primitive(identity_lattice(3), 2, 4)
    print(f"{'case':32s} {'count':>8s} {'numba s':>9s} {'python s':>9s} {'speedup':>8s}")
    for name, fn in CASES:
        c_nb, t_nb = timed(fn, args.repeat)
        with interpreted():
            c_py, t_py = timed(fn, 1)
        assert c_nb == c_py, (name, c_nb, c_py)
        print(f"{name:32s} {c_nb:8d} {t_nb:9.3f} {t_py:9.3f} {t_py / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
