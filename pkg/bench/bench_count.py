"""Compare the compiled and pure-Python residue-tree counting kernels.

Usage: python3 bench/bench_count.py [--repeat R]
"""

import argparse
import timeit

from igusa.kernels import available_backends
from igusa.padic_counting import IntPolynomial, LocalFieldParams, point_count_series
from igusa.scenarios import determinant

PAIRING3 = IntPolynomial(6, tuple((1, tuple(int(k in (i, 3 + i)) for k in range(6))) for i in range(3)))

CASES = [
    ("det 2x2", determinant(2), 2, 6),
    ("det 2x2", determinant(2), 3, 4),
    ("x.y, n=3", PAIRING3, 2, 3),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = available_backends()
    print(f"{'case':<10} {'p':>2} {'M':>2} " + " ".join(f"{b:>10}" for b in backends) + "  speedup")
    for name, f, p, M in CASES:
        params = LocalFieldParams(p)
        results, times = [], []
        for b in backends:
            results.append(point_count_series(f, params, M, backend=b).counts)
            times.append(min(timeit.repeat(lambda: point_count_series(f, params, M, backend=b),
                                           number=1, repeat=args.repeat)))
        if len(set(map(tuple, results))) != 1:
            raise SystemExit(f"backends disagree on {name} p={p} M={M}")
        speed = f"{times[-1] / times[0]:8.1f}x" if len(times) > 1 else "       -"
        print(f"{name:<10} {p:>2} {M:>2} " + " ".join(f"{t:9.3f}s" for t in times) + f" {speed}")


if __name__ == "__main__":
    main()
