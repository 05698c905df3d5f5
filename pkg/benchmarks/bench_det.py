"""Compare the compiled and pure-Python determinant kernels.

Matrices mimic Alexander matrices: three nonzero entries per row drawn from
``1 - t``, ``t`` and ``-1``.  Run with ``python benchmarks/bench_det.py``.
"""

import argparse
import random
import time

from annulus_kit import _kernel
from annulus_kit.polycore import LaurentPoly

T = LaurentPoly.monomial(1)
ENTRIES = (1 - T, T, LaurentPoly.const(-1))


def alexander_like(n, rng):
    rows = []
    for i in range(n):
        row = [None] * n
        cols = rng.sample(range(n), min(3, n))
        for c, e in zip(cols, ENTRIES):
            row[c] = e.to_dense()
        rows.append(row)
    return rows


def timed(fn, mats):
    start = time.perf_counter()
    out = [fn(m) for m in mats]
    return time.perf_counter() - start, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 40, 60])
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    if _kernel.compiled_bareiss_det is None:
        print("compiled kernel not built; only the Python kernel is timed")
    print(f"{'n':>4} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for n in args.sizes:
        mats = [alexander_like(n, rng) for _ in range(args.reps)]
        tp, rp = timed(_kernel.python_bareiss_det, mats)
        if _kernel.compiled_bareiss_det is None:
            print(f"{n:>4} {tp:>10.4f} {'-':>11} {'-':>8}")
            continue
        tc, rc = timed(_kernel.bareiss_det, mats)
        assert rc == rp, "backends disagree"
        print(f"{n:>4} {tp:>10.4f} {tc:>11.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
