"""Wall time of one contiguous sample versus the direct G(n, p) dissection."""
import argparse
import time

from giant_anatomy.contiguous import sample_giant
from giant_anatomy.direct import extract_anatomy, sample_gnp
from giant_anatomy.dists import RngStream
from giant_anatomy.scalar_math import ModelParams


def timed(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--ns", type=int, nargs="+", default=[10**4, 10**5, 10**6])
    ap.add_argument("--lam", type=float, default=2.0)
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()
    print("n,contiguous_s,direct_s,speedup")
    for n in args.ns:
        p = ModelParams(n, args.lam)
        c = timed(lambda: sample_giant(RngStream(1), p), args.reps)
        d = timed(lambda: extract_anatomy(sample_gnp(RngStream(2), n, args.lam / n)), args.reps)
        print(f"{n},{c:.3f},{d:.3f},{d / c:.1f}")


if __name__ == "__main__":
    main()
