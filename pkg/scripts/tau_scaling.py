"""Spread of the COLA stopping line across n; sqrt(n)*std(tau) should level off."""
import argparse
import math

from giant_anatomy import stats
from giant_anatomy.scalar_math import ModelParams


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lam", type=float, default=2.0)
    ap.add_argument("--ns", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    ap.add_argument("--reps", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    prev = None
    print("n,mean_tau,target,std_tau,sqrt_n_std,ratio_to_prev")
    for n in args.ns:
        taus = stats.cola_taus(n, args.lam, args.reps, args.seed)
        sd = taus.std(ddof=1)
        target = ModelParams(n, args.lam).lambda0
        ratio = "" if prev is None else f"{prev / sd:.3f}"
        print(f"{n},{taus.mean():.6f},{target:.6f},{sd:.6f},{sd * math.sqrt(n):.4f},{ratio}")
        prev = sd


if __name__ == "__main__":
    main()
