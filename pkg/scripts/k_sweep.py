"""Best coherence against the number K of phase points, next to the integral mode.

    python scripts/k_sweep.py --n 2 --m 8 --kmax 24 --runs 3 > k_sweep_2_8.csv
"""
import argparse
import csv
import sys
import time

from bcasc.forces import ForceMode
from bcasc.optimizer import OptimizerConfig, multi_start


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--kmax", type=int, default=24)
    p.add_argument("--runs", type=int, default=3)
    p.add_argument("--i-max", type=int, default=10**4)
    p.add_argument("--nu-max", type=int, default=2**10)
    args = p.parse_args()

    modes = [ForceMode.phase_sum(k) for k in range(1, args.kmax + 1)] + [ForceMode.phase_integral()]
    w = csv.writer(sys.stdout)
    w.writerow(["mode", "k", "best", "mean", "seconds"])
    for mode in modes:
        cfg = OptimizerConfig(i_max=args.i_max, nu_max=args.nu_max, runs=args.runs, force_mode=mode)
        t0 = time.perf_counter()
        best, reps = multi_start(args.n, args.m, config=cfg)
        mean = sum(r.coherence for r in reps) / len(reps)
        w.writerow([mode.kind.value, mode.k or "", best.coherence, mean, round(time.perf_counter() - t0, 2)])
        sys.stdout.flush()


if __name__ == "__main__":
    main()
