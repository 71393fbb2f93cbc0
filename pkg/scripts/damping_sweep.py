"""Final coherence, iteration count and fixed-point rate against alpha_init.

    python scripts/damping_sweep.py --n 2 --m 8 --alphas 0.9 0.3 0.1 --runs 3
"""
import argparse
import csv
import sys
import time

from bcasc.optimizer import AccelConfig, OptimizerConfig, multi_start


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--alphas", type=float, nargs="+", default=[0.9, 0.5, 0.3, 0.1])
    p.add_argument("--runs", type=int, default=3)
    p.add_argument("--i-max", type=int, default=10**4)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    w = csv.writer(sys.stdout)
    w.writerow(["alpha_init", "accel", "best", "worst", "iterations", "fixed_stages", "total_stages", "seconds"])
    for alpha in args.alphas:
        for accel in (False, True):
            cfg = OptimizerConfig(
                alpha_init=alpha,
                i_max=args.i_max,
                runs=args.runs,
                rng_seed=args.seed,
                accel=AccelConfig(enabled=accel, alpha_max=max(alpha, 0.9)),
            )
            t0 = time.perf_counter()
            _, reps = multi_start(args.n, args.m, config=cfg)
            stages = [st for r in reps for st in r.converged_per_nu]
            w.writerow([
                alpha,
                accel,
                min(r.coherence for r in reps),
                max(r.coherence for r in reps),
                sum(st.iterations for st in stages),
                sum(st.fixed_point_reached for st in stages),
                len(stages),
                round(time.perf_counter() - t0, 2),
            ])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
