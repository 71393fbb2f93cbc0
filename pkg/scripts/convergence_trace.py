"""Per-rung iteration counts and coherence of a single run.

    python scripts/convergence_trace.py --n 3 --m 16 --seed 4
"""
import argparse
import logging

from bcasc.forces import ForceMode
from bcasc.optimizer import OptimizerConfig, random_seed_code, run_schedule, run_seed


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--run", type=int, default=0)
    p.add_argument("--i-max", type=int, default=10**4)
    p.add_argument("--k", type=int, help="use the K-point phase sum instead of the integral")
    args = p.parse_args()
    logging.basicConfig(level=logging.DEBUG, format="%(message)s")

    mode = ForceMode.phase_sum(args.k) if args.k else ForceMode.phase_integral()
    cfg = OptimizerConfig(i_max=args.i_max, force_mode=mode, rng_seed=args.seed)
    seed = run_seed(args.seed, args.run)
    rep = run_schedule(random_seed_code(args.n, args.m, "complex", seed), cfg, run_index=args.run, seed=seed)
    print(f"seed coherence {rep.seed_coherence:.10f}")
    for st in rep.converged_per_nu:
        print(f"nu={st.nu:5d} alpha={st.alpha:.4f} iterations={st.iterations:6d} fixed={st.fixed_point_reached!s:5} "
              f"residual={st.max_residual:.2e} coherence={st.coherence:.10f}")
    print(f"final {rep.coherence:.10f} in {rep.wall_time:.1f} s, quadrature flags {rep.quadrature_flags}")


if __name__ == "__main__":
    main()
