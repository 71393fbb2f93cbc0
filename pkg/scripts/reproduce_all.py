"""Run every reproduce target and write one CSV per target into a directory.

    python scripts/reproduce_all.py --budget quick --outdir results/
"""
import argparse
import pathlib

from bcasc import cli

TARGETS = ["table1", "table2", "table3", "fig2", "fig4"]


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--budget", choices=["quick", "full"], default="quick")
    p.add_argument("--outdir", default="results")
    p.add_argument("--targets", nargs="+", default=TARGETS)
    args = p.parse_args()
    out = pathlib.Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for t in args.targets:
        print(f"{t} ...", flush=True)
        cli.main(["-v", "reproduce", "--target", t, "--budget", args.budget, "--out", str(out / f"{t}_{args.budget}.csv")])


if __name__ == "__main__":
    main()
