"""Command line entry point: ``bcasc {bounds,optimize,analyze,reproduce}``.

Exit codes: 0 success, 1 runtime failure, 2 usage or file-format error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import __version__
from . import matrixfile
from .analysis import frame_diagnostics
from .bounds import composite_bound
from .codes import CodeError, Field, coherence
from .forces import ForceMode
from .optimizer import (
    AccelConfig,
    AllRunsFailed,
    OptimizerConfig,
    multi_start,
    with_overrides,
)

log = logging.getLogger("bcasc")

REPRO_COLUMNS = [
    "target",
    "n",
    "m",
    "method",
    "k",
    "coherence",
    "bound",
    "paper_coherence",
    "gap_to_paper",
    "runtime_s",
    "paper_runtime_s",
    "runs",
    "budget",
    "budget_limited",
]

BUDGETS = {
    "quick": dict(nu_max=2**8, i_max=10**4, runs=3),
    "full": dict(),
}
# instances whose published runtime is far beyond a quick desk run
QUICK_SKIP = {(4, 64)}


class UsageError(Exception):
    pass


def _num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _kv_csv(items: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in items.items():
        w.writerow([k, v if isinstance(v, str) else _num(v) if not isinstance(v, (list, dict)) else json.dumps(v)])
    return buf.getvalue()


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "csv":
        sys.stdout.write(_kv_csv(_flatten(payload)))
    else:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")


# bounds


def cmd_bounds(args) -> int:
    if args.m <= args.n:
        raise UsageError(f"bounds need m > n, got n={args.n}, m={args.m}")
    _emit(composite_bound(args.n, args.m, args.field).as_dict(), args.format)
    return 0


# optimize


def _force_mode(mode: str | None, k: int, field: Field) -> ForceMode:
    if mode is None:
        mode = "real" if field is Field.REAL else "integral"
    if mode == "integral":
        return ForceMode.phase_integral()
    if mode == "ksum":
        return ForceMode.phase_sum(k)
    if mode == "plain":
        return ForceMode.plain()
    return ForceMode.real_antipodal()


def _config_from_args(args, base: OptimizerConfig | None = None) -> OptimizerConfig:
    base = base or OptimizerConfig()
    accel = base.accel
    if args.no_accel or args.alpha_max is not None:
        accel = AccelConfig(
            enabled=accel.enabled and not args.no_accel,
            growth=accel.growth,
            alpha_max=args.alpha_max if args.alpha_max is not None else accel.alpha_max,
            direction_cos_min=accel.direction_cos_min,
        )
    return with_overrides(
        base,
        alpha_init=args.alpha_init,
        epsilon=args.epsilon,
        nu_start=args.nu_start,
        nu_max=args.nu_max,
        i_max=args.i_max,
        rng_seed=args.seed,
        runs=getattr(args, "runs", None),
        include_nu_max=False if args.exclusive_nu_max else None,
        accel=accel,
    )


def run_optimize(n, m, field, config, workers):
    """multi_start plus the summary dict printed by ``optimize``."""
    t0 = time.perf_counter()
    best, reports = multi_start(n, m, field, config, workers)
    ok = [r.coherence for r in reports if not r.failed]
    summary = {
        "n": n,
        "m": m,
        "field": Field(field).value,
        "mode": config.force_mode.label,
        "config_digest": config.digest(),
        "best": best.coherence,
        "worst": max(ok),
        "mean": float(np.mean(ok)),
        "std": float(np.std(ok)),
        "bound": composite_bound(n, m, field).composite if m > n else 0.0,
        "failed_runs": sum(r.failed for r in reports),
        "best_run": best.run_index,
        "wall_time": time.perf_counter() - t0,
        "runs": [r.summary() for r in reports],
    }
    return best, reports, summary


def cmd_optimize(args) -> int:
    field = Field(args.field)
    if args.n < 1 or args.m < 1:
        raise UsageError("n and m must be positive")
    try:
        base = OptimizerConfig(force_mode=_force_mode(args.mode, args.k, field))
        config = _config_from_args(args, base)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        best, reports, summary = run_optimize(args.n, args.m, field, config, args.workers)
    except CodeError as exc:
        raise UsageError(str(exc)) from None
    except AllRunsFailed as exc:
        print(f"bcasc: all runs failed: {exc}", file=sys.stderr)
        return 1
    if args.out:
        meta = {
            "coherence": best.coherence,
            "config_digest": config.digest(),
            "tool_version": __version__,
            "rng_seed": config.rng_seed,
            "run_index": best.run_index,
            "run_seed": best.seed,
        }
        matrixfile.write(args.out, best.code, meta)
        summary["out"] = str(args.out)
    if args.report:
        full = dict(summary, config=config.as_dict())
        full["history"] = {r.run_index: r.coherence_history for r in reports}
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(full, fh, indent=2)
    print(json.dumps(summary, indent=2))
    return 0


# analyze


def analyze_code(code) -> dict:
    out: dict = {"n": code.n, "m": code.m, "field": code.field.value}
    if code.m > 1:
        rep = coherence(code)
        out["coherence"] = {
            "value": rep.value,
            "argmax_pair": list(rep.argmax_pair),
            "gram_offdiag_min": rep.gram_offdiag_min,
            "gram_offdiag_max": rep.gram_offdiag_max,
            "offdiag_rms": rep.offdiag_rms,
        }
    if code.m > code.n:
        bs = composite_bound(code.n, code.m, code.field)
        out["bounds"] = bs.as_dict()
        out["gap_to_composite"] = out["coherence"]["value"] - bs.composite
    out["diagnostics"] = frame_diagnostics(code).as_dict()
    return out


def cmd_analyze(args) -> int:
    try:
        code, meta = matrixfile.read(args.file)
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    except matrixfile.MatrixFileError as exc:
        raise UsageError(f"{args.file}: {exc}") from None
    payload = analyze_code(code)
    payload["metadata"] = meta
    _emit(payload, args.format)
    return 0


# reproduce


@dataclass(frozen=True)
class Job:
    n: int
    m: int
    method: str
    k: int | None = None
    published: float | None = None
    published_time: float | None = None


def load_reference() -> dict:
    text = resources.files("bcasc").joinpath("data/reference.json").read_text(encoding="utf-8")
    return json.loads(text)


def repro_jobs(target: str, budget: str, ref: dict) -> list[Job]:
    if target == "table1":
        return [Job(r["n"], r["m"], "integral", published=r["bcasc"]) for r in ref["table1"]["rows"]]
    if target == "table2":
        return [Job(r["n"], r["m"], "integral", published=r["bcasc"]) for r in ref["table2"]["rows"]]
    if target == "table3":
        k = ref["table3"]["k"]
        jobs = []
        for r in ref["table3"]["rows"]:
            jobs.append(Job(r["n"], r["m"], "integral", None, r["integral"], r["integral_time_s"]))
            jobs.append(Job(r["n"], r["m"], "ksum", k, r[f"ksum{k}"], r[f"ksum{k}_time_s"]))
        return jobs
    if target == "fig2":
        f = ref["fig2"]
        return [Job(f["n"], m, "integral", published=p) for m, p in zip(f["m"], f["bcasc"])]
    if target == "fig4":
        keys = ["2,8", "4,16"] if budget == "quick" else list(ref["fig4"]["curves"])
        jobs = []
        for key in keys:
            c = ref["fig4"]["curves"][key]
            jobs.append(Job(c["n"], c["m"], "integral", published=c["integral"]))
            jobs.extend(Job(c["n"], c["m"], "ksum", k, p) for k, p in zip(c["k"], c["ksum"]))
        return jobs
    raise UsageError(f"unknown target {target!r}")


def run_job(job: Job, target: str, budget: str, base: OptimizerConfig, workers) -> dict:
    bound = composite_bound(job.n, job.m).composite
    row = {
        "target": target,
        "n": job.n,
        "m": job.m,
        "method": job.method,
        "k": job.k,
        "coherence": None,
        "bound": bound,
        "paper_coherence": job.published,
        "gap_to_paper": None,
        "runtime_s": None,
        "paper_runtime_s": job.published_time,
        "runs": base.runs,
        "budget": budget,
        "budget_limited": False,
    }
    if budget == "quick" and (job.n, job.m) in QUICK_SKIP:
        row["budget_limited"] = True
        return row
    mode = ForceMode.phase_sum(job.k) if job.method == "ksum" else ForceMode.phase_integral()
    config = with_overrides(base, force_mode=mode)
    t0 = time.perf_counter()
    try:
        best, _ = multi_start(job.n, job.m, Field.COMPLEX, config, workers)
    except AllRunsFailed as exc:
        log.warning("%s (%d,%d) %s: %s", target, job.n, job.m, job.method, exc)
        row["runtime_s"] = time.perf_counter() - t0
        return row
    row["runtime_s"] = time.perf_counter() - t0
    row["coherence"] = best.coherence
    if job.published is not None:
        row["gap_to_paper"] = best.coherence - job.published
    return row


def cmd_reproduce(args) -> int:
    ref = load_reference()
    jobs = repro_jobs(args.target, args.budget, ref)
    try:
        base = _config_from_args(args, with_overrides(OptimizerConfig(), **BUDGETS[args.budget]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.DictWriter(out, REPRO_COLUMNS, lineterminator="\n")
        w.writeheader()
        for job in jobs:
            row = run_job(job, args.target, args.budget, base, args.workers)
            log.info("%s", row)
            w.writerow({k: _num(v) for k, v in row.items()})
            out.flush()
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


# parser


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _add_optimizer_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("optimizer overrides")
    g.add_argument("--seed", type=int, default=None, help="master RNG seed (default 0)")
    g.add_argument("--alpha-init", type=float)
    g.add_argument("--alpha-max", type=float, help="acceleration ceiling (default alpha-init)")
    g.add_argument("--epsilon", type=float)
    g.add_argument("--nu-start", type=int)
    g.add_argument("--nu-max", type=int)
    g.add_argument("--i-max", type=int)
    g.add_argument("--no-accel", action="store_true", help="disable per-codeword damping growth")
    g.add_argument("--exclusive-nu-max", action="store_true", help="stop before the nu_max rung")
    g.add_argument("--workers", type=_positive_int, help="parallel runs (default BCASC_THREADS or CPU count)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bcasc", description="Minimal-coherence complex vector sets.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="lower bounds on coherence")
    b.add_argument("--n", type=_positive_int, required=True)
    b.add_argument("--m", type=_positive_int, required=True)
    b.add_argument("--field", choices=["complex", "real"], default="complex")
    fmt = b.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
    b.set_defaults(func=cmd_bounds, format="json")

    o = sub.add_parser("optimize", help="best-of-R search for a minimal-coherence code")
    o.add_argument("--n", type=_positive_int, required=True)
    o.add_argument("--m", type=_positive_int, required=True)
    o.add_argument("--field", choices=["complex", "real"], default="complex")
    o.add_argument("--runs", type=_positive_int)
    o.add_argument("--mode", choices=["integral", "ksum", "plain", "real"])
    o.add_argument("--k", type=_positive_int, default=22, help="phase points for --mode ksum")
    o.add_argument("--out", help="write the best code to this .bcasc.json file")
    o.add_argument("--report", help="write the full run report as JSON")
    _add_optimizer_flags(o)
    o.set_defaults(func=cmd_optimize)

    a = sub.add_parser("analyze", help="diagnostics for a .bcasc.json file")
    a.add_argument("file")
    fmt = a.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
    a.set_defaults(func=cmd_analyze, format="json")

    r = sub.add_parser("reproduce", help="rerun a published experiment grid")
    r.add_argument("--target", required=True, help="table1, table2, table3, fig2 or fig4")
    r.add_argument("--budget", choices=list(BUDGETS), default="quick")
    r.add_argument("--out", help="CSV path (default standard output)")
    _add_optimizer_flags(r)
    r.set_defaults(func=cmd_reproduce)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"bcasc: error: {exc}", file=sys.stderr)
        return 2
