"""Damped fixed-point search for best complex antipodal spherical codes.

One run walks a doubling ladder of potential exponents nu = nu_start, 2 nu_start,
... and at each rung iterates

    s_m <- unit(s_m + alpha_m * f_m)

until every normalized force coincides with its codeword (a fixed point) or the
iteration cap is reached. The damping shrinks as alpha_init / (nu - 1) while nu
grows; optionally every codeword speeds up on its own while it keeps moving in
a straight line.
"""
from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .bounds import composite_bound
from .codes import CodeError, Field, SphericalCode, coherence_value, normalize_columns
from .forces import ForceField, ForceKind, ForceMode, compute_forces

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AccelConfig:
    """Per-codeword damping growth while the direction of motion is stable.

    ``alpha_max=None`` means "equal to alpha_init".
    """

    enabled: bool = True
    growth: float = 1.1
    alpha_max: float | None = None
    direction_cos_min: float = 0.98

    def __post_init__(self):
        if not self.growth > 1:
            raise ValueError("acceleration growth must be > 1")
        if not -1 <= self.direction_cos_min <= 1:
            raise ValueError("direction_cos_min must lie in [-1, 1]")


@dataclass(frozen=True)
class OptimizerConfig:
    alpha_init: float = 0.9
    epsilon: float = 1e-10
    nu_start: int = 2
    nu_max: int = 2**10
    i_max: int = 10**5
    force_mode: ForceMode = field(default_factory=ForceMode.phase_integral)
    accel: AccelConfig = field(default_factory=AccelConfig)
    rng_seed: int = 0
    runs: int = 10
    include_nu_max: bool = True
    history_every: int = 100
    early_exit: bool = True

    def __post_init__(self):
        if not 0 < self.alpha_init < 1:
            raise ValueError("alpha_init must lie in (0, 1)")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.nu_start < 2:
            raise ValueError("nu_start must be >= 2")
        if self.nu_max < self.nu_start or self.nu_max & (self.nu_max - 1):
            raise ValueError("nu_max must be a power of two >= nu_start")
        if self.i_max < 1 or self.runs < 1 or self.history_every < 1:
            raise ValueError("i_max, runs and history_every must be positive")
        if self.accel.alpha_max is not None and self.accel.alpha_max < self.alpha_init:
            raise ValueError("alpha_max must be >= alpha_init")

    @property
    def alpha_max(self) -> float:
        return self.alpha_init if self.accel.alpha_max is None else self.accel.alpha_max

    def as_dict(self) -> dict:
        d = asdict(self)
        d["force_mode"] = self.force_mode.as_dict()
        return d

    def digest(self) -> str:
        blob = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class StageResult:
    nu: int
    alpha: float
    iterations: int
    fixed_point_reached: bool
    max_residual: float
    coherence: float


@dataclass(frozen=True, eq=False)
class RunReport:
    code: SphericalCode
    coherence: float
    converged_per_nu: list[StageResult]
    coherence_history: list[tuple[int, int, float]]
    wall_time: float
    config: OptimizerConfig
    quadrature_flags: int = 0
    seed_coherence: float = float("nan")
    run_index: int = 0
    seed: int = 0
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    def summary(self) -> dict:
        return {
            "run_index": self.run_index,
            "seed": self.seed,
            "coherence": self.coherence,
            "seed_coherence": self.seed_coherence,
            "wall_time": self.wall_time,
            "iterations": sum(st.iterations for st in self.converged_per_nu),
            "stages": [
                [st.nu, st.iterations, st.fixed_point_reached] for st in self.converged_per_nu
            ],
            "quadrature_flags": self.quadrature_flags,
            "error": self.error,
        }


def random_seed_code(n: int, m: int, field: Field | str = Field.COMPLEX, rng_seed: int = 0) -> SphericalCode:
    """Column-normalized matrix with i.i.d. standard normal real and imaginary parts."""
    field = Field(field)
    rng = np.random.default_rng(rng_seed)
    a = rng.standard_normal((n, m))
    if field is Field.COMPLEX:
        a = a + 1j * rng.standard_normal((n, m))
    return normalize_columns(a, field)


def run_seed(rng_seed: int, run_index: int) -> int:
    """64-bit seed of run ``run_index`` derived from the master seed."""
    ss = np.random.SeedSequence(entropy=rng_seed, spawn_key=(run_index,))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(hi) << 32 | int(lo)


def nu_ladder(config: OptimizerConfig) -> list[int]:
    nus = []
    nu = config.nu_start
    while nu < config.nu_max or (config.include_nu_max and nu == config.nu_max):
        nus.append(nu)
        nu *= 2
    return nus


def stage_alpha(config: OptimizerConfig, nu: int) -> float:
    """Damping for rung ``nu``: alpha_init at the first rung, alpha_init / (nu - 1) after."""
    if nu == config.nu_start:
        return config.alpha_init
    return config.alpha_init / (nu - 1)


def _apply(s: np.ndarray, f: np.ndarray, alpha) -> np.ndarray:
    t = s + np.asarray(alpha) * f
    return t / np.linalg.norm(t, axis=0)


def step(code: SphericalCode, nu: float, alpha, force_mode: ForceMode) -> tuple[SphericalCode, ForceField]:
    """One Jacobi-style update: all forces from ``code``, then every codeword moves.

    ``alpha`` is a scalar or a length-M array of per-codeword damping factors.
    """
    ff = compute_forces(code, nu, force_mode)
    alpha = np.broadcast_to(np.asarray(alpha, dtype=float), (code.m,))
    if not np.any(alpha):
        return code, ff
    return SphericalCode(_apply(code.entries, ff.directions, alpha), code.field), ff


def update_damping(
    prev_force: ForceField,
    curr_force: ForceField,
    alpha: np.ndarray,
    accel: AccelConfig,
    alpha_floor: float,
    alpha_max: float,
) -> np.ndarray:
    """Grow alpha_m where codeword m keeps moving the same way, shrink it elsewhere.

    The direction of motion is the tangential part of the normalized force; the
    full force is nearly radial close to equilibrium and says nothing about the
    motion.
    """
    cos = np.real(np.sum(prev_force.tangents.conj() * curr_force.tangents, axis=0))
    grow = np.minimum(alpha * accel.growth, alpha_max)
    shrink = np.maximum(alpha / accel.growth, alpha_floor)
    return np.where(cos >= accel.direction_cos_min, grow, shrink)


def _check_mode(field: Field, mode: ForceMode) -> None:
    if field is Field.REAL and mode.kind not in (ForceKind.REAL_ANTIPODAL, ForceKind.PLAIN):
        raise CodeError(f"force mode {mode.label} does not keep a real code real")
    if field is Field.COMPLEX and mode.kind is ForceKind.REAL_ANTIPODAL:
        raise CodeError("real antipodal forces need a real code")


def run_schedule(seed_code: SphericalCode, config: OptimizerConfig, *, run_index: int = 0, seed: int = 0) -> RunReport:
    """Run the full nu ladder from ``seed_code``."""
    t0 = time.perf_counter()
    _check_mode(seed_code.field, config.force_mode)
    mode = config.force_mode
    s = seed_code.entries
    m = seed_code.m
    seed_coh = coherence_value(s) if m > 1 else 0.0
    if seed_coh >= 1 - 1e-12 and mode.kind in (ForceKind.PHASE_INTEGRAL, ForceKind.REAL_ANTIPODAL):
        raise CodeError("seed contains collinear codewords")

    target = None
    if config.early_exit and m > seed_code.n:
        target = composite_bound(seed_code.n, m, seed_code.field).composite

    stages: list[StageResult] = []
    history: list[tuple[int, int, float]] = []
    flags = 0
    nodes = None
    error = None
    accel = config.accel if config.accel.enabled else None

    try:
        for nu in nu_ladder(config):
            alpha0 = stage_alpha(config, nu)
            alpha = np.full(m, alpha0)
            prev = None
            fixed = False
            res = math.inf
            it = 0
            while it < config.i_max and not fixed:
                ff = compute_forces(s, nu, mode, start_nodes=nodes // 2 if nodes else None)
                if ff.nodes is not None:
                    nodes = ff.nodes
                if not ff.quadrature_converged:
                    flags += 1
                if accel is not None and prev is not None:
                    alpha = update_damping(prev, ff, alpha, accel, alpha0, config.alpha_max)
                s = _apply(s, ff.directions, alpha)
                prev = ff
                res = ff.max_residual
                fixed = res < config.epsilon
                it += 1
                if it % config.history_every == 0:
                    history.append((nu, it, coherence_value(s)))
            coh = coherence_value(s)
            stages.append(StageResult(nu, alpha0, it, fixed, res, coh))
            log.debug("nu=%d iterations=%d fixed=%s residual=%.3g coherence=%.12f", nu, it, fixed, res, coh)
            if target is not None and fixed and coh - target < 1e-12:
                break
    except CodeError as exc:
        error = str(exc)
        log.warning("run %d aborted: %s", run_index, exc)

    code = SphericalCode(s, seed_code.field)
    return RunReport(
        code=code,
        coherence=coherence_value(code.entries) if m > 1 else 0.0,
        converged_per_nu=stages,
        coherence_history=history,
        wall_time=time.perf_counter() - t0,
        config=config,
        quadrature_flags=flags,
        seed_coherence=seed_coh,
        run_index=run_index,
        seed=seed,
        error=error,
    )


def _one_run(args) -> RunReport:
    n, m, field, config, i = args
    seed = run_seed(config.rng_seed, i)
    code = random_seed_code(n, m, field, seed)
    return run_schedule(code, config, run_index=i, seed=seed)


def default_workers() -> int:
    env = os.environ.get("BCASC_THREADS")
    if env:
        workers = int(env)
        if workers < 1:
            raise ValueError("BCASC_THREADS must be a positive integer")
        return workers
    return os.cpu_count() or 1


class AllRunsFailed(RuntimeError):
    pass


def multi_start(
    n: int,
    m: int,
    field: Field | str = Field.COMPLEX,
    config: OptimizerConfig | None = None,
    workers: int | None = None,
) -> tuple[RunReport, list[RunReport]]:
    """Best of ``config.runs`` independent runs from Gaussian seeds.

    Run ``i`` is seeded by ``run_seed(config.rng_seed, i)``, so results do not
    depend on the number of workers.
    """
    config = config or OptimizerConfig()
    field = Field(field)
    jobs = [(n, m, field, config, i) for i in range(config.runs)]
    workers = min(workers or default_workers(), config.runs)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_one_run, jobs))
    else:
        reports = [_one_run(j) for j in jobs]
    ok = [r for r in reports if not r.failed]
    if not ok:
        raise AllRunsFailed("; ".join(f"run {r.run_index}: {r.error}" for r in reports))
    best = min(ok, key=lambda r: (r.coherence, r.run_index))
    return best, reports


def with_overrides(config: OptimizerConfig, **kw) -> OptimizerConfig:
    """``dataclasses.replace`` that ignores ``None`` values."""
    return replace(config, **{k: v for k, v in kw.items() if v is not None})
