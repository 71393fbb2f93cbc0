"""Frame diagnostics for optimized codes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import welch_bound
from .codes import SphericalCode, coherence, gram

MUB_ORTH_TOL = 1e-6
MUB_CROSS_TOL = 1e-3
MUB_MAX_STATES = 10**4


@dataclass(frozen=True)
class MubPartition:
    """Columns grouped into orthonormal bases.

    ``is_mub`` says whether every cross-basis modulus is 1/sqrt(N) within the
    cross tolerance. The search is best-effort: failing to find a partition does
    not prove that none exists.
    """

    blocks: list[tuple[int, ...]]
    cross_min: float | None
    cross_max: float | None
    cross_mean: float | None
    is_mub: bool
    states: int

    def as_dict(self) -> dict:
        return {
            "blocks": [list(b) for b in self.blocks],
            "cross_min": self.cross_min,
            "cross_max": self.cross_max,
            "cross_mean": self.cross_mean,
            "is_mub": self.is_mub,
            "states": self.states,
        }


@dataclass(frozen=True)
class FrameDiagnostics:
    frame_potential: float
    wbe_rms: float
    is_wbe: bool
    is_mwbe: bool
    is_tight: bool
    tight_residual: float
    is_equiangular: bool
    equiangle_spread: float
    mub_partition: MubPartition | None

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "mub_partition"}
        d["mub_partition"] = self.mub_partition.as_dict() if self.mub_partition else None
        return d


def frame_potential(code: SphericalCode) -> float:
    """sum_k sum_l |<s_k, s_l>|^2 over all pairs, diagonal included."""
    return float(np.sum(np.abs(gram(code)) ** 2))


def wbe_rms(code: SphericalCode) -> float:
    """Root mean square of the off-diagonal Gram moduli."""
    m = code.m
    if m < 2:
        return 0.0
    g2 = np.abs(gram(code)) ** 2
    off = g2.sum() - np.trace(g2)
    return float(np.sqrt(max(off, 0.0) / (m * (m - 1))))


def wbe_check(code: SphericalCode, tol: float = 1e-6) -> tuple[bool, float]:
    rms = wbe_rms(code)
    return abs(rms - welch_bound(code.n, code.m)) < tol, rms


def tight_residual(code: SphericalCode) -> float:
    """Frobenius norm of A A^H - (M/N) I."""
    a = code.entries
    return float(np.linalg.norm(a @ a.conj().T - (code.m / code.n) * np.eye(code.n)))


def equiangularity(code: SphericalCode, tol: float = 1e-6) -> tuple[bool, float]:
    rep = coherence(code)
    spread = rep.gram_offdiag_max - rep.gram_offdiag_min
    return spread < tol, spread


def _orthonormal_blocks(adj: np.ndarray, size: int, max_states: int):
    """Partition vertices into cliques of ``size`` by depth-first search."""
    m = adj.shape[0]
    free = np.ones(m, dtype=bool)
    blocks: list[tuple[int, ...]] = []
    states = 0

    def extend(clique: list[int], cands: list[int]):
        nonlocal states
        if len(clique) == size:
            yield tuple(clique)
            return
        for idx, c in enumerate(cands):
            states += 1
            if states > max_states:
                return
            rest = [d for d in cands[idx + 1 :] if adj[c, d]]
            if len(clique) + 1 + len(rest) < size:
                continue
            yield from extend(clique + [c], rest)

    def solve() -> bool:
        nonlocal states
        if not free.any():
            return True
        first = int(np.argmax(free))
        cands = [j for j in range(first + 1, m) if free[j] and adj[first, j]]
        for block in extend([first], cands):
            free[list(block)] = False
            blocks.append(block)
            if solve():
                return True
            blocks.pop()
            free[list(block)] = True
            if states > max_states:
                return False
        return False

    found = solve()
    return (blocks if found else None), states


def mub_detect(
    code: SphericalCode,
    orth_tol: float = MUB_ORTH_TOL,
    cross_tol: float = MUB_CROSS_TOL,
    max_states: int = MUB_MAX_STATES,
) -> MubPartition | None:
    """Look for a partition of the columns into M/N orthonormal bases.

    Returns None when M is not a multiple of N or no partition was found within
    ``max_states`` search states.
    """
    n, m = code.n, code.m
    if m % n:
        return None
    g = np.abs(gram(code))
    adj = g < orth_tol
    np.fill_diagonal(adj, False)
    blocks, states = _orthonormal_blocks(adj, n, max_states)
    if blocks is None:
        return None
    label = np.empty(m, dtype=int)
    for b, cols in enumerate(blocks):
        label[list(cols)] = b
    cross = g[label[:, None] != label[None, :]]
    if cross.size == 0:
        return MubPartition(blocks, None, None, None, True, states)
    target = 1 / np.sqrt(n)
    return MubPartition(
        blocks,
        float(cross.min()),
        float(cross.max()),
        float(cross.mean()),
        bool(np.all(np.abs(cross - target) < cross_tol)),
        states,
    )


def frame_diagnostics(
    code: SphericalCode,
    tol: float = 1e-6,
    mub_orth_tol: float = MUB_ORTH_TOL,
    mub_cross_tol: float = MUB_CROSS_TOL,
) -> FrameDiagnostics:
    """All diagnostics at once. WBE/MWBE flags are False when M <= N."""
    m, n = code.m, code.n
    rms = wbe_rms(code)
    mu = coherence(code).value if m > 1 else 0.0
    if m > n:
        welch = welch_bound(n, m)
        is_wbe = abs(rms - welch) < tol
        is_mwbe = abs(mu - welch) < tol
    else:
        is_wbe = is_mwbe = False
    resid = tight_residual(code)
    equi, spread = equiangularity(code, tol) if m > 1 else (True, 0.0)
    return FrameDiagnostics(
        frame_potential=frame_potential(code),
        wbe_rms=rms,
        is_wbe=is_wbe,
        is_mwbe=is_mwbe,
        is_tight=resid < tol,
        tight_residual=resid,
        is_equiangular=equi,
        equiangle_spread=spread,
        mub_partition=mub_detect(code, mub_orth_tol, mub_cross_tol),
    )
