"""Repelling forces acting on the codewords of a spherical code.

Every force is returned as a unit vector: only its direction enters the update,
so each codeword's contributions are rescaled by that codeword's nearest
distance before summing. With weights ``(d_min / d)**nu`` in ``(0, 1]`` the
exponent can reach 1024 without overflow.

Four force laws are provided:

* ``plain``      pairwise repulsion between the codewords themselves,
* ``ksum``       repulsion from K phase-rotated copies of every other codeword,
* ``integral``   the K -> infinity limit, a phase integral over [0, 2 pi),
* ``real``       the real-valued case with the single antipodal copy -s.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .codes import CodeError, Field, SphericalCode

COINCIDENT_TOL = 1e-14
COLLINEAR_TOL = 1e-12


class ForceKind(str, enum.Enum):
    PLAIN = "plain"
    PHASE_SUM = "ksum"
    PHASE_INTEGRAL = "integral"
    REAL_ANTIPODAL = "real"


@dataclass(frozen=True)
class QuadratureSpec:
    """Node-doubling uniform trapezoid rule for the phase integral.

    Node counts refer to the full period [0, 2 pi).
    """

    scheme: str = "uniform_trapezoid"
    initial_nodes: int = 64
    max_nodes: int = 65536
    rel_tol: float = 1e-10

    def __post_init__(self):
        if self.scheme != "uniform_trapezoid":
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if self.initial_nodes < 4 or self.initial_nodes % 2:
            raise ValueError("initial_nodes must be an even number >= 4")
        if self.max_nodes < self.initial_nodes:
            raise ValueError("max_nodes must be >= initial_nodes")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")


@dataclass(frozen=True)
class ForceMode:
    kind: ForceKind
    k: int | None = None
    quad: QuadratureSpec | None = None

    def __post_init__(self):
        kind = ForceKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is ForceKind.PHASE_SUM:
            if self.k is None or int(self.k) < 1:
                raise ValueError("phase-sum mode needs K >= 1")
            object.__setattr__(self, "k", int(self.k))
        if kind is ForceKind.PHASE_INTEGRAL and self.quad is None:
            object.__setattr__(self, "quad", QuadratureSpec())

    @classmethod
    def plain(cls) -> ForceMode:
        return cls(ForceKind.PLAIN)

    @classmethod
    def phase_sum(cls, k: int) -> ForceMode:
        return cls(ForceKind.PHASE_SUM, k=k)

    @classmethod
    def phase_integral(cls, quad: QuadratureSpec | None = None) -> ForceMode:
        return cls(ForceKind.PHASE_INTEGRAL, quad=quad or QuadratureSpec())

    @classmethod
    def real_antipodal(cls) -> ForceMode:
        return cls(ForceKind.REAL_ANTIPODAL)

    @property
    def label(self) -> str:
        if self.kind is ForceKind.PHASE_SUM:
            return f"ksum(K={self.k})"
        return self.kind.value

    def as_dict(self) -> dict:
        d = {"kind": self.kind.value}
        if self.k is not None:
            d["k"] = self.k
        if self.quad is not None:
            d["quad"] = {
                "scheme": self.quad.scheme,
                "initial_nodes": self.quad.initial_nodes,
                "max_nodes": self.quad.max_nodes,
                "rel_tol": self.quad.rel_tol,
            }
        return d


@dataclass(frozen=True, eq=False)
class ForceField:
    """Normalized forces on every codeword of one code snapshot."""

    directions: np.ndarray
    residuals: np.ndarray
    mode: ForceMode
    tangents: np.ndarray = field(repr=False)
    quadrature_converged: bool = True
    nodes: int | None = None

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max())


def _unit_columns(f: np.ndarray) -> np.ndarray:
    return f / np.linalg.norm(f, axis=0)


def _tangents(s: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Unit tangential part of each force, i.e. the direction the point moves."""
    radial = np.real(np.sum(s.conj() * f, axis=0))
    t = f - s * radial
    norms = np.linalg.norm(t, axis=0)
    out = np.zeros_like(t)
    ok = norms > 1e-300
    out[:, ok] = t[:, ok] / norms[ok]
    return out


def _field(s: np.ndarray, f: np.ndarray, mode: ForceMode, converged=True, nodes=None) -> ForceField:
    f.flags.writeable = False
    res = np.linalg.norm(f - s, axis=0)
    return ForceField(f, res, mode, _tangents(s, f), converged, nodes)


def _entries(code) -> np.ndarray:
    return code.entries if isinstance(code, SphericalCode) else np.asarray(code, dtype=np.complex128)


def _stable_weights(log_d2: np.ndarray, nu: float, axes: tuple[int, ...]) -> np.ndarray:
    """exp(-nu/2 * (log d^2 - min log d^2)) with the minimum taken per codeword."""
    lmin = log_d2.min(axis=axes, keepdims=True)
    return np.exp(-0.5 * nu * (log_d2 - lmin))


# ----------------------------------------------------------------------------
# plain spherical-code forces


def raw_plain_force(code, nu: float) -> np.ndarray:
    """Unnormalized sum_{l != m} (s_m - s_l) / |s_m - s_l|**nu, evaluated naively."""
    s = _entries(code)
    d = s[:, :, None] - s[:, None, :]
    dist = np.linalg.norm(d, axis=0)
    np.fill_diagonal(dist, np.inf)
    return np.einsum("nml,ml->nm", d, dist ** (-float(nu)))


def _plain(s: np.ndarray, nu: float) -> np.ndarray:
    m = s.shape[1]
    d = s[:, :, None] - s[:, None, :]
    d2 = np.sum(d.real**2 + d.imag**2, axis=0)
    np.fill_diagonal(d2, np.inf)
    if m > 1 and d2.min() < COINCIDENT_TOL**2:
        p, q = np.unravel_index(np.argmin(d2), d2.shape)
        raise CodeError(f"coincident codewords ({min(p, q)}, {max(p, q)})")
    w = _stable_weights(np.log(d2), nu, axes=(1,))
    return _unit_columns(np.einsum("nml,ml->nm", d, w))


def plain_forces(code, nu: float) -> ForceField:
    s = _entries(code)
    return _field(s, _plain(s, nu), ForceMode.plain())


# ----------------------------------------------------------------------------
# forces from a finite set of phase-rotated copies


def unit_roots(k: int) -> np.ndarray:
    """exp(i 2 pi j / K) for j = 1..K, with exact zeros where cos or sin vanish."""
    ph = np.exp(2j * np.pi * np.arange(1, k + 1) / k)
    re, im = ph.real.copy(), ph.imag.copy()
    re[np.abs(re) < 1e-15] = 0.0
    im[np.abs(im) < 1e-15] = 0.0
    return re + 1j * im


def _node_sum(s: np.ndarray, nu: float, phases: np.ndarray, weights: np.ndarray | None = None) -> np.ndarray:
    """Normalized sum over l != m and nodes k of w_k (s_m - s_l p_k) / |s_m - s_l p_k|**nu."""
    m = s.shape[1]
    d = s[:, :, None, None] - s[:, None, :, None] * phases[None, None, None, :]
    d2 = np.sum(d.real**2 + d.imag**2, axis=0)
    off = ~np.eye(m, dtype=bool)
    d2 = np.where(off[:, :, None], d2, np.inf)
    if m > 1 and d2.min() < COINCIDENT_TOL**2:
        p, q, _ = np.unravel_index(np.argmin(d2), d2.shape)
        raise CodeError(f"codeword collision on phase orbit ({min(p, q)}, {max(p, q)})")
    w = _stable_weights(np.log(d2), nu, axes=(1, 2))
    if weights is not None:
        w = w * weights[None, None, :]
    return _unit_columns(np.einsum("nmlk,mlk->nm", d, w))


def phase_sum_forces(code, nu: float, k: int) -> ForceField:
    s = _entries(code)
    return _field(s, _node_sum(s, nu, unit_roots(k)), ForceMode.phase_sum(k))


def rectangle_forces(code, nu: float, nodes: int) -> ForceField:
    """Phase integral discretized by the rectangle rule on kappa_j = 2 pi j / nodes."""
    s = _entries(code)
    kappa = 2 * np.pi * np.arange(nodes) / nodes
    f = _node_sum(s, nu, np.exp(1j * kappa), np.full(nodes, 2 * np.pi / nodes))
    return _field(s, f, ForceMode.phase_integral(), nodes=nodes)


def real_antipodal_forces(code, nu: float) -> ForceField:
    """Real antipodal case: each neighbour acts through both s_l and -s_l."""
    if isinstance(code, SphericalCode) and code.field is not Field.REAL:
        raise CodeError("real antipodal forces need a real code")
    s = _entries(code)
    if np.any(s.imag != 0):
        raise CodeError("real antipodal forces need a real code")
    m = s.shape[1]
    g = np.abs(s.real.T @ s.real)
    np.fill_diagonal(g, 0.0)
    if m > 1 and g.max() > 1 - COLLINEAR_TOL:
        p, q = np.unravel_index(np.argmax(g), g.shape)
        raise CodeError(f"antipodal or equal codewords ({min(p, q)}, {max(p, q)})")
    return _field(s, _node_sum(s, nu, unit_roots(2)), ForceMode.real_antipodal())


# ----------------------------------------------------------------------------
# the phase integral
#
# With g = <s_m, s_l> = r e^{i theta}, |s_m - s_l e^{ik}|^2 = 2 - 2 r cos(k + theta),
# so after shifting k the integral splits into two real scalar integrals of r:
#
#   int (s_m - s_l e^{ik}) w dk = s_m I0(r) - s_l e^{-i theta} I1(r),
#   I0 = int w(k) dk,  I1 = int cos(k) w(k) dk,  w = (2 - 2 r cos k)^(-nu/2).
#
# Both integrands are even and 2 pi periodic; the trapezoid rule on [0, pi] with
# n intervals equals the full-period rule with 2n nodes.


_cos_cache: dict[tuple[int, bool], np.ndarray] = {}


def _cos_nodes(n: int, midpoints: bool) -> np.ndarray:
    key = (n, midpoints)
    c = _cos_cache.get(key)
    if c is None:
        if midpoints:
            c = np.cos((np.arange(n) + 0.5) * np.pi / n)
        else:
            c = np.cos(np.arange(n + 1) * np.pi / n)
        _cos_cache[key] = c
    return c


def _scaled_integrand(r: np.ndarray, log1m_r: np.ndarray, c: np.ndarray, nu: float, wts=None):
    # ((1 - r cos k) / (1 - r))^(-nu/2), always in (0, 1]
    w = np.exp(-0.5 * nu * (np.log1p(-r[:, None] * c[None, :]) - log1m_r[:, None]))
    if wts is not None:
        w = w * wts
    return w.sum(axis=1), w @ c


def _integral(s: np.ndarray, nu: float, quad: QuadratureSpec, start_nodes: int | None = None):
    m = s.shape[1]
    g = s.conj().T @ s
    iu = np.triu_indices(m, 1)
    gp = g[iu]
    r = np.abs(gp)
    if r.size and r.max() > 1 - COLLINEAR_TOL:
        k = int(np.argmax(r))
        raise CodeError(f"integrand singular: collinear codewords ({iu[0][k]}, {iu[1][k]})")
    log1m_r = np.log1p(-r)

    # per-codeword rescaling so that the nearest line of every codeword has weight 1
    lr = np.full((m, m), np.inf)
    lr[iu] = log1m_r
    lr[iu[1], iu[0]] = log1m_r
    row_min = lr.min(axis=1)
    scale = np.exp(-0.5 * nu * (lr - row_min[:, None]))
    np.fill_diagonal(scale, 0.0)

    with np.errstate(invalid="ignore", divide="ignore"):
        ph = np.where(r > 0, np.conj(gp) / r, 0.0)
    phase = np.zeros((m, m), dtype=np.complex128)
    phase[iu] = ph
    phase[iu[1], iu[0]] = np.conj(ph)
    # phase[m, l] = conj(g_ml) / |g_ml| aligns s_l with s_m

    def assemble(i0, i1):
        a0 = np.zeros((m, m))
        a1 = np.zeros((m, m))
        a0[iu] = i0
        a0[iu[1], iu[0]] = i0
        a1[iu] = i1
        a1[iu[1], iu[0]] = i1
        f = s * (scale * a0).sum(axis=1) - s @ (scale * a1 * phase).T
        return _unit_columns(f)

    n = max(quad.initial_nodes, start_nodes or 0) // 2
    n_max = quad.max_nodes // 2
    wts = np.ones(n + 1)
    wts[0] = wts[-1] = 0.5
    s0, s1 = _scaled_integrand(r, log1m_r, _cos_nodes(n, midpoints=False), nu, wts)
    prev = assemble(s0 / n, s1 / n)
    while n < n_max:
        cm = _cos_nodes(n, midpoints=True)
        t0, t1 = _scaled_integrand(r, log1m_r, cm, nu)
        s0, s1 = s0 + t0, s1 + t1
        n *= 2
        cur = assemble(s0 / n, s1 / n)
        if np.max(np.abs(cur - prev)) < quad.rel_tol:
            return cur, True, 2 * n
        prev = cur
    return prev, False, 2 * n


def phase_integral_forces(code, nu: float, quad: QuadratureSpec | None = None) -> ForceField:
    quad = quad or QuadratureSpec()
    s = _entries(code)
    f, ok, nodes = _integral(s, nu, quad)
    return _field(s, f, ForceMode.phase_integral(quad), converged=ok, nodes=nodes)


def compute_forces(code, nu: float, mode: ForceMode, start_nodes: int | None = None) -> ForceField:
    """Dispatch on ``mode``. ``start_nodes`` warm-starts the integral's node doubling."""
    s = _entries(code)
    if mode.kind is ForceKind.PHASE_INTEGRAL:
        f, ok, nodes = _integral(s, nu, mode.quad, start_nodes)
        return _field(s, f, mode, converged=ok, nodes=nodes)
    if mode.kind is ForceKind.PHASE_SUM:
        return _field(s, _node_sum(s, nu, unit_roots(mode.k)), mode)
    if mode.kind is ForceKind.REAL_ANTIPODAL:
        return real_antipodal_forces(code, nu)
    return _field(s, _plain(s, nu), mode)


def generalized_potential(code, nu: float) -> float:
    """sum_{m<l} |s_m - s_l|^-(nu - 2)."""
    s = _entries(code)
    iu = np.triu_indices(s.shape[1], 1)
    d = np.linalg.norm(s[:, iu[0]] - s[:, iu[1]], axis=0)
    return float(np.sum(d ** (-(float(nu) - 2.0))))
