"""Complex spherical codes and their elementary geometry.

A code is stored as an ``N x M`` complex array whose columns are the unit-norm
codewords. Real codes use the same storage with zero imaginary parts.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

UNIT_NORM_TOL = 1e-12
RENORMALIZE_TOL = 1e-6


class CodeError(ValueError):
    """Raised for invalid codes or degenerate codeword configurations."""


class Field(str, enum.Enum):
    COMPLEX = "complex"
    REAL = "real"


@dataclass(frozen=True, eq=False)
class SphericalCode:
    """M unit-norm codewords in C^N (or R^N), one representative per line.

    Columns whose norm is off by less than ``RENORMALIZE_TOL`` are silently
    renormalized; anything further off is rejected.
    """

    entries: np.ndarray
    field: Field = Field.COMPLEX

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.complex128, copy=True)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise CodeError(f"code must be a non-empty N x M array, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise CodeError("code contains non-finite entries")
        field = Field(self.field)
        if field is Field.REAL and np.any(a.imag != 0):
            raise CodeError("real code has non-zero imaginary parts")
        norms = np.linalg.norm(a, axis=0)
        dev = np.abs(norms - 1.0)
        if np.any(dev > RENORMALIZE_TOL):
            j = int(np.argmax(dev > RENORMALIZE_TOL))
            raise CodeError(f"unit-norm violation at column {j} (norm {norms[j]!r})")
        if np.any(dev > UNIT_NORM_TOL):
            a /= norms
        if field is Field.REAL:
            a.imag = 0.0
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "field", field)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def m(self) -> int:
        return self.entries.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.entries[:, j]

    def __eq__(self, other):
        if not isinstance(other, SphericalCode):
            return NotImplemented
        return self.field is other.field and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.field, self.entries.tobytes()))


@dataclass(frozen=True)
class CoherenceReport:
    value: float
    argmax_pair: tuple[int, int]
    gram_offdiag_min: float
    gram_offdiag_max: float
    offdiag_rms: float


def normalize_columns(raw, field: Field | str | None = None) -> SphericalCode:
    """Scale every column of ``raw`` to unit norm.

    The field is inferred when not given: real iff all imaginary parts vanish.
    """
    a = np.asarray(raw, dtype=np.complex128)
    if a.ndim != 2:
        raise CodeError(f"expected a 2-D array, got shape {a.shape}")
    norms = np.linalg.norm(a, axis=0)
    if np.any(norms == 0):
        j = int(np.argmax(norms == 0))
        raise CodeError(f"degenerate seed column {j}")
    if field is None:
        field = Field.REAL if not np.any(a.imag) else Field.COMPLEX
    return SphericalCode(a / norms, Field(field))


def gram(code: SphericalCode) -> np.ndarray:
    """G[i, j] = <s_i, s_j> = s_i^H s_j."""
    s = code.entries
    return s.conj().T @ s


def _offdiag_moduli(code: SphericalCode) -> tuple[np.ndarray, tuple[np.ndarray, np.ndarray]]:
    g = np.abs(gram(code))
    iu = np.triu_indices(code.m, 1)
    return g[iu], iu


def coherence(code: SphericalCode) -> CoherenceReport:
    if code.m < 2:
        raise CodeError("coherence undefined for single vector")
    moduli, (rows, cols) = _offdiag_moduli(code)
    # np.argmax returns the first maximum; triu_indices is row-major, so ties
    # resolve to the lexicographically smallest pair.
    k = int(np.argmax(moduli))
    vmax = float(moduli[k])
    return CoherenceReport(
        value=vmax,
        argmax_pair=(int(rows[k]), int(cols[k])),
        gram_offdiag_min=float(moduli.min()),
        gram_offdiag_max=vmax,
        offdiag_rms=float(np.sqrt(np.mean(moduli**2))),
    )


def coherence_value(entries: np.ndarray) -> float:
    """Coherence of a raw column-normalized array, without building a report."""
    g = np.abs(entries.conj().T @ entries)
    np.fill_diagonal(g, 0.0)
    return float(g.max())


def min_line_distance(code: SphericalCode) -> float:
    """Smallest phase-minimized distance min_phi |s_p - s_q e^{i phi}| over pairs.

    For unit vectors the minimum over phi is attained when s_q e^{i phi} is
    phase-aligned with s_p, giving sqrt(2 - 2 |<s_p, s_q>|).
    """
    if code.m < 2:
        raise CodeError("line distance undefined for single vector")
    moduli, _ = _offdiag_moduli(code)
    return float(np.sqrt(max(2.0 - 2.0 * moduli.max(), 0.0)))
