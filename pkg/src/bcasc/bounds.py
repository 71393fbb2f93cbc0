"""Closed-form lower bounds on the coherence of M unit vectors in N dimensions."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .codes import Field


class BoundError(ValueError):
    pass


class Regime(str, enum.Enum):
    WELCH = "WelchRegime"
    ORTHOPLEX = "OrthoplexRegime"
    LARGE_M = "LargeM"


@dataclass(frozen=True)
class BoundSet:
    n: int
    m: int
    field: Field
    welch: float
    orthoplex: float
    levenshtein: float | None
    mukkavilli: float | None
    composite: float
    regime: Regime
    mwbe_possible: bool
    orthoplex_range: tuple[int, int]
    extension: bool

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "field": self.field.value,
            "welch": self.welch,
            "orthoplex": self.orthoplex,
            "levenshtein": self.levenshtein,
            "mukkavilli": self.mukkavilli,
            "composite": self.composite,
            "regime": self.regime.value,
            "mwbe_possible": self.mwbe_possible,
            "orthoplex_range": list(self.orthoplex_range),
            "extension": self.extension,
        }


def _check_dims(n: int, m: int) -> None:
    if n < 1 or m < 1:
        raise BoundError(f"dimensions must be positive, got n={n}, m={m}")


def welch_bound(n: int, m: int) -> float:
    _check_dims(n, m)
    if m <= n:
        raise BoundError("Welch bound stated for M > N")
    return math.sqrt((m - n) / (n * (m - 1)))


def welch_limit(n: int, field: Field | str = Field.COMPLEX) -> int:
    """Largest M for which a set meeting the Welch bound with equality may exist."""
    return n * n if Field(field) is Field.COMPLEX else n * (n + 1) // 2


def mwbe_possible(n: int, m: int, field: Field | str = Field.COMPLEX) -> bool:
    """Necessary (not sufficient) condition for maximum-Welch-bound-equality sets."""
    return m <= welch_limit(n, field)


def orthoplex_range(n: int, field: Field | str = Field.COMPLEX) -> tuple[int, int]:
    """Half-open M range (lo, hi] in which the orthoplex bound can be attained."""
    if Field(field) is Field.COMPLEX:
        return n * n, 2 * (n * n - 1)
    return n * (n + 1) // 2, (n - 1) * (n + 2)


def orthoplex_bound(n: int) -> float:
    if n < 1:
        raise BoundError(f"n must be positive, got {n}")
    return math.sqrt(1.0 / n)


def levenshtein_bound(n: int, m: int, field: Field | str = Field.COMPLEX) -> float | None:
    """Levenshtein bound, or None where its numerator is negative."""
    _check_dims(n, m)
    if m <= n:
        raise BoundError("Levenshtein bound stated for M > N")
    if Field(field) is Field.COMPLEX:
        num, den = 2 * m - n * n - n, (n + 1) * (m - n)
    else:
        num, den = 3 * m - n * n - 2 * n, (n + 2) * (m - n)
    if num < 0:
        return None
    return math.sqrt(num / den)


def mukkavilli_bound(n: int, m: int) -> float:
    if n < 2:
        raise BoundError("Mukkavilli bound needs n >= 2")
    if m < 1:
        raise BoundError(f"m must be positive, got {m}")
    return max(0.0, 1.0 - 2.0 * m ** (-1.0 / (n - 1)))


def composite_bound(n: int, m: int, field: Field | str = Field.COMPLEX) -> BoundSet:
    """Regime-wise maximum of the applicable bounds.

    Only the complex composition is established; the real-field variant uses the
    real thresholds and the real Levenshtein form and is flagged ``extension``.
    """
    field = Field(field)
    welch = welch_bound(n, m)
    ortho = orthoplex_bound(n)
    lev = levenshtein_bound(n, m, field)
    muk = mukkavilli_bound(n, m) if n >= 2 else None
    lo, hi = orthoplex_range(n, field)
    large = [b for b in (lev, muk) if b is not None]

    if m <= lo:
        regime, comp = Regime.WELCH, welch
    elif m <= hi:
        regime, comp = Regime.ORTHOPLEX, max([ortho, *large])
    else:
        regime, comp = Regime.LARGE_M, max(large)

    return BoundSet(
        n=n,
        m=m,
        field=field,
        welch=welch,
        orthoplex=ortho,
        levenshtein=lev,
        mukkavilli=muk,
        composite=comp,
        regime=regime,
        mwbe_possible=mwbe_possible(n, m, field),
        orthoplex_range=(lo, hi),
        extension=field is Field.REAL,
    )
