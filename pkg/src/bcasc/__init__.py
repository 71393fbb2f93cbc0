"""Coherence minimization via best complex antipodal spherical code search."""
__version__ = "0.1.0"

from .bounds import BoundSet, Regime, composite_bound, welch_bound
from .codes import CodeError, CoherenceReport, Field, SphericalCode, coherence, gram, normalize_columns
from .forces import ForceField, ForceMode, QuadratureSpec, compute_forces

__all__ = [
    "BoundSet",
    "CodeError",
    "CoherenceReport",
    "Field",
    "ForceField",
    "ForceMode",
    "QuadratureSpec",
    "Regime",
    "SphericalCode",
    "coherence",
    "composite_bound",
    "compute_forces",
    "gram",
    "normalize_columns",
    "welch_bound",
]
