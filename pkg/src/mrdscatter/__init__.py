"""Scattered F_q-subspaces U_{b,s} of F_{q^2n} x F_{q^2n}, their linear sets and MRD codes."""

__version__ = "0.1.0"

from .errors import (
    CapExceededError,
    CertificationError,
    FieldError,
    InvalidSubspaceError,
    NoWitnessError,
    SubfieldError,
)
from .field import FieldCtx, FieldSpec, field, make_field
from .linset import ProjPoint, SubspaceU, WeightDistribution, is_scattered, weight_distribution
from .qpoly import QPoly

__all__ = [
    "CapExceededError",
    "CertificationError",
    "FieldCtx",
    "FieldError",
    "FieldSpec",
    "InvalidSubspaceError",
    "NoWitnessError",
    "ProjPoint",
    "QPoly",
    "SubfieldError",
    "SubspaceU",
    "WeightDistribution",
    "field",
    "is_scattered",
    "make_field",
    "weight_distribution",
]
