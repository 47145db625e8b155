"""Core modules: configuration, errors and the exact coefficient/polynomial types."""

from .config import get_config, LabConfig
from .errors import (
    BergmanJetsError,
    DimensionError,
    UnknownVariableError,
    EvaluationError,
    ParseError,
    CompositionError,
    ShapeError,
    QuadratureConvergenceError,
    GramValidationError,
    PreconditionError,
    ExtensionNotGuaranteedError,
    ChartDomainError,
    FitError,
    ResourceCapError,
    DefectRelationError,
)
from .coefficients import GaussianRational, PiCoeff
from .multipoly import MultiPoly, VarFamily, VarId, Parity, ring_op, poly_diff, poly_eval, multi_indices
from .expressions import parse_poly

__all__ = [
    "get_config",
    "LabConfig",
    "BergmanJetsError",
    "DimensionError",
    "UnknownVariableError",
    "EvaluationError",
    "ParseError",
    "CompositionError",
    "ShapeError",
    "QuadratureConvergenceError",
    "GramValidationError",
    "PreconditionError",
    "ExtensionNotGuaranteedError",
    "ChartDomainError",
    "FitError",
    "ResourceCapError",
    "DefectRelationError",
    "GaussianRational",
    "PiCoeff",
    "MultiPoly",
    "VarFamily",
    "VarId",
    "Parity",
    "ring_op",
    "poly_diff",
    "poly_eval",
    "multi_indices",
    "parse_poly",
]
