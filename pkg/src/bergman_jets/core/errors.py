"""Exception hierarchy shared by the calculus, the oracles and the lab."""

from __future__ import annotations


class BergmanJetsError(Exception):
    """Base class for every error raised by the package."""


class DimensionError(BergmanJetsError, ValueError):
    """Operands live over incompatible variable families or dimensions."""


class UnknownVariableError(BergmanJetsError, KeyError):
    """A variable id does not exist in the polynomial's families."""


class EvaluationError(BergmanJetsError, ValueError):
    """A numeric evaluation is missing an assignment."""


class ParseError(BergmanJetsError, ValueError):
    """Malformed polynomial or kernel expression."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class CompositionError(BergmanJetsError, ValueError):
    """The two kernel bases have no composition rule."""


class ShapeError(BergmanJetsError, ValueError):
    """Index sets of two jet kernels do not compose."""


class QuadratureConvergenceError(BergmanJetsError, RuntimeError):
    """Doubling the quadrature order moved the result beyond tolerance."""


class GramValidationError(BergmanJetsError, RuntimeError):
    """Exact Gram entries disagree with the chart quadrature."""


class PreconditionError(BergmanJetsError, ValueError):
    """A section does not vanish to the required order along Y."""


class ExtensionNotGuaranteedError(BergmanJetsError, RuntimeError):
    """The jet restriction map is not surjective at this tensor power."""


class ChartDomainError(BergmanJetsError, ValueError):
    """Points outside the coordinate chart or its injectivity region."""


class FitError(BergmanJetsError, ValueError):
    """Degenerate or invalid data for a regression."""


class ResourceCapError(BergmanJetsError, ValueError):
    """Requested tensor powers exceed the desk-scale caps."""


class DefectRelationError(BergmanJetsError, RuntimeError):
    """Res, E and A fail one of their defining relations beyond tolerance."""
