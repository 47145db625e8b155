"""Least-squares fits of asymptotic trends: power laws in p and exp(-c sqrt(p) d) decay."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Dict, Iterable, Tuple

import numpy as np
from scipy import stats

from ..core.errors import FitError

MIN_POINTS = 5


@dataclass
class FitResult:
    """slope/intercept of the log-linear fit; rate is -slope for decay fits."""

    model: str
    slope: float
    intercept: float
    stderr: float
    r2: float
    count: int

    @property
    def exponent(self) -> float:
        return self.slope

    @property
    def rate(self) -> float:
        return -self.slope

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        if self.model == "exp-decay":
            out["rate"] = self.rate
        return out


def _linear_fit(model: str, x: np.ndarray, y: np.ndarray) -> FitResult:
    order = np.lexsort((y, x))
    x, y = x[order], y[order]
    if len(np.unique(x)) < MIN_POINTS:
        raise FitError(f"need at least {MIN_POINTS} distinct abscissae, got {len(np.unique(x))}")
    fit = stats.linregress(x, y)
    r2 = float(fit.rvalue**2) if np.isfinite(fit.rvalue) else 0.0
    return FitResult(model, float(fit.slope), float(fit.intercept), float(fit.stderr), r2, len(x))


def _positive(values: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise FitError(f"{what} must be finite and positive")


def trend_fit(series: Iterable[Tuple[float, float]]) -> FitResult:
    """
    Power law value ~ C p^slope by least squares in log-log coordinates.

    Args:
        series: (p, value) pairs

    Raises:
        FitError: On fewer than five distinct p or nonpositive values
    """
    data = np.asarray(list(series), dtype=float).reshape(-1, 2)
    _positive(data[:, 0], "abscissae")
    _positive(data[:, 1], "values")
    return _linear_fit("power-law", np.log(data[:, 0]), np.log(data[:, 1]))


def decay_fit(samples: Iterable[Tuple[float, float, float]]) -> FitResult:
    """
    log|K| ~ intercept - c sqrt(p) d.

    Args:
        samples: (p, distance, |kernel|) triples

    Returns:
        FitResult whose rate is c

    Raises:
        FitError: On fewer than five distinct sqrt(p) d or nonpositive magnitudes
    """
    data = np.asarray(list(samples), dtype=float).reshape(-1, 3)
    _positive(data[:, 2], "magnitudes")
    if np.any(data[:, 0] <= 0) or np.any(data[:, 1] < 0):
        raise FitError("tensor powers must be positive and distances nonnegative")
    x = np.sqrt(data[:, 0]) * data[:, 1]
    return _linear_fit("exp-decay", x, np.log(data[:, 2]))
