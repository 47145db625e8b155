"""H^0(CP^n, O(p)) with the Fubini-Study metric normalized by omega = (i/2pi) R.

In the chart Z_0 = 1 with coordinates z:
    h_{ab} = d_a d_bbar log(1 + |z|^2),   dv_X = det(h) / pi^n dlambda(z),
    |Z^alpha|^2_{h^p} = |z^alpha'|^2 / (1 + |z|^2)^p,
and geodesic normal coordinates at the origin are z = tan(sqrt(pi)|Z|) Z/|Z|.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Tuple

import numpy as np

from ..core.errors import ChartDomainError, DimensionError, GramValidationError
from ..core.multipoly import multi_indices
from ..utils.quadrature_rules import hopf_rule, plane_polar_rule

logger = logging.getLogger(__name__)

INJECTIVITY_RADIUS = math.sqrt(math.pi) / 2
_CHART_LIMIT = 1e8


def _beta(x: int, y: int) -> Fraction:
    """B(x, y) for positive integers."""
    return Fraction(math.factorial(x - 1) * math.factorial(y - 1), math.factorial(x + y - 1))


def fs_monomial_integral(chart_exponent: Tuple[int, ...], p: int) -> Fraction:
    """
    int_{C^n} |z^a|^2 (1 + |z|^2)^-p dv_X by iterated Beta reduction.

    Integrating out z_n with c = 1 + |z'|^2 gives
    int |z_n|^{2a} (c + |z_n|^2)^-s dlambda/pi = c^{a+1-s} B(a + 1, s - a - 1),
    so the weight exponent s = p + n + 1 drops by a_n + 1 per coordinate.
    """
    n = len(chart_exponent)
    s = p + n + 1
    value = Fraction(1)
    for a in reversed(chart_exponent):
        value *= _beta(a + 1, s - a - 1)
        s -= a + 1
    return value


def homogeneous_exponents(n: int, p: int) -> List[Tuple[int, ...]]:
    """Exponents alpha in N^{n+1}, |alpha| = p, with Z_0^p first."""
    return sorted(multi_indices(n + 1, p), reverse=True)


def gram_matrix(n: int, p: int) -> np.ndarray:
    """
    L^2 Gram matrix of the monomial basis of H^0(CP^n, O(p)).

    Args:
        n: Ambient dimension (1 or 2)
        p: Tensor power, p >= 1

    Returns:
        Hermitian (here diagonal) matrix with entries alpha!/(p + n)!
    """
    return HomogSpace(n, p).gram


def chart_points(z) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128)
    if z.ndim == 1:
        z = z[None, :]
    if not np.all(np.isfinite(z)) or np.any(np.abs(z) > _CHART_LIMIT):
        raise ChartDomainError("point lies at infinity of the chart Z_0 = 1")
    return z


def fs_metric(z) -> np.ndarray:
    """h_{ab} = ((1 + |z|^2) delta_ab - zb_a z_b) / (1 + |z|^2)^2, shape (npts, n, n)."""
    z = chart_points(z)
    a = 1.0 + np.sum(np.abs(z) ** 2, axis=1)
    n = z.shape[1]
    eye = np.eye(n)[None, :, :]
    outer = np.conj(z)[:, :, None] * z[:, None, :]
    return (a[:, None, None] * eye - outer) / (a**2)[:, None, None]


def fs_inverse_metric(z) -> np.ndarray:
    """Inverse of fs_metric: (1 + |z|^2)(delta_ab + zb_a z_b)."""
    z = chart_points(z)
    a = 1.0 + np.sum(np.abs(z) ** 2, axis=1)
    n = z.shape[1]
    outer = np.conj(z)[:, :, None] * z[:, None, :]
    return a[:, None, None] * (np.eye(n)[None, :, :] + outer)


def volume_density(z) -> np.ndarray:
    """dv_X / dlambda(z) = (1 + |z|^2)^-(n+1) / pi^n."""
    z = chart_points(z)
    n = z.shape[1]
    return (1.0 + np.sum(np.abs(z) ** 2, axis=1)) ** (-(n + 1)) / math.pi**n


def normal_to_chart(Z) -> np.ndarray:
    """Geodesic normal coordinates at the origin to chart coordinates."""
    Z = np.atleast_2d(np.asarray(Z, dtype=np.complex128))
    r = np.linalg.norm(Z, axis=1)
    if np.any(r >= INJECTIVITY_RADIUS):
        raise ChartDomainError(f"normal coordinates must stay below {INJECTIVITY_RADIUS:.4f}")
    scale = np.ones_like(r)
    nz = r > 0
    scale[nz] = np.tan(math.sqrt(math.pi) * r[nz]) / r[nz]
    scale[~nz] = math.sqrt(math.pi)
    return Z * scale[:, None]


def chart_to_normal(z) -> np.ndarray:
    z = chart_points(z)
    r = np.linalg.norm(z, axis=1)
    scale = np.full_like(r, 1.0 / math.sqrt(math.pi))
    nz = r > 0
    scale[nz] = np.arctan(r[nz]) / (math.sqrt(math.pi) * r[nz])
    return z * scale[:, None]


def geodesic_distance_from_origin(z) -> np.ndarray:
    z = chart_points(z)
    return np.arctan(np.linalg.norm(z, axis=1)) / math.sqrt(math.pi)


def normal_kappa(Z) -> np.ndarray:
    """dv_X = kappa(Z) dlambda(Z) in normal coordinates; kappa(0) = 1."""
    Z = np.atleast_2d(np.asarray(Z, dtype=np.complex128))
    n = Z.shape[1]
    r = np.linalg.norm(Z, axis=1)
    f = np.tan(math.sqrt(math.pi) * r)
    ratio = np.full_like(r, math.sqrt(math.pi))
    nz = r > 0
    ratio[nz] = f[nz] / r[nz]
    return math.pi ** (-n + 0.5) * (1.0 + f**2) ** (-n) * ratio ** (2 * n - 1)


def unitary_frame_factor(z, p: int) -> np.ndarray:
    """|Z_0^p (1 + |z|^2)^{p/2}| = 1: section values in this frame are f(z) (1 + |z|^2)^{-p/2}."""
    z = chart_points(z)
    return (1.0 + np.sum(np.abs(z) ** 2, axis=1)) ** (-0.5 * p)


@dataclass
class HomogSpace:
    """H^0(CP^n, O(p)) in the monomial basis with its exact Gram data."""

    n: int
    p: int
    validate: Optional[bool] = None
    exponents: List[Tuple[int, ...]] = field(init=False)

    def __post_init__(self):
        if self.n not in (1, 2):
            raise DimensionError(f"projective spaces of dimension 1 or 2 only, got n={self.n}")
        if self.p < 1:
            raise DimensionError(f"tensor power must be positive, got p={self.p}")
        self.exponents = homogeneous_exponents(self.n, self.p)
        if self.validate is None:
            self.validate = self.n == 1 or self.p <= 6
        if self.validate:
            validate_gram(self)

    @property
    def dim(self) -> int:
        return len(self.exponents)

    @cached_property
    def chart_exponents(self) -> np.ndarray:
        return np.array([alpha[1:] for alpha in self.exponents], dtype=np.int64).reshape(self.dim, self.n)

    @cached_property
    def gram_exact(self) -> List[Fraction]:
        return [fs_monomial_integral(tuple(a), self.p) for a in self.chart_exponents.tolist()]

    @cached_property
    def gram(self) -> np.ndarray:
        return np.diag(np.array([float(g) for g in self.gram_exact]))

    @cached_property
    def norms(self) -> np.ndarray:
        return np.sqrt(np.diag(self.gram))

    def monomial_values(self, z) -> np.ndarray:
        """z^alpha' at chart points, shape (npts, dim)."""
        z = chart_points(z)
        exps = self.chart_exponents
        out = np.ones((z.shape[0], self.dim), dtype=np.complex128)
        for i in range(self.n):
            out *= np.where(exps[None, :, i] == 0, 1.0, z[:, i : i + 1] ** exps[None, :, i])
        return out

    def section_values(self, z) -> np.ndarray:
        """Orthonormal basis sections in the unitary frame, shape (npts, dim)."""
        z = chart_points(z)
        return self.monomial_values(z) * unitary_frame_factor(z, self.p)[:, None] / self.norms[None, :]


def validate_gram(space: HomogSpace, tol: float = 1e-6) -> float:
    """
    Cross-check the Beta-reduced Gram against chart quadrature.

    Returns:
        Largest relative discrepancy

    Raises:
        GramValidationError: If it exceeds tol
    """
    n, p = space.n, space.p
    radial = p // 2 + 4
    angular = p + 2
    if n == 1:
        nodes, weights = plane_polar_rule(radial, angular)
        nodes = nodes[:, None]
    else:
        nodes, weights = hopf_rule(radial, radial, angular)
    vals = space.monomial_values(nodes) * unitary_frame_factor(nodes, p)[:, None]
    w = weights * volume_density(nodes)
    numeric = (np.conj(vals) * w[:, None]).T @ vals
    exact = space.gram
    scale = np.max(np.abs(np.diag(exact)))
    err = float(np.max(np.abs(numeric - exact)) / scale)
    logger.debug("Gram validation n=%d p=%d: relative error %.2e", n, p, err)
    if err > tol:
        raise GramValidationError(f"Gram of H^0(CP^{n}, O({p})) disagrees with quadrature by {err:.3e}")
    return err
