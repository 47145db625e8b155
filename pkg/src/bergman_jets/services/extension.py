"""Jet restriction, optimal extension and logarithmic Bergman kernels on CP^n.

All operators act on orthonormal coordinates: a section is the vector x of
its coefficients in the basis e_i = Z^alpha_i / ||Z^alpha_i||, and a jet the
vector y = L^H j of its coefficients j in the JetSpace basis, where
L L^H is the jet Gram. Both identifications are isometric, so adjoints are
conjugate transposes.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import linalg

from ..core.config import get_config
from ..core.errors import ChartDomainError, DefectRelationError, ExtensionNotGuaranteedError, PreconditionError
from .projective_space import HomogSpace, chart_points, normal_to_chart
from .submanifolds import JetSpace, SubmanifoldSpec, conormal_gram, get_jet_space, lower_jet_matrix, sym_gram

logger = logging.getLogger(__name__)


def _row_normalized(mat: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(mat, axis=1)
    keep = norms > 0
    return mat[keep] / norms[keep, None]


class ExtensionProblem:
    """
    Cached linear algebra of one (Y, k, p).

    Args:
        spec: Submanifold Y
        k: Jet order
        p: Tensor power
        rtol: Relative singular value cutoff for ranks, null spaces and pseudo-inverses
        jet_tol: Tolerance of the lower-jet precondition
    """

    def __init__(
        self,
        spec: SubmanifoldSpec,
        k: int,
        p: int,
        rtol: Optional[float] = None,
        jet_tol: Optional[float] = None,
    ):
        config = get_config()
        self.spec = spec
        self.k = k
        self.p = p
        self.rtol = rtol if rtol is not None else config.pinv_rtol
        self.jet_tol = jet_tol if jet_tol is not None else config.jet_tol
        self.space = HomogSpace(spec.n, p)
        self._vanishing: Dict[int, np.ndarray] = {}

    def __repr__(self) -> str:
        return f"ExtensionProblem({self.spec.kind.value}, n={self.spec.n}, k={self.k}, p={self.p})"

    @property
    def dim(self) -> int:
        return self.space.dim

    @cached_property
    def jet_space(self) -> JetSpace:
        return get_jet_space(self.spec, self.k, self.p)

    @cached_property
    def jet_cholesky(self) -> np.ndarray:
        """Lower-triangular L with jet Gram = L L^H."""
        return linalg.cholesky(self.jet_space.gram, lower=True)

    def lower_jets(self, order: int) -> np.ndarray:
        """T_order in orthonormal section coordinates, all chart rows."""
        bound = self.spec.chart_degree_bound(self.p, order)
        if bound < 0:
            return np.zeros((0, self.dim))
        T = lower_jet_matrix(self.spec, self.space.chart_exponents, order, bound)
        return T / self.space.norms[None, :]

    def vanishing_basis(self, order: int) -> np.ndarray:
        """Orthonormal basis Q_order of H^0(J_Y^order), sections vanishing to that order."""
        if order not in self._vanishing:
            if order == 0:
                basis = np.eye(self.dim, dtype=np.complex128)
            else:
                constraints = np.vstack([_row_normalized(self.lower_jets(l)) for l in range(order)])
                basis = linalg.null_space(constraints, rcond=self.rtol).astype(np.complex128)
            logger.debug("%r: dim H0(J^%d) = %d of %d", self, order, basis.shape[1], self.dim)
            self._vanishing[order] = basis
        return self._vanishing[order]

    def log_projector(self, order: Optional[int] = None) -> np.ndarray:
        """Matrix of B^{X,order Y} = Q Q^H (default order k)."""
        q = self.vanishing_basis(self.k if order is None else order)
        return q @ q.conj().T

    def layer_basis(self, order: int) -> np.ndarray:
        """Orthonormal basis of H^0(J^order) minus H^0(J^{order+1}), the range of B^{perp,order}."""
        q, q_next = self.vanishing_basis(order), self.vanishing_basis(order + 1)
        if q_next.shape[1] == 0:
            return q
        inner = linalg.null_space((q.conj().T @ q_next).conj().T, rcond=self.rtol)
        return q @ inner

    def perp_projector(self, order: int) -> np.ndarray:
        u = self.layer_basis(order)
        return u @ u.conj().T

    @cached_property
    def restriction_matrix(self) -> np.ndarray:
        """Res_{k,p} = (nabla^k .)|_Y from orthonormal sections to orthonormal jets."""
        bound = self.spec.jet_degree_bound(self.p, self.k)
        full = self.lower_jets(self.k)
        kept = lower_jet_matrix(self.spec, self.space.chart_exponents, self.k, bound) / self.space.norms[None, :]
        if full.shape[0] > kept.shape[0]:
            # chart rows above the jet degree vanish on H^0(J^k)
            q = self.vanishing_basis(self.k)
            extra = np.linalg.norm(full[kept.shape[0]:] @ q)
            base = max(np.linalg.norm(kept @ q), 1.0)
            if extra > 1e-8 * base:
                logger.warning("%r: chart rows beyond the jet degree carry weight %.2e", self, extra / base)
        return self.jet_cholesky.conj().T @ (math.factorial(self.k) * kept)

    @cached_property
    def projected_restriction(self) -> np.ndarray:
        """Res_{k,p} composed with B^{X,kY}."""
        return self.restriction_matrix @ self.log_projector()

    @cached_property
    def singular_values(self) -> np.ndarray:
        return linalg.svdvals(self.projected_restriction)

    @cached_property
    def rank(self) -> int:
        s = self.singular_values
        if s.size == 0 or s[0] == 0:
            return 0
        rank = int(np.sum(s > self.rtol * s[0]))
        logger.debug("%r: jet map rank %d of %d", self, rank, self.jet_space.dim)
        return rank

    @property
    def surjective(self) -> bool:
        return self.rank == self.jet_space.dim

    def require_surjective(self) -> None:
        if not self.surjective:
            raise ExtensionNotGuaranteedError(
                f"{self!r}: jet restriction has rank {self.rank} < {self.jet_space.dim}; increase p"
            )

    @cached_property
    def extension(self) -> np.ndarray:
        """E_{k,p}: least-norm solution operator of Res_{k,p} B^{X,kY} f = g."""
        self.require_surjective()
        return linalg.pinv(self.projected_restriction, rtol=self.rtol)

    @cached_property
    def defect(self) -> np.ndarray:
        """A_{k,p}, the unique operator with (Res B^{X,kY})^* = E A."""
        return linalg.pinv(self.extension, rtol=self.rtol) @ self.projected_restriction.conj().T

    def restrict(self, f: Sequence[complex]) -> np.ndarray:
        """
        Res_{k,p} f for a section vanishing to order k along Y.

        Raises:
            PreconditionError: If a lower jet of f exceeds jet_tol
        """
        f = np.asarray(f, dtype=np.complex128)
        scale = max(1.0, float(np.linalg.norm(f)))
        for l in range(self.k):
            lower = _row_normalized(self.lower_jets(l)) @ f
            worst = float(np.max(np.abs(lower), initial=0.0))
            if worst > self.jet_tol * scale:
                raise PreconditionError(f"section has a nonzero {l}-jet along Y ({worst:.2e})")
        return self.restriction_matrix @ f

    def extend(self, g: Sequence[complex]) -> np.ndarray:
        return self.extension @ np.asarray(g, dtype=np.complex128)

    def jet_from_coefficients(self, coefficients: Sequence[complex]) -> np.ndarray:
        """Orthonormal jet coordinates of sum_b c_b tau^a dw^{.beta} (x) Z_0^p."""
        return self.jet_cholesky.conj().T @ np.asarray(coefficients, dtype=np.complex128)

    def sections_from_monomials(self, coefficients: Sequence[complex]) -> np.ndarray:
        """Orthonormal coordinates of sum_i c_i Z^alpha_i."""
        return np.asarray(coefficients, dtype=np.complex128) * self.space.norms

    def model_norm_ratio(self) -> float:
        """||E_{k,p}|| p^{(n-m+k)/2} sqrt(k! (2 pi)^k); tends to 1."""
        norm = float(np.linalg.norm(self.extension, 2))
        return norm * self.p ** (0.5 * (self.spec.codim + self.k)) * math.sqrt(
            math.factorial(self.k) * (2 * math.pi) ** self.k
        )

    def model_defect_deviation(self) -> float:
        """||A / (p^{n-m+k} (2 pi)^k k!) - Id||."""
        scale = self.p ** (self.spec.codim + self.k) * (2 * math.pi) ** self.k * math.factorial(self.k)
        return float(np.linalg.norm(self.defect / scale - np.eye(self.jet_space.dim), 2))

    def identity_residuals(self) -> Dict[str, float]:
        """Relative residuals of the identities linking Res, E and A."""
        R, E, A = self.projected_restriction, self.extension, self.defect
        eye = np.eye(self.jet_space.dim)

        def rel(x: np.ndarray, ref: np.ndarray) -> float:
            return float(np.linalg.norm(x) / max(np.linalg.norm(ref), 1e-300))

        ladder = sum(self.perp_projector(l) for l in range(self.k)) + self.log_projector()
        return {
            "res_e_identity": rel(R @ E - eye, eye),
            "adjoint_relation": rel(R.conj().T - E @ A, R),
            "e_star_e_inverse": rel(E.conj().T @ E - linalg.inv(A.conj().T), E.conj().T @ E),
            "res_res_star": rel(R @ R.conj().T - A, A),
            "projector_ladder": rel(ladder - np.eye(self.dim), np.eye(self.dim)),
        }

    # kernels

    def section_values(self, z) -> np.ndarray:
        return self.space.section_values(z)

    def _kernel(self, basis: np.ndarray, x, y) -> np.ndarray:
        vx = self.section_values(x) @ basis
        vy = self.section_values(y) @ basis
        return np.sum(vx * np.conj(vy), axis=1)

    def bergman_kernel(self, x, y) -> np.ndarray:
        return self._kernel(np.eye(self.dim), x, y)

    def log_bergman_kernel(self, x, y, order: Optional[int] = None) -> np.ndarray:
        return self._kernel(self.vanishing_basis(self.k if order is None else order), x, y)

    def perp_kernel(self, order: int, x, y) -> np.ndarray:
        return self._kernel(self.layer_basis(order), x, y)

    def near_y_kernel(self, x) -> np.ndarray:
        """B^X - B^{X,kY} on the diagonal, sum of ||B^{perp,l} e(x)||^2 over l < k."""
        if self.k == 0:
            return np.zeros(chart_points(x).shape[0])
        basis = np.hstack([self.layer_basis(l) for l in range(self.k)])
        return np.sum(np.abs(self.section_values(x) @ basis) ** 2, axis=1)

    def extension_kernel_at_origin(self, x, datum: Sequence[complex]) -> np.ndarray:
        """
        E_{k,p}(x, y0) applied to a jet datum at the chart origin y0 of Y.

        Args:
            x: Chart points
            datum: Coefficients of dw^{.beta} at y0 (multi_indices order)
        """
        jet = self.jet_space
        eps = linalg.solve_triangular(self.jet_cholesky.conj(), jet.origin_values(), lower=True)
        h0 = sym_gram(conormal_gram(self.spec, np.zeros(1)), self.k)[0]
        pairing = np.conj(eps) @ h0 @ np.asarray(datum, dtype=np.complex128)
        return self.section_values(x) @ (self.extension @ pairing)


@lru_cache(maxsize=64)
def get_problem(spec: SubmanifoldSpec, k: int, p: int) -> ExtensionProblem:
    return ExtensionProblem(spec, k, p)


def restriction_jets(space: HomogSpace, spec: SubmanifoldSpec, k: int) -> np.ndarray:
    """
    Matrix of Res_{k,p} from orthonormal sections of space to orthonormal k-jets along Y.

    Apply it only to sections vanishing to order k (use ExtensionProblem.restrict
    for a checked application, or compose with the log-Bergman projector).
    """
    if space.n != spec.n:
        raise ChartDomainError(f"Y lives in CP^{spec.n}, space is over CP^{space.n}")
    return get_problem(spec, k, space.p).restriction_matrix


def minimal_norm_extension(spec: SubmanifoldSpec, k: int, p: int, g: Sequence[complex]) -> np.ndarray:
    """
    Least-norm section with jet Res_{k,p} f = g.

    Raises:
        ExtensionNotGuaranteedError: If the jet map is not surjective at p
    """
    return get_problem(spec, k, p).extend(g)


@dataclass
class MultiplicativeDefect:
    spec: SubmanifoldSpec
    k: int
    p: int
    matrix: np.ndarray
    residuals: Dict[str, float]
    model_deviation: float

    def to_dict(self) -> Dict[str, object]:
        return {
            "y_kind": self.spec.kind.value,
            "k": self.k,
            "p": self.p,
            "residuals": self.residuals,
            "model_deviation": self.model_deviation,
        }


def multiplicative_defect(spec: SubmanifoldSpec, k: int, p: int, tol: float = 1e-8) -> MultiplicativeDefect:
    """
    A_{k,p} together with the residuals of the relations it is defined by.

    Raises:
        DefectRelationError: If Res E = I, Res* = E A, E*E = A^-* or Res Res* = A fails by more than tol
    """
    problem = get_problem(spec, k, p)
    residuals = problem.identity_residuals()
    failed = {name: value for name, value in residuals.items() if value > tol}
    if failed:
        detail = ", ".join(f"{name} off by {value:.2e}" for name, value in failed.items())
        raise DefectRelationError(f"{problem!r}: {detail} (tol {tol:g})")
    return MultiplicativeDefect(spec, k, p, problem.defect, residuals, problem.model_defect_deviation())


@dataclass
class JetMapResult:
    jets: List[np.ndarray]
    jet_norm: float
    quotient_norm: float
    ratio: Optional[float] = field(default=None)


def jet_map_and_isometry(spec: SubmanifoldSpec, k: int, p: int, f: Sequence[complex]) -> JetMapResult:
    """
    Jet_{k,p}(f) = (g_0, ..., g_k) and the ratio ||Jet f||_Jet / ||[f]||.

    g_r = Res_{r,p} B^{X,rY} (f - sum_{l<r} E_{l,p} g_l); the weighted norm is
    sum ||g_l||^2 / (l! (2 pi)^l p^{n-m+l}), the quotient norm sum ||B^{perp,l} f||^2.
    """
    f = np.asarray(f, dtype=np.complex128)
    residual = f.copy()
    jets: List[np.ndarray] = []
    weighted = 0.0
    for r in range(k + 1):
        problem = get_problem(spec, r, p)
        g = problem.projected_restriction @ residual
        jets.append(g)
        weighted += float(np.vdot(g, g).real) / (
            math.factorial(r) * (2 * math.pi) ** r * p ** (spec.codim + r)
        )
        if r < k:
            residual = residual - problem.extension @ g
    top = get_problem(spec, k, p)
    quotient = sum(float(np.linalg.norm(top.layer_basis(l).conj().T @ f) ** 2) for l in range(k + 1))
    jet_norm, quotient_norm = math.sqrt(weighted), math.sqrt(quotient)
    scale = max(1.0, float(np.linalg.norm(f)))
    ratio = jet_norm / quotient_norm if quotient_norm > top.jet_tol * scale else None
    return JetMapResult(jets, jet_norm, quotient_norm, ratio)


@dataclass
class KernelValues:
    bergman: np.ndarray
    log_bergman: np.ndarray


def bergman_and_logbk_eval(spec: SubmanifoldSpec, k: int, p: int, x1, x2) -> KernelValues:
    """B_p^X(x1, x2) and B_p^{X,kY}(x1, x2) in the unitary frame, points in chart coordinates."""
    problem = get_problem(spec, k, p)
    return KernelValues(problem.bergman_kernel(x1, x2), problem.log_bergman_kernel(x1, x2))


@dataclass
class PeakSection:
    n: int
    k: int
    p: int
    datum: np.ndarray
    coefficients: np.ndarray
    lower_jets: float
    profile_deviation: float

    def values(self, z) -> np.ndarray:
        return HomogSpace(self.n, self.p, validate=False).section_values(z) @ self.coefficients


def peak_section(
    x: Sequence[complex], k: int, p: int, v: Sequence[complex], radius: Optional[float] = None
) -> PeakSection:
    """
    Higher order peak section at x with k-jet v and its Gaussian profile deviation.

    Args:
        x: Chart coordinates of the peak; must be the chart origin
        k: Jet order
        p: Tensor power
        v: Coefficients of dZ^{.beta} in geodesic normal coordinates
        radius: Profile rays cover |sqrt(p) Z| <= radius (default profile_radius)

    Returns:
        PeakSection with the relative sup deviation from (1/k!) v(Z^k) exp(-pi p |Z|^2 / 2)

    Raises:
        ChartDomainError: If x is not the chart origin
        ExtensionNotGuaranteedError: If p is below the surjectivity threshold
    """
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if np.any(np.abs(x) > 0):
        raise ChartDomainError("peak sections are computed at the chart origin; rotate coordinates first")
    n = x.shape[0]
    spec = SubmanifoldSpec.point(n)
    problem = get_problem(spec, k, p)
    v = np.asarray(v, dtype=np.complex128)
    # dZ = dz / sqrt(pi) at the origin
    coeffs = v * math.pi ** (-0.5 * k)
    section = problem.extend(problem.jet_from_coefficients(coeffs))

    lower = 0.0
    for l in range(k):
        lower = max(lower, float(np.max(np.abs(_row_normalized(problem.lower_jets(l)) @ section), initial=0.0)))

    config = get_config()
    radius = config.profile_radius if radius is None else radius
    normal = peak_rays(n, radius / math.sqrt(p), config.grid_points)
    values = problem.section_values(normal_to_chart(normal)) @ section
    betas = problem.jet_space.betas
    monomials = np.stack([_monomial(normal, beta) for beta in betas], axis=1)
    model = monomials @ v / math.factorial(k) * np.exp(-0.5 * math.pi * p * np.sum(np.abs(normal) ** 2, axis=1))
    deviation = float(np.max(np.abs(values - model)) / (np.max(np.abs(model)) or 1.0))
    logger.debug("peak section n=%d k=%d p=%d: relative profile deviation %.3e", n, k, p, deviation)
    return PeakSection(n, k, p, v, section, lower, deviation)


def _monomial(points: np.ndarray, beta: Sequence[int]) -> np.ndarray:
    out = np.ones(points.shape[0], dtype=np.complex128)
    for i, b in enumerate(beta):
        if b:
            out = out * points[:, i] ** b
    return out


def peak_rays(n: int, reach: float, points: int) -> np.ndarray:
    """Points t u on rays through the origin, u along axes and the diagonal, 0 < t <= reach."""
    directions = [np.eye(n)[i] for i in range(n)]
    directions += [1j * d for d in directions]
    if n > 1:
        directions.append(np.ones(n) / math.sqrt(n))
        directions.append(np.array([1.0, 1j] + [0.0] * (n - 2)) / math.sqrt(2))
    t = np.linspace(reach / points, reach, points)
    return np.vstack([t[:, None] * np.asarray(d)[None, :] for d in directions]).astype(np.complex128)
