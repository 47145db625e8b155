"""Submanifolds Y of CP^n and the jet spaces H^0(Y, Sym^k N* (x) L^p)."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np

from ..core.errors import DimensionError, QuadratureConvergenceError
from ..core.multipoly import multi_indices
from ..utils.quadrature_rules import plane_polar_rule
from .projective_space import fs_inverse_metric, fs_metric

logger = logging.getLogger(__name__)

JetIndex = Tuple[int, Tuple[int, ...]]


class YKind(Enum):
    POINT = "point"
    LINEAR = "linear"
    CONIC = "conic"


@dataclass(frozen=True)
class SubmanifoldSpec:
    """
    Y through the chart origin of CP^n with a chart Phi(tau, w) adapted to it.

    Y = {w = 0}; tau parametrizes Y (m coordinates) and w is transverse
    (n - m coordinates). Sections restrict as polynomials in (tau, w).
    """

    kind: YKind
    n: int
    m: int

    def __post_init__(self):
        allowed = {
            YKind.POINT: self.m == 0 and self.n in (1, 2),
            YKind.LINEAR: (self.n, self.m) == (2, 1),
            YKind.CONIC: (self.n, self.m) == (2, 1),
        }
        if not allowed[self.kind]:
            raise DimensionError(f"no {self.kind.value} submanifold of dimension {self.m} in CP^{self.n}")

    @classmethod
    def point(cls, n: int) -> "SubmanifoldSpec":
        return cls(YKind.POINT, n, 0)

    @classmethod
    def linear(cls) -> "SubmanifoldSpec":
        """CP^1 = {Z_2 = 0} inside CP^2."""
        return cls(YKind.LINEAR, 2, 1)

    @classmethod
    def conic(cls) -> "SubmanifoldSpec":
        """{Z_1^2 = 2 Z_0 Z_2} inside CP^2, parametrized by tau -> (sqrt(2) tau, tau^2)."""
        return cls(YKind.CONIC, 2, 1)

    @classmethod
    def from_name(cls, name: str, n: int) -> "SubmanifoldSpec":
        kind = YKind(name)
        if kind == YKind.POINT:
            return cls.point(n)
        if n != 2:
            raise DimensionError(f"{kind.value} Y lives in CP^2, got n={n}")
        return cls.linear() if kind == YKind.LINEAR else cls.conic()

    @property
    def codim(self) -> int:
        return self.n - self.m

    @property
    def totally_geodesic(self) -> bool:
        """Vanishing second fundamental form."""
        return self.kind != YKind.CONIC

    def chart_map(self, tau, w) -> np.ndarray:
        """Phi(tau, w) in the chart Z_0 = 1; tau (npts, m), w (npts, n - m)."""
        w = np.asarray(w, dtype=np.complex128).reshape(-1, self.codim)
        if self.kind == YKind.POINT:
            return w
        t = np.asarray(tau, dtype=np.complex128).reshape(-1, 1)[:, 0]
        if self.kind == YKind.LINEAR:
            return np.stack([t, w[:, 0]], axis=1)
        return np.stack([math.sqrt(2.0) * t, t**2 + w[:, 0]], axis=1)

    def points_on_y(self, tau) -> np.ndarray:
        tau = np.asarray(tau, dtype=np.complex128).reshape(-1, max(self.m, 1))
        return self.chart_map(tau, np.zeros((tau.shape[0], self.codim)))

    def tangent_jacobian(self, tau) -> np.ndarray:
        """dz/dtau along Y, shape (npts, n, m)."""
        t = np.asarray(tau, dtype=np.complex128).reshape(-1)
        out = np.zeros((t.shape[0], self.n, self.m), dtype=np.complex128)
        if self.kind == YKind.LINEAR:
            out[:, 0, 0] = 1.0
        elif self.kind == YKind.CONIC:
            out[:, 0, 0] = math.sqrt(2.0)
            out[:, 1, 0] = 2.0 * t
        return out

    def conormal_rows(self, tau) -> np.ndarray:
        """Coefficients of dw_j in the basis dz, shape (npts, n - m, n)."""
        t = np.asarray(tau, dtype=np.complex128).reshape(-1)
        out = np.zeros((t.shape[0], self.codim, self.n), dtype=np.complex128)
        if self.kind == YKind.POINT:
            out[:] = np.eye(self.n)
        elif self.kind == YKind.LINEAR:
            out[:, 0, 1] = 1.0
        else:
            # w = z_2 - z_1^2 / 2
            out[:, 0, 0] = -math.sqrt(2.0) * t
            out[:, 0, 1] = 1.0
        return out

    def tau_from_normal(self, u) -> np.ndarray:
        """
        Parameter tau of the point of Y at geodesic normal coordinate u around tau = 0.

        Both curves are round CP^1's, g_Y = (c/pi) |dtau|^2 / (1 + |tau|^2)^2 with
        c = |dPhi/dtau(0)|^2, so geodesics from the origin are rays and
        tau = tan(sqrt(pi / c) |u|) u / |u|.
        """
        if self.m != 1:
            raise DimensionError(f"normal coordinates on Y need m = 1, got m = {self.m}")
        u = np.asarray(u, dtype=np.complex128).reshape(-1)
        c = float(np.sum(np.abs(self.tangent_jacobian(np.zeros(1))[0, :, 0]) ** 2))
        r = np.abs(u)
        scale = np.full_like(r, math.sqrt(math.pi / c))
        nz = r > 0
        scale[nz] = np.tan(math.sqrt(math.pi / c) * r[nz]) / r[nz]
        return u * scale

    def fermi_to_chart(self, u, v) -> np.ndarray:
        """
        Chart point exp_y(v nu) with y = tau_from_normal(u) and nu the unit normal at y.

        On C^3 the geodesic from [V] along the horizontal unit vector nu is
        [cos(s) V/|V| + sin(s) nu] with s = sqrt(pi) |v|; nu is the Hermitian
        normal conj(V x dV/dtau) / |V x dV/dtau|, phase of v applied.

        Args:
            u: Normal coordinates on Y, shape (npts,) or (npts, 1)
            v: Normal coordinates along N, same shape
        """
        if (self.n, self.m) != (2, 1):
            raise DimensionError("adapted coordinates are built for curves in CP^2")
        tau = self.tau_from_normal(u)
        v = np.asarray(v, dtype=np.complex128).reshape(-1)
        z = self.points_on_y(tau)
        ones = np.ones((z.shape[0], 1), dtype=np.complex128)
        lift = np.hstack([ones, z])
        tangent = np.hstack([np.zeros_like(ones), self.tangent_jacobian(tau)[:, :, 0]])
        normal = np.conj(np.cross(lift, tangent))
        normal /= np.linalg.norm(normal, axis=1)[:, None]
        lift /= np.linalg.norm(lift, axis=1)[:, None]
        r = np.abs(v)
        phase = np.ones_like(v)
        phase[r > 0] = v[r > 0] / r[r > 0]
        s = math.sqrt(math.pi) * r
        point = np.cos(s)[:, None] * lift + (np.sin(s) * phase)[:, None] * normal
        return point[:, 1:] / point[:, :1]

    def chart_degree_bound(self, p: int, order: int) -> int:
        """Largest tau-degree of the w^beta coefficient, |beta| = order, of a degree-p section."""
        if self.kind == YKind.POINT:
            return 0
        if self.kind == YKind.LINEAR:
            return p - order
        return 2 * (p - order)

    def jet_degree_bound(self, p: int, k: int) -> int:
        """Degree of Sym^k N* (x) L^p on Y; -1 when the jet space is zero."""
        if self.kind == YKind.POINT:
            return 0
        if self.kind == YKind.LINEAR:
            return p - k
        return 2 * (p - 2 * k)

    def expand(self, chart_exponent: Tuple[int, ...]) -> Dict[JetIndex, float]:
        """Coefficients of tau^a w^beta in z^e composed with the chart map."""
        if self.kind == YKind.POINT:
            return {(0, tuple(chart_exponent)): 1.0}
        a, b = chart_exponent
        if self.kind == YKind.LINEAR:
            return {(a, (b,)): 1.0}
        scale = math.sqrt(2.0) ** a
        return {(a + 2 * (b - l), (l,)): math.comb(b, l) * scale for l in range(b + 1)}


def conormal_gram(spec: SubmanifoldSpec, tau) -> np.ndarray:
    """
    Pointwise Gram of the conormal frame dw_j, conj-linear in the first index.

    With omega = (i/2pi) R the dual norm of a covector c is
    2pi * sum conj(c_a) (h^-1)_{ab} c_b.
    """
    rows = spec.conormal_rows(tau)
    z = spec.points_on_y(tau)
    inv = fs_inverse_metric(z)
    return 2.0 * math.pi * np.einsum("pia,pab,pjb->pij", np.conj(rows), inv, rows)


def _slots(beta: Tuple[int, ...]) -> List[int]:
    return [j for j, b in enumerate(beta) for _ in range(b)]


def sym_gram(h: np.ndarray, k: int) -> np.ndarray:
    """
    Gram of dw^{.beta}, |beta| = k, induced by a pointwise Gram h on the dw_j.

    <v_1...v_k, u_1...u_k> = (1/k!) sum over permutations of prod <v_i, u_s(i)>.

    Args:
        h: Array (npts, r, r)
        k: Symmetric power

    Returns:
        Array (npts, N, N) with N = C(r + k - 1, k), rows in multi_indices order
    """
    h = np.asarray(h)
    r = h.shape[-1]
    betas = multi_indices(r, k)
    out = np.zeros(h.shape[:-2] + (len(betas), len(betas)), dtype=np.complex128)
    perms = list(itertools.permutations(range(k)))
    for i, b1 in enumerate(betas):
        s1 = _slots(b1)
        for j, b2 in enumerate(betas):
            s2 = _slots(b2)
            total = np.zeros(h.shape[:-2], dtype=np.complex128)
            for perm in perms:
                term = np.ones(h.shape[:-2], dtype=np.complex128)
                for slot, target in zip(s1, perm):
                    term = term * h[..., slot, s2[target]]
                total = total + term
            out[..., i, j] = total / math.factorial(k)
    return out


def tangent_volume_density(spec: SubmanifoldSpec, tau) -> np.ndarray:
    """dv_Y / dlambda(tau) = det(J^T h conj(J)) / pi^m."""
    jac = spec.tangent_jacobian(tau)
    h = fs_metric(spec.points_on_y(tau))
    metric = np.einsum("pai,pab,pbj->pij", jac, h, np.conj(jac))
    return np.real(np.linalg.det(metric)) / math.pi**spec.m


@dataclass(frozen=True)
class JetSpace:
    """Basis tau^a dw^{.beta} (x) Z_0^p of the k-jets along Y with its L^2 Gram."""

    spec: SubmanifoldSpec
    k: int
    p: int
    indices: Tuple[JetIndex, ...]
    gram: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.indices)

    @property
    def betas(self) -> List[Tuple[int, ...]]:
        return multi_indices(self.spec.codim, self.k)

    def position(self, index: JetIndex) -> int:
        return self.indices.index(index)

    def origin_values(self) -> np.ndarray:
        """Coefficient of dw^{.beta} of each basis element at tau = 0, shape (dim, N)."""
        betas = self.betas
        out = np.zeros((self.dim, len(betas)))
        for i, (a, beta) in enumerate(self.indices):
            if a == 0:
                out[i, betas.index(beta)] = 1.0
        return out


def jet_indices(spec: SubmanifoldSpec, k: int, bound: int) -> List[JetIndex]:
    return [(a, beta) for a in range(bound + 1) for beta in multi_indices(spec.codim, k)]


def _jet_gram_on_rule(spec: SubmanifoldSpec, k: int, p: int, indices, radial: int, angular: int) -> np.ndarray:
    tau, weights = plane_polar_rule(radial, angular)
    z = spec.points_on_y(tau)
    frame = (1.0 + np.sum(np.abs(z) ** 2, axis=1)) ** (-p)
    dens = weights * frame * tangent_volume_density(spec, tau)
    sym = sym_gram(conormal_gram(spec, tau), k)
    betas = multi_indices(spec.codim, k)
    powers = np.stack([tau**a for a, _ in indices], axis=1)
    cols = [betas.index(beta) for _, beta in indices]
    s = sym[:, cols][:, :, cols]
    return np.einsum("q,qi,qij,qj->ij", dens, np.conj(powers), s, powers)


def build_jet_space(spec: SubmanifoldSpec, k: int, p: int, tol: float = 1e-9, max_doublings: int = 4) -> JetSpace:
    """
    Jet space of order k with its Gram; quadrature orders double until stable.

    Raises:
        DimensionError: If k < 0 or the jet space is zero
        QuadratureConvergenceError: If the Gram does not stabilize to tol
    """
    if k < 0:
        raise DimensionError(f"jet order must be nonnegative, got {k}")
    bound = spec.jet_degree_bound(p, k)
    if bound < 0:
        raise DimensionError(f"Sym^{k} N* (x) L^{p} has no sections on this {spec.kind.value} Y")
    indices = tuple(jet_indices(spec, k, bound))

    if spec.kind == YKind.POINT:
        h0 = conormal_gram(spec, np.zeros(1))
        return JetSpace(spec, k, p, indices, sym_gram(h0, k)[0])

    radial, angular = bound // 2 + 3, bound + 2
    gram = _jet_gram_on_rule(spec, k, p, indices, radial, angular)
    for _ in range(max_doublings):
        radial, angular = 2 * radial, 2 * angular
        finer = _jet_gram_on_rule(spec, k, p, indices, radial, angular)
        scale = np.sqrt(np.outer(np.abs(np.diag(finer)), np.abs(np.diag(finer))))
        change = float(np.max(np.abs(finer - gram) / scale))
        gram = finer
        logger.debug("jet Gram %s k=%d p=%d radial=%d: change %.2e", spec.kind.value, k, p, radial, change)
        if change <= tol:
            # entries below roundoff relative to the diagonal are torus-symmetry zeros
            gram = np.where(np.abs(gram) < 1e-12 * scale, 0.0, gram)
            return JetSpace(spec, k, p, indices, 0.5 * (gram + gram.conj().T))
    raise QuadratureConvergenceError(f"jet Gram of {spec.kind.value} Y at k={k}, p={p} did not reach {tol:.1e}")


@lru_cache(maxsize=128)
def get_jet_space(spec: SubmanifoldSpec, k: int, p: int) -> JetSpace:
    return build_jet_space(spec, k, p)


def lower_jet_matrix(spec: SubmanifoldSpec, chart_exponents: np.ndarray, order: int, bound: int) -> np.ndarray:
    """
    T_order: coefficient of tau^a w^beta, |beta| = order, a <= bound, of each monomial.

    Returns:
        Array (rows, dim) acting on monomial coefficient vectors
    """
    rows = jet_indices(spec, order, bound)
    position = {idx: i for i, idx in enumerate(rows)}
    out = np.zeros((len(rows), len(chart_exponents)))
    for col, exponent in enumerate(chart_exponents):
        for idx, coeff in spec.expand(tuple(int(e) for e in exponent)).items():
            row = position.get(idx)
            if row is not None:
                out[row, col] += coeff
    return out
