"""Rescaled kernels on CP^n against their model profiles on the Bargmann space."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import get_config
from ..core.errors import ChartDomainError
from ..core.multipoly import multi_factorial
from .composition import compose_jets
from .extension import ExtensionProblem, get_problem
from .model_kernels import (
    JetKernel,
    LogBergmanKernel,
    ModelKind,
    build_extension,
    build_model_kernel,
    build_perp,
    build_restriction,
    build_sub_identity,
    kernel_eval,
    kernel_eval_points,
)
from .projective_space import normal_kappa, normal_to_chart
from .submanifolds import SubmanifoldSpec

logger = logging.getLogger(__name__)

PointPair = Tuple[np.ndarray, np.ndarray]


class ProfileKind(Enum):
    P = "P"
    PPERP = "Pperp"
    E = "E"
    LOGBK = "LogBK"

    @property
    def is_projector(self) -> bool:
        return self != ProfileKind.E


GRID_SETS = ("left", "right", "diagonal")
_TINY = 1e-300


@dataclass
class ProfileSample:
    """One grid point: rescaled coordinates sqrt(p) Z, sqrt(p) Z' and both values."""

    z: np.ndarray
    zp: np.ndarray
    computed: complex
    model: complex
    weight: float
    log_modulus: bool = False

    @property
    def deviation(self) -> float:
        if self.log_modulus:
            # |model| |log(|computed| / |model|)|
            model = max(abs(self.model), _TINY)
            return model * abs(math.log(max(abs(self.computed), _TINY) / model))
        return abs(self.computed - self.model)


@dataclass
class ProfileStatistics:
    kind: str
    p: Optional[int]
    power: float
    sup: float
    l2: float
    count: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "p": self.p,
            "power": self.power,
            "sup": self.sup,
            "l2": self.l2,
            "count": self.count,
        }


def envelope_weight(z: np.ndarray, zp: np.ndarray) -> float:
    return math.exp(-0.25 * math.pi * (float(np.sum(np.abs(z) ** 2)) + float(np.sum(np.abs(zp) ** 2))))


def profile_grid(
    n: int, radius: float, points: Optional[int] = None, sets: Sequence[str] = GRID_SETS
) -> List[PointPair]:
    """
    Rescaled point pairs on every coordinate plane of R^{2n}.

    A points x points square grid on [-radius, radius]^2 in each plane of two
    real coordinates, clipped to the disc of the radius. Each point zeta
    gives (zeta, 0) for "left", (0, zeta) for "right", (zeta, zeta) for "diagonal".
    """
    points = points or get_config().grid_points
    ticks = np.linspace(-radius, radius, points)
    zeros = np.zeros(n, dtype=np.complex128)
    seen = set()
    zetas = []
    for i, j in itertools.combinations(range(2 * n), 2):
        for a, b in itertools.product(ticks, ticks):
            if a * a + b * b > radius * radius + 1e-12:
                continue
            real = np.zeros(2 * n)
            real[i], real[j] = a, b
            key = tuple(np.round(real, 12))
            if key in seen:
                continue
            seen.add(key)
            zetas.append(real[0::2] + 1j * real[1::2])
    out: List[PointPair] = []
    for name in sets:
        for zeta in zetas:
            if name == "left":
                out.append((zeta, zeros))
            elif name == "right":
                out.append((zeros, zeta))
            elif name == "diagonal":
                out.append((zeta, zeta))
            else:
                raise ValueError(f"unknown grid set {name!r}, expected one of {GRID_SETS}")
    return out


def summarize(kind: str, p: Optional[int], power: float, samples: Sequence[ProfileSample]) -> ProfileStatistics:
    deviations = np.array([s.deviation for s in samples])
    weights = np.array([s.weight for s in samples])
    l2 = float(np.sqrt(np.sum(weights * deviations**2) / np.sum(weights)))
    return ProfileStatistics(kind, p, power, float(np.max(deviations)), l2, len(samples))


def _model_projector(kind: ProfileKind, n: int, m: int, k: int):
    if kind == ProfileKind.P:
        model = build_model_kernel(ModelKind.P, n, n, 0)
        return lambda z, zp: kernel_eval(model, z, zp)[0, 0]
    if kind == ProfileKind.PPERP:
        model = build_perp(n, m, k)
        return lambda z, zp: kernel_eval(model, z, zp)[0, 0]
    return LogBergmanKernel(n, m, k).evaluate


def _computed_projector(kind: ProfileKind, problem: ExtensionProblem):
    if kind == ProfileKind.P:
        return problem.bergman_kernel
    if kind == ProfileKind.PPERP:
        return lambda x, y: problem.perp_kernel(problem.k, x, y)
    return problem.log_bergman_kernel


def _to_chart(zeta: np.ndarray, p: int) -> Tuple[np.ndarray, float]:
    normal = np.asarray(zeta, dtype=np.complex128)[None, :] / math.sqrt(p)
    return normal_to_chart(normal), float(normal_kappa(normal)[0])


def profile_compare(
    kind: ProfileKind | str,
    spec: SubmanifoldSpec,
    k: int,
    p: int,
    grid: Optional[Sequence[PointPair]] = None,
    eps: Optional[float] = None,
) -> Tuple[ProfileStatistics, List[ProfileSample]]:
    """
    Deviation between a normalized CP^n kernel and its model profile.

    Projectors are compared as p^-n K(phi(Z), phi(Z')) kappa(Z)^1/2 kappa(Z')^1/2,
    the extension operator as p^-(m - k/2) kappa(Z)^1/2 E(phi(Z), y0) applied to
    each dZ^{.beta} at the origin y0 of Y.

    Args:
        kind: P, Pperp, E or LogBK
        spec: Submanifold through the chart origin
        k: Jet order
        p: Tensor power
        grid: Rescaled point pairs (default profile_grid at profile_radius)
        eps: Largest admissible |Z| (default grid_eps)

    Raises:
        ChartDomainError: If a grid point leaves |Z| <= eps
    """
    kind = ProfileKind(kind)
    config = get_config()
    eps = config.grid_eps if eps is None else eps
    if grid is None:
        sets = GRID_SETS if kind.is_projector else ("left",)
        grid = profile_grid(spec.n, config.profile_radius, config.grid_points, sets)
    reach = max(max(np.linalg.norm(z), np.linalg.norm(zp)) for z, zp in grid) / math.sqrt(p)
    if reach > eps:
        raise ChartDomainError(f"grid reaches |Z| = {reach:.3f} beyond eps = {eps}")

    problem = get_problem(spec, k, p)
    n, m = spec.n, spec.m
    samples: List[ProfileSample] = []

    if kind.is_projector:
        power = float(n)
        model = _model_projector(kind, n, m, k)
        computed = _computed_projector(kind, problem)
        for zeta, zeta_p in grid:
            x, kx = _to_chart(zeta, p)
            y, ky = _to_chart(zeta_p, p)
            value = complex(computed(x, y)[0]) * p ** (-n) * math.sqrt(kx * ky)
            samples.append(ProfileSample(zeta, zeta_p, value, complex(model(zeta, zeta_p)), envelope_weight(zeta, zeta_p)))
    else:
        power = m - 0.5 * k
        model_kernel = build_extension(n, m, k)
        betas = model_kernel.col_indices
        origin = np.zeros(m, dtype=np.complex128)
        for zeta, zeta_p in grid:
            if np.any(zeta_p != 0):
                raise ChartDomainError("extension profiles are sampled at the origin of Y only")
            x, kx = _to_chart(zeta, p)
            row = kernel_eval(model_kernel, zeta, origin)[0]
            for col, beta in enumerate(betas):
                datum = np.zeros(len(betas), dtype=np.complex128)
                # dZ^{.beta} = pi^{-k/2} dw^{.beta} at y0
                datum[col] = math.pi ** (-0.5 * k)
                value = complex(problem.extension_kernel_at_origin(x, datum)[0])
                value *= p ** (-power) * math.sqrt(kx)
                target = complex(row[col]) * multi_factorial(beta) / math.factorial(k)
                samples.append(ProfileSample(zeta, zeta_p, value, target, envelope_weight(zeta, zeta_p)))

    stats = summarize(kind.value, p, power, samples)
    logger.debug("profile %s %s k=%d p=%d: sup %.3e l2 %.3e", kind.value, spec.kind.value, k, p, stats.sup, stats.l2)
    return stats, samples


def normal_extension_profile(
    spec: SubmanifoldSpec,
    p: int,
    grid: Optional[Sequence[PointPair]] = None,
    eps: Optional[float] = None,
) -> Tuple[ProfileStatistics, List[ProfileSample]]:
    """
    Normal decay of E_{0,p}(., y0) 1 in coordinates adapted to Y.

    A point zeta = (zeta_Y, zeta_N) is placed at exp_y(zeta_N / sqrt(p)) with
    y the point of Y at normal coordinate zeta_Y / sqrt(p). Normalized by the
    value at y0, the modulus is compared with its value at y times
    exp(-pi |zeta_N|^2 / 2). The deviation is |model| |log(|E| / |model|)|;
    a totally geodesic Y leaves a p^-1 remainder, a curved one p^-1/2.

    Raises:
        ChartDomainError: If a grid point leaves |Z| <= eps
        DimensionError: Unless Y is a curve in CP^2
    """
    config = get_config()
    eps = config.grid_eps if eps is None else eps
    if grid is None:
        grid = profile_grid(spec.n, config.profile_radius, config.grid_points, ("left",))
    reach = max(np.linalg.norm(z) for z, _ in grid) / math.sqrt(p)
    if reach > eps:
        raise ChartDomainError(f"grid reaches |Z| = {reach:.3f} beyond eps = {eps}")

    problem = get_problem(spec, 0, p)
    datum = np.ones(1, dtype=np.complex128)
    zetas = np.array([z for z, _ in grid])
    along, normal = zetas[:, 0] / math.sqrt(p), zetas[:, 1] / math.sqrt(p)
    x = spec.fermi_to_chart(along, normal)
    y = spec.fermi_to_chart(along, np.zeros_like(normal))
    origin = abs(complex(problem.extension_kernel_at_origin(np.zeros((1, spec.n)), datum)[0]))
    computed = np.abs(problem.extension_kernel_at_origin(x, datum)) / origin
    model = np.abs(problem.extension_kernel_at_origin(y, datum)) / origin
    model *= np.exp(-0.5 * math.pi * np.abs(zetas[:, 1]) ** 2)
    samples = [
        ProfileSample(zeta, np.zeros_like(zeta), float(c), float(t), envelope_weight(zeta, np.zeros_like(zeta)), True)
        for zeta, c, t in zip(zetas, computed, model)
    ]
    stats = summarize("E_normal", p, 0.0, samples)
    logger.debug("normal extension profile %s p=%d: sup %.3e l2 %.3e", spec.kind.value, p, stats.sup, stats.l2)
    return stats, samples


def _evaluate(kernel: JetKernel, grid: Sequence[PointPair], m_first: int, m_second: int) -> np.ndarray:
    z = np.array([pair[0][:m_first] for pair in grid])
    zp = np.array([pair[1][:m_second] for pair in grid])
    return kernel_eval_points(kernel, z, zp)


def model_self_test(n: int, m: int, k: int, radius: float = 3.0, points: Optional[int] = None) -> List[ProfileStatistics]:
    """
    Model kernels against their own compositions on the rescaled grid.

    P o P = P, E^k o Res^k = P^{perp,k}, E^k o (P_m (x) Id) = E^k and the
    log-Bergman kernel against its normal series; every deviation is roundoff.
    """
    grid = profile_grid(n, radius, points)
    ext, res = build_extension(n, m, k), build_restriction(n, m, k)
    bargmann = build_model_kernel(ModelKind.P, n, m, 0)
    pairs = {
        "P": (compose_jets(bargmann, bargmann), bargmann, n, n),
        "Pperp": (compose_jets(ext, res), build_perp(n, m, k), n, n),
        "E": (compose_jets(ext, build_sub_identity(m, n - m, k)), ext, n, m),
    }
    out = []
    for name, (composed, direct, d1, d2) in pairs.items():
        samples = [
            ProfileSample(z, zp, complex(value), complex(target), envelope_weight(z, zp))
            for (z, zp), a, b in zip(grid, _evaluate(composed, grid, d1, d2), _evaluate(direct, grid, d1, d2))
            for value, target in zip(a.ravel(), b.ravel())
        ]
        out.append(summarize(name, None, 0.0, samples))
    logbk = LogBergmanKernel(n, m, k)
    samples = [
        ProfileSample(z, zp, logbk.evaluate(z, zp), logbk.series_evaluate(z, zp), envelope_weight(z, zp)) for z, zp in grid
    ]
    out.append(summarize("LogBK", None, 0.0, samples))
    return out
