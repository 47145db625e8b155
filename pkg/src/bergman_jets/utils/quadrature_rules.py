"""Node and weight tables for the numerical integrals of the project."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Tuple

import numpy as np


@lru_cache(maxsize=32)
def hermgauss(order: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.hermite.hermgauss(order)
    return x, w


@lru_cache(maxsize=32)
def complex_hermgauss(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes w and weights for int_C f(w) exp(-pi|w|^2) dlambda(w).

    Tensor of two real Gauss-Hermite rules, rescaled by w = (x + iy)/sqrt(pi);
    the weights sum to 1.

    Args:
        order: Gauss-Hermite points per real direction

    Returns:
        nodes (order**2,) complex, weights (order**2,) real
    """
    x, w = hermgauss(order)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    ww = np.outer(w, w)
    nodes = (xx + 1j * yy).ravel() / math.sqrt(math.pi)
    weights = ww.ravel() / math.pi
    return nodes, weights


@lru_cache(maxsize=64)
def leggauss_interval(order: int, a: float = 0.0, b: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


@lru_cache(maxsize=64)
def plane_polar_rule(radial_order: int, angular_points: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes tau and weights for int_C f(tau) dlambda(tau) over the whole plane.

    The radius is compactified by s = r^2/(1 + r^2) on [0, 1) with
    Gauss-Legendre nodes; the angle uses the periodic trapezoid rule.
    Integrands that decay like (1 + r^2)^-(q+2) times a degree-q polynomial
    in r^2 become polynomials in s and are integrated exactly.

    Args:
        radial_order: Gauss-Legendre points in s
        angular_points: Equispaced angles

    Returns:
        nodes complex (radial_order * angular_points,), weights real
    """
    s, ws = leggauss_interval(radial_order, 0.0, 1.0)
    r = np.sqrt(s / (1.0 - s))
    # dlambda = r dr dtheta = ds dtheta / (2 (1 - s)^2)
    radial_w = ws / (2.0 * (1.0 - s) ** 2)
    theta = 2.0 * math.pi * np.arange(angular_points) / angular_points
    wt = 2.0 * math.pi / angular_points
    nodes = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = (radial_w[:, None] * wt * np.ones(angular_points)[None, :]).ravel()
    return nodes, weights


@lru_cache(maxsize=16)
def hopf_rule(radial_order: int, polar_order: int, angular_points: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes (N, 2) and weights for int_{C^2} f(z) dlambda(z).

    Uses z_1 = r sqrt(t) e^{i theta_1}, z_2 = r sqrt(1 - t) e^{i theta_2} with
    s = r^2/(1 + r^2). Gauss-Legendre in s and t, trapezoid in both angles;
    monomial Fubini-Study integrands become polynomials in (s, t).
    """
    s, ws = leggauss_interval(radial_order, 0.0, 1.0)
    t, wt = leggauss_interval(polar_order, 0.0, 1.0)
    theta = 2.0 * math.pi * np.arange(angular_points) / angular_points
    wth = 2.0 * math.pi / angular_points
    # dlambda = s/(2(1-s)^3) ds * dt/2 * dtheta_1 dtheta_2
    radial_w = ws * s / (2.0 * (1.0 - s) ** 3)
    r = np.sqrt(s / (1.0 - s))
    R, T, TH1, TH2 = np.meshgrid(r, t, theta, theta, indexing="ij")
    WR, WT = np.meshgrid(radial_w, 0.5 * wt, indexing="ij")
    z1 = R * np.sqrt(T) * np.exp(1j * TH1)
    z2 = R * np.sqrt(1.0 - T) * np.exp(1j * TH2)
    nodes = np.stack([z1.ravel(), z2.ravel()], axis=1)
    weights = np.broadcast_to((WR * WT)[:, :, None, None] * wth * wth, R.shape).ravel()
    return nodes, weights
