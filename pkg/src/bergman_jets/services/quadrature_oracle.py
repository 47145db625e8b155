"""Numerical composition of kernels by Gauss-Hermite quadrature over W.

This path never touches the closed-form monomial rules: for each pair of
amplitude monomials the W-integral factorizes over the coordinates of W,
and every one-dimensional complex factor is summed on a tensor
Gauss-Hermite grid with the weight exp(-pi|w|^2) absorbed into the nodes.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import get_config
from ..core.errors import CompositionError, QuadratureConvergenceError, ShapeError
from ..core.multipoly import VarFamily
from ..routers.composition_router import CompositionRouter
from ..utils.quadrature_rules import complex_hermgauss
from .model_kernels import JetKernel, PolyKernel, contraction_weight

logger = logging.getLogger(__name__)

SamplePair = Tuple[np.ndarray, np.ndarray]


def _monomial_value(values: np.ndarray, holo: Sequence[int], anti: Sequence[int]) -> complex:
    out = 1 + 0j
    for v, a, b in zip(values, holo, anti):
        if a:
            out *= complex(v) ** a
        if b:
            out *= complex(np.conj(v)) ** b
    return out


class QuadratureOracle:
    """Gauss-Hermite evaluation of (K1 o K2)(Z, Z')."""

    def __init__(self, order: Optional[int] = None, tol: float = 1e-6):
        self.order = order or get_config().gh_order
        self.tol = tol

    def _poly_value(self, k1: PolyKernel, k2: PolyKernel, z: np.ndarray, zp: np.ndarray, order: int) -> complex:
        a1, a2 = k1.amplitude, k2.amplitude
        c1, c2 = k1.base.coupled, k2.base.coupled
        nodes, weights = complex_hermgauss(order)
        conj_nodes = np.conj(nodes)
        factors: Dict[Tuple[int, int, int], complex] = {}

        def factor(i: int, a: int, b: int) -> complex:
            key = (i, a, b)
            if key not in factors:
                exponent = np.zeros_like(nodes)
                if i < c1:
                    exponent = exponent + math.pi * z[i] * conj_nodes
                if i < c2:
                    exponent = exponent + math.pi * nodes * np.conj(zp[i])
                integrand = weights * np.exp(exponent)
                if a:
                    integrand = integrand * nodes**a
                if b:
                    integrand = integrand * conj_nodes**b
                factors[key] = complex(np.sum(integrand))
            return factors[key]

        total = 0j
        for e1, coeff1 in a1.items():
            b1 = a1.split(e1)
            outer1 = coeff1.to_complex() * _monomial_value(z, b1[VarFamily.Z], b1[VarFamily.ZB])
            for e2, coeff2 in a2.items():
                b2 = a2.split(e2)
                outer2 = coeff2.to_complex() * _monomial_value(zp, b2[VarFamily.ZP], b2[VarFamily.ZBP])
                value = outer1 * outer2
                for i, (wa1, wa2, wb1, wb2) in enumerate(
                    zip(b1[VarFamily.ZP], b2[VarFamily.Z], b1[VarFamily.ZBP], b2[VarFamily.ZB])
                ):
                    value *= factor(i, wa1 + wa2, wb1 + wb2)
                total += value
        gauss = math.exp(-0.5 * math.pi * (np.sum(np.abs(z) ** 2) + np.sum(np.abs(zp) ** 2)))
        return total * gauss

    def compose_value(self, k1: PolyKernel, k2: PolyKernel, z: Sequence[complex], zp: Sequence[complex]) -> complex:
        """
        Value of the composed kernel at one point pair, with an order-doubling check.

        Raises:
            CompositionError: If the intermediate spaces differ
            QuadratureConvergenceError: If doubling the order moves the value by more than tol
        """
        if k1.base.amplitude_dims[1] != k2.base.amplitude_dims[0]:
            raise CompositionError(f"intermediate spaces of {k1.base} and {k2.base} differ")
        z = np.asarray(z, dtype=np.complex128).reshape(k1.base.amplitude_dims[0])
        zp = np.asarray(zp, dtype=np.complex128).reshape(k2.base.amplitude_dims[1])
        coarse = self._poly_value(k1, k2, z, zp, self.order)
        fine = self._poly_value(k1, k2, z, zp, 2 * self.order)
        if abs(fine - coarse) > self.tol * max(1.0, abs(fine)):
            raise QuadratureConvergenceError(
                f"Gauss-Hermite order {self.order} too low: doubling changed the value by {abs(fine - coarse):.3e}"
            )
        logger.debug("oracle value %.3e (order %d, refinement %.1e)", abs(fine), self.order, abs(fine - coarse))
        return fine

    def compose(self, k1: JetKernel, k2: JetKernel, samples: Sequence[SamplePair]) -> List[np.ndarray]:
        """
        Numerically integrate int k1(Z, W) k2(W, Z') dW at each sample pair.

        Args:
            k1: Kernel applied last
            k2: Kernel applied first
            samples: (Z, Z') point pairs in the domain of the composed base

        Returns:
            One complex matrix per sample, shaped like the symbolic composition

        Raises:
            ShapeError: If the inner index sets differ
            CompositionError: If the base pair has no composition rule
        """
        if k1.col_order != k2.row_order or k1.normal_dim != k2.normal_dim:
            raise ShapeError("inner jet index sets differ")
        CompositionRouter().result_base(k1.base, k2.base)
        inner = [contraction_weight(b) for b in k1.col_indices]
        rows, cols = k1.shape[0], k2.shape[1]
        out = []
        for z, zp in samples:
            mat = np.zeros((rows, cols), dtype=np.complex128)
            for r in range(rows):
                for c in range(cols):
                    for b, w in enumerate(inner):
                        a1, a2 = k1.entries[r][b], k2.entries[b][c]
                        if a1.is_zero() or a2.is_zero():
                            continue
                        mat[r, c] += float(w) * self.compose_value(
                            PolyKernel(k1.base, a1), PolyKernel(k2.base, a2), z, zp
                        )
            out.append(mat)
        return out


def random_sample_pairs(
    dims: Tuple[int, int], count: int, seed: int, scale: float = 0.5
) -> List[SamplePair]:
    """Complex Gaussian point pairs (Z, Z') of the given dimensions."""
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(count):
        z = scale * (rng.standard_normal(dims[0]) + 1j * rng.standard_normal(dims[0]))
        zp = scale * (rng.standard_normal(dims[1]) + 1j * rng.standard_normal(dims[1]))
        pairs.append((z, zp))
    return pairs


def quadrature_oracle_compose(
    k1: JetKernel, k2: JetKernel, samples: Sequence[SamplePair], order: Optional[int] = None
) -> List[np.ndarray]:
    return QuadratureOracle(order).compose(k1, k2, samples)
