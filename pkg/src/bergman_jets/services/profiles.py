"""First-order corrections of the extension, orthogonal and restriction profiles."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any

import numpy as np

from ..core.coefficients import GaussianRational, PiCoeff
from ..core.errors import DimensionError
from ..core.multipoly import MultiPoly, VarFamily, VarId, multi_factorial, multi_indices
from .model_kernels import JetKernel, KernelBase, normal_monomial

PROFILE_KINDS = ("E", "perp", "res")


def _exact(value: Any) -> GaussianRational:
    if isinstance(value, (complex, np.complexfloating)):
        return GaussianRational(Fraction(float(value.real)), Fraction(float(value.imag)))
    if isinstance(value, (float, np.floating)):
        return GaussianRational(Fraction(float(value)))
    if isinstance(value, np.integer):
        return GaussianRational(Fraction(int(value)))
    return GaussianRational.of(value)


def _tensor_entries(a_tensor: Any, n: int, m: int) -> list:
    arr = np.asarray(a_tensor, dtype=object)
    if arr.shape != (n - m, m, m):
        raise DimensionError(f"second fundamental form tensor must have shape {(n - m, m, m)}, got {arr.shape}")
    return [
        (j, a, b, _exact(arr[j, a, b]))
        for j in range(n - m)
        for a in range(m)
        for b in range(m)
        if not _exact(arr[j, a, b]).is_zero()
    ]


def _difference(dims, first: VarFamily, second: VarFamily, index: int) -> MultiPoly:
    # x_index - x'_index on the tangential coordinates
    return MultiPoly.var(VarId(first, index), dims) - MultiPoly.var(VarId(second, index), dims)


def cubic_form(n: int, m: int, a_tensor: Any, dims) -> MultiPoly:
    """sum_{j,a,b} T[j,a,b] z_{N,j} (zb_Y - zb'_Y)_a (zb_Y - zb'_Y)_b."""
    out = MultiPoly.zero(dims)
    for j, a, b, c in _tensor_entries(a_tensor, n, m):
        term = MultiPoly.var(VarId(VarFamily.Z, m + j), dims).scale(c)
        term = term * _difference(dims, VarFamily.ZB, VarFamily.ZBP, a) * _difference(dims, VarFamily.ZB, VarFamily.ZBP, b)
        out = out + term
    return out


def partner_form(n: int, m: int, a_tensor: Any, dims) -> MultiPoly:
    """sum_{j,a,b} conj(T[j,a,b]) zb'_{N,j} (z_Y - z'_Y)_a (z_Y - z'_Y)_b."""
    out = MultiPoly.zero(dims)
    for j, a, b, c in _tensor_entries(a_tensor, n, m):
        term = MultiPoly.var(VarId(VarFamily.ZBP, m + j), dims).scale(c.conjugate())
        term = term * _difference(dims, VarFamily.Z, VarFamily.ZP, a) * _difference(dims, VarFamily.Z, VarFamily.ZP, b)
        out = out + term
    return out


def build_second_order_profile(kind: str, n: int, m: int, k: int, a_tensor: Any) -> JetKernel:
    """
    First-order profile correction driven by the second fundamental form.

    Args:
        kind: "E" (extension), "perp" (orthogonal kernel) or "res" (restriction)
        n: Ambient dimension
        m: Dimension of Y
        k: Jet order
        a_tensor: Array of shape (n - m, m, m) with T[j, a, b] the coefficient of
            z_{N,j} (zb_Y - zb'_Y)_a (zb_Y - zb'_Y)_b in g(z_N, A(zb_Y - zb'_Y)(zb_Y - zb'_Y))

    Returns:
        JetKernel over Ext0, OrthoProj0 or Res0 with the same index sets as the
        leading profile

    Raises:
        DimensionError: On inconsistent dimensions or tensor shape
    """
    if not 0 <= m < n or k < 0:
        raise DimensionError(f"need 0 <= m < n and k >= 0, got n={n}, m={m}, k={k}")
    betas = multi_indices(n - m, k)

    if kind == "E":
        base = KernelBase.ext(n, m)
        dims = base.amplitude_dims
        cubic = cubic_form(n, m, a_tensor, dims)
        row = tuple(
            cubic * normal_monomial(dims, VarFamily.Z, m, beta, Fraction(1, multi_factorial(beta))) for beta in betas
        )
        return JetKernel(base, n - m, 0, k, (row,))

    if kind == "perp":
        base = KernelBase.ortho(n, m)
        dims = base.amplitude_dims
        correction = (cubic_form(n, m, a_tensor, dims) + partner_form(n, m, a_tensor, dims)).scale(
            PiCoeff.pi_power(k + 1)
        )
        jet = MultiPoly.zero(dims)
        for beta in betas:
            jet = jet + normal_monomial(dims, VarFamily.Z, m, beta, Fraction(1, multi_factorial(beta))) * normal_monomial(
                dims, VarFamily.ZBP, m, beta, 1
            )
        return JetKernel(base, n - m, 0, 0, ((correction * jet,),))

    if kind == "res":
        base = KernelBase.res(n, m)
        dims = base.amplitude_dims
        correction = partner_form(n, m, a_tensor, dims).scale(PiCoeff.pi_power(k + 1))
        entries = tuple(
            (
                correction
                * normal_monomial(dims, VarFamily.ZBP, m, beta, Fraction(math.factorial(k), multi_factorial(beta))),
            )
            for beta in betas
        )
        return JetKernel(base, n - m, k, 0, entries)

    raise ValueError(f"unknown profile kind {kind!r}, expected one of {PROFILE_KINDS}")
