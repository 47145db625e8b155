"""Truncated Bargmann-space matrices of the model operators.

Sections are written in the monomial frame z^gamma exp(-pi|z|^2/2) (times
dz^{.beta} on Sym^k-valued sides). Matrices are coefficient matrices in that
frame, so every entry is an exact PiCoeff; the frame is orthogonal with
||z^gamma||^2 = gamma!/pi^|gamma| and ||dz^{.beta}||^2 = 2^k beta!/k!.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.coefficients import PiCoeff
from ..core.errors import DimensionError, ShapeError
from ..core.multipoly import VarFamily, multi_factorial, multi_indices
from .model_kernels import JetKernel, LogBergmanKernel, contraction_weight, sym_norm_weight

logger = logging.getLogger(__name__)

Index = Tuple[int, ...]
BasisItem = Tuple[Index, Optional[Index]]


def monomial_norm(gamma: Sequence[int]) -> PiCoeff:
    """||z^gamma||^2 = gamma!/pi^|gamma| against exp(-pi|z|^2)."""
    return PiCoeff.pi_power(-sum(gamma), multi_factorial(gamma))


def _graded(n: int, cutoff: int) -> List[Index]:
    out: List[Index] = []
    for degree in range(cutoff + 1):
        out.extend(multi_indices(n, degree))
    return out


@dataclass(frozen=True)
class FockBasis:
    """Monomials z^gamma on C^n with |gamma| <= cutoff, ordered by degree."""

    n: int
    cutoff: int

    def __post_init__(self):
        if self.n < 0 or self.cutoff < 0:
            raise DimensionError(f"need n >= 0 and cutoff >= 0, got n={self.n}, D={self.cutoff}")

    order = 0
    normal_dim = 0

    @cached_property
    def elements(self) -> List[Index]:
        return _graded(self.n, self.cutoff)

    @cached_property
    def items(self) -> List[BasisItem]:
        return [(g, None) for g in self.elements]

    @cached_property
    def positions(self) -> Dict[BasisItem, int]:
        return {item: i for i, item in enumerate(self.items)}

    def norm2(self, item: BasisItem) -> PiCoeff:
        return monomial_norm(item[0])

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class JetFockBasis:
    """FockBasis on C^n tensored with the dz^{.beta} basis of Sym^k, beta in N^normal_dim."""

    fock: FockBasis
    normal_dim: int
    order: int

    @property
    def n(self) -> int:
        return self.fock.n

    @property
    def cutoff(self) -> int:
        return self.fock.cutoff

    @cached_property
    def items(self) -> List[BasisItem]:
        return [(g, b) for g in self.fock.elements for b in multi_indices(self.normal_dim, self.order)]

    @cached_property
    def positions(self) -> Dict[BasisItem, int]:
        return {item: i for i, item in enumerate(self.items)}

    def norm2(self, item: BasisItem) -> PiCoeff:
        return monomial_norm(item[0]) * sym_norm_weight(item[1])

    def __len__(self) -> int:
        return len(self.items)


Basis = Union[FockBasis, JetFockBasis]


def fock_basis(n: int, cutoff: int) -> FockBasis:
    return FockBasis(n, cutoff)


def gram_matrix_exact(basis: Basis) -> Dict[Tuple[int, int], PiCoeff]:
    """Exact Gram of the frame by Gaussian moments (diagonal by construction)."""
    out: Dict[Tuple[int, int], PiCoeff] = {}
    for i, a in enumerate(basis.items):
        for j, b in enumerate(basis.items):
            if a[1] != b[1]:
                continue
            value = PiCoeff.const(1)
            for x, y in zip(a[0], b[0]):
                value = value * _moment(x, y)
            if a[1] is not None:
                value = value * sym_norm_weight(a[1])
            if not value.is_zero():
                out[(i, j)] = value
    return out


def _moment(a: int, b: int) -> PiCoeff:
    """int w^a wb^b exp(-pi|w|^2) dlambda = delta_ab a!/pi^a."""
    if a != b:
        return PiCoeff()
    return PiCoeff.pi_power(-a, math.factorial(a))


@dataclass
class OperatorMatrix:
    """Sparse exact matrix of an operator between two truncated frames."""

    rows: Basis
    cols: Basis
    entries: Dict[Tuple[int, int], PiCoeff]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.cols)

    def get(self, i: int, j: int) -> PiCoeff:
        return self.entries.get((i, j), PiCoeff())

    def to_numpy(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.complex128)
        for (i, j), c in self.entries.items():
            out[i, j] = c.to_complex()
        return out

    def _check_same(self, other: "OperatorMatrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeError("operator matrices live on different frames")

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_same(other)
        out = dict(self.entries)
        for key, c in other.entries.items():
            value = out.get(key, PiCoeff()) + c
            if value.is_zero():
                out.pop(key, None)
            else:
                out[key] = value
        return OperatorMatrix(self.rows, self.cols, out)

    def scale(self, factor: PiCoeff | int | Fraction) -> "OperatorMatrix":
        factor = PiCoeff.of(factor)
        out = {key: c * factor for key, c in self.entries.items()}
        return OperatorMatrix(self.rows, self.cols, {k: v for k, v in out.items() if not v.is_zero()})

    def __neg__(self) -> "OperatorMatrix":
        return self.scale(-1)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return self + (-other)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.cols != other.rows:
            raise ShapeError("inner frames of the product differ")
        by_row: Dict[int, List[Tuple[int, PiCoeff]]] = {}
        for (i, j), c in other.entries.items():
            by_row.setdefault(i, []).append((j, c))
        out: Dict[Tuple[int, int], PiCoeff] = {}
        for (i, mid), c in self.entries.items():
            for j, d in by_row.get(mid, []):
                key = (i, j)
                out[key] = out.get(key, PiCoeff()) + c * d
        return OperatorMatrix(self.rows, other.cols, {k: v for k, v in out.items() if not v.is_zero()})

    def adjoint(self) -> "OperatorMatrix":
        """Adjoint in the frame metrics: M*[j, i] = conj(M[i, j]) |e_i|^2 / |e_j|^2."""
        out = {}
        for (i, j), c in self.entries.items():
            ratio = self.rows.norm2(self.rows.items[i]) / self.cols.norm2(self.cols.items[j])
            out[(j, i)] = c.conjugate() * ratio
        return OperatorMatrix(self.cols, self.rows, out)

    def restrict(self, row_degree: int, col_degree: int) -> "OperatorMatrix":
        """Sub-block on frame elements of total degree at most the given bounds."""
        rows = [i for i, item in enumerate(self.rows.items) if sum(item[0]) <= row_degree]
        cols = [j for j, item in enumerate(self.cols.items) if sum(item[0]) <= col_degree]
        rset, cset = set(rows), set(cols)
        return OperatorMatrix(
            self.rows,
            self.cols,
            {key: c for key, c in self.entries.items() if key[0] in rset and key[1] in cset},
        )

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.entries == other.entries

    def is_projector(self, tol: float = 1e-10) -> bool:
        if self.rows != self.cols:
            return False
        m = self.to_numpy()
        star = self.adjoint().to_numpy()
        return bool(np.allclose(m @ m, m, atol=tol) and np.allclose(m, star, atol=tol))


def _apply_term(
    exp_blocks: Mapping[VarFamily, Index], gamma: Index, coupled: int
) -> Optional[Tuple[Index, Index, PiCoeff]]:
    """Integrate one amplitude monomial against w^gamma over the second argument.

    Returns (z power, zb power, coefficient) of the resulting function of Z,
    or None if the W-moments vanish.
    """
    zp, zbp = exp_blocks[VarFamily.ZP], exp_blocks[VarFamily.ZBP]
    z_extra = [0] * len(exp_blocks[VarFamily.Z])
    coeff = PiCoeff.const(1)
    for i, (r, s, g) in enumerate(zip(zp, zbp, gamma)):
        holo = r + g
        if i < coupled:
            # sum_j (pi z_i)^j/j! * int w^holo wb^(s+j) exp(-pi|w|^2)
            j = holo - s
            if j < 0:
                return None
            z_extra[i] = j
            coeff = coeff * PiCoeff.pi_power(j - holo, Fraction(math.factorial(holo), math.factorial(j)))
        else:
            moment = _moment(holo, s)
            if moment.is_zero():
                return None
            coeff = coeff * moment
    z_pow = tuple(a + b for a, b in zip(exp_blocks[VarFamily.Z], z_extra))
    return z_pow, tuple(exp_blocks[VarFamily.ZB]), coeff


def _project_onto_monomial(z_pow: Index, zb_pow: Index) -> Optional[Tuple[Index, PiCoeff]]:
    """Coefficient of z^alpha in z^p zb^q exp(-pi|z|^2/2) against the orthogonal frame."""
    alpha = tuple(p - q for p, q in zip(z_pow, zb_pow))
    if any(a < 0 for a in alpha):
        return None
    return alpha, monomial_norm(z_pow) / monomial_norm(alpha)


def kernel_to_matrix(kernel: JetKernel, rows: Basis, cols: Basis) -> OperatorMatrix:
    """
    Matrix of a jet kernel between truncated frames.

    M[rho, sigma] = <K e_sigma, e_rho> / |e_rho|^2, computed with exact
    Gaussian moments; images leaving the row frame are truncated.

    Args:
        kernel: Kernel to realize
        rows: Frame of the target space
        cols: Frame of the source space

    Returns:
        OperatorMatrix with exact entries

    Raises:
        DimensionError: If a frame does not match the kernel's arguments
    """
    d1, d2 = kernel.base.amplitude_dims
    if rows.n != d1 or cols.n != d2:
        raise DimensionError(f"frames over C^{rows.n}, C^{cols.n} do not fit kernel base {kernel.base}")
    for basis, order in ((rows, kernel.row_order), (cols, kernel.col_order)):
        if basis.order != order or (order > 0 and basis.normal_dim != kernel.normal_dim):
            raise DimensionError(f"frame order {basis.order} does not match kernel index order {order}")

    row_idx = {b: i for i, b in enumerate(kernel.row_indices)}
    col_idx = {b: i for i, b in enumerate(kernel.col_indices)}
    coupled = kernel.base.coupled
    entries: Dict[Tuple[int, int], PiCoeff] = {}
    for j, (gamma, beta) in enumerate(cols.items):
        c = 0 if beta is None else col_idx[beta]
        weight = contraction_weight(kernel.col_indices[c])
        for r_beta, r in row_idx.items():
            amp = kernel.entries[r][c]
            if amp.is_zero():
                continue
            target_beta = r_beta if kernel.row_order > 0 else None
            for exp, coeff in amp.items():
                applied = _apply_term(amp.split(exp), gamma, coupled)
                if applied is None:
                    continue
                projected = _project_onto_monomial(applied[0], applied[1])
                if projected is None:
                    continue
                alpha, proj = projected
                i = rows.positions.get((alpha, target_beta))
                if i is None:
                    continue
                entries[(i, j)] = entries.get((i, j), PiCoeff()) + coeff * applied[2] * proj * weight
    entries = {key: v for key, v in entries.items() if not v.is_zero()}
    logger.debug("kernel %s realized as %dx%d matrix with %d entries", kernel.base, len(rows), len(cols), len(entries))
    return OperatorMatrix(rows, cols, entries)


def default_bases(kernel: JetKernel, cutoff: int) -> Tuple[Basis, Basis]:
    """Truncation-safe frames: Sym^k sides use cutoff D - k."""

    def frame(n: int, order: int) -> Basis:
        if order == 0:
            return FockBasis(n, cutoff)
        return JetFockBasis(FockBasis(n, max(cutoff - order, 0)), kernel.normal_dim, order)

    d1, d2 = kernel.base.amplitude_dims
    return frame(d1, kernel.row_order), frame(d2, kernel.col_order)


def logbk_matrix(kernel: LogBergmanKernel, cutoff: int) -> OperatorMatrix:
    """matrix(P_n) minus matrix(Pperp^l) for l < k."""
    rows, cols = default_bases(kernel.bargmann, cutoff)
    out = kernel_to_matrix(kernel.bargmann, rows, cols)
    for perp in kernel.perps:
        out = out - kernel_to_matrix(perp, rows, cols)
    return out


def sym_pairing(
    k: int,
    u: Union[Mapping[Index, complex], Sequence[complex]],
    v: Union[Mapping[Index, complex], Sequence[complex]],
    normal_dim: int = 1,
):
    """
    Hermitian pairing on Sym^k with ||dz^{.beta}||^2 = 2^k beta!/k!.

    Args:
        k: Jet order
        u: Coefficients on dz^{.beta}, as a mapping or a sequence over the sorted betas
        v: Same for the second argument
        normal_dim: Number of normal coordinates when sequences are passed

    Raises:
        ShapeError: If the index sets differ
    """
    betas = multi_indices(normal_dim, k)
    if not isinstance(u, Mapping):
        if len(u) != len(betas):
            raise ShapeError(f"expected {len(betas)} coefficients, got {len(u)}")
        u = dict(zip(betas, u))
    if not isinstance(v, Mapping):
        if len(v) != len(betas):
            raise ShapeError(f"expected {len(betas)} coefficients, got {len(v)}")
        v = dict(zip(betas, v))
    if set(u) != set(v):
        raise ShapeError("Sym^k vectors use different index sets")
    total = 0
    for beta in sorted(u):
        if sum(beta) != k:
            raise ShapeError(f"index {beta} is not of order {k}")
        total += sym_norm_weight(beta) * u[beta] * v[beta].conjugate()
    return total
