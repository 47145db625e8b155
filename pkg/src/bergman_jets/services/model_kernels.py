"""Model kernels on the Bargmann space and their jet-valued matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np

from ..core.coefficients import PiCoeff
from ..core.errors import DimensionError, ParseError, ShapeError
from ..core.expressions import parse_poly
from ..core.multipoly import MultiPoly, VarFamily, multi_factorial, multi_indices, paired_points


class BaseKind(Enum):
    """Gaussian base kernels an amplitude can be attached to."""
    BARGMANN = "P"
    ORTHO = "Pperp0"
    EXT = "E0"
    RES = "Res0"
    SUB = "Psub"


class ModelKind(Enum):
    P = "P"
    PPERP = "Pperp"
    E = "E"
    RES = "Res"
    LOGBK = "LogBK"


@dataclass(frozen=True)
class KernelBase:
    kind: BaseKind
    n: int
    m: int

    def __post_init__(self):
        if not 0 <= self.m <= self.n:
            raise DimensionError(f"need 0 <= m <= n, got n={self.n}, m={self.m}")
        if self.kind in (BaseKind.BARGMANN, BaseKind.SUB) and self.n != self.m:
            raise DimensionError(f"{self.kind.value} is defined by a single dimension")

    @classmethod
    def bargmann(cls, n: int) -> "KernelBase":
        return cls(BaseKind.BARGMANN, n, n)

    @classmethod
    def ortho(cls, n: int, m: int) -> "KernelBase":
        return cls(BaseKind.ORTHO, n, m)

    @classmethod
    def ext(cls, n: int, m: int) -> "KernelBase":
        return cls(BaseKind.EXT, n, m)

    @classmethod
    def res(cls, n: int, m: int) -> "KernelBase":
        return cls(BaseKind.RES, n, m)

    @classmethod
    def sub(cls, m: int) -> "KernelBase":
        return cls(BaseKind.SUB, m, m)

    @property
    def amplitude_dims(self) -> Tuple[int, int]:
        """Sizes of the first and second argument of an attached amplitude."""
        return {
            BaseKind.BARGMANN: (self.n, self.n),
            BaseKind.ORTHO: (self.n, self.n),
            BaseKind.EXT: (self.n, self.m),
            BaseKind.RES: (self.m, self.n),
            BaseKind.SUB: (self.m, self.m),
        }[self.kind]

    @property
    def coupled(self) -> int:
        """Number of leading coordinates joined by exp(pi z_i zb'_i)."""
        return self.n if self.kind == BaseKind.BARGMANN else self.m

    def adjoint(self) -> "KernelBase":
        if self.kind == BaseKind.EXT:
            return KernelBase.res(self.n, self.m)
        if self.kind == BaseKind.RES:
            return KernelBase.ext(self.n, self.m)
        return self

    def is_legal(self, amplitude: MultiPoly) -> bool:
        return amplitude.dims == self.amplitude_dims

    def evaluate_points(self, z: np.ndarray, zp: np.ndarray) -> np.ndarray:
        z, zp = paired_points(z, zp, self.amplitude_dims)
        c = self.coupled
        exponent = (
            -0.5 * math.pi * np.sum(np.abs(z) ** 2, axis=1)
            - 0.5 * math.pi * np.sum(np.abs(zp) ** 2, axis=1)
            + math.pi * np.sum(z[:, :c] * np.conj(zp[:, :c]), axis=1)
        )
        return np.exp(exponent)

    def evaluate(self, z: Sequence[complex], zp: Sequence[complex]) -> complex:
        return complex(self.evaluate_points(np.asarray([z]), np.asarray([zp]))[0])

    def __str__(self) -> str:
        if self.kind in (BaseKind.BARGMANN, BaseKind.SUB):
            return f"{self.kind.value} {self.n}"
        return f"{self.kind.value} {self.n} {self.m}"


@dataclass(frozen=True)
class PolyKernel:
    """Amplitude times a Gaussian base kernel."""

    base: KernelBase
    amplitude: MultiPoly

    def __post_init__(self):
        if not self.base.is_legal(self.amplitude):
            raise DimensionError(
                f"amplitude over {self.amplitude.dims} is illegal for base {self.base} "
                f"(expects {self.base.amplitude_dims})"
            )

    @classmethod
    def unit(cls, base: KernelBase) -> "PolyKernel":
        return cls(base, MultiPoly.one(base.amplitude_dims))

    def adjoint(self) -> "PolyKernel":
        return PolyKernel(self.base.adjoint(), self.amplitude.conj_swap())

    def evaluate(self, z: Sequence[complex], zp: Sequence[complex]) -> complex:
        return self.amplitude.evaluate_at(z, zp) * self.base.evaluate(z, zp)

    def __str__(self) -> str:
        return f"{self.amplitude} | {self.base}"

    def to_dict(self) -> Dict[str, Any]:
        return {"base": str(self.base), "amplitude": self.amplitude.to_dict(), "text": str(self)}


def sym_norm_weight(beta: Sequence[int]) -> Fraction:
    """||dz^{.beta}||^2 = 2^k beta!/k! with ||dz_i|| = sqrt(2)."""
    k = sum(beta)
    return Fraction(2**k * multi_factorial(beta), math.factorial(k))


def contraction_weight(beta: Sequence[int]) -> Fraction:
    """Pairing of d/dz^{.beta} with dz^{.beta}: beta!/k!."""
    return Fraction(multi_factorial(beta), math.factorial(sum(beta)))


@dataclass(frozen=True)
class JetKernel:
    """Matrix of amplitudes over one base, rows/cols indexed by Sym^k multi-indices.

    Order 0 on a side is the scalar case: its single index is the zero
    multi-index, printed as ``*``.
    """

    base: KernelBase
    normal_dim: int
    row_order: int
    col_order: int
    entries: Tuple[Tuple[MultiPoly, ...], ...]

    def __post_init__(self):
        rows, cols = self.row_indices, self.col_indices
        if len(self.entries) != len(rows) or any(len(row) != len(cols) for row in self.entries):
            raise ShapeError(f"entries do not match index sets {len(rows)}x{len(cols)}")
        for row in self.entries:
            for amp in row:
                if not self.base.is_legal(amp):
                    raise DimensionError(f"entry over {amp.dims} is illegal for base {self.base}")

    @classmethod
    def scalar(cls, kernel: PolyKernel, normal_dim: int | None = None) -> "JetKernel":
        if normal_dim is None:
            normal_dim = kernel.base.n - kernel.base.m
        return cls(kernel.base, normal_dim, 0, 0, ((kernel.amplitude,),))

    @classmethod
    def from_function(
        cls,
        base: KernelBase,
        normal_dim: int,
        row_order: int,
        col_order: int,
        build: Callable[[Tuple[int, ...], Tuple[int, ...]], MultiPoly],
    ) -> "JetKernel":
        rows = multi_indices(normal_dim, row_order)
        cols = multi_indices(normal_dim, col_order)
        entries = tuple(tuple(build(r, c) for c in cols) for r in rows)
        return cls(base, normal_dim, row_order, col_order, entries)

    @property
    def row_indices(self) -> List[Tuple[int, ...]]:
        return multi_indices(self.normal_dim, self.row_order)

    @property
    def col_indices(self) -> List[Tuple[int, ...]]:
        return multi_indices(self.normal_dim, self.col_order)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.row_indices), len(self.col_indices)

    def entry(self, row: Tuple[int, ...], col: Tuple[int, ...]) -> MultiPoly:
        return self.entries[self.row_indices.index(tuple(row))][self.col_indices.index(tuple(col))]

    def poly_kernel(self, i: int, j: int) -> PolyKernel:
        return PolyKernel(self.base, self.entries[i][j])

    def is_zero(self) -> bool:
        return all(amp.is_zero() for row in self.entries for amp in row)

    def map_entries(self, fn: Callable[[MultiPoly], MultiPoly]) -> "JetKernel":
        return JetKernel(
            self.base,
            self.normal_dim,
            self.row_order,
            self.col_order,
            tuple(tuple(fn(a) for a in row) for row in self.entries),
        )

    def scale(self, factor: PiCoeff | int | Fraction) -> "JetKernel":
        return self.map_entries(lambda a: a.scale(factor))

    def _check_same_shape(self, other: "JetKernel") -> None:
        if (self.base, self.normal_dim, self.row_order, self.col_order) != (
            other.base,
            other.normal_dim,
            other.row_order,
            other.col_order,
        ):
            raise ShapeError("jet kernels differ in base or index sets")

    def __add__(self, other: "JetKernel") -> "JetKernel":
        self._check_same_shape(other)
        return JetKernel(
            self.base,
            self.normal_dim,
            self.row_order,
            self.col_order,
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)),
        )

    def __neg__(self) -> "JetKernel":
        return self.map_entries(lambda a: -a)

    def __sub__(self, other: "JetKernel") -> "JetKernel":
        return self + (-other)

    def evaluate(self, z: Sequence[complex], zp: Sequence[complex]) -> np.ndarray:
        return kernel_eval(self, z, zp)

    def _index_text(self, beta: Tuple[int, ...], order: int) -> str:
        return "*" if order == 0 else "".join(str(b) for b in beta)

    def __str__(self) -> str:
        if self.shape == (1, 1):
            return f"{self.entries[0][0]} | {self.base}"
        lines = []
        for r, row in zip(self.row_indices, self.entries):
            for c, amp in zip(self.col_indices, row):
                lines.append(
                    f"[{self._index_text(r, self.row_order)},{self._index_text(c, self.col_order)}] "
                    f"{amp} | {self.base}"
                )
        return "\n".join(lines)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": str(self.base),
            "normal_dim": self.normal_dim,
            "row_order": self.row_order,
            "col_order": self.col_order,
            "rows": [list(r) for r in self.row_indices],
            "cols": [list(c) for c in self.col_indices],
            "entries": [[amp.canonical_text() for amp in row] for row in self.entries],
        }


def normal_monomial(
    dims: Tuple[int, int], family: VarFamily, m: int, beta: Sequence[int], coeff: PiCoeff | Fraction | int
) -> MultiPoly:
    size = dims[0] if family in (VarFamily.Z, VarFamily.ZB) else dims[1]
    block = [0] * size
    for i, b in enumerate(beta):
        block[m + i] = b
    return MultiPoly.from_blocks(dims, {family: block}, coeff)


def build_perp(n: int, m: int, k: int) -> JetKernel:
    base = KernelBase.ortho(n, m)
    dims = base.amplitude_dims
    amp = MultiPoly.zero(dims)
    for beta in multi_indices(n - m, k):
        z_part = normal_monomial(dims, VarFamily.Z, m, beta, 1)
        zbp_part = normal_monomial(dims, VarFamily.ZBP, m, beta, PiCoeff.pi_power(k, Fraction(1, multi_factorial(beta))))
        amp = amp + z_part * zbp_part
    return JetKernel(base, n - m, 0, 0, ((amp,),))


def build_extension(n: int, m: int, k: int) -> JetKernel:
    base = KernelBase.ext(n, m)
    dims = base.amplitude_dims
    row = tuple(
        normal_monomial(dims, VarFamily.Z, m, beta, Fraction(1, multi_factorial(beta)))
        for beta in multi_indices(n - m, k)
    )
    return JetKernel(base, n - m, 0, k, (row,))


def build_restriction(n: int, m: int, k: int) -> JetKernel:
    base = KernelBase.res(n, m)
    dims = base.amplitude_dims
    entries = tuple(
        (
            normal_monomial(
                dims,
                VarFamily.ZBP,
                m,
                beta,
                PiCoeff.pi_power(k, Fraction(math.factorial(k), multi_factorial(beta))),
            ),
        )
        for beta in multi_indices(n - m, k)
    )
    return JetKernel(base, n - m, k, 0, entries)


def build_sub_identity(m: int, normal_dim: int, k: int) -> JetKernel:
    """P_m tensored with the identity of Sym^k, in the dz^{.beta} basis."""
    base = KernelBase.sub(m)
    dims = base.amplitude_dims

    def entry(r: Tuple[int, ...], c: Tuple[int, ...]) -> MultiPoly:
        if r != c:
            return MultiPoly.zero(dims)
        return MultiPoly.const(Fraction(math.factorial(k), multi_factorial(r)), dims)

    return JetKernel.from_function(base, normal_dim, k, k, entry)


@dataclass(frozen=True)
class LogBergmanKernel:
    """P_n minus the orthogonal kernels of order l < k."""

    n: int
    m: int
    k: int
    bargmann: JetKernel = field(init=False)
    perps: Tuple[JetKernel, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "bargmann", build_model_kernel(ModelKind.P, self.n, self.n, 0))
        object.__setattr__(self, "perps", tuple(build_perp(self.n, self.m, l) for l in range(self.k)))

    def kernels(self) -> List[JetKernel]:
        return [self.bargmann, *self.perps]

    def evaluate(self, z: Sequence[complex], zp: Sequence[complex]) -> complex:
        value = kernel_eval(self.bargmann, z, zp)[0, 0]
        for perp in self.perps:
            value -= kernel_eval(perp, z, zp)[0, 0]
        return complex(value)

    def series_evaluate(self, z: Sequence[complex], zp: Sequence[complex], rtol: float = 1e-15) -> complex:
        """Sum_{|beta| >= k} pi^|beta| (z_N zb'_N)^beta / beta! times P^{perp,0}."""
        z = np.asarray(z, dtype=complex)
        zp = np.asarray(zp, dtype=complex)
        base = KernelBase.ortho(self.n, self.m).evaluate(z, zp)
        x = math.pi * z[self.m:] * np.conj(zp[self.m:])
        # the normal part factorizes into a 1-d exponential series
        s = complex(np.sum(x))
        total, term, order = 0j, 1 + 0j, 0
        while True:
            if order >= self.k:
                total += term
            order += 1
            term = term * s / order
            if order > self.k and abs(term) <= rtol * max(abs(total), 1e-300):
                break
            if order > 500:
                break
        return complex(total * base)


def build_model_kernel(kind: ModelKind | str, n: int, m: int, k: int) -> JetKernel | LogBergmanKernel:
    """Builds one of the model kernels.

    Args:
        kind: P, Pperp, E, Res or LogBK
        n: Ambient dimension
        m: Dimension of the submanifold
        k: Jet order

    Returns:
        A JetKernel, or the LogBergmanKernel pair for LogBK

    Raises:
        DimensionError: If m > n or k < 0
    """
    kind = ModelKind(kind)
    if not 0 <= m <= n:
        raise DimensionError(f"need 0 <= m <= n, got n={n}, m={m}")
    if k < 0:
        raise DimensionError(f"jet order must be nonnegative, got {k}")
    if kind == ModelKind.P:
        base = KernelBase.bargmann(n)
        return JetKernel(base, n - m, 0, 0, ((MultiPoly.one(base.amplitude_dims),),))
    if kind == ModelKind.PPERP:
        return build_perp(n, m, k)
    if kind == ModelKind.E:
        return build_extension(n, m, k)
    if kind == ModelKind.RES:
        return build_restriction(n, m, k)
    return LogBergmanKernel(n, m, k)


def kernel_adjoint(
    kernel: JetKernel, weights: Callable[[Sequence[int]], Fraction] = sym_norm_weight
) -> JetKernel:
    """Adjoint with respect to the Sym^k metric ``weights``.

    K*_{cr}(Z', Z) = conj(K_{rc}(Z, Z')) * w_r pi_c / (w_c pi_r), where pi is the
    contraction weight beta!/k!.
    """
    rows, cols = kernel.row_indices, kernel.col_indices
    entries = []
    for j, c in enumerate(cols):
        new_row = []
        for i, r in enumerate(rows):
            factor = weights(r) * contraction_weight(c) / (weights(c) * contraction_weight(r))
            new_row.append(kernel.entries[i][j].conj_swap().scale(factor))
        entries.append(tuple(new_row))
    return JetKernel(kernel.base.adjoint(), kernel.normal_dim, kernel.col_order, kernel.row_order, tuple(entries))


def kernel_eval(kernel: JetKernel, z: Sequence[complex], zp: Sequence[complex]) -> np.ndarray:
    """Numeric kernel matrix at (Z, Z'), amplitude times the Gaussian base."""
    d1, d2 = kernel.base.amplitude_dims
    z = np.asarray(z, dtype=np.complex128).reshape(d1)
    zp = np.asarray(zp, dtype=np.complex128).reshape(d2)
    gauss = kernel.base.evaluate(z, zp)
    rows, cols = kernel.shape
    out = np.zeros((rows, cols), dtype=np.complex128)
    for i, row in enumerate(kernel.entries):
        for j, amp in enumerate(row):
            if not amp.is_zero():
                out[i, j] = amp.evaluate_at(z, zp) * gauss
    return out


def kernel_eval_points(kernel: JetKernel, z: np.ndarray, zp: np.ndarray) -> np.ndarray:
    """Vectorized kernel_eval; returns shape (npts, rows, cols)."""
    gauss = kernel.base.evaluate_points(z, zp)
    rows, cols = kernel.shape
    out = np.zeros((gauss.shape[0], rows, cols), dtype=np.complex128)
    for i, row in enumerate(kernel.entries):
        for j, amp in enumerate(row):
            if not amp.is_zero():
                out[:, i, j] = amp.evaluate_points(z, zp) * gauss
    return out


def real_to_complex(point: Sequence[float]) -> np.ndarray:
    """(x_1, y_1, ..., x_d, y_d) in R^{2d} to (x_j + i y_j) in C^d."""
    arr = np.asarray(point, dtype=float)
    if arr.size % 2:
        raise DimensionError("real coordinates come in (x, y) pairs")
    return arr[0::2] + 1j * arr[1::2]


_BASE_ARITY = {
    "P": (BaseKind.BARGMANN, 1),
    "Psub": (BaseKind.SUB, 1),
    "Pperp0": (BaseKind.ORTHO, 2),
    "E0": (BaseKind.EXT, 2),
    "Res0": (BaseKind.RES, 2),
}


def parse_base(text: str, offset: int = 0) -> KernelBase:
    parts = text.split()
    if not parts or parts[0] not in _BASE_ARITY:
        raise ParseError(f"unknown kernel base {text.strip()!r}", offset)
    kind, arity = _BASE_ARITY[parts[0]]
    if len(parts) != 1 + arity or not all(p.isdigit() for p in parts[1:]):
        raise ParseError(f"base {parts[0]} expects {arity} integer dimension(s)", offset)
    dims = [int(p) for p in parts[1:]]
    try:
        if arity == 1:
            return KernelBase(kind, dims[0], dims[0])
        return KernelBase(kind, dims[0], dims[1])
    except DimensionError as exc:
        raise ParseError(str(exc), offset) from exc


def _split_top_level(text: str, separators: Tuple[str, ...]) -> List[Tuple[str, int]]:
    pieces, depth, start = [], 0, 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", i)
        elif depth == 0 and ch in separators:
            pieces.append((text[start:i], start))
            start = i + 1
        i += 1
    if depth != 0:
        raise ParseError("unbalanced '('", len(text))
    pieces.append((text[start:], start))
    return pieces


def parse_poly_kernel(text: str, offset: int = 0) -> PolyKernel:
    """Parse ``(amplitude|Base dims)``."""
    stripped = text.strip()
    lead = offset + len(text) - len(text.lstrip())
    if not (stripped.startswith("(") and stripped.endswith(")")):
        raise ParseError("kernel operand must be written as (amplitude|Base dims)", lead)
    inner = stripped[1:-1]
    bar = inner.rfind("|")
    if bar < 0:
        raise ParseError("missing '|' between amplitude and base", lead + 1)
    base = parse_base(inner[bar + 1:], lead + 2 + bar)
    amplitude = parse_poly(inner[:bar], base.amplitude_dims, lead + 1)
    return PolyKernel(base, amplitude)


def parse_kernel_expression(text: str) -> List[PolyKernel]:
    """Split ``(a|B) ∘ (c|D) ∘ ...`` into its operands."""
    if not text.strip():
        raise ParseError("empty kernel expression", 0)
    return [parse_poly_kernel(piece, start) for piece, start in _split_top_level(text, ("∘", "@"))]
