"""Exact multivariate polynomials in z, zb, z', zb' with PiCoeff coefficients."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .coefficients import GaussianRational, PiCoeff, Scalar
from .errors import DimensionError, EvaluationError, UnknownVariableError

Exponent = Tuple[int, ...]


class VarFamily(Enum):
    """Formal variable families; z and zb are independent symbols."""
    Z = "z"
    ZB = "zb"
    ZP = "z'"
    ZBP = "zb'"

    @property
    def primed(self) -> bool:
        return self in (VarFamily.ZP, VarFamily.ZBP)

    @property
    def partner(self) -> "VarFamily":
        """Holomorphic/antiholomorphic partner in the same argument."""
        return _PARTNER[self]


_PARTNER = {
    VarFamily.Z: VarFamily.ZB,
    VarFamily.ZB: VarFamily.Z,
    VarFamily.ZP: VarFamily.ZBP,
    VarFamily.ZBP: VarFamily.ZP,
}

_SWAP_ARGUMENTS = {
    VarFamily.Z: VarFamily.ZP,
    VarFamily.ZB: VarFamily.ZBP,
    VarFamily.ZP: VarFamily.Z,
    VarFamily.ZBP: VarFamily.ZB,
}

FAMILY_ORDER = (VarFamily.Z, VarFamily.ZB, VarFamily.ZP, VarFamily.ZBP)


@dataclass(frozen=True, order=True)
class VarId:
    family: VarFamily
    index: int

    def __str__(self) -> str:
        return f"{self.family.value}{self.index + 1}"


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"
    NEITHER = "neither"

    @staticmethod
    def of_degree(degree: int) -> "Parity":
        return Parity.EVEN if degree % 2 == 0 else Parity.ODD

    def times(self, other: "Parity") -> "Parity":
        if Parity.NEITHER in (self, other):
            return Parity.NEITHER
        return Parity.EVEN if self == other else Parity.ODD


class RingOp(Enum):
    ADD = "add"
    MUL = "mul"
    SCALE = "scale"
    RENAME = "substitute-rename"


def _family_sizes(dims: Tuple[int, int]) -> Dict[VarFamily, int]:
    n1, n2 = dims
    return {VarFamily.Z: n1, VarFamily.ZB: n1, VarFamily.ZP: n2, VarFamily.ZBP: n2}


def _family_offsets(dims: Tuple[int, int]) -> Dict[VarFamily, int]:
    sizes = _family_sizes(dims)
    offsets, start = {}, 0
    for fam in FAMILY_ORDER:
        offsets[fam] = start
        start += sizes[fam]
    return offsets


def _grlex_key(exp: Exponent) -> Tuple:
    return (-sum(exp), tuple(-e for e in exp))


class MultiPoly:
    """Polynomial over the families z, zb (first argument, n1 variables each)
    and z', zb' (second argument, n2 variables each).

    Terms are kept in canonical form: no zero coefficients. Instances are
    immutable; every operation returns a new polynomial.
    """

    def __init__(self, dims: Tuple[int, int], terms: Mapping[Exponent, PiCoeff | Scalar] | None = None):
        n1, n2 = dims
        if n1 < 0 or n2 < 0:
            raise DimensionError(f"negative dimensions {dims}")
        self.dims: Tuple[int, int] = (int(n1), int(n2))
        nvars = 2 * self.dims[0] + 2 * self.dims[1]
        clean: Dict[Exponent, PiCoeff] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise DimensionError(f"exponent {exp} does not match dims {self.dims}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent {exp}")
            coeff = PiCoeff.of(coeff)
            if coeff.is_zero():
                continue
            if exp in clean:
                coeff = clean[exp] + coeff
                if coeff.is_zero():
                    del clean[exp]
                    continue
            clean[exp] = coeff
        self._terms: Tuple[Tuple[Exponent, PiCoeff], ...] = tuple(
            sorted(clean.items(), key=lambda item: _grlex_key(item[0]))
        )

    # constructors

    @classmethod
    def zero(cls, dims: Tuple[int, int]) -> "MultiPoly":
        return cls(dims)

    @classmethod
    def const(cls, value: PiCoeff | Scalar, dims: Tuple[int, int]) -> "MultiPoly":
        return cls(dims, {(0,) * (2 * dims[0] + 2 * dims[1]): value})

    @classmethod
    def one(cls, dims: Tuple[int, int]) -> "MultiPoly":
        return cls.const(1, dims)

    @classmethod
    def monomial(
        cls,
        dims: Tuple[int, int],
        powers: Mapping[VarId, int],
        coeff: PiCoeff | Scalar = 1,
    ) -> "MultiPoly":
        exp = [0] * (2 * dims[0] + 2 * dims[1])
        for var, power in powers.items():
            exp[cls._position(dims, var)] += int(power)
        return cls(dims, {tuple(exp): coeff})

    @classmethod
    def var(cls, var: VarId, dims: Tuple[int, int]) -> "MultiPoly":
        return cls.monomial(dims, {var: 1})

    @classmethod
    def from_blocks(
        cls,
        dims: Tuple[int, int],
        blocks: Mapping[VarFamily, Sequence[int]],
        coeff: PiCoeff | Scalar = 1,
    ) -> "MultiPoly":
        """Monomial from per-family exponent vectors (missing families are 0)."""
        sizes = _family_sizes(dims)
        exp: List[int] = []
        for fam in FAMILY_ORDER:
            block = list(blocks.get(fam, [0] * sizes[fam]))
            if len(block) != sizes[fam]:
                raise DimensionError(f"block {fam.value} has {len(block)} entries, expected {sizes[fam]}")
            exp.extend(block)
        return cls(dims, {tuple(exp): coeff})

    @staticmethod
    def _position(dims: Tuple[int, int], var: VarId) -> int:
        sizes = _family_sizes(dims)
        if not 0 <= var.index < sizes[var.family]:
            raise UnknownVariableError(f"variable {var} is not defined for dims {dims}")
        return _family_offsets(dims)[var.family] + var.index

    # structure

    @property
    def nvars(self) -> int:
        return 2 * self.dims[0] + 2 * self.dims[1]

    @property
    def terms(self) -> Dict[Exponent, PiCoeff]:
        return dict(self._terms)

    def items(self) -> Iterable[Tuple[Exponent, PiCoeff]]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def variables(self) -> List[VarId]:
        return [VarId(fam, i) for fam in FAMILY_ORDER for i in range(_family_sizes(self.dims)[fam])]

    def split(self, exp: Exponent) -> Dict[VarFamily, Exponent]:
        offsets, sizes = _family_offsets(self.dims), _family_sizes(self.dims)
        return {fam: tuple(exp[offsets[fam]: offsets[fam] + sizes[fam]]) for fam in FAMILY_ORDER}

    def support(self) -> Dict[VarFamily, set]:
        """Indices with a nonzero exponent, per family."""
        used: Dict[VarFamily, set] = {fam: set() for fam in FAMILY_ORDER}
        for exp, _ in self._terms:
            for fam, block in self.split(exp).items():
                used[fam].update(i for i, e in enumerate(block) if e)
        return used

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(exp) for exp, _ in self._terms)

    def parity(self) -> Parity:
        parities = {Parity.of_degree(sum(exp)) for exp, _ in self._terms}
        if len(parities) > 1:
            return Parity.NEITHER
        return parities.pop() if parities else Parity.EVEN

    def has_parity(self, parity: Parity) -> bool:
        return self.is_zero() or self.parity() == parity

    def min_pi_exponent(self) -> Optional[int]:
        if not self._terms:
            return None
        return min(c.min_exponent() for _, c in self._terms)

    # ring operations

    def _check_dims(self, other: "MultiPoly") -> None:
        if self.dims != other.dims:
            raise DimensionError(f"variable families differ: {self.dims} vs {other.dims}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.dims == other.dims and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.dims, self._terms))

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_dims(other)
        merged = dict(self._terms)
        for exp, c in other._terms:
            merged[exp] = merged[exp] + c if exp in merged else c
        return MultiPoly(self.dims, merged)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.dims, {exp: -c for exp, c in self._terms})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly | PiCoeff | Scalar") -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check_dims(other)
        out: Dict[Exponent, PiCoeff] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                exp = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                out[exp] = out[exp] + prod if exp in out else prod
        return MultiPoly(self.dims, out)

    def __rmul__(self, other: PiCoeff | Scalar) -> "MultiPoly":
        return self.scale(other)

    def scale(self, factor: PiCoeff | Scalar) -> "MultiPoly":
        factor = PiCoeff.of(factor)
        return MultiPoly(self.dims, {exp: c * factor for exp, c in self._terms})

    def conjugate_coefficients(self) -> "MultiPoly":
        return MultiPoly(self.dims, {exp: c.conjugate() for exp, c in self._terms})

    def relabel(
        self,
        mapping: Mapping[VarFamily, VarFamily],
        dims: Optional[Tuple[int, int]] = None,
        shift: Optional[Mapping[VarFamily, int]] = None,
    ) -> "MultiPoly":
        """Substitute-rename: move families onto other families.

        Families missing from ``mapping`` stay where they are. Several
        families mapped onto one target multiply (their exponents add).
        ``shift`` offsets the variable index inside the target family.
        """
        dims = dims if dims is not None else self.dims
        target_sizes = _family_sizes(dims)
        target_offsets = _family_offsets(dims)
        shift = shift or {}
        out: Dict[Exponent, PiCoeff] = {}
        for exp, c in self._terms:
            new = [0] * (2 * dims[0] + 2 * dims[1])
            for fam, block in self.split(exp).items():
                target = mapping.get(fam, fam)
                offset = shift.get(fam, 0)
                for i, e in enumerate(block):
                    if not e:
                        continue
                    j = i + offset
                    if j >= target_sizes[target]:
                        raise DimensionError(
                            f"cannot place {VarId(fam, i)} into family {target.value} of size {target_sizes[target]}"
                        )
                    new[target_offsets[target] + j] += e
            key = tuple(new)
            out[key] = out[key] + c if key in out else c
        return MultiPoly(dims, out)

    def conj_swap(self) -> "MultiPoly":
        """Adjoint amplitude: A*(Z, Z') = conj(A(Z', Z))."""
        swapped = self.relabel(_SWAP_ARGUMENTS, dims=(self.dims[1], self.dims[0]))
        partner = {fam: fam.partner for fam in FAMILY_ORDER}
        return swapped.relabel(partner).conjugate_coefficients()

    def diff(self, var: VarId, order: int = 1) -> "MultiPoly":
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        pos = self._position(self.dims, var)
        out: Dict[Exponent, PiCoeff] = {}
        for exp, c in self._terms:
            e = exp[pos]
            if e < order:
                continue
            factor = math.factorial(e) // math.factorial(e - order)
            new = list(exp)
            new[pos] = e - order
            key = tuple(new)
            term = c * factor
            out[key] = out[key] + term if key in out else term
        return MultiPoly(self.dims, out)

    # evaluation

    @cached_property
    def _compiled(self) -> Tuple[np.ndarray, np.ndarray]:
        exps = np.array([exp for exp, _ in self._terms], dtype=np.int64).reshape(len(self._terms), self.nvars)
        coeffs = np.array([c.to_complex() for _, c in self._terms], dtype=np.complex128)
        return exps, coeffs

    def assignment_vector(self, point: Mapping[VarId, complex]) -> np.ndarray:
        """Full variable vector; zb defaults to conj of its z partner."""
        used = self.support()
        values = np.zeros(self.nvars, dtype=np.complex128)
        for var in self.variables():
            pos = self._position(self.dims, var)
            if var in point:
                values[pos] = point[var]
                continue
            partner = VarId(var.family.partner, var.index)
            if var.family in (VarFamily.ZB, VarFamily.ZBP) and partner in point:
                values[pos] = np.conj(point[partner])
            elif var.index in used[var.family]:
                raise EvaluationError(f"no value assigned to {var}")
        return values

    def evaluate(self, point: Mapping[VarId, complex]) -> complex:
        return complex(self.evaluate_vectors(self.assignment_vector(point)[None, :])[0])

    def evaluate_at(self, z: Sequence[complex], zp: Sequence[complex] = ()) -> complex:
        """Evaluate with zb = conj(z) and zb' = conj(z')."""
        return complex(self.evaluate_points(np.asarray([z], dtype=complex), np.asarray([zp], dtype=complex))[0])

    def evaluate_points(self, z: np.ndarray, zp: np.ndarray) -> np.ndarray:
        """Vectorized evaluation at conjugation-consistent point pairs.

        ``z`` has shape (npts, n1), ``zp`` shape (npts, n2).
        """
        z, zp = paired_points(z, zp, self.dims)
        values = np.concatenate([z, np.conj(z), zp, np.conj(zp)], axis=1)
        return self.evaluate_vectors(values)

    def evaluate_vectors(self, values: np.ndarray) -> np.ndarray:
        exps, coeffs = self._compiled
        if exps.shape[0] == 0:
            return np.zeros(values.shape[0], dtype=np.complex128)
        base = values[:, None, :]
        powers = np.prod(np.where(exps[None, :, :] == 0, 1.0, base ** exps[None, :, :]), axis=2)
        return powers @ coeffs

    # serialization

    def _monomial_text(self, exp: Exponent) -> str:
        factors = []
        for fam, block in self.split(exp).items():
            for i, e in enumerate(block):
                if e == 1:
                    factors.append(f"{fam.value}{i + 1}")
                elif e > 1:
                    factors.append(f"{fam.value}{i + 1}^{e}")
        return "*".join(factors)

    def canonical_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exp, c in self._terms:
            mono = self._monomial_text(exp)
            coeff = " + ".join(f"{g}·pi^{j}" for j, g in c.items())
            parts.append(f"[{coeff}]" + (f"·{mono}" if mono else ""))
        return " + ".join(parts)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exp, c in self._terms:
            mono = self._monomial_text(exp)
            coeff = c.pretty()
            if not mono:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(mono)
            elif coeff == "-1":
                parts.append(f"-{mono}")
            elif " + " in coeff:
                parts.append(f"({coeff})*{mono}")
            else:
                parts.append(f"{coeff}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MultiPoly(dims={self.dims}, {self})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dims": list(self.dims),
            "terms": [
                {
                    "exponent": list(exp),
                    "coeff": {str(j): [str(g.re), str(g.im)] for j, g in c.items()},
                }
                for exp, c in self._terms
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "MultiPoly":
        terms = {}
        for item in data["terms"]:
            coeff = PiCoeff(
                {int(j): GaussianRational(Fraction(re), Fraction(im)) for j, (re, im) in item["coeff"].items()}
            )
            terms[tuple(item["exponent"])] = coeff
        return cls(tuple(data["dims"]), terms)


def as_point_array(values: Any, d: int) -> np.ndarray:
    """Shape a single point or a stack of points as (npts, d)."""
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim <= 1:
        return arr.reshape(1, d)
    return arr.reshape(arr.shape[0], d)


def paired_points(z: Any, zp: Any, dims: Tuple[int, int]) -> Tuple[np.ndarray, np.ndarray]:
    """Broadcast first/second arguments to a common number of points."""
    z = as_point_array(z, dims[0])
    zp = as_point_array(zp, dims[1])
    npts = max(z.shape[0], zp.shape[0])
    if z.shape[0] != npts:
        z = np.broadcast_to(z, (npts, dims[0]))
    if zp.shape[0] != npts:
        zp = np.broadcast_to(zp, (npts, dims[1]))
    return z, zp


def ring_op(a: MultiPoly, b: Any, which: RingOp | str) -> MultiPoly:
    """Dispatch a ring operation by name.

    ``b`` is a MultiPoly for add/mul, a coefficient for scale and a family
    mapping (optionally ``(mapping, dims)``) for substitute-rename.
    """
    which = RingOp(which)
    handlers: Dict[RingOp, Callable[[], MultiPoly]] = {
        RingOp.ADD: lambda: a + b,
        RingOp.MUL: lambda: a * b,
        RingOp.SCALE: lambda: a.scale(b),
        RingOp.RENAME: lambda: a.relabel(*b) if isinstance(b, tuple) else a.relabel(b),
    }
    return handlers[which]()


def poly_diff(a: MultiPoly, var: VarId, order: int = 1) -> MultiPoly:
    return a.diff(var, order)


def poly_eval(a: MultiPoly, point: Mapping[VarId, complex]) -> complex:
    return a.evaluate(point)


def multi_indices(d: int, k: int) -> List[Tuple[int, ...]]:
    """All beta in N^d with |beta| = k, sorted lexicographically."""
    if d == 0:
        return [()] if k == 0 else []
    out = [
        combo
        for combo in itertools.product(range(k + 1), repeat=d)
        if sum(combo) == k
    ]
    return sorted(out)


def multi_factorial(beta: Sequence[int]) -> int:
    return math.prod(math.factorial(b) for b in beta)
