"""Exact coefficient ring: Laurent polynomials in pi over Gaussian rationals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

Scalar = Union[int, Fraction, "GaussianRational"]


def _fraction_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class GaussianRational:
    """a + b*i with exact rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, value: Scalar | complex) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Rational)):
            return cls(Fraction(value))
        if isinstance(value, complex):
            re, im = value.real, value.imag
            if not (re.is_integer() and im.is_integer()):
                raise TypeError(f"Only integral complex literals are exact: {value!r}")
            return cls(Fraction(int(re)), Fraction(int(im)))
        raise TypeError(f"Cannot convert {type(value).__name__} to GaussianRational")

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other: Scalar) -> "GaussianRational":
        other = GaussianRational.of(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other: Scalar) -> "GaussianRational":
        return self + (-GaussianRational.of(other))

    def __rsub__(self, other: Scalar) -> "GaussianRational":
        return GaussianRational.of(other) - self

    def __mul__(self, other: Scalar) -> "GaussianRational":
        other = GaussianRational.of(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "GaussianRational":
        other = GaussianRational.of(other)
        denom = other.norm2()
        if denom == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / denom, num.im / denom)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        return f"({_fraction_text(self.re)} + {_fraction_text(self.im)} i)"


ONE = GaussianRational(Fraction(1))
ZERO = GaussianRational()


class PiCoeff:
    """Finite sum of c_j * pi^j with Gaussian-rational c_j.

    Stored terms never carry a zero coefficient; instances are immutable and
    hashable so they can key caches and be shared between workers.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | None = None):
        clean: Dict[int, GaussianRational] = {}
        for j, c in (terms or {}).items():
            c = GaussianRational.of(c)
            if not c.is_zero():
                clean[int(j)] = c
        self._terms: Tuple[Tuple[int, GaussianRational], ...] = tuple(sorted(clean.items()))
        self._hash = hash(self._terms)

    @classmethod
    def const(cls, value: Scalar) -> "PiCoeff":
        return cls({0: value})

    @classmethod
    def pi_power(cls, j: int, value: Scalar = 1) -> "PiCoeff":
        return cls({j: value})

    @classmethod
    def of(cls, value: "PiCoeff | Scalar") -> "PiCoeff":
        if isinstance(value, PiCoeff):
            return value
        return cls.const(value)

    @property
    def terms(self) -> Dict[int, GaussianRational]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[int, GaussianRational]]:
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def min_exponent(self) -> int:
        if not self._terms:
            raise ValueError("zero coefficient has no pi exponent")
        return self._terms[0][0]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = PiCoeff.const(other)
        if not isinstance(other, PiCoeff):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return self._hash

    def __add__(self, other: "PiCoeff | Scalar") -> "PiCoeff":
        other = PiCoeff.of(other)
        out = dict(self._terms)
        for j, c in other._terms:
            out[j] = out.get(j, ZERO) + c
        return PiCoeff(out)

    __radd__ = __add__

    def __neg__(self) -> "PiCoeff":
        return PiCoeff({j: -c for j, c in self._terms})

    def __sub__(self, other: "PiCoeff | Scalar") -> "PiCoeff":
        return self + (-PiCoeff.of(other))

    def __rsub__(self, other: "PiCoeff | Scalar") -> "PiCoeff":
        return PiCoeff.of(other) - self

    def __mul__(self, other: "PiCoeff | Scalar") -> "PiCoeff":
        other = PiCoeff.of(other)
        out: Dict[int, GaussianRational] = {}
        for j1, c1 in self._terms:
            for j2, c2 in other._terms:
                out[j1 + j2] = out.get(j1 + j2, ZERO) + c1 * c2
        return PiCoeff(out)

    __rmul__ = __mul__

    def conjugate(self) -> "PiCoeff":
        return PiCoeff({j: c.conjugate() for j, c in self._terms})

    def inverse(self) -> "PiCoeff":
        """Inverse of a single-term coefficient c*pi^j."""
        if not self.is_monomial():
            raise ZeroDivisionError("only single-term pi coefficients are invertible")
        (j, c), = self._terms
        return PiCoeff({-j: ONE / c})

    def __truediv__(self, other: "PiCoeff | Scalar") -> "PiCoeff":
        return self * PiCoeff.of(other).inverse()

    def to_complex(self, pi: float = math.pi) -> complex:
        return sum((complex(c) * pi**j for j, c in self._terms), 0j)

    def canonical_text(self) -> str:
        if not self._terms:
            return "(0 + 0 i)·pi^0"
        return " + ".join(f"{c}·pi^{j}" for j, c in self._terms)

    def pretty(self) -> str:
        """Compact text used by the kernel expression syntax."""
        if not self._terms:
            return "0"
        parts = [_pretty_term(j, c) for j, c in self._terms]
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PiCoeff({self.canonical_text()})"

    def __str__(self) -> str:
        return self.pretty()


def _pretty_scalar(c: GaussianRational) -> str:
    if c.im == 0:
        return _fraction_text(c.re)
    if c.re == 0:
        return "i" if c.im == 1 else f"{_fraction_text(c.im)}*i"
    return f"({_fraction_text(c.re)} + {_fraction_text(c.im)}*i)"


def _pretty_term(j: int, c: GaussianRational) -> str:
    scalar = _pretty_scalar(c)
    if j == 0:
        return scalar
    power = "pi" if j == 1 else f"pi^{j}"
    if scalar == "1":
        return power
    if scalar == "-1":
        return f"-{power}"
    return f"{scalar}*{power}"


def pi_sum(values: Iterable[PiCoeff]) -> PiCoeff:
    total = PiCoeff()
    for v in values:
        total = total + v
    return total
