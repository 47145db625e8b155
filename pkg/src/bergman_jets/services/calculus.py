"""Closed-form Gaussian integrals behind the composition of model kernels.

Every composition reduces to integrals over an intermediate variable W of

    A1(Z, W) A2(W, Z') exp(-pi|w|^2 + pi z_i wb_i + pi w_i zb'_i)

coordinate by coordinate. On coupled (tangential) coordinates the monomial
w^a wb^b integrates to sum_k a! b! / ((a-k)! (b-k)! k!) pi^-k z^(a-k) zb'^(b-k);
on uncoupled (normal) coordinates it gives the moment delta_ab a!/pi^a.
"""

from __future__ import annotations

import itertools
import logging
import math
from fractions import Fraction
from typing import Dict, List, Tuple

from ..core.coefficients import PiCoeff
from ..core.errors import DimensionError
from ..core.multipoly import Exponent, MultiPoly, VarFamily

logger = logging.getLogger(__name__)

RuleTerm = Tuple[int, int, PiCoeff]


class KernelCalculus:
    """Monomial rules and the reduction chain shared by all composition kinds."""

    def tangential_rule(self, a: int, b: int) -> List[RuleTerm]:
        """w^a wb^b against exp(pi z wb + pi w zb') -> [(z power, zb' power, coeff)]."""
        terms = []
        for k in range(min(a, b) + 1):
            c = Fraction(
                math.factorial(a) * math.factorial(b),
                math.factorial(a - k) * math.factorial(b - k) * math.factorial(k),
            )
            terms.append((a - k, b - k, PiCoeff.pi_power(-k, c)))
        return terms

    def normal_rule(self, a: int, b: int) -> PiCoeff:
        """Moment of w^a wb^b against exp(-pi|w|^2)."""
        if a != b:
            return PiCoeff()
        return PiCoeff.pi_power(-a, math.factorial(a))

    def integrate(
        self, wa: Exponent, wb: Exponent, coupled: int, d1: int, d2: int
    ) -> List[Tuple[Exponent, Exponent, PiCoeff]]:
        """Integrate prod_i w_i^wa_i wb_i^wb_i over C^len(wa).

        Returns (z exponent in C^d1, zb' exponent in C^d2, coefficient) triples.
        """
        normal = PiCoeff.const(1)
        for i in range(coupled, len(wa)):
            normal = normal * self.normal_rule(wa[i], wb[i])
            if normal.is_zero():
                return []
        options = [self.tangential_rule(wa[i], wb[i]) for i in range(coupled)]
        out: List[Tuple[Exponent, Exponent, PiCoeff]] = []
        for choice in itertools.product(*options):
            z_exp = [0] * d1
            zbp_exp = [0] * d2
            coeff = normal
            for i, (za, zb, c) in enumerate(choice):
                z_exp[i] = za
                zbp_exp[i] = zb
                coeff = coeff * c
            out.append((tuple(z_exp), tuple(zbp_exp), coeff))
        return out

    def compose_amplitudes(self, a1: MultiPoly, a2: MultiPoly, coupled: int) -> MultiPoly:
        """Amplitude of (A1 base1) o (A2 base2) over the intermediate space.

        Z-only factors of A1 and Z'-only factors of A2 pass through; the
        second argument of A1 and the first argument of A2 merge into W and
        are integrated out monomial by monomial.
        """
        d1, mid = a1.dims
        mid2, d2 = a2.dims
        if mid != mid2:
            raise DimensionError(f"intermediate dimensions differ: {mid} vs {mid2}")
        if coupled > min(d1, d2, mid):
            raise DimensionError(f"{coupled} coupled coordinates do not fit dims {a1.dims} -> {a2.dims}")
        cache: Dict[Tuple[Exponent, Exponent], List[Tuple[Exponent, Exponent, PiCoeff]]] = {}
        out: Dict[Exponent, PiCoeff] = {}
        for e1, c1 in a1.items():
            b1 = a1.split(e1)
            for e2, c2 in a2.items():
                b2 = a2.split(e2)
                wa = tuple(x + y for x, y in zip(b1[VarFamily.ZP], b2[VarFamily.Z]))
                wb = tuple(x + y for x, y in zip(b1[VarFamily.ZBP], b2[VarFamily.ZB]))
                key = (wa, wb)
                if key not in cache:
                    cache[key] = self.integrate(wa, wb, coupled, d1, d2)
                if not cache[key]:
                    continue
                outer = c1 * c2
                for z_exp, zbp_exp, coeff in cache[key]:
                    exp = (
                        tuple(x + y for x, y in zip(b1[VarFamily.Z], z_exp))
                        + b1[VarFamily.ZB]
                        + b2[VarFamily.ZP]
                        + tuple(x + y for x, y in zip(b2[VarFamily.ZBP], zbp_exp))
                    )
                    term = outer * coeff
                    out[exp] = out[exp] + term if exp in out else term
        logger.debug("composed %d x %d terms via %d distinct W-monomials", len(a1), len(a2), len(cache))
        return MultiPoly((d1, d2), out)
