"""Identity suite behind ``verify-model``.

Families of checks, each reported per parameter tuple:

* exact symbolic identities of the composition calculus
* symbolic compositions against the Gauss-Hermite oracle
* Fock-space matrix realizations on truncation-safe frames
* numeric model profiles against their own compositions on the rescaled grid
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from ..core.coefficients import GaussianRational, PiCoeff
from ..core.config import get_config
from ..core.errors import BergmanJetsError
from ..core.multipoly import MultiPoly, Parity
from ..routers.composition_router import CompositionRouter, PairKey
from .calculus import KernelCalculus
from .composition import compose_jets, compose_k_er, compose_k_ep, compose_k_re, get_router
from .analysis import model_self_test
from .fock_oracle import FockBasis, OperatorMatrix, default_bases, kernel_to_matrix, logbk_matrix
from .model_kernels import (
    BaseKind,
    JetKernel,
    KernelBase,
    LogBergmanKernel,
    ModelKind,
    PolyKernel,
    build_extension,
    build_model_kernel,
    build_perp,
    build_restriction,
    build_sub_identity,
    kernel_adjoint,
)
from .quadrature_oracle import QuadratureOracle, random_sample_pairs

logger = logging.getLogger(__name__)

SYMBOLIC_IDENTITIES = (
    "ext_res_is_perp",
    "res_adjoint_is_ext",
    "res_ext_reproduces",
    "ext_sub_is_ext",
    "perp_orthogonality",
    "mixed_order_annihilation",
    "bargmann_idempotent",
    "degree_parity_rule",
)
ORACLE_IDENTITIES = ("oracle_equivalence",)
PROFILE_IDENTITIES = ("model_profiles",)
PROFILE_TOL = 1e-9
FOCK_IDENTITIES = (
    "fock_perp_projector",
    "fock_completeness",
    "fock_logbk_projector",
    "fock_ext_res",
    "fock_reproducing",
    "fock_duality",
    "fock_minimality",
)


@dataclass
class IdentityCheck:
    """Outcome of one identity at one parameter tuple."""

    name: str
    params: Dict[str, Any]
    passed: bool
    max_error: float
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "params": dict(self.params),
            "passed": self.passed,
            "max_error": self.max_error,
            "detail": self.detail,
        }


@dataclass
class SuiteReport:
    checks: List[IdentityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[IdentityCheck]:
        return [c for c in self.checks if not c.passed]

    def by_name(self) -> Dict[str, Dict[str, Any]]:
        """Per-identity totals: count, failures and the largest error seen."""
        out: Dict[str, Dict[str, Any]] = {}
        for check in self.checks:
            row = out.setdefault(check.name, {"count": 0, "failed": 0, "max_error": 0.0})
            row["count"] += 1
            row["failed"] += 0 if check.passed else 1
            row["max_error"] = max(row["max_error"], check.max_error)
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "summary": self.by_name(),
            "checks": [c.to_dict() for c in self.checks],
        }


def _poly_gap(a: MultiPoly, b: MultiPoly) -> float:
    diff = a - b
    return max((abs(c.to_complex()) for _, c in diff.items()), default=0.0)


def kernel_gap(a: JetKernel, b: JetKernel) -> float:
    """Largest |coefficient| of a - b; inf if the kernels do not even share a shape."""
    if (a.base, a.normal_dim, a.row_order, a.col_order) != (b.base, b.normal_dim, b.row_order, b.col_order):
        return math.inf
    return max(
        (_poly_gap(x, y) for ra, rb in zip(a.entries, b.entries) for x, y in zip(ra, rb)),
        default=0.0,
    )


def matrix_gap(a: OperatorMatrix, b: OperatorMatrix) -> float:
    if a.rows != b.rows or a.cols != b.cols:
        return math.inf
    diff = a - b
    return max((abs(c.to_complex()) for c in diff.entries.values()), default=0.0)


def _exact_check(name: str, params: Dict[str, Any], gap: float, detail: str = "") -> IdentityCheck:
    return IdentityCheck(name, params, gap == 0.0, gap, detail)


def _profile_check(n: int, m: int, k: int, radius: float = 1.5, points: int = 5) -> IdentityCheck:
    stats = model_self_test(n, m, k, radius=radius, points=points)
    worst = max(s.sup for s in stats)
    detail = ", ".join(f"{s.kind} {s.sup:.1e}" for s in stats)
    return IdentityCheck("model_profiles", {"n": n, "m": m, "k": k}, worst <= PROFILE_TOL, worst, detail)


def random_amplitude(
    dims: Tuple[int, int],
    rng: np.random.Generator,
    max_degree: int = 4,
    terms: int = 3,
    parity: Optional[Parity] = None,
) -> MultiPoly:
    """
    Random exact amplitude with small Gaussian-integer coefficients.

    Args:
        dims: Argument dimensions of the amplitude
        rng: Source of randomness
        max_degree: Bound on the total degree of every monomial
        terms: Number of monomials drawn
        parity: Restrict to monomials of this parity

    Returns:
        A nonzero MultiPoly over ``dims``
    """
    nvars = 2 * dims[0] + 2 * dims[1]
    degrees = list(range(max_degree + 1)) if nvars else [0]
    if parity == Parity.EVEN:
        degrees = [d for d in degrees if d % 2 == 0]
    elif parity == Parity.ODD and nvars:
        degrees = [d for d in degrees if d % 2 == 1]
    out: Dict[Tuple[int, ...], PiCoeff] = {}
    while not out:
        for _ in range(terms):
            degree = int(rng.choice(degrees))
            exp = tuple(int(e) for e in rng.multinomial(degree, [1.0 / nvars] * nvars)) if nvars else ()
            re, im = (int(v) for v in rng.integers(-3, 4, size=2))
            coeff = PiCoeff.const(GaussianRational(Fraction(re), Fraction(im)))
            out[exp] = out[exp] + coeff if exp in out else coeff
        out = {e: c for e, c in out.items() if not c.is_zero()}
    return MultiPoly(dims, out)


def pair_bases(pair: PairKey, n: int, m: int) -> Tuple[KernelBase, KernelBase]:
    """Concrete left/right bases of one composition-table pair over (n, m)."""

    def make(kind: BaseKind) -> KernelBase:
        if kind == BaseKind.BARGMANN:
            return KernelBase.bargmann(n)
        if kind == BaseKind.SUB:
            return KernelBase.sub(m)
        return KernelBase(kind, n, m)

    return make(pair[0]), make(pair[1])


def dimension_pairs(n_max: int) -> List[Tuple[int, int]]:
    return [(n, m) for n in range(1, n_max + 1) for m in range(n)]


# symbolic identities


def _symbolic_checks(n: int, m: int, k: int, router: CompositionRouter) -> List[IdentityCheck]:
    params = {"n": n, "m": m, "k": k}
    ext, res = build_extension(n, m, k), build_restriction(n, m, k)
    sub = build_sub_identity(m, n - m, k)
    scale = PiCoeff.pi_power(k, Fraction(2**k * math.factorial(k)))
    return [
        _exact_check("ext_res_is_perp", params, kernel_gap(compose_k_er(ext, res, router), build_perp(n, m, k))),
        _exact_check("res_adjoint_is_ext", params, kernel_gap(kernel_adjoint(res), ext.scale(scale))),
        _exact_check("res_ext_reproduces", params, kernel_gap(compose_k_re(res, ext, router), sub)),
        _exact_check("ext_sub_is_ext", params, kernel_gap(compose_k_ep(ext, sub, router), ext)),
    ]


def _orthogonality_checks(n: int, m: int, k_max: int, router: CompositionRouter) -> List[IdentityCheck]:
    out = []
    perps = [build_perp(n, m, l) for l in range(k_max + 1)]
    zero = perps[0].scale(0)
    for j, l in itertools.product(range(k_max + 1), repeat=2):
        target = perps[j] if j == l else zero
        gap = kernel_gap(compose_jets(perps[j], perps[l], router), target)
        out.append(_exact_check("perp_orthogonality", {"n": n, "m": m, "j": j, "l": l}, gap))
        if j != l:
            composed = compose_jets(build_restriction(n, m, l), build_extension(n, m, j), router)
            gap = kernel_gap(composed, composed.scale(0))
            out.append(_exact_check("mixed_order_annihilation", {"n": n, "m": m, "j": j, "l": l}, gap))
    return out


def _degree_parity_checks(
    n: int, m: int, router: CompositionRouter, rng: np.random.Generator, rounds: int = 2
) -> List[IdentityCheck]:
    out = []
    for pair in router.supported_pairs():
        left, right = pair_bases(pair, n, m)
        worst, detail = 0, ""
        for _ in range(rounds):
            p1, p2 = (Parity.EVEN if rng.integers(2) else Parity.ODD for _ in range(2))
            a1 = random_amplitude(left.amplitude_dims, rng, parity=p1)
            a2 = random_amplitude(right.amplitude_dims, rng, parity=p2)
            composed = router.route(PolyKernel(left, a1), PolyKernel(right, a2)).unwrap().amplitude
            excess = composed.degree() - (a1.degree() + a2.degree())
            expected = a1.parity().times(a2.parity())
            if excess > 0:
                worst, detail = max(worst, excess), f"degree exceeds the sum by {excess}"
            elif not composed.has_parity(expected):
                worst, detail = max(worst, 1), f"parity {composed.parity().value}, expected {expected.value}"
        params = {"n": n, "m": m, "pair": f"{pair[0].value}*{pair[1].value}"}
        out.append(IdentityCheck("degree_parity_rule", params, worst == 0, float(worst), detail))
    return out


# oracle comparison


def _oracle_checks(
    n: int,
    m: int,
    router: CompositionRouter,
    oracle: QuadratureOracle,
    rng: np.random.Generator,
    samples: int,
    seed: int,
    tol: float,
) -> List[IdentityCheck]:
    out = []
    for pair in router.supported_pairs():
        left, right = pair_bases(pair, n, m)
        k1 = PolyKernel(left, random_amplitude(left.amplitude_dims, rng))
        k2 = PolyKernel(right, random_amplitude(right.amplitude_dims, rng))
        params = {"n": n, "m": m, "pair": f"{pair[0].value}*{pair[1].value}"}
        try:
            composed = router.route(k1, k2).unwrap()
            worst = 0.0
            for z, zp in random_sample_pairs(composed.base.amplitude_dims, samples, seed):
                exact = composed.evaluate(z, zp)
                numeric = oracle.compose_value(k1, k2, z, zp)
                worst = max(worst, abs(exact - numeric) / max(1.0, abs(numeric)))
        except BergmanJetsError as e:
            out.append(IdentityCheck("oracle_equivalence", params, False, math.inf, str(e)))
            continue
        out.append(IdentityCheck("oracle_equivalence", params, worst <= tol, worst))
    return out


# Fock realizations


def _fock_checks(n: int, m: int, k: int, cutoff: int) -> List[IdentityCheck]:
    params = {"n": n, "m": m, "k": k, "cutoff": cutoff}
    ext, res = build_extension(n, m, k), build_restriction(n, m, k)
    perp = build_perp(n, m, k)
    m_ext = kernel_to_matrix(ext, *default_bases(ext, cutoff))
    m_res = kernel_to_matrix(res, *default_bases(res, cutoff))
    m_perp = kernel_to_matrix(perp, *default_bases(perp, cutoff))
    sub = build_sub_identity(m, n - m, k)
    m_sub = kernel_to_matrix(sub, *default_bases(sub, cutoff))
    scale = PiCoeff.pi_power(k, Fraction(2**k * math.factorial(k)))

    checks = [
        _exact_check(
            "fock_perp_projector",
            params,
            max(matrix_gap(m_perp @ m_perp, m_perp), matrix_gap(m_perp.adjoint(), m_perp)),
        ),
        _exact_check("fock_ext_res", params, matrix_gap(m_ext @ m_res, m_perp)),
        _exact_check("fock_reproducing", params, matrix_gap(m_res @ m_ext, m_sub)),
        _exact_check("fock_duality", params, matrix_gap(m_res.adjoint(), m_ext.scale(scale))),
    ]

    # E g has no monomial divisible by z_N^{k+1}
    spill = [
        abs(c.to_complex()) for (i, _), c in m_ext.entries.items() if sum(m_ext.rows.items[i][0][m:]) > k
    ]
    checks.append(_exact_check("fock_minimality", params, max(spill, default=0.0)))

    logbk = logbk_matrix(LogBergmanKernel(n, m, k), cutoff)
    gap = max(matrix_gap(logbk @ logbk, logbk), matrix_gap(logbk.adjoint(), logbk))
    checks.append(_exact_check("fock_logbk_projector", params, gap))
    return checks


def _fock_completeness(n: int, m: int, cutoff: int) -> IdentityCheck:
    """sum_{l <= D} Pperp^l is the identity on monomials of degree <= D."""
    basis = FockBasis(n, cutoff)
    bargmann = build_model_kernel(ModelKind.P, n, m, 0)
    total = kernel_to_matrix(bargmann, basis, basis).scale(0)
    for l in range(cutoff + 1):
        total = total + kernel_to_matrix(build_perp(n, m, l), basis, basis)
    gap = matrix_gap(total, kernel_to_matrix(bargmann, basis, basis))
    return _exact_check("fock_completeness", {"n": n, "m": m, "cutoff": cutoff}, gap)


def run_identity_suite(
    n_max: int = 3,
    k_max: int = 3,
    calculus: Optional[KernelCalculus] = None,
    cutoff: Optional[int] = None,
    oracle_samples: int = 20,
    seed: Optional[int] = None,
    gh_order: Optional[int] = None,
    families: Iterable[str] = ("symbolic", "oracle", "fock", "profile"),
) -> SuiteReport:
    """
    Run every model identity for n <= n_max, m < n, k <= k_max.

    Args:
        n_max: Largest ambient dimension
        k_max: Largest jet order; 0 keeps only the order-zero identities
        calculus: Monomial rules to verify (default: the closed-form rules)
        cutoff: Fock truncation degree (default BJ_FOCK_CUTOFF)
        oracle_samples: Random point pairs per oracle comparison
        seed: Seed of the random amplitudes and points (default BJ_SEED)
        gh_order: Gauss-Hermite order of the oracle (default BJ_GH_ORDER)
        families: Subset of "symbolic", "oracle", "fock", "profile"

    Returns:
        SuiteReport with one IdentityCheck per identity and parameter tuple
    """
    config = get_config()
    cutoff = config.fock_cutoff if cutoff is None else cutoff
    seed = config.seed if seed is None else seed
    families = set(families)
    router = get_router(calculus) if calculus is not None else get_router()
    rng = np.random.default_rng(seed)
    report = SuiteReport()

    for n, m in dimension_pairs(n_max):
        if "symbolic" in families:
            for k in range(k_max + 1):
                report.checks.extend(_symbolic_checks(n, m, k, router))
            report.checks.extend(_orthogonality_checks(n, m, k_max, router))
            bargmann = build_model_kernel(ModelKind.P, n, m, 0)
            gap = kernel_gap(compose_jets(bargmann, bargmann, router), bargmann)
            report.checks.append(_exact_check("bargmann_idempotent", {"n": n, "m": m}, gap))
            report.checks.extend(_degree_parity_checks(n, m, router, rng))
        if "oracle" in families:
            oracle = QuadratureOracle(gh_order or config.gh_order)
            report.checks.extend(
                _oracle_checks(n, m, router, oracle, rng, oracle_samples, seed, config.oracle_tol)
            )
        if "fock" in families:
            for k in range(min(k_max, cutoff) + 1):
                report.checks.extend(_fock_checks(n, m, k, cutoff))
            report.checks.append(_fock_completeness(n, m, cutoff))
        if "profile" in families:
            for k in range(k_max + 1):
                report.checks.append(_profile_check(n, m, k))

    for check in report.failures():
        logger.warning("identity %s failed at %s: max error %.3e %s", check.name, check.params, check.max_error, check.detail)
    logger.info("identity suite: %d checks, %d failed", len(report.checks), len(report.failures()))
    return report
