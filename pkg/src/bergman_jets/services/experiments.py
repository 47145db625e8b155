"""Named projective experiments: sweeps over p, report rows and acceptance lines."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .. import __version__
from ..core.errors import FitError, PreconditionError, ResourceCapError
from .analysis import ProfileKind, normal_extension_profile, profile_compare
from .extension import bergman_and_logbk_eval, get_problem, jet_map_and_isometry, peak_section
from .fitting import decay_fit, trend_fit
from .projective_space import normal_to_chart
from .submanifolds import SubmanifoldSpec, YKind

logger = logging.getLogger(__name__)

EXPERIMENTS = ("peak-cp1", "line-cp2", "conic-cp2", "logbk-decay", "isometry")
P_CAPS = {1: 40, 2: 24}
JET_CONSTRAINT_TOL = 1e-10
SLOPE_TOL = 0.3
FINAL_RATIO_TOL = 0.2


@dataclass(frozen=True)
class ExperimentParams:
    """Everything a sweep needs; frozen so it can be shipped to worker processes."""

    name: str
    p_values: Tuple[int, ...]
    k: int = 0
    y_kind: Optional[str] = None
    eps: Optional[float] = None
    seed: int = 12345
    distance: float = 0.3
    samples: int = 4
    workers: int = 1

    def submanifold(self) -> SubmanifoldSpec:
        if self.name in ("peak-cp1", "logbk-decay"):
            return SubmanifoldSpec.point(1)
        if self.name == "line-cp2":
            return SubmanifoldSpec.linear()
        if self.name == "conic-cp2":
            return SubmanifoldSpec.conic()
        if self.name == "isometry":
            kind = YKind(self.y_kind or YKind.LINEAR.value)
            return SubmanifoldSpec.from_name(kind.value, 1 if kind == YKind.POINT else 2)
        raise PreconditionError(f"unknown experiment {self.name!r}, expected one of {EXPERIMENTS}")


@dataclass
class ReportRow:
    p: int
    quantity: str
    value: float
    target: Optional[float] = None
    ratio: Optional[float] = None
    notes: str = ""

    def __post_init__(self):
        if self.ratio is None and self.target:
            self.ratio = self.value / self.target


@dataclass
class AcceptanceLine:
    criterion: str
    passed: bool
    value: float
    target: str
    qualitative: bool = False

    def text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tag = " [qualitative]" if self.qualitative else ""
        return f"{status} {self.criterion} {self.value:.4g} (target {self.target}){tag}"


@dataclass
class ExperimentReport:
    experiment: str
    config: Dict[str, Any]
    rows: List[ReportRow] = field(default_factory=list)
    fits: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    acceptance: List[AcceptanceLine] = field(default_factory=list)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(line.passed for line in self.acceptance)

    def series(self, quantity: str) -> List[Tuple[int, float]]:
        return [(row.p, row.value) for row in self.rows if row.quantity == quantity]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "experiment": self.experiment,
            "version": self.version,
            "config": self.config,
            "rows": [asdict(row) for row in self.rows],
            "fits": self.fits,
            "acceptance": [line.text() for line in self.acceptance],
            "passed": self.passed,
        }


def check_caps(params: ExperimentParams) -> SubmanifoldSpec:
    """
    Reject sweeps outside the desk-scale ranges.

    Raises:
        PreconditionError: On an empty p-range or an unknown experiment
        ResourceCapError: If some p exceeds the cap of the ambient space
    """
    spec = params.submanifold()
    if not params.p_values:
        raise PreconditionError("empty p-range")
    if params.k < 0:
        raise PreconditionError(f"jet order must be nonnegative, got {params.k}")
    cap = P_CAPS[spec.n]
    bad = [p for p in params.p_values if p < 1 or p > cap]
    if bad:
        raise ResourceCapError(
            f"p values {bad} outside 1..{cap} on CP^{spec.n}; shorten the range or run a coarser step"
        )
    return spec


# per-p measurements


def _peak_rows(params: ExperimentParams, p: int) -> List[ReportRow]:
    rows = []
    for k in range(params.k + 1):
        section = peak_section(np.zeros(1), k, p, [1.0])
        rows.append(ReportRow(p, f"lower_jets[k={k}]", section.lower_jets, 0.0, notes="vanishing of lower jets at the peak"))
        rows.append(
            ReportRow(p, f"profile_deviation[k={k}]", section.profile_deviation, 0.0, notes="Gaussian peak profile")
        )
    return rows


def _isometry_deviation(spec: SubmanifoldSpec, k: int, p: int, samples: int, seed: int) -> Tuple[float, float]:
    """Mean ratio and largest |ratio - 1| of the jet map over random sections."""
    dim = get_problem(spec, k, p).dim
    rng = np.random.default_rng([seed, p, k])
    ratios = []
    for _ in range(samples):
        f = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        result = jet_map_and_isometry(spec, k, p, f)
        if result.ratio is not None:
            ratios.append(result.ratio)
    if not ratios:
        return math.nan, math.nan
    return float(np.mean(ratios)), float(max(abs(r - 1.0) for r in ratios))


def _extension_rows(params: ExperimentParams, spec: SubmanifoldSpec, p: int, k: int) -> List[ReportRow]:
    problem = get_problem(spec, k, p)
    problem.require_surjective()
    residuals = problem.identity_residuals()
    return [
        ReportRow(p, f"norm_ratio[k={k}]", problem.model_norm_ratio(), 1.0, notes="extension norm against the model"),
        ReportRow(p, f"defect_deviation[k={k}]", problem.model_defect_deviation(), 0.0, notes="multiplicative defect"),
        ReportRow(
            p, f"identity_residual[k={k}]", max(residuals.values()), 0.0, notes="R E = I, R* = E A, E*E = A^-*, R R* = A"
        ),
        ReportRow(p, f"defining_relation[k={k}]", residuals["res_e_identity"], 0.0, notes="Res E = identity on jets"),
    ]


def _profile_row(params: ExperimentParams, spec: SubmanifoldSpec, p: int) -> ReportRow:
    stats, _ = profile_compare(ProfileKind.E, spec, 0, p, eps=params.eps)
    return ReportRow(p, f"profile_E[{spec.kind.value}]", stats.sup, 0.0, notes="rescaled extension kernel profile")


def _normal_profile_row(params: ExperimentParams, spec: SubmanifoldSpec, p: int) -> ReportRow:
    stats, _ = normal_extension_profile(spec, p, eps=params.eps)
    return ReportRow(p, f"extension_profile[{spec.kind.value}]", stats.sup, 0.0, notes="normal decay in coordinates adapted to Y")


def _line_rows(params: ExperimentParams, p: int) -> List[ReportRow]:
    spec = SubmanifoldSpec.linear()
    rows = []
    for k in range(params.k + 1):
        rows.extend(_extension_rows(params, spec, p, k))
        mean, worst = _isometry_deviation(spec, k, p, params.samples, params.seed)
        rows.append(ReportRow(p, f"isometry_ratio[k={k}]", mean, 1.0, notes="jet map isometry"))
        rows.append(ReportRow(p, f"isometry_deviation[k={k}]", worst, 0.0, notes="jet map isometry"))
    rows.append(_profile_row(params, spec, p))
    rows.append(_normal_profile_row(params, spec, p))
    return rows


def _conic_rows(params: ExperimentParams, p: int) -> List[ReportRow]:
    rows = []
    for k in range(params.k + 1):
        rows.extend(_extension_rows(params, SubmanifoldSpec.conic(), p, k))
    rows.append(_profile_row(params, SubmanifoldSpec.conic(), p))
    rows.append(_profile_row(params, SubmanifoldSpec.linear(), p))
    rows.append(_normal_profile_row(params, SubmanifoldSpec.conic(), p))
    rows.append(_normal_profile_row(params, SubmanifoldSpec.linear(), p))
    return rows


def _logbk_rows(params: ExperimentParams, p: int) -> List[ReportRow]:
    spec = SubmanifoldSpec.point(1)
    x = normal_to_chart(np.array([[params.distance]]))
    rows = []
    for k in range(1, params.k + 1):
        problem = get_problem(spec, k, p)
        near = float(problem.near_y_kernel(x)[0].real)
        log_bergman = complex(bergman_and_logbk_eval(spec, k, p, x, x).log_bergman[0])
        rows.append(
            ReportRow(p, f"near_y_kernel[k={k}]", near, notes=f"B^X - B^(X,kY) on the diagonal at distance {params.distance}")
        )
        rows.append(ReportRow(p, f"log_bergman[k={k}]", abs(log_bergman), notes="B^(X,kY) on the diagonal"))
    return rows


def _isometry_rows(params: ExperimentParams, p: int) -> List[ReportRow]:
    spec = params.submanifold()
    get_problem(spec, params.k, p).require_surjective()
    mean, worst = _isometry_deviation(spec, params.k, p, params.samples, params.seed)
    return [
        ReportRow(p, "isometry_ratio", mean, 1.0, notes="jet map isometry"),
        ReportRow(p, "isometry_deviation", worst, 0.0, notes="jet map isometry"),
    ]


_POINT_RUNNERS: Dict[str, Callable[[ExperimentParams, int], List[ReportRow]]] = {
    "peak-cp1": _peak_rows,
    "line-cp2": _line_rows,
    "conic-cp2": _conic_rows,
    "logbk-decay": _logbk_rows,
    "isometry": _isometry_rows,
}


def _run_point(params: ExperimentParams, p: int) -> List[ReportRow]:
    logger.info("%s: p=%d started", params.name, p)
    rows = _POINT_RUNNERS[params.name](params, p)
    logger.info("%s: p=%d finished (%d rows)", params.name, p, len(rows))
    return rows


def sweep(params: ExperimentParams) -> List[ReportRow]:
    """Measure every p, in a process pool when workers > 1; rows come back ordered by p."""
    p_values = sorted(set(params.p_values))
    if params.workers > 1 and len(p_values) > 1:
        with ProcessPoolExecutor(max_workers=params.workers) as pool:
            chunks = list(pool.map(_run_point, [params] * len(p_values), p_values))
    else:
        chunks = [_run_point(params, p) for p in p_values]
    return [row for chunk in chunks for row in chunk]


# acceptance


def _fit_line(report: ExperimentReport, key: str, series: Sequence[Tuple[int, float]], target: float, label: str) -> AcceptanceLine:
    try:
        fit = trend_fit(series)
    except FitError as e:
        logger.warning("%s: %s", label, e)
        return AcceptanceLine(label, False, math.nan, f"{target:+.1f} +- {SLOPE_TOL}")
    report.fits[key] = fit.to_dict()
    return AcceptanceLine(label, abs(fit.exponent - target) <= SLOPE_TOL, fit.exponent, f"{target:+.1f} +- {SLOPE_TOL}")


def _approaches_one(series: Sequence[Tuple[int, float]]) -> Tuple[bool, float]:
    """|r - 1| nonincreasing over the top half of the range, and the final |r - 1|."""
    deviations = [abs(v - 1.0) for _, v in sorted(series)]
    top = deviations[len(deviations) // 2 :]
    monotone = all(b <= a + 1e-12 for a, b in zip(top, top[1:]))
    final = deviations[-1]
    return monotone and final < FINAL_RATIO_TOL, final


def _accept_peak(report: ExperimentReport, params: ExperimentParams) -> None:
    for k in range(params.k + 1):
        lower = max(v for _, v in report.series(f"lower_jets[k={k}]"))
        report.acceptance.append(
            AcceptanceLine(f"peak jet constraints k={k}", lower <= JET_CONSTRAINT_TOL, lower, f"<= {JET_CONSTRAINT_TOL:g}")
        )
        report.acceptance.append(
            _fit_line(report, f"profile_deviation[k={k}]", report.series(f"profile_deviation[k={k}]"), -1.0, f"peak profile exponent k={k}")
        )


def _accept_defining_relation(report: ExperimentReport, params: ExperimentParams) -> None:
    for k in range(params.k + 1):
        worst = max(v for _, v in report.series(f"defining_relation[k={k}]"))
        report.acceptance.append(
            AcceptanceLine(f"defining relation k={k}", worst <= JET_CONSTRAINT_TOL, worst, f"<= {JET_CONSTRAINT_TOL:g}")
        )


def _accept_extension(report: ExperimentReport, params: ExperimentParams, with_isometry: bool) -> None:
    for k in range(params.k + 1):
        ok, final = _approaches_one(report.series(f"norm_ratio[k={k}]"))
        report.acceptance.append(AcceptanceLine(f"extension norm ratio k={k}", ok, final, f"monotone, final |r-1| < {FINAL_RATIO_TOL}"))
        report.acceptance.append(
            _fit_line(report, f"defect_deviation[k={k}]", report.series(f"defect_deviation[k={k}]"), -1.0, f"defect exponent k={k}")
        )
        if with_isometry:
            report.acceptance.append(
                _fit_line(
                    report,
                    f"isometry_deviation[k={k}]",
                    report.series(f"isometry_deviation[k={k}]"),
                    -1.0,
                    f"jet isometry exponent k={k}",
                )
            )


def _accept_line(report: ExperimentReport, params: ExperimentParams) -> None:
    _accept_defining_relation(report, params)
    _accept_extension(report, params, with_isometry=True)


def _accept_conic(report: ExperimentReport, params: ExperimentParams) -> None:
    _accept_defining_relation(report, params)
    try:
        linear = trend_fit(report.series("extension_profile[linear]"))
        conic = trend_fit(report.series("extension_profile[conic]"))
    except FitError as e:
        logger.warning("geodesic contrast: %s", e)
        report.acceptance.append(AcceptanceLine("geodesic contrast", False, math.nan, "<= -0.3", qualitative=True))
        return
    report.fits["extension_profile[linear]"] = linear.to_dict()
    report.fits["extension_profile[conic]"] = conic.to_dict()
    gap = linear.exponent - conic.exponent
    report.acceptance.append(AcceptanceLine("geodesic contrast", gap <= -SLOPE_TOL, gap, f"<= {-SLOPE_TOL}", qualitative=True))


def _accept_logbk(report: ExperimentReport, params: ExperimentParams) -> None:
    for k in range(1, params.k + 1):
        label = f"log-Bergman decay k={k}"
        series = report.series(f"near_y_kernel[k={k}]")
        try:
            fit = decay_fit((p, params.distance, value) for p, value in series)
        except FitError as e:
            logger.warning("%s: %s", label, e)
            report.acceptance.append(AcceptanceLine(label, False, math.nan, "slope < 0, R^2 > 0.95"))
            continue
        report.fits[f"near_y_kernel[k={k}]"] = fit.to_dict()
        report.acceptance.append(AcceptanceLine(label, fit.slope < 0 and fit.r2 > 0.95, fit.r2, "slope < 0, R^2 > 0.95"))


def _accept_isometry(report: ExperimentReport, params: ExperimentParams) -> None:
    ok, final = _approaches_one(report.series("isometry_ratio"))
    report.acceptance.append(AcceptanceLine(f"jet isometry ratio k={params.k}", ok, final, f"final |r-1| < {FINAL_RATIO_TOL}"))
    report.acceptance.append(
        _fit_line(report, "isometry_deviation", report.series("isometry_deviation"), -1.0, f"jet isometry exponent k={params.k}")
    )


_ACCEPTANCE: Dict[str, Callable[[ExperimentReport, ExperimentParams], None]] = {
    "peak-cp1": _accept_peak,
    "line-cp2": _accept_line,
    "conic-cp2": _accept_conic,
    "logbk-decay": _accept_logbk,
    "isometry": _accept_isometry,
}


def run_experiment(params: ExperimentParams, config: Optional[Dict[str, Any]] = None) -> ExperimentReport:
    """
    Sweep one named experiment over its p-range and judge the acceptance criteria.

    Args:
        params: Experiment name, p-range, jet order and the remaining knobs
        config: Run configuration echoed into the report (default: params)

    Returns:
        ExperimentReport with rows sorted by p and one acceptance line per criterion

    Raises:
        PreconditionError: On an unknown experiment or an empty p-range
        ResourceCapError: If the p-range exceeds the desk-scale caps
    """
    check_caps(params)
    if params.name == "logbk-decay" and params.k < 1:
        raise PreconditionError("logbk-decay needs --k >= 1: for k = 0 there are no lower layers")
    report = ExperimentReport(params.name, config if config is not None else asdict(params))
    report.rows = sweep(params)
    _ACCEPTANCE[params.name](report, params)
    for line in report.acceptance:
        (logger.info if line.passed else logger.warning)("%s: %s", params.name, line.text())
    return report
