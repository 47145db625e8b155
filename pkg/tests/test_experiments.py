import math

import pytest

from bergman_jets.core.errors import PreconditionError, ResourceCapError
from bergman_jets.routers.experiment_router import ExperimentRouter
from bergman_jets.services.experiments import (
    AcceptanceLine,
    ExperimentParams,
    ExperimentReport,
    ReportRow,
    check_caps,
    run_experiment,
    sweep,
)
from bergman_jets.services.submanifolds import YKind

P_SWEEP = (8, 12, 16, 20, 24)


def test_report_row_ratio():
    assert ReportRow(8, "norm_ratio", 2.0, 4.0).ratio == 0.5
    assert ReportRow(8, "defect", 0.1, 0.0).ratio is None


def test_acceptance_line_text():
    assert AcceptanceLine("slope", True, -0.98, "-1.0 +- 0.3").text() == "PASS slope -0.98 (target -1.0 +- 0.3)"
    line = AcceptanceLine("contrast", False, 0.1, "<= -0.3", qualitative=True)
    assert line.text().endswith("[qualitative]")



def test_failed_qualitative_line_fails_the_report():
    report = ExperimentReport("conic-cp2", {})
    report.acceptance.append(AcceptanceLine("defining relation k=0", True, 1e-14, "<= 1e-10"))
    report.acceptance.append(AcceptanceLine("geodesic contrast", False, -0.1, "<= -0.3", qualitative=True))
    assert not report.passed
    assert report.to_dict()["passed"] is False


def test_isometry_submanifold_defaults_to_a_line():
    assert ExperimentParams("isometry", (8,)).submanifold().kind == YKind.LINEAR
    assert ExperimentParams("isometry", (8,), y_kind="point").submanifold().n == 1


def test_caps():
    with pytest.raises(ResourceCapError):
        check_caps(ExperimentParams("peak-cp1", (8, 48)))
    with pytest.raises(ResourceCapError):
        check_caps(ExperimentParams("line-cp2", (30,)))
    with pytest.raises(PreconditionError):
        check_caps(ExperimentParams("line-cp2", ()))
    with pytest.raises(PreconditionError):
        check_caps(ExperimentParams("spiral", (8,)))
    assert check_caps(ExperimentParams("conic-cp2", (24,))).kind == YKind.CONIC


def test_peak_sections_on_cp1():
    report = run_experiment(ExperimentParams("peak-cp1", P_SWEEP))
    assert report.passed, [line.text() for line in report.acceptance]
    assert [p for p, _ in report.series("profile_deviation[k=0]")] == list(P_SWEEP)
    assert report.fits["profile_deviation[k=0]"]["slope"] == pytest.approx(-1.0, abs=0.3)


def test_isometry_at_a_point():
    """Test that the jet map norm ratio is sqrt(1 + 1/p) for k = 0"""
    report = run_experiment(ExperimentParams("isometry", P_SWEEP, y_kind="point", samples=2))
    assert report.passed
    for p, ratio in report.series("isometry_ratio"):
        assert ratio == pytest.approx(math.sqrt(1 + 1 / p))


def test_line_in_cp2():
    report = run_experiment(ExperimentParams("line-cp2", (6, 8, 10, 12, 14), samples=2))
    assert report.passed, [line.text() for line in report.acceptance]
    for p, value in report.series("defect_deviation[k=0]"):
        assert value == pytest.approx(2 / p)
    rows = {row.quantity for row in report.rows}
    assert {"profile_E[linear]", "extension_profile[linear]", "defining_relation[k=0]"} <= rows
    relation = next(line for line in report.acceptance if line.criterion == "defining relation k=0")
    assert relation.passed
    assert relation.value <= 1e-10


def test_conic_in_cp2():
    """Test the curved conic decays slower than the line in the normal extension profile"""
    report = run_experiment(ExperimentParams("conic-cp2", (6, 9, 12, 15, 18, 21, 24)))
    assert report.passed, [line.text() for line in report.acceptance]
    contrast = next(line for line in report.acceptance if line.criterion == "geodesic contrast")
    assert contrast.value <= -0.3
    linear = report.fits["extension_profile[linear]"]["slope"]
    conic = report.fits["extension_profile[conic]"]["slope"]
    assert linear < conic < 0


def test_logbk_needs_positive_order():
    with pytest.raises(PreconditionError):
        run_experiment(ExperimentParams("logbk-decay", P_SWEEP, k=0))


def test_parallel_sweep_matches_serial():
    params = ExperimentParams("isometry", (8, 12), y_kind="point", samples=2)
    parallel = ExperimentParams("isometry", (8, 12), y_kind="point", samples=2, workers=2)
    assert sweep(parallel) == sweep(params)


class TestExperimentRouter:
    def test_logbk_order_is_raised(self):
        router = ExperimentRouter()
        result = router.route(ExperimentParams("logbk-decay", P_SWEEP, k=0))
        assert result.success
        assert result.passed, [line.text() for line in result.report.acceptance]
        assert result.report.fits["near_y_kernel[k=1]"]["rate"] > 0

    def test_refusals_are_results(self):
        router = ExperimentRouter()
        result = router.route(ExperimentParams("peak-cp1", (64,)))
        assert not result.success
        assert isinstance(result.exception, ResourceCapError)
        unknown = router.route(ExperimentParams("spiral", (8,)))
        assert not unknown.success
        assert "spiral" in unknown.error
        assert unknown.to_dict()["passed"] is False

    def test_statistics(self):
        router = ExperimentRouter()
        router.route(ExperimentParams("peak-cp1", P_SWEEP))
        router.route(ExperimentParams("peak-cp1", (64,)))
        stats = router.get_statistics()
        assert stats["experiments_run"] == 2
        assert stats["by_name"] == {"peak-cp1": 2}
        assert stats["success_rate"] == 50
        router.reset_statistics()
        assert router.get_statistics()["experiments_run"] == 0
        assert set(router.available()) == {"peak-cp1", "line-cp2", "conic-cp2", "logbk-decay", "isometry"}
