import math

import numpy as np
import pytest

from bergman_jets.core.errors import (
    ChartDomainError,
    DefectRelationError,
    ExtensionNotGuaranteedError,
    PreconditionError,
)
from bergman_jets.services.extension import (
    ExtensionProblem,
    bergman_and_logbk_eval,
    get_problem,
    jet_map_and_isometry,
    minimal_norm_extension,
    multiplicative_defect,
    peak_section,
    restriction_jets,
)
from bergman_jets.services.projective_space import HomogSpace
from bergman_jets.services.submanifolds import SubmanifoldSpec

POINT = SubmanifoldSpec.point(1)


@pytest.mark.parametrize("k", [0, 1])
@pytest.mark.parametrize("p", [6, 10, 16])
def test_point_on_cp1_closed_form(k, p):
    """Test ||E|| and the defect A against their closed forms at a point of CP^1"""
    problem = ExtensionProblem(POINT, k, p)
    assert problem.surjective
    assert problem.model_norm_ratio() == pytest.approx(math.sqrt(p / (p + 1)), rel=1e-10)
    assert problem.model_defect_deviation() == pytest.approx(1 / p, rel=1e-10)


@pytest.mark.parametrize(
    "spec, k, p",
    [
        (POINT, 2, 8),
        (SubmanifoldSpec.point(2), 1, 5),
        (SubmanifoldSpec.linear(), 1, 5),
        (SubmanifoldSpec.conic(), 0, 4),
    ],
)
def test_identity_residuals(spec, k, p):
    residuals = get_problem(spec, k, p).identity_residuals()
    assert set(residuals) == {
        "res_e_identity",
        "adjoint_relation",
        "e_star_e_inverse",
        "res_res_star",
        "projector_ladder",
    }
    assert max(residuals.values()) < 1e-8


def test_restrict_then_extend():
    problem = ExtensionProblem(POINT, 1, 8)
    f = np.zeros(problem.dim, dtype=complex)
    f[1] = 1.0
    jet = problem.restrict(f)
    assert jet[0] == pytest.approx(math.sqrt(2 * math.pi * 8 * 9))
    np.testing.assert_allclose(problem.extend(jet), f, atol=1e-12)


def test_restrict_needs_vanishing_lower_jets():
    problem = ExtensionProblem(POINT, 1, 8)
    with pytest.raises(PreconditionError):
        problem.restrict(np.eye(problem.dim)[0])


def test_extension_has_minimal_norm():
    """Test that adding a section with zero k-jet never lowers the norm"""
    spec, k, p = SubmanifoldSpec.linear(), 1, 4
    problem = get_problem(spec, k, p)
    rng = np.random.default_rng(11)
    g = rng.standard_normal(problem.jet_space.dim) + 1j * rng.standard_normal(problem.jet_space.dim)
    f = minimal_norm_extension(spec, k, p, g)
    np.testing.assert_allclose(problem.projected_restriction @ f, g, atol=1e-9 * np.linalg.norm(g))
    kernel = problem.vanishing_basis(k + 1)
    for _ in range(3):
        h = kernel @ (rng.standard_normal(kernel.shape[1]) + 0j)
        assert np.linalg.norm(f + h) >= np.linalg.norm(f) - 1e-12


def test_not_surjective_below_threshold():
    problem = ExtensionProblem(POINT, 3, 2)
    assert not problem.surjective
    with pytest.raises(ExtensionNotGuaranteedError):
        problem.require_surjective()
    with pytest.raises(ExtensionNotGuaranteedError):
        minimal_norm_extension(POINT, 3, 2, [1.0])


def test_restriction_jets_needs_matching_space():
    with pytest.raises(ChartDomainError):
        restriction_jets(HomogSpace(2, 4), POINT, 0)
    assert restriction_jets(HomogSpace(1, 4), POINT, 0).shape == (1, 5)


def test_multiplicative_defect_at_a_point():
    defect = multiplicative_defect(POINT, 0, 12)
    assert defect.matrix[0, 0] == pytest.approx(13)
    assert defect.model_deviation == pytest.approx(1 / 12)
    assert defect.to_dict()["y_kind"] == "point"


def test_multiplicative_defect_rejects_broken_relation(monkeypatch):
    """Test a defect that no longer satisfies Res* = E A is refused, not just logged"""
    problem = get_problem(POINT, 0, 12)
    monkeypatch.setitem(problem.__dict__, "defect", 2.0 * problem.defect)
    with pytest.raises(DefectRelationError, match="adjoint_relation"):
        multiplicative_defect(POINT, 0, 12)


def test_jet_map_isometry_ratio():
    p = 10
    f = np.zeros(p + 1, dtype=complex)
    f[0] = 1.0
    result = jet_map_and_isometry(POINT, 0, p, f)
    assert result.quotient_norm == pytest.approx(1.0)
    assert result.ratio == pytest.approx(math.sqrt((p + 1) / p))


def test_jet_map_of_vanishing_section_has_no_ratio():
    f = np.zeros(11, dtype=complex)
    f[5] = 1.0
    result = jet_map_and_isometry(POINT, 1, 10, f)
    assert result.quotient_norm == pytest.approx(0.0, abs=1e-12)
    assert result.ratio is None
    assert len(result.jets) == 2


def test_kernels_at_the_point():
    p = 9
    values = bergman_and_logbk_eval(POINT, 1, p, [[0.0]], [[0.0]])
    assert values.bergman[0] == pytest.approx(p + 1)
    assert abs(values.log_bergman[0]) < 1e-12
    assert get_problem(POINT, 1, p).near_y_kernel([[0.0]])[0] == pytest.approx(p + 1)
    assert get_problem(POINT, 0, p).near_y_kernel([[0.0]])[0] == 0


@pytest.mark.parametrize("k", [0, 1])
def test_peak_section(k):
    section = peak_section([0.0], k, 16, [1.0])
    assert section.lower_jets < 1e-10
    assert section.profile_deviation < 0.2
    assert section.values([[0.0]]).shape == (1,)


def test_peak_section_profile_improves_with_p():
    coarse = peak_section([0.0], 0, 8, [1.0]).profile_deviation
    fine = peak_section([0.0], 0, 32, [1.0]).profile_deviation
    assert fine < coarse


def test_peak_section_only_at_origin():
    with pytest.raises(ChartDomainError):
        peak_section([0.1], 0, 16, [1.0])
