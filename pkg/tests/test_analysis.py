import numpy as np
import pytest

from bergman_jets.core.errors import ChartDomainError
from bergman_jets.services.analysis import (
    ProfileKind,
    envelope_weight,
    model_self_test,
    normal_extension_profile,
    profile_compare,
    profile_grid,
)
from bergman_jets.services.submanifolds import SubmanifoldSpec

POINT = SubmanifoldSpec.point(1)


def test_profile_grid_on_the_plane():
    """Test that the disc clipping keeps 13 of the 25 ticks of a 5 x 5 grid"""
    grid = profile_grid(1, 2.0, 5)
    assert len(grid) == 39
    assert len(profile_grid(1, 2.0, 5, sets=("left",))) == 13
    for z, zp in profile_grid(1, 2.0, 5, sets=("diagonal",)):
        assert z == zp


def test_profile_grid_deduplicates_shared_axes():
    # origin plus +-1 on each of the four real axes
    assert len(profile_grid(2, 1.0, 3, sets=("right",))) == 9


def test_profile_grid_rejects_unknown_set():
    with pytest.raises(ValueError):
        profile_grid(1, 1.0, 3, sets=("upper",))


def test_envelope_weight_at_origin():
    assert envelope_weight([0j], [0j]) == 1.0


def test_bergman_profile_converges():
    coarse, _ = profile_compare("P", POINT, 0, 8)
    fine, samples = profile_compare(ProfileKind.P, POINT, 0, 32)
    assert fine.sup < coarse.sup
    assert fine.power == 1.0
    assert fine.count == len(samples) == 3 * len(profile_grid(1, 2.0, 9, sets=("left",)))


def test_extension_profile_uses_left_grid_only():
    stats, samples = profile_compare("E", POINT, 1, 16)
    assert stats.kind == "E"
    assert stats.power == -0.5
    assert all(not s.zp.any() for s in samples)
    assert stats.sup < 0.5


def test_grid_must_stay_in_the_chart():
    with pytest.raises(ChartDomainError):
        profile_compare("P", POINT, 0, 4)
    with pytest.raises(ChartDomainError):
        profile_compare("E", POINT, 0, 16, grid=[([0j], [0.5 + 0j])])


@pytest.mark.parametrize("n, m, k", [(1, 0, 1), (2, 1, 1), (2, 0, 2)])
def test_model_self_test_is_roundoff(n, m, k):
    """Test that the model kernels reproduce their compositions on the grid"""
    stats = model_self_test(n, m, k, radius=1.5, points=5)
    assert [s.kind for s in stats] == ["P", "Pperp", "E", "LogBK"]
    for s in stats:
        assert s.sup < 1e-9


def test_normal_extension_profile_separates_line_from_conic():
    """Test the normal decay remainder: ~1/p along a line, ~p^-1/2 along the conic"""
    line, conic = SubmanifoldSpec.linear(), SubmanifoldSpec.conic()
    line_6, _ = normal_extension_profile(line, 6)
    line_24, _ = normal_extension_profile(line, 24)
    conic_6, samples = normal_extension_profile(conic, 6)
    conic_24, _ = normal_extension_profile(conic, 24)
    assert line_6.sup / line_24.sup > 3.5
    assert conic_6.sup / conic_24.sup < 3.0
    assert conic_6.sup > line_6.sup
    assert conic_6.kind == "E_normal"
    assert all(s.log_modulus for s in samples)


def test_normal_extension_profile_is_exact_on_y():
    """Test points with zeta_N = 0 carry no deviation"""
    grid = [(np.array([0.5 + 0.3j, 0j]), np.zeros(2, dtype=complex)), (np.array([-1.0 + 0j, 0j]), np.zeros(2, dtype=complex))]
    stats, _ = normal_extension_profile(SubmanifoldSpec.conic(), 12, grid=grid)
    assert stats.sup < 1e-10


def test_normal_extension_profile_stays_in_the_chart():
    with pytest.raises(ChartDomainError):
        normal_extension_profile(SubmanifoldSpec.linear(), 2)
