import numpy as np
import pytest

from bergman_jets.core.errors import DimensionError
from bergman_jets.core.multipoly import Parity
from bergman_jets.services.model_kernels import BaseKind
from bergman_jets.services.profiles import build_second_order_profile, cubic_form, partner_form

TENSOR = [[[1 + 2j]]]


def test_extension_profile_is_cubic():
    profile = build_second_order_profile("E", 2, 1, 0, TENSOR)
    assert profile.base.kind == BaseKind.EXT
    amp = profile.entries[0][0]
    assert amp.degree() == 3
    assert amp.parity() == Parity.ODD


@pytest.mark.parametrize("k", [0, 1, 2])
def test_orthogonal_profile_is_self_adjoint(k):
    """Test that the orthogonal correction equals its own adjoint amplitude"""
    profile = build_second_order_profile("perp", 2, 1, k, TENSOR)
    amp = profile.entries[0][0]
    assert profile.base.kind == BaseKind.ORTHO
    assert amp.conj_swap() == amp
    assert amp.degree() == 3 + 2 * k


def test_partner_form_is_adjoint_of_cubic_form():
    dims = (2, 2)
    assert cubic_form(2, 1, TENSOR, dims).conj_swap() == partner_form(2, 1, TENSOR, dims)


def test_restriction_profile_shape():
    profile = build_second_order_profile("res", 3, 1, 1, np.ones((2, 1, 1)))
    assert profile.base.kind == BaseKind.RES
    assert profile.shape == (2, 1)


def test_profile_errors():
    with pytest.raises(DimensionError):
        build_second_order_profile("E", 2, 1, 0, np.ones((2, 1, 1)))
    with pytest.raises(DimensionError):
        build_second_order_profile("E", 2, 2, 0, np.ones((0, 2, 2)))
    with pytest.raises(ValueError):
        build_second_order_profile("P", 2, 1, 0, TENSOR)
