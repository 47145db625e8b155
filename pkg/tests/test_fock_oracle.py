from fractions import Fraction

import pytest

from bergman_jets.core.coefficients import PiCoeff
from bergman_jets.core.errors import DimensionError, ShapeError
from bergman_jets.services.fock_oracle import (
    FockBasis,
    JetFockBasis,
    default_bases,
    fock_basis,
    kernel_to_matrix,
    logbk_matrix,
    sym_pairing,
)
from bergman_jets.services.model_kernels import (
    LogBergmanKernel,
    build_extension,
    build_model_kernel,
    build_perp,
    build_restriction,
)


def test_fock_basis_is_graded():
    assert fock_basis(1, 2).elements == [(0,), (1,), (2,)]
    assert len(FockBasis(2, 2)) == 6
    with pytest.raises(DimensionError):
        FockBasis(-1, 2)


def test_bargmann_projector_is_identity():
    basis = FockBasis(2, 2)
    matrix = kernel_to_matrix(build_model_kernel("P", 2, 2, 0), basis, basis)
    assert matrix.entries == {(i, i): PiCoeff.const(1) for i in range(len(basis))}


@pytest.mark.parametrize("k", [0, 1, 2])
def test_perp_picks_one_normal_degree(k):
    """Test that Pperp^k keeps exactly the monomial z^k on C^1 with m = 0"""
    basis = FockBasis(1, 4)
    matrix = kernel_to_matrix(build_perp(1, 0, k), basis, basis)
    assert matrix.entries == {(k, k): PiCoeff.const(1)}
    assert matrix.is_projector()


def test_extension_and_restriction_matrices():
    ext, res = build_extension(1, 0, 1), build_restriction(1, 0, 1)
    m_ext = kernel_to_matrix(ext, *default_bases(ext, 2))
    m_res = kernel_to_matrix(res, *default_bases(res, 2))
    assert isinstance(m_ext.cols, JetFockBasis)
    assert m_ext.entries == {(1, 0): PiCoeff.const(1)}
    assert m_res.entries == {(0, 1): PiCoeff.const(1)}
    # Res* = 2 pi E with ||dz||^2 = 2
    assert m_res.adjoint() == m_ext.scale(PiCoeff.pi_power(1, 2))
    perp = build_perp(1, 0, 1)
    assert m_ext @ m_res == kernel_to_matrix(perp, *default_bases(perp, 2))


def test_logbk_matrix_is_projector():
    matrix = logbk_matrix(LogBergmanKernel(2, 1, 2), 3)
    assert matrix.is_projector()
    assert matrix @ matrix == matrix


def test_restrict_keeps_low_degrees():
    basis = FockBasis(1, 3)
    matrix = kernel_to_matrix(build_model_kernel("P", 1, 1, 0), basis, basis)
    assert len(matrix.restrict(1, 1).entries) == 2


def test_frame_mismatch():
    with pytest.raises(DimensionError):
        kernel_to_matrix(build_perp(2, 1, 0), FockBasis(1, 2), FockBasis(1, 2))
    ext = build_extension(2, 1, 1)
    rows, _ = default_bases(ext, 3)
    with pytest.raises(DimensionError):
        kernel_to_matrix(ext, rows, FockBasis(1, 3))
    a = kernel_to_matrix(build_perp(1, 0, 0), FockBasis(1, 2), FockBasis(1, 2))
    b = kernel_to_matrix(build_perp(1, 0, 0), FockBasis(1, 3), FockBasis(1, 3))
    with pytest.raises(ShapeError):
        a @ b


def test_sym_pairing():
    """Test the Sym^k metric with ||dz_i||^2 = 2"""
    assert sym_pairing(2, [1, 0, 0], [1, 0, 0], normal_dim=2) == 4
    assert sym_pairing(2, [0, 1, 0], [0, 1, 0], normal_dim=2) == 2
    assert sym_pairing(1, [1j], [1j]) == pytest.approx(2)
    assert sym_pairing(1, {(1,): Fraction(1, 2)}, {(1,): 2}) == 2
    with pytest.raises(ShapeError):
        sym_pairing(2, [1, 0], [1, 0], normal_dim=2)
    with pytest.raises(ShapeError):
        sym_pairing(1, {(1, 0): 1}, {(0, 1): 1}, normal_dim=2)
