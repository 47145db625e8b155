import pytest

from bergman_jets.core.coefficients import GaussianRational, PiCoeff
from bergman_jets.core.errors import DimensionError, EvaluationError, UnknownVariableError
from bergman_jets.core.expressions import parse_poly
from bergman_jets.core.multipoly import (
    MultiPoly,
    Parity,
    VarFamily,
    VarId,
    multi_indices,
    poly_diff,
    poly_eval,
    ring_op,
)

DIMS = (1, 1)


def z1():
    return MultiPoly.var(VarId(VarFamily.Z, 0), DIMS)


def zbp1():
    return MultiPoly.var(VarId(VarFamily.ZBP, 0), DIMS)


def test_canonical_form_drops_cancelled_terms():
    """Test that terms cancelling to zero disappear"""
    p = z1() + MultiPoly.one(DIMS)
    assert (p - z1()) == MultiPoly.one(DIMS)
    assert (p - p).is_zero()
    assert len(p) == 2


def test_degree_and_parity():
    even = z1() * zbp1() + MultiPoly.one(DIMS)
    assert even.degree() == 2
    assert even.parity() == Parity.EVEN
    assert (z1() + MultiPoly.one(DIMS)).parity() == Parity.NEITHER
    assert MultiPoly.zero(DIMS).degree() == -1
    assert Parity.ODD.times(Parity.ODD) == Parity.EVEN
    assert Parity.EVEN.times(Parity.NEITHER) == Parity.NEITHER


def test_text_is_graded():
    p = z1() * zbp1() + MultiPoly.const(PiCoeff.pi_power(-1), DIMS)
    assert str(p) == "z1*zb'1 + pi^-1"


def test_diff():
    cube = z1() * z1() * z1()
    assert poly_diff(cube, VarId(VarFamily.Z, 0)) == (z1() * z1()).scale(3)
    assert cube.diff(VarId(VarFamily.Z, 0), 4).is_zero()


def test_conj_swap_is_the_adjoint_amplitude():
    """Test A*(Z, Z') = conj(A(Z', Z)) on a monomial with complex coefficient"""
    a = parse_poly("i*z1*zb'1", DIMS)
    assert a.conj_swap() == parse_poly("-i*z1*zb'1", DIMS)
    mixed = parse_poly("2*z1^2 + zb1", (1, 2))
    swapped = mixed.conj_swap()
    assert swapped.dims == (2, 1)
    assert swapped == parse_poly("2*zb'1^2 + z'1", (2, 1))


def test_evaluation_uses_conjugate_partners():
    p = z1() * zbp1()
    assert p.evaluate_at([2j], [3]) == pytest.approx(6j)
    assert poly_eval(p, {VarId(VarFamily.Z, 0): 1 + 1j, VarId(VarFamily.ZP, 0): 2}) == pytest.approx(2 + 2j)


def test_evaluation_requires_assignments():
    p = MultiPoly.var(VarId(VarFamily.ZP, 0), DIMS)
    with pytest.raises(EvaluationError):
        p.evaluate({VarId(VarFamily.Z, 0): 1.0})


def test_dimension_errors():
    with pytest.raises(DimensionError):
        MultiPoly.one((1, 1)) + MultiPoly.one((2, 2))
    with pytest.raises(UnknownVariableError):
        MultiPoly.var(VarId(VarFamily.Z, 3), DIMS)
    with pytest.raises(DimensionError):
        MultiPoly(DIMS, {(1, 0): 1})


def test_ring_op_dispatch():
    a, b = z1(), zbp1()
    assert ring_op(a, b, "add") == a + b
    assert ring_op(a, b, "mul") == a * b
    assert ring_op(a, GaussianRational(0, 1), "scale") == a.scale(GaussianRational(0, 1))
    renamed = ring_op(a, {VarFamily.Z: VarFamily.ZP}, "substitute-rename")
    assert renamed == MultiPoly.var(VarId(VarFamily.ZP, 0), DIMS)


def test_serialization():
    p = parse_poly("(1 + 2*i)*z1^2*zb'1 - 3/2*pi^2", DIMS)
    assert MultiPoly.from_dict(p.to_dict()) == p


def test_multi_indices():
    assert multi_indices(2, 2) == [(0, 2), (1, 1), (2, 0)]
    assert multi_indices(0, 0) == [()]
    assert multi_indices(0, 1) == []
    assert len(multi_indices(3, 3)) == 10
