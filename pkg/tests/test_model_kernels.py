import cmath
import math

import numpy as np
import pytest

from bergman_jets.core.coefficients import PiCoeff
from bergman_jets.core.errors import DimensionError, ParseError
from bergman_jets.core.expressions import parse_poly
from bergman_jets.core.multipoly import MultiPoly, Parity
from bergman_jets.services.model_kernels import (
    BaseKind,
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
    kernel_eval,
    parse_kernel_expression,
)


def test_model_kernel_amplitudes():
    """Test the closed-form amplitudes of the model kernels"""
    assert str(build_perp(1, 0, 0)) == "1 | Pperp0 1 0"
    assert str(build_perp(2, 1, 1)) == "pi*z2*zb'2 | Pperp0 2 1"
    assert str(build_restriction(2, 1, 1)) == "pi*zb'2 | Res0 2 1"

    ext = build_extension(2, 1, 2)
    assert ext.shape == (1, 1)
    assert ext.entries[0][0] == parse_poly("1/2*z2^2", (2, 1))


def test_jet_index_sets():
    ext = build_extension(3, 1, 2)
    assert ext.shape == (1, 3)
    assert ext.col_indices == [(0, 2), (1, 1), (2, 0)]
    res = build_restriction(3, 1, 2)
    assert res.shape == (3, 1)
    assert res.entry((1, 1), (0, 0)) == parse_poly("2*pi^2*zb'2*zb'3", (1, 3))


def test_sub_identity_weights():
    sub = build_sub_identity(1, 2, 2)
    assert sub.base == KernelBase.sub(1)
    assert sub.entry((1, 1), (1, 1)) == MultiPoly.const(2, (1, 1))
    assert sub.entry((0, 2), (0, 2)) == MultiPoly.one((1, 1))
    assert sub.entry((0, 2), (2, 0)).is_zero()


def test_build_model_kernel_dispatch():
    p = build_model_kernel("P", 2, 1, 0)
    assert p.base.kind == BaseKind.BARGMANN
    assert isinstance(build_model_kernel(ModelKind.LOGBK, 2, 1, 1), LogBergmanKernel)
    with pytest.raises(DimensionError):
        build_model_kernel("E", 1, 2, 0)
    with pytest.raises(DimensionError):
        build_model_kernel("Pperp", 2, 1, -1)


def test_restriction_adjoint_is_scaled_extension():
    """Test Res* = (2 pi)^k k! E in the Sym^k metric"""
    for n, m, k in [(2, 1, 1), (3, 1, 2), (2, 0, 2)]:
        scale = PiCoeff.pi_power(k, 2**k * math.factorial(k))
        assert kernel_adjoint(build_restriction(n, m, k)) == build_extension(n, m, k).scale(scale)


def test_illegal_amplitude_for_base():
    with pytest.raises(DimensionError):
        PolyKernel(KernelBase.ext(2, 1), MultiPoly.one((2, 2)))
    with pytest.raises(DimensionError):
        KernelBase.ortho(1, 2)


def test_base_evaluation():
    base = KernelBase.bargmann(1)
    z, zp = [0.3 + 0.1j], [-0.2 + 0.4j]
    expected = cmath.exp(-0.5 * math.pi * (abs(z[0]) ** 2 + abs(zp[0]) ** 2) + math.pi * z[0] * zp[0].conjugate())
    assert base.evaluate(z, zp) == pytest.approx(expected)
    assert KernelBase.ortho(1, 0).evaluate(z, zp) == pytest.approx(
        math.exp(-0.5 * math.pi * (abs(z[0]) ** 2 + abs(zp[0]) ** 2))
    )


def test_kernel_eval_shape():
    ext = build_extension(3, 1, 1)
    values = kernel_eval(ext, [0.1, 0.2j, -0.3], [0.05])
    assert values.shape == (1, 2)
    assert np.all(np.isfinite(values))


def test_log_bergman_matches_normal_series():
    """Test P - sum_{l<k} Pperp^l against the tail of the normal exponential series"""
    for n, m, k in [(1, 0, 1), (2, 1, 2), (2, 0, 1)]:
        logbk = LogBergmanKernel(n, m, k)
        z = [0.3 + 0.1j, -0.2j][:n]
        zp = [-0.2 + 0.4j, 0.1][:n]
        assert logbk.evaluate(z, zp) == pytest.approx(logbk.series_evaluate(z, zp), rel=1e-10, abs=1e-14)


def test_perp_amplitude_parity():
    for k in range(4):
        assert build_perp(2, 1, k).entries[0][0].parity() == Parity.EVEN


def test_parse_kernel_expression():
    kernels = parse_kernel_expression("(1|Pperp0 2 1) ∘ (z1*zb1|Pperp0 2 1)")
    assert len(kernels) == 2
    assert kernels[0].base == KernelBase.ortho(2, 1)
    assert kernels[1].amplitude == parse_poly("z1*zb1", (2, 2))
    assert len(parse_kernel_expression("(1|P 1) @ (1|P 1) @ (z1|P 1)")) == 3


@pytest.mark.parametrize(
    "text",
    [
        "",
        "(1|Foo 2 1)",
        "(1|Pperp0 2)",
        "(1|Pperp0 3 4)",
        "1|Pperp0 2 1",
        "(1 Pperp0 2 1)",
        "((1|Pperp0 2 1)",
    ],
)
def test_malformed_kernel_expressions(text):
    with pytest.raises(ParseError):
        parse_kernel_expression(text)


def test_amplitude_error_position_is_absolute():
    with pytest.raises(ParseError) as info:
        parse_kernel_expression("(z1 + * z2|Pperp0 2 1)")
    assert info.value.position == 6
