import numpy as np
import pytest

from bergman_jets.core.errors import CompositionError, QuadratureConvergenceError
from bergman_jets.core.expressions import parse_poly
from bergman_jets.services.composition import compose_jets, compose_poly
from bergman_jets.services.model_kernels import (
    KernelBase,
    PolyKernel,
    build_extension,
    build_restriction,
    kernel_eval,
)
from bergman_jets.services.quadrature_oracle import (
    QuadratureOracle,
    quadrature_oracle_compose,
    random_sample_pairs,
)
from bergman_jets.utils.quadrature_rules import complex_hermgauss


def test_complex_rule_reproduces_gaussian_moments():
    nodes, weights = complex_hermgauss(12)
    assert np.sum(weights) == pytest.approx(1.0)
    # int |w|^4 exp(-pi|w|^2) = 2/pi^2
    assert np.sum(weights * np.abs(nodes) ** 4) == pytest.approx(2 / np.pi**2)


def test_oracle_matches_closed_form():
    """Test the numeric W-integral against the symbolic composition"""
    base = KernelBase.ortho(2, 1)
    left = PolyKernel(base, parse_poly("1 + z'2*zb'1", (2, 2)))
    right = PolyKernel(base, parse_poly("z1*zb1 - 2*i*zb2", (2, 2)))
    exact = compose_poly(left, right)
    oracle = QuadratureOracle(order=30)
    for z, zp in random_sample_pairs((2, 2), 3, seed=7):
        assert oracle.compose_value(left, right, z, zp) == pytest.approx(exact.evaluate(z, zp), rel=1e-9, abs=1e-12)


def test_jet_compose_matches_symbolic():
    ext, res = build_extension(2, 1, 1), build_restriction(2, 1, 1)
    samples = random_sample_pairs((2, 2), 2, seed=3)
    numeric = quadrature_oracle_compose(ext, res, samples, order=30)
    symbolic = compose_jets(ext, res)
    for (z, zp), value in zip(samples, numeric):
        np.testing.assert_allclose(value, kernel_eval(symbolic, z, zp), rtol=1e-9, atol=1e-12)


def test_low_order_fails_refinement_check():
    """Test that an order too low for the integrand is refused"""
    base = KernelBase.bargmann(1)
    left = PolyKernel(base, parse_poly("z'1^3*zb'1^3", (1, 1)))
    right = PolyKernel.unit(base)
    with pytest.raises(QuadratureConvergenceError):
        QuadratureOracle(order=2).compose_value(left, right, [0.0], [0.0])


def test_mismatched_intermediate_space():
    with pytest.raises(CompositionError):
        QuadratureOracle(order=10).compose_value(
            PolyKernel.unit(KernelBase.bargmann(1)), PolyKernel.unit(KernelBase.bargmann(2)), [0.1], [0.1, 0.2]
        )
