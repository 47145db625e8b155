import math
from fractions import Fraction

import pytest

from bergman_jets.core.coefficients import GaussianRational, PiCoeff, pi_sum


def test_gaussian_rational_arithmetic():
    """Test exact Gaussian rational products and quotients"""
    a = GaussianRational(1, 2)
    b = GaussianRational(3, -1)

    assert a * b == GaussianRational(5, 5)
    assert (a * b) / b == a
    assert a.conjugate() == GaussianRational(1, -2)
    assert a.norm2() == 5
    assert a + 1 == GaussianRational(2, 2)


def test_gaussian_rational_rejects_inexact_literals():
    with pytest.raises(TypeError):
        GaussianRational.of(0.5 + 0j)
    with pytest.raises(ZeroDivisionError):
        GaussianRational(1) / GaussianRational()


def test_pi_coeff_products_cancel_powers():
    """Test that pi powers add under multiplication"""
    assert PiCoeff.pi_power(1, 2) * PiCoeff.pi_power(-1, 3) == PiCoeff.const(6)
    assert PiCoeff.const(2) == 2
    assert PiCoeff({0: 0, 3: 0}).is_zero()


def test_pi_coeff_inverse_and_division():
    c = PiCoeff.pi_power(2, Fraction(3, 4))
    assert c * c.inverse() == PiCoeff.const(1)
    assert c / PiCoeff.pi_power(2) == PiCoeff.const(Fraction(3, 4))
    with pytest.raises(ZeroDivisionError):
        (PiCoeff.pi_power(1) + 1).inverse()


def test_pi_coeff_numeric_value():
    c = PiCoeff.pi_power(2, 3) + PiCoeff.pi_power(-1, GaussianRational(0, 1))
    assert c.to_complex() == pytest.approx(3 * math.pi**2 + 1j / math.pi)


def test_pi_coeff_text():
    """Test the compact text used inside kernel expressions"""
    assert str(PiCoeff.pi_power(-1) + 1) == "pi^-1 + 1"
    assert str(PiCoeff.pi_power(1, -1)) == "-pi"
    assert str(PiCoeff.pi_power(2, Fraction(1, 2))) == "1/2*pi^2"
    assert str(PiCoeff()) == "0"
    assert PiCoeff.const(GaussianRational(0, 1)).pretty() == "i"


def test_pi_sum():
    total = pi_sum([PiCoeff.const(1), PiCoeff.pi_power(1), PiCoeff.const(-1)])
    assert total == PiCoeff.pi_power(1)
    assert total.is_monomial()
    assert total.min_exponent() == 1
