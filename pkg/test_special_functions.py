"""
Bessel J0, J1, I0, I1 against mpmath.
"""

import mpmath
import numpy as np
import pytest

from kgt.calculations.special_functions import bessel_i0, bessel_i1, bessel_j0, bessel_j1
from kgt.errors import AccuracyError


def _reference(function, order, x):
    return np.array([float(function(order, mpmath.mpf(float(v)))) for v in x])


def test_values_at_zero():
    assert bessel_j0(0.0) == 1.0
    assert bessel_j1(0.0) == 0.0
    assert bessel_i0(0.0) == 1.0
    assert bessel_i1(0.0) == 0.0


def test_scalar_and_array_inputs():
    assert isinstance(bessel_j0(1.5), float)
    values = bessel_j1(np.linspace(0.0, 3.0, 7))
    assert isinstance(values, np.ndarray)
    assert values.shape == (7,)


@pytest.mark.parametrize("function, reference, order", [
    (bessel_j0, mpmath.besselj, 0),
    (bessel_j1, mpmath.besselj, 1),
])
def test_first_kind_absolute_accuracy(function, reference, order):
    x = np.concatenate([np.linspace(-50.0, 50.0, 401), [4.999999, 5.0, 5.000001, 1e-6, 2.404825557695773]])
    assert np.max(np.abs(function(x) - _reference(reference, order, x))) <= 1e-12


@pytest.mark.parametrize("function, order", [(bessel_i0, 0), (bessel_i1, 1)])
def test_modified_scaled_accuracy(function, order):
    x = np.concatenate([np.linspace(-60.0, 60.0, 241), [29.999, 30.0, 30.001, 300.0, 699.0]])
    reference = _reference(mpmath.besseli, order, x)
    assert np.max(np.abs(function(x) - reference) / np.exp(np.abs(x))) <= 1e-12


def test_parity():
    x = np.linspace(0.1, 40.0, 50)
    np.testing.assert_array_equal(bessel_j0(-x), bessel_j0(x))
    np.testing.assert_array_equal(bessel_j1(-x), -bessel_j1(x))
    np.testing.assert_array_equal(bessel_i0(-x), bessel_i0(x))
    np.testing.assert_array_equal(bessel_i1(-x), -bessel_i1(x))


def test_derivative_identity_second_order():
    x = np.linspace(-20.0, 20.0, 41)

    def error(h):
        slope = (bessel_j0(x + h) - bessel_j0(x - h)) / (2.0 * h)
        return np.max(np.abs(slope + bessel_j1(x)))

    e1, e2 = error(1e-2), error(5e-3)
    assert e1 < 1e-5
    assert np.log2(e1 / e2) == pytest.approx(2.0, abs=0.1)


@pytest.mark.parametrize("x", [1e3 + 1.0, -2e3, float("nan")])
def test_first_kind_outside_contract(x):
    with pytest.raises(AccuracyError):
        bessel_j0(x)


def test_modified_overflow_range_rejected():
    with pytest.raises(AccuracyError):
        bessel_i1(800.0)


@pytest.mark.parametrize("x, sign", [(4.9, -1.0), (11.5, -1.0), (-4.9, 1.0), (8.0, 1.0)])
def test_first_order_keeps_lobe_sign(x, sign):
    value = bessel_j1(x)
    assert np.sign(value) == sign
    assert value == pytest.approx(float(mpmath.besselj(1, x)), abs=1e-12)
