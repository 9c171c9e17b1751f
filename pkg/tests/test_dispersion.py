import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mp_deriv, mp_symbol
from whitham_mi import (Branch, DimensionalParams, DispersionModel, Family, ParameterDomainError,
                        UnsupportedModelError, group_velocity, group_velocity_deriv,
                        longwave_kdv_coeffs, nondimensionalize, symbol, symbol_at_zero,
                        symbol_deriv)

MODELS = [
    DispersionModel.gravity(),
    DispersionModel.capillary(0.1),
    DispersionModel.capillary(0.5),
    DispersionModel.capillary(1 / 3),
    DispersionModel.vorticity(3.0),
    DispersionModel.vorticity(-3.0),
    DispersionModel.vorticity(2.0, Branch.MINUS),
    DispersionModel.vorticity(-20.0, Branch.MINUS),
]
ZS = [1e-6, 1e-3, 0.05, 0.0999, 0.1001, 0.5, 1.0, 2.0, 7.5, 30.0]


def test_gravity_symbol_values():
    g = DispersionModel.gravity()
    assert symbol(g, 0.0) == 1.0
    assert symbol(g, 1.0) == pytest.approx(0.87270, abs=1e-5)
    assert symbol(g, 1.0) == pytest.approx(math.sqrt(math.tanh(1.0)), rel=1e-15)


@pytest.mark.parametrize("model", MODELS, ids=repr)
@pytest.mark.parametrize("z", ZS)
def test_symbol_and_derivatives_match_mpmath(model, z):
    scale = max(1.0, abs(float(mp_symbol(model, z))))
    assert symbol(model, z) == pytest.approx(float(mp_symbol(model, z)), abs=2e-14 * scale)
    for order in (1, 2):
        exact = float(mp_deriv(model, z, order))
        assert symbol_deriv(model, z, order) == pytest.approx(exact, abs=1e-12 * scale)


@pytest.mark.parametrize("model", MODELS, ids=repr)
def test_group_velocity_identities(model):
    z = np.linspace(0.01, 10, 50)
    m, m1, m2 = symbol(model, z), symbol_deriv(model, z, 1), symbol_deriv(model, z, 2)
    np.testing.assert_allclose(group_velocity(model, z), m + z * m1, rtol=1e-14, atol=1e-14)
    np.testing.assert_allclose(group_velocity_deriv(model, z), 2 * m1 + z * m2, rtol=1e-14,
                               atol=1e-14)


def test_value_at_zero():
    assert symbol_at_zero(DispersionModel.capillary(0.7)) == 1.0
    w = 2.5
    assert symbol_at_zero(DispersionModel.vorticity(w)) == pytest.approx(w / 2 + math.sqrt(1 + w * w / 4))
    assert symbol_at_zero(DispersionModel.vorticity(w, "minus")) == pytest.approx(
        w / 2 - math.sqrt(1 + w * w / 4))
    for model in MODELS:
        assert symbol(model, 0.0) == pytest.approx(symbol_at_zero(model), rel=1e-15)
        assert symbol(model, 1e-9) == pytest.approx(symbol_at_zero(model), rel=1e-15)


def test_negative_z_rejected():
    with pytest.raises(ParameterDomainError):
        symbol(DispersionModel.gravity(), -0.1)
    with pytest.raises(ParameterDomainError):
        symbol_deriv(DispersionModel.gravity(), 1.0, order=3)


def test_array_and_scalar_shapes():
    g = DispersionModel.gravity()
    assert isinstance(symbol(g, 1.0), float)
    out = symbol(g, np.array([0.0, 1.0, 2.0]))
    assert out.shape == (3,)


def test_model_normalization():
    g = DispersionModel(Family.GRAVITY, tau=0.4, varpi=2.0, branch="minus")
    assert (g.tau, g.varpi, g.branch) == (0.0, 0.0, Branch.PLUS)
    v = DispersionModel.vorticity(1.5, "minus")
    assert v.tau == 0.0 and v.sign == -1.0
    with pytest.raises(ParameterDomainError):
        DispersionModel.capillary(-0.1)
    with pytest.raises(ParameterDomainError):
        DispersionModel.capillary(float("nan"))
    assert DispersionModel.from_dict(v.to_dict()) == v


def test_degenerate_flag():
    assert DispersionModel.capillary(1 / 3).is_degenerate
    assert DispersionModel.capillary(1 / 3 + 5e-10).is_degenerate
    assert DispersionModel.capillary(0.33333333).is_degenerate
    assert not DispersionModel.capillary(0.3333).is_degenerate
    assert not DispersionModel.gravity().is_degenerate


def test_nondimensionalize_examples():
    model, speed, length = nondimensionalize(DimensionalParams(1, 1, 0, 0), "gravity")
    assert (model.tau, model.varpi, speed, length) == (0, 0, 1, 1)
    model, _, _ = nondimensionalize(DimensionalParams(9.81, 1.0, 9.81 / 3, 0.0))
    assert model.tau == pytest.approx(1 / 3, rel=1e-15)
    model, speed, _ = nondimensionalize(DimensionalParams(4.0, 9.0, 0.0, 2.0), "vorticity")
    assert model.varpi == pytest.approx(3.0) and speed == pytest.approx(6.0)
    for bad in (DimensionalParams(0, 1), DimensionalParams(1, -1), DimensionalParams(1, 1, -1)):
        with pytest.raises(ParameterDomainError):
            nondimensionalize(bad)


def test_kdv_coefficients():
    c0, beta = longwave_kdv_coeffs(DispersionModel.capillary(0.1))
    assert c0 == 1.0 and beta == pytest.approx((1 / 3 - 0.1) / 2)
    # m(z) = c0 (1 - beta z^2) + O(z^4)
    z = 1e-2
    m = symbol(DispersionModel.capillary(0.1), z)
    assert (1 - m) / z ** 2 == pytest.approx(beta, rel=1e-3)
    with pytest.raises(UnsupportedModelError):
        longwave_kdv_coeffs(DispersionModel.vorticity(1.0))


@settings(max_examples=60, deadline=None)
@given(tau=st.floats(0, 2), z=st.floats(1e-4, 50))
def test_capillary_symbol_positive_and_matches_formula(tau, z):
    model = DispersionModel.capillary(tau)
    m = symbol(model, z)
    assert m > 0
    assert m == pytest.approx(math.sqrt((1 + tau * z * z) * math.tanh(z) / z), rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(w=st.floats(-30, 30), z=st.floats(0, 40))
def test_vorticity_branches_bracket_zero(w, z):
    plus = symbol(DispersionModel.vorticity(w), z)
    minus = symbol(DispersionModel.vorticity(w, "minus"), z)
    assert plus > 0 > minus
    t = 1.0 if z == 0 else math.tanh(z) / z
    # the two branches are the roots of m^2 - varpi t m - t = 0
    assert plus * minus == pytest.approx(-t, rel=1e-10)
    assert plus + minus == pytest.approx(w * t, abs=1e-10 * max(1, abs(w)))


def test_vorticity_reflection_of_symbol():
    z = np.linspace(0, 20, 200)
    for w in (-7.0, 0.3, 4.0):
        plus = symbol(DispersionModel.vorticity(-w), z)
        minus = symbol(DispersionModel.vorticity(w, "minus"), z)
        np.testing.assert_allclose(minus, -plus, rtol=1e-14, atol=1e-14)


def test_series_cutoff_continuity():
    model = DispersionModel.capillary(0.2)
    z = np.array([0.1 - 1e-12, 0.1 + 1e-12])
    for order in (1, 2):
        d = symbol_deriv(model, z, order)
        assert abs(d[1] - d[0]) < 1e-11
    assert abs(np.diff(symbol(model, z))[0]) < 1e-11


def test_mpmath_oracle_sanity():
    assert float(mp_symbol(DispersionModel.gravity(), 1)) == pytest.approx(float(mp.sqrt(mp.tanh(1))))
