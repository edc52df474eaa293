import numpy as np
import pytest
from numpy.testing import assert_allclose

from pdem import (ComplexField, DomainError, central_derivative,
                  cumulative_integral, make_uniform_grid)


def test_uniform_grid_basic():
    g = make_uniform_grid(0, 1, 5)
    assert_allclose(g.points, [0, 0.25, 0.5, 0.75, 1.0])
    assert g.h == 0.25
    assert g.points[0] == 0.0 and g.points[-1] == 1.0


def test_uniform_grid_symmetric():
    g = make_uniform_grid(-1, 1, 3)
    assert_allclose(g.points, [-1, 0, 1])
    assert g.symmetric
    assert not make_uniform_grid(0, 1, 3).symmetric


def test_uniform_grid_rejects_bad_input():
    with pytest.raises(DomainError):
        make_uniform_grid(2, 2, 5)
    with pytest.raises(DomainError):
        make_uniform_grid(3, 2, 5)
    with pytest.raises(DomainError):
        make_uniform_grid(0, 1, 2)


def test_field_length_and_finiteness_checked():
    g = make_uniform_grid(0, 1, 5)
    with pytest.raises(DomainError):
        ComplexField(g, np.zeros(4))
    with pytest.raises(DomainError):
        ComplexField(g, np.array([0, 1, np.inf, 0, 0.0]))


def test_derivative_constant_and_linear_exact():
    g = make_uniform_grid(-2, 3, 17)
    const = ComplexField(g, np.full(g.n, 7.0 + 0j))
    assert np.all(central_derivative(const).values == 0)
    lin = ComplexField(g, g.points.astype(complex))
    assert_allclose(central_derivative(lin).values, 1.0, rtol=0, atol=1e-14)


def test_derivative_quadratic_exact_everywhere():
    # second-order stencils, one-sided at the ends included, are exact on x^2
    g = make_uniform_grid(0.5, 2.5, 9)
    f = ComplexField(g, (g.points ** 2).astype(complex))
    assert_allclose(central_derivative(f).values, 2 * g.points, rtol=1e-13)


def test_cumulative_integral_exact_for_affine():
    g = make_uniform_grid(-1, 1, 21)
    one = ComplexField(g, np.ones(g.n, dtype=complex))
    assert_allclose(cumulative_integral(one, 0.0).values, g.points, atol=1e-15)
    two_x = ComplexField(g, 2 * g.points.astype(complex))
    assert_allclose(cumulative_integral(two_x, 0.0).values, g.points ** 2, atol=1e-14)


def test_cumulative_integral_log_oracle():
    # antiderivative of 2x/(x^2-1) is ln(x^2-1); O(h^2) against the closed form
    def err(n):
        g = make_uniform_grid(1.5, 5.0, n)
        f = ComplexField(g, (2 * g.points / (g.points ** 2 - 1)).astype(complex))
        got = cumulative_integral(f, 1.5).values.real
        exact = np.log(g.points ** 2 - 1) - np.log(1.5 ** 2 - 1)
        return np.abs(got - exact).max()

    e1, e2 = err(201), err(401)
    assert e1 < 5e-4
    assert 3.5 < e1 / e2 < 4.5


def test_cumulative_integral_anchor_between_nodes():
    g = make_uniform_grid(0, 1, 11)
    one = ComplexField(g, np.ones(g.n, dtype=complex))
    got = cumulative_integral(one, 0.55).values.real
    assert_allclose(got, g.points - 0.55, atol=1e-15)


def test_cumulative_integral_anchor_outside_raises():
    g = make_uniform_grid(0, 1, 11)
    f = ComplexField(g, np.ones(g.n, dtype=complex))
    with pytest.raises(DomainError):
        cumulative_integral(f, -0.1)


def test_derivative_of_integral_roundtrip_order():
    def roundtrip_err(n):
        g = make_uniform_grid(-2, 2, n)
        f = ComplexField(g, np.exp(1j * g.points) * np.cosh(g.points))
        F = cumulative_integral(f, 0.0)
        back = central_derivative(F).values
        return np.abs(back[1:-1] - f.values[1:-1]).max()

    e1, e2 = roundtrip_err(201), roundtrip_err(401)
    assert 3.5 < e1 / e2 < 4.5


def test_linearity_to_machine_precision():
    g = make_uniform_grid(-1, 2, 31)
    rng = np.random.default_rng(3)
    f = ComplexField(g, rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n))
    h = ComplexField(g, rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n))
    z = 0.7 - 1.3j
    lhs = central_derivative(ComplexField(g, z * f.values + h.values)).values
    rhs = z * central_derivative(f).values + central_derivative(h).values
    assert_allclose(lhs, rhs, atol=1e-12)
    lhs_i = cumulative_integral(ComplexField(g, z * f.values + h.values), 0.5).values
    rhs_i = (z * cumulative_integral(f, 0.5).values
             + cumulative_integral(h, 0.5).values)
    assert_allclose(lhs_i, rhs_i, atol=1e-12)
