import numpy as np
import pytest
from numpy.testing import assert_allclose

from pdem import (ComplexField, DomainError, MassProfile, chart_from_mass,
                  cosech_of_chart, coth_of_chart, frame_equivalence_data,
                  make_uniform_grid, pullback_potential)


def test_identity_chart():
    g = make_uniform_grid(-2, 2, 41)
    ch = chart_from_mass(MassProfile.constant(1.0), g, 0.0)
    assert_allclose(ch.q_values, g.points, atol=1e-14)
    assert_allclose(ch.f_values, np.exp(g.points), rtol=1e-14)


def test_constant_mass_chart_is_affine():
    g = make_uniform_grid(0, 3, 31)
    ch = chart_from_mass(MassProfile.constant(2.5), g, 1.0)
    assert_allclose(ch.q_values, 2.5 * (g.points - 1.0), atol=1e-13)


def test_rational_mass_chart_matches_log_closed_form():
    def err(n):
        g = make_uniform_grid(1.5, 5.0, n)
        ch = chart_from_mass(MassProfile.rational_x2m1(), g, np.sqrt(2.0))
        return np.abs(ch.q_values - np.log(g.points ** 2 - 1)).max()

    e1, e2 = err(201), err(401)
    assert e1 < 5e-4
    assert 3.5 < e1 / e2 < 4.5


def test_rational_mass_anchor_outside_grid_uses_closed_form():
    # the anchor sqrt(2) (where q = 0) lies left of the grid
    g = make_uniform_grid(1.5, 5.0, 801)
    ch = chart_from_mass(MassProfile.rational_x2m1(), g, np.sqrt(2.0))
    assert abs(ch.q_values[0] - np.log(1.5 ** 2 - 1)) < 1e-5
    assert ch.q_values[0] > 0


def test_mass_positivity_enforced():
    g = make_uniform_grid(-1, 1, 11)
    bad = MassProfile.custom(lambda x: x, domain=(-np.inf, np.inf))
    with pytest.raises(DomainError):
        chart_from_mass(bad, g, 0.0)
    with pytest.raises(DomainError):
        MassProfile.constant(-1.0)


def test_rational_mass_rejects_grid_outside_domain():
    g = make_uniform_grid(0.5, 5.0, 11)
    with pytest.raises(DomainError):
        MassProfile.rational_x2m1().mass_values(g)


def test_chart_roundtrip_second_order():
    def err(n):
        g = make_uniform_grid(1.5, 5.0, n)
        ch = chart_from_mass(MassProfile.rational_x2m1(), g, 1.5)
        x_back = ch.invert(ch.q_values)
        mid = np.linspace(ch.q_values[0], ch.q_values[-1], 57)
        x_mid = ch.invert(mid)
        exact = np.sqrt(1.0 + np.exp(mid + np.log(1.5 ** 2 - 1)))
        return max(np.abs(x_back - g.points).max(), np.abs(x_mid - exact).max())

    e1, e2 = err(401), err(801)
    assert e1 < 1e-4
    assert e1 / e2 > 3.0


def test_f_equals_exp_q_and_monotone():
    g = make_uniform_grid(1.5, 5.0, 301)
    ch = chart_from_mass(MassProfile.rational_x2m1(), g, 2.0)
    assert_allclose(ch.f_values, np.exp(ch.q_values), rtol=1e-14)
    assert np.all(np.diff(ch.q_values) > 0)
    assert np.all(ch.f_values > 0)


def test_pullback_of_constant_is_constant():
    g = make_uniform_grid(1.5, 5.0, 101)
    ch = chart_from_mass(MassProfile.rational_x2m1(), g, np.sqrt(2.0))
    out = pullback_potential(lambda q: np.full_like(np.asarray(q, dtype=complex), 3.25), ch)
    assert_allclose(out.values, 3.25, rtol=0, atol=1e-15)


def test_pullback_constant_mass_is_pure_shift():
    g = make_uniform_grid(-1, 1, 201)
    m0, x0 = 2.0, 0.25
    ch = chart_from_mass(MassProfile.constant(m0), g, x0)
    out = pullback_potential(lambda q: np.cos(q) + 0j, ch)
    assert_allclose(out.values.real, np.cos(m0 * (g.points - x0)), atol=1e-12)


def test_hyperbolic_substitutions_through_f():
    # cosech(q) = 2f/(f^2-1) and coth(q) = (f^2+1)/(f^2-1) with f = e^q
    g = make_uniform_grid(1.5, 5.0, 401)
    ch = chart_from_mass(MassProfile.rational_x2m1(), g, np.sqrt(2.0))
    q = ch.q_values
    assert_allclose(cosech_of_chart(ch), 1 / np.sinh(q), rtol=1e-12)
    assert_allclose(coth_of_chart(ch), np.cosh(q) / np.sinh(q), rtol=1e-12)
    # direct evaluation of coth through the chart agrees with the f-form
    out = pullback_potential(lambda q: np.cosh(q) / np.sinh(q) + 0j, ch)
    assert_allclose(out.values.real, coth_of_chart(ch), rtol=1e-12)


def test_pullback_cosech_squared_f_form():
    # -V2^2 cosech^2(q) pulled back equals -4 V2^2 f^2 / (f^2-1)^2
    V2 = 2.5
    g = make_uniform_grid(1.5, 5.0, 301)
    ch = chart_from_mass(MassProfile.rational_x2m1(), g, np.sqrt(2.0))
    out = pullback_potential(lambda q: -V2 ** 2 / np.sinh(q) ** 2 + 0j, ch)
    f = ch.f_values
    assert_allclose(out.values.real, -4 * V2 ** 2 * f ** 2 / (f ** 2 - 1) ** 2, rtol=1e-11)


def test_pullback_rejects_window_outside_sampled_domain():
    gq = make_uniform_grid(0.5, 2.0, 101)  # q-window of the chart exceeds this
    sampled = ComplexField(gq, np.zeros(gq.n, dtype=complex))
    gx = make_uniform_grid(1.5, 5.0, 101)
    ch = chart_from_mass(MassProfile.rational_x2m1(), gx, np.sqrt(2.0))
    with pytest.raises(DomainError):
        pullback_potential(sampled, ch)


def test_pullback_rejects_singular_composition():
    g = make_uniform_grid(1.2, 5.0, 401)  # q(1.2) < 0 < q(5): crosses q = 0
    ch = chart_from_mass(MassProfile.rational_x2m1(), g, np.sqrt(2.0))
    assert ch.q_values[0] < 0 < ch.q_values[-1]

    def veff(q):
        q = np.asarray(q, dtype=complex)
        out = 1.0 / q
        out[np.abs(q) < 0.02] = np.nan  # model a pole the window crosses
        return out

    with pytest.raises(DomainError):
        pullback_potential(veff, ch)


def test_sampled_pullback_interpolates():
    gq = make_uniform_grid(-1.0, 4.0, 4001)
    sampled = ComplexField(gq, np.sin(gq.points) + 0j)
    gx = make_uniform_grid(1.5, 5.0, 101)
    ch = chart_from_mass(MassProfile.rational_x2m1(), gx, np.sqrt(2.0))
    out = pullback_potential(sampled, ch)
    assert_allclose(out.values.real, np.sin(ch.q_values), atol=1e-6)


def test_frame_equivalence_grid_spans_q_window():
    g = make_uniform_grid(1.5, 5.0, 801)
    chart, gq, Vq = frame_equivalence_data(
        MassProfile.rational_x2m1(), g, np.sqrt(2.0), lambda q: 0 * q)
    assert gq.n == g.n
    assert abs(gq.a - np.log(1.25)) < 1e-5
    assert abs(gq.b - np.log(24.0)) < 1e-5


def test_frame_equivalence_constant_mass_shift():
    g = make_uniform_grid(0.0, 1.0, 101)
    chart, gq, _ = frame_equivalence_data(
        MassProfile.constant(2.0), g, 0.0, lambda q: 0 * q)
    assert_allclose([gq.a, gq.b], [0.0, 2.0], atol=1e-12)
    assert abs(gq.h - 0.02) < 1e-14
