import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import unit_metrics
from metricjets import FrameError, JetError, OrderError
from metricjets.jet import DiffeoJet, JetScalar, compose, substitute
from metricjets.metric import (
    MetricJet,
    christoffel,
    curvature_data,
    gauss_curvature,
    inverse_metric,
    pullback,
    rotation_jet,
    unit_frame,
)
from metricjets.normal_form import metric_from_h, normalize
from metricjets.sampling import random_diffeo, random_metric
from oracles import close, from_sympy, numeric_curvature_data, sphere_h, sym_vars, to_sympy

law = settings(max_examples=25)
seeds = st.integers(0, 10**6)


def one_dim(coeffs, order):
    return MetricJet({(0, 0): JetScalar(1, order, coeffs)})


def test_pullback_identity_and_rotation():
    rng = random.Random(3)
    g = random_metric(rng, 2, 4)
    assert pullback(DiffeoJet.identity(2, 5), g) == g
    rot = rotation_jet([[Fraction(3, 5), Fraction(4, 5)], [Fraction(-4, 5), Fraction(3, 5)]], 5)
    assert pullback(rot, MetricJet.flat(2, 4)) == MetricJet.flat(2, 4)


def test_pullback_chain_rule_one_dim():
    (x,) = JetScalar.variables(1, 3)
    g = pullback(DiffeoJet([x + x * x]), MetricJet.flat(1, 2))
    assert g[0, 0] == JetScalar(1, 2, {(0,): 1, (1,): 4, (2,): 4})


def test_pullback_needs_higher_map_order():
    with pytest.raises(OrderError):
        pullback(DiffeoJet.identity(2, 3), MetricJet.flat(2, 3))


def test_inverse_metric_one_dim():
    ginv = inverse_metric(one_dim({(0,): 1, (1,): 2}, 4))
    assert ginv[0][0] == JetScalar(1, 4, {(0,): 1, (1,): -2, (2,): 4, (3,): -8, (4,): 16})


def test_inverse_metric_flat_and_h():
    flat = inverse_metric(MetricJet.flat(3, 2))
    assert all(flat[i][j] == JetScalar.constant(int(i == j), 3, 2) for i in range(3) for j in range(3))
    g = metric_from_h(JetScalar.constant(Fraction(-1, 3), 2, 4), 6)
    ginv = inverse_metric(g)
    for i in range(2):
        for j in range(2):
            prod = sum((g[i, k] * ginv[k][j] for k in range(2)), JetScalar.zero(2, 6))
            assert prod == JetScalar.constant(int(i == j), 2, 6)


@pytest.mark.parametrize("seed", range(100))
def test_inverse_metric_random(seed):
    rng = random.Random(seed)
    n = rng.choice([1, 2, 3])
    g = normalize(random_metric(rng, n, rng.randint(0, 4)))
    ginv = inverse_metric(g)
    for i in range(n):
        for j in range(n):
            prod = sum((g[i, k] * ginv[k][j] for k in range(n)), JetScalar.zero(n, g.order))
            assert prod == JetScalar.constant(int(i == j), n, g.order)


def test_christoffel_one_dim():
    gam = christoffel(one_dim({(0,): 1, (1,): 2}, 4))
    assert gam[0][0][0] == JetScalar(1, 3, {(0,): 1, (1,): -2, (2,): 4, (3,): -8})


def test_christoffel_vanishes_at_origin_in_normal_form():
    g = normalize(random_metric(random.Random(11), 2, 4))
    gam = christoffel(g)
    assert all(gam[k][i][j].constant_term() == 0 for k in range(2) for i in range(2) for j in range(2))
    assert all(c.is_zero() for plane in christoffel(MetricJet.flat(2, 3)) for row in plane for c in row)


@settings(max_examples=10)
@given(st.data())
def test_christoffel_symmetric_and_matches_sympy(data):
    n = data.draw(st.integers(1, 2))
    r = data.draw(st.integers(1, 3))
    g = data.draw(unit_metrics(n, r))
    gam = christoffel(g)
    zs = sym_vars(n)
    G = sympy.Matrix(n, n, lambda i, j: to_sympy(g[i, j]))
    Ginv = G.inv()
    for k in range(n):
        for i in range(n):
            for j in range(n):
                assert gam[k][i][j] == gam[k][j][i]
                expr = sum(
                    Ginv[k, l] * (sympy.diff(G[j, l], zs[i]) + sympy.diff(G[i, l], zs[j]) - sympy.diff(G[i, j], zs[l]))
                    for l in range(n)
                ) / 2
                assert gam[k][i][j] == from_sympy(expr, n, r - 1)


def _sympy_brioschi(g):
    x, y = sym_vars(2)
    E, F, G = (to_sympy(g[i, j]) for i, j in ((0, 0), (0, 1), (1, 1)))
    d = sympy.diff
    m1 = sympy.Matrix([
        [-d(E, y, 2) / 2 + d(F, x, y) - d(G, x, 2) / 2, d(E, x) / 2, d(F, x) - d(E, y) / 2],
        [d(F, y) - d(G, x) / 2, E, F],
        [d(G, y) / 2, F, G],
    ])
    m2 = sympy.Matrix([[0, d(E, y) / 2, d(G, x) / 2], [d(E, y) / 2, E, F], [d(G, x) / 2, F, G]])
    return (m1.det() - m2.det()) / (E * G - F * F) ** 2


@settings(max_examples=12)
@given(st.data())
def test_curvature_matches_symbolic_brioschi(data):
    r = data.draw(st.integers(2, 4))
    g = data.draw(unit_metrics(2, r))
    assert gauss_curvature(g) == from_sympy(_sympy_brioschi(g), 2, r - 2)


def test_flat_curvature():
    assert gauss_curvature(MetricJet.flat(2, 5)).is_zero()
    data = curvature_data(MetricJet.flat(2, 4))
    assert (data.K0, data.grad, data.hess) == (0, (0, 0), ((0, 0), (0, 0)))


def test_unit_sphere():
    g = metric_from_h(sphere_h(4), 6)
    assert gauss_curvature(g) == JetScalar.constant(1, 2, 4)
    data = curvature_data(g)
    assert (data.K0, data.grad, data.hess) == (1, (0, 0), ((0, 0), (0, 0)))


@pytest.mark.parametrize("c", [Fraction(5, 7), Fraction(-1, 3), Fraction(2), Fraction(-11, 13)])
def test_constant_h_curvature(c):
    g = metric_from_h(JetScalar.constant(c, 2, 2), 4)
    data = curvature_data(g)
    assert data.K0 == -3 * c
    k0, _, _ = numeric_curvature_data(g)
    assert close(-3 * c, k0)


def test_h_equal_x_against_numeric_oracle():
    g = metric_from_h(JetScalar(2, 2, {(1, 0): 1}), 4)
    data = curvature_data(g)
    assert data.K0 == 0 and data.grad != (0, 0)
    k0, grad, hess = numeric_curvature_data(g)
    assert close(Fraction(0), k0)
    assert all(close(e, a) for e, a in zip(data.grad, grad))
    assert all(close(e, a) for er, ar in zip(data.hess, hess) for e, a in zip(er, ar))


@pytest.mark.parametrize("seed", range(6))
def test_random_normal_forms_against_numeric_oracle(seed):
    rng = random.Random(seed)
    g = normalize(random_metric(rng, 2, 4, height=3))
    data = curvature_data(g)
    k0, grad, hess = numeric_curvature_data(g)
    flat_exact = [data.K0, *data.grad, *data.hess[0], *data.hess[1]]
    flat_num = [k0, *grad, *hess[0], *hess[1]]
    assert all(close(e, a) for e, a in zip(flat_exact, flat_num))


def test_curvature_data_requires_normal_form():
    (x, y) = JetScalar.variables(2, 4)
    g = MetricJet({(0, 0): 1 + x, (0, 1): JetScalar.zero(2, 4), (1, 1): JetScalar.constant(1, 2, 4)})
    with pytest.raises(JetError):
        curvature_data(g)


@law
@given(seeds)
def test_pullback_is_functorial(seed):
    rng = random.Random(seed)
    n, r = rng.choice([1, 2, 3]), rng.randint(0, 3)
    g = random_metric(rng, n, r)
    tau = random_diffeo(rng, n, r + 1)
    sigma = random_diffeo(rng, n, r + 1)
    assert pullback(sigma, pullback(tau, g)) == pullback(compose(tau, sigma), g)


@law
@given(seeds)
def test_curvature_is_natural(seed):
    rng = random.Random(seed)
    r = rng.randint(2, 4)
    g = random_metric(rng, 2, r)
    tau = random_diffeo(rng, 2, r + 1)
    lhs = gauss_curvature(pullback(tau, g))
    assert lhs == substitute(gauss_curvature(g), tau)


def test_frames():
    x, _ = JetScalar.variables(2, 3)
    g = MetricJet({(0, 0): 4 + x, (0, 1): JetScalar.zero(2, 3), (1, 1): JetScalar.constant(9, 2, 3)})
    unit, tau = unit_frame(g)
    assert unit.has_unit_frame() and tau is not None
    assert pullback(tau, g) == unit
    assert unit_frame(MetricJet.flat(2, 3))[1] is None
    irrational = MetricJet({(0, 0): JetScalar.constant(2, 1, 2)})
    with pytest.raises(FrameError):
        unit_frame(irrational)
    with pytest.raises(FrameError):
        MetricJet({(0, 0): JetScalar.constant(-1, 1, 2)})
    with pytest.raises(FrameError):
        normalize(irrational)
