import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kobmetric.budget import OptimizerBudget
from kobmetric.discs import (AnalyticDisc, derivative_at, evaluate, feasibility_margin, linear_disc_radius,
                             mobius, poincare_distance, precompose_mobius, pseudo_hyperbolic, verified_margin)
from kobmetric.domains import ball, egg, lempert, polydisc, stretched_ball

cplx = st.complex_numbers(max_magnitude=0.95, allow_nan=False, allow_infinity=False)


def test_disc_validation():
    with pytest.raises(ValueError):
        AnalyticDisc(np.zeros((14, 2)), max_degree=12)
    with pytest.raises(ValueError):
        AnalyticDisc(np.array([[np.nan, 0]]))
    d = AnalyticDisc.linear((0, 0), (1, 2))
    assert d.degree == 1 and d.n == 2
    with pytest.raises(ValueError):
        d(1.5)


def test_evaluate_and_derivative():
    d = AnalyticDisc(np.array([[0.1, 0], [0.5, 0.2], [0, 0.3j]]))
    z = 0.4 + 0.2j
    assert np.allclose(evaluate(d, z), [0.1 + 0.5 * z, 0.2 * z + 0.3j * z * z])
    assert np.allclose(derivative_at(d, z), [0.5, 0.2 + 0.6j * z])
    assert np.allclose(derivative_at(AnalyticDisc.constant((1, 2)), 0.3), 0)


def test_json_round_trip():
    d = AnalyticDisc(np.arange(6).reshape(3, 2) * (1 + 0.5j))
    e = AnalyticDisc.from_json(d.to_json())
    assert np.array_equal(d.coefficients, e.coefficients)


def test_linear_disc_is_feasible():
    d = AnalyticDisc.linear((0, 0), (0.5, 0.5))
    rep = feasibility_margin(d, ball(2))
    assert rep.margin == pytest.approx(-0.5)
    assert rep.feasible()
    with pytest.raises(ValueError):
        feasibility_margin(d, ball(2), radial_samples=4)


@pytest.mark.parametrize("dom, z, v, t", [
    (ball(2), (0, 0), (1, 0), 1.0),
    (ball(2), (0.5, 0), (0, 1), np.sqrt(0.75)),
    (polydisc(2, (1.0, 0.5)), (0, 0), (0, 1), 0.5),
    (stretched_ball(4.0), (0, 0), (0, 1), 4.0),
    (egg(1, 2), (0, 0), (0, 1), 1.0),
])
def test_linear_disc_radius(dom, z, v, t):
    r = linear_disc_radius(dom, z, v)
    assert r <= t
    assert r == pytest.approx(t, rel=2e-4)
    coeffs = np.stack([np.asarray(z, complex), r * np.asarray(v, complex) / np.linalg.norm(v)])
    assert verified_margin(coeffs, dom) <= -1e-4


def test_linear_disc_radius_outside():
    assert linear_disc_radius(lempert(0.25), (1.9999, 0), (1, 0)) == 0.0


@settings(max_examples=50, deadline=None)
@given(cplx, cplx)
def test_mobius_properties(a, z):
    assert mobius(a, 0) == pytest.approx(a)
    assert abs(mobius(a, z)) < 1
    # the Poincare distance is invariant under disc automorphisms
    w = 0.3 - 0.2j
    assert poincare_distance(mobius(a, z), mobius(a, w)) == pytest.approx(poincare_distance(z, w), abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(cplx, cplx, cplx)
def test_pseudo_hyperbolic_triangle(a, b, c):
    # the pseudo-hyperbolic distance is a metric
    assert pseudo_hyperbolic(a, c) <= pseudo_hyperbolic(a, b) + pseudo_hyperbolic(b, c) + 1e-12


def test_poincare_values():
    assert poincare_distance(0, 0.5) == pytest.approx(np.arctanh(0.5))
    # |0.3 - 0.3i| / |1 - 0.09i| = 0.42256..., artanh = 0.45080...
    assert poincare_distance(0.3, 0.3j) == pytest.approx(0.450800, abs=1e-6)
    with pytest.raises(ValueError):
        pseudo_hyperbolic(1.0, 0)


@settings(max_examples=25, deadline=None)
@given(st.complex_numbers(max_magnitude=0.5, allow_nan=False, allow_infinity=False))
def test_precompose_mobius(a):
    rng = np.random.default_rng(0)
    d = AnalyticDisc(rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2)))
    e, tail = precompose_mobius(d, a, return_tail=True)
    zeta = 0.9 * np.exp(1j * np.linspace(0, 6, 17))
    err = np.abs(e(zeta) - d(mobius(a, zeta))).max()
    assert err <= tail + 1e-10
    assert np.allclose(e(0), d(a))


def test_budget_round_trip():
    b = OptimizerBudget(restarts=3, degree=6)
    assert OptimizerBudget.from_json(b.to_dict()) == b
    assert OptimizerBudget.from_json('{"seed": 4}').seed == 4
    assert OptimizerBudget.from_json(None) == OptimizerBudget()
    with pytest.raises(ValueError):
        OptimizerBudget.from_json({"iterations": 3})
    with pytest.raises(ValueError):
        OptimizerBudget(method="bfgs")
    with pytest.raises(ValueError):
        OptimizerBudget(degree=0)
