import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kobmetric.budget import OptimizerBudget
from kobmetric.domains import ball, defining_value, egg, polydisc, sphere_sample, stretched_ball
from kobmetric.invariants import (ModelSpec, VolumeInvariantEstimate, c_lower, circular_average,
                                  circular_average_function, circular_center_exact, k_upper, model_quotient,
                                  quotient_upper)

FAST = OptimizerBudget(restarts=2, max_iterations=200)

# M(0) of Egg(1, 2): C(0) = (3/4)^(3/4) by diagonal maps into the ball, K(0) = 1
EGG12_M0 = (4.0 / 3.0) ** 0.75


def _diagonal_oracle_egg12(steps=4001):
    """Brute force over diagonal maps for Egg(1, 2) = {|z1|^2 + |z2|^4 < 1}, independent of the library."""
    t = np.linspace(0.0, 1.0, steps)  # t = |z1|^2 on the boundary, or |w1|^2 on the sphere
    ratios = np.exp(np.linspace(-3, 3, steps))
    # C: diag(1, b) into the ball; sup over the egg of |z1|^2 + b^2 |z2|^2
    sup = np.max(t[None, :] + ratios[:, None] ** 2 * np.sqrt(1 - t[None, :]), axis=1)
    C = np.max(ratios / sup)
    # K: diag(1, d) scaled by s from the ball into the egg; s^2 t + s^4 d^4 (1 - t)^2 <= 1
    best = 0.0
    for d in ratios:
        lo, hi = 0.0, 10.0
        for _ in range(60):
            s = 0.5 * (lo + hi)
            ok = np.max(s * s * t + s**4 * d**4 * (1 - t) ** 2) <= 1
            lo, hi = (s, hi) if ok else (lo, s)
        best = max(best, lo * lo * d)
    return C, 1.0 / best


def test_oracle_is_pinned():
    C, K = _diagonal_oracle_egg12()
    assert C == pytest.approx(0.75**0.75, rel=1e-5)
    assert K == pytest.approx(1.0, rel=1e-5)
    assert K / C == pytest.approx(EGG12_M0, rel=1e-5)


def test_ball_values():
    for n in (1, 2, 3):
        est = quotient_upper(ball(n), np.zeros(n), FAST)
        assert est.c_lower == pytest.approx(1.0) and est.k_upper == pytest.approx(1.0)
    # complex-determinant convention: C = K = (1 - |z|^2)^(-(n + 1) / 2)
    c, _ = c_lower(ball(2), (0.5, 0), FAST)
    k, _ = k_upper(ball(2), (0.5, 0), FAST)
    assert c == pytest.approx(0.75**-1.5, rel=1e-9)
    assert k == pytest.approx(0.75**-1.5, rel=1e-9)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 1000), st.floats(0.0, 0.9))
def test_quotient_is_one_on_the_ball(seed, r):
    z = sphere_sample(2, 1, seed)[0] * r
    est = quotient_upper(ball(2), z, FAST)
    assert 1 - 1e-9 <= est.m_upper <= 1 + 1e-6


def test_stretched_ball():
    assert k_upper(stretched_ball(4.0), (0, 0), FAST)[0] <= 0.25 * (1 + 1e-9)
    est = quotient_upper(stretched_ball(4.0), (0.3, 0.4), FAST)
    assert est.m_upper == pytest.approx(1.0, abs=1e-6)


def test_egg_quotient_upper_is_consistent():
    est = quotient_upper(egg(1, 2), (0, 0), FAST)
    assert est.m_upper >= EGG12_M0 * (1 - 1e-6)
    assert est.c_lower <= 0.75**0.75 * (1 + 1e-6)


def test_witness_serialisation():
    est = quotient_upper(ball(2), (0.1, 0.2), FAST)
    d = est.to_dict()
    assert set(d["witnesses"]) == {"to_ball", "from_ball"}
    assert d["m_upper"] == pytest.approx(est.k_upper / est.c_lower)
    with pytest.raises(ValueError):
        VolumeInvariantEstimate(0.0, 1.0)


def test_circular_center_exact():
    assert circular_center_exact(egg(1, 1)).m_upper == 1.0
    est = circular_center_exact(egg(1, 2), FAST, general_starts=4)
    assert est.exact
    assert est.m_upper == pytest.approx(EGG12_M0, rel=1e-6)
    assert est.m_upper >= 1.05
    with pytest.raises(ValueError):
        circular_center_exact(ball(2))


def test_circular_average_examples():
    # (z1 + z2^2, z2 + z1 z2) averages to (z1, z2)
    c = np.zeros((2, 3, 3), complex)
    c[0, 1, 0] = 1
    c[0, 0, 2] = 1
    c[1, 0, 1] = 1
    c[1, 1, 1] = 1
    assert np.allclose(circular_average(c), [1, 1])
    with pytest.raises(ValueError):
        circular_average(c, nodes=2)
    f = lambda z: np.stack([3 * z[..., 0] + z[..., 1], 2j * z[..., 1] + z[..., 0] ** 2], axis=-1)  # noqa: E731
    assert np.allclose(circular_average_function(f, 2), [3, 2j])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_circular_average_keeps_only_the_diagonal(seed):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=(2, 4, 4)) + 1j * rng.normal(size=(2, 4, 4))
    out = circular_average(c)
    assert np.allclose(out, [c[0, 1, 0], c[1, 0, 1]], atol=1e-12)


def test_model_quotient():
    P = ModelSpec(polydisc(2))
    assert model_quotient(polydisc(2), (0, 0), P, FAST).m_upper == pytest.approx(1.0, abs=1e-9)
    b = model_quotient(ball(2), (0, 0), P, FAST)
    assert b.m_upper >= 1 - 1e-9
    assert b.m_upper == pytest.approx(2.0, rel=1e-3)
    with pytest.raises(ValueError):
        model_quotient(ball(2), (0, 0), ModelSpec(ball(2)), FAST)
    with pytest.raises(ValueError):
        ModelSpec(polydisc(2), (2, 0))


def test_k_witness_maps_ball_into_domain():
    dom = egg(1, 3)
    k, w = k_upper(dom, (0, 0), FAST)
    assert w.jacobian_det == pytest.approx(1 / k)
    L = np.diag(w.parameters["diag"]) if "diag" in w.parameters else w.parameters["matrix"]
    assert abs(np.linalg.det(L)) == pytest.approx(1 / k)
    assert np.max(defining_value(dom, sphere_sample(2, 8192, 9) @ np.asarray(L).T)) <= 1e-9
