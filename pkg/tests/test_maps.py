import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kobmetric.domains import ball, defining_value, egg, sphere_sample, stretched_ball
from kobmetric.maps import (ball_automorphism, ball_automorphism_jacobian_at_center,
                            ball_automorphism_jacobian_at_zero, ball_volume_factor, complex_jacobian_fd,
                            egg_automorphism, egg_automorphism_inverse, egg_automorphism_jacobian, stretch, unstretch)


def _ball_point(seed, n, r):
    return sphere_sample(n, 1, seed)[0] * r


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.0, 0.9), st.sampled_from([1, 2, 3]))
def test_ball_automorphism_is_an_involution(seed, r, n):
    a = _ball_point(seed, n, r)
    w = 0.7 * sphere_sample(n, 20, seed + 1)
    assert np.allclose(ball_automorphism(a, ball_automorphism(a, w)), w, atol=1e-12)
    assert np.allclose(ball_automorphism(a, np.zeros(n)), a)
    # the sphere is mapped to the sphere
    s = sphere_sample(n, 50, seed + 2)
    assert np.allclose(np.linalg.norm(ball_automorphism(a, s), axis=1), 1.0)


def test_ball_jacobians():
    a = np.array([0.3, 0.4j])
    J0 = ball_automorphism_jacobian_at_zero(a)
    assert np.allclose(J0, complex_jacobian_fd(lambda w: ball_automorphism(a, w), np.zeros(2)), atol=1e-8)
    assert np.allclose(ball_automorphism_jacobian_at_center(a),
                       complex_jacobian_fd(lambda w: ball_automorphism(a, w), a), atol=1e-7)
    # |det| = (1 - 0.25)^(3/2)
    assert abs(np.linalg.det(J0)) == pytest.approx(0.75**1.5)
    assert ball_volume_factor(a) == pytest.approx(0.75**1.5)
    with pytest.raises(ValueError):
        ball_automorphism([1.0, 0], [0, 0])


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("alpha", [0.0, 0.5, -0.3 + 0.4j, 0.95])
def test_egg_automorphism(m, alpha):
    dom = egg(1, m)
    w = egg_automorphism_inverse(m, alpha, np.zeros(2))
    assert np.allclose(w, [alpha, 0])
    assert np.allclose(egg_automorphism(m, alpha, w), 0)
    # boundary to boundary, and the inverse undoes the map
    rng = np.random.default_rng(1)
    th = rng.uniform(0, 2 * np.pi, (200, 2))
    t = rng.uniform(0, 1, 200)
    bd = np.stack([np.sqrt(t) * np.exp(1j * th[:, 0]), (1 - t) ** (1 / (2 * m)) * np.exp(1j * th[:, 1])], axis=-1)
    assert np.allclose(defining_value(dom, egg_automorphism(m, alpha, bd)), 0, atol=1e-10)
    assert np.allclose(egg_automorphism_inverse(m, alpha, egg_automorphism(m, alpha, 0.8 * bd)), 0.8 * bd)


@pytest.mark.parametrize("w", [None, (0.2, 0.3j), (-0.5, 0.6)])
def test_egg_jacobian(w):
    m, alpha = 2, 0.4 - 0.2j
    J = egg_automorphism_jacobian(m, alpha, w)
    w0 = np.array([alpha, 0]) if w is None else np.asarray(w, complex)
    assert np.allclose(J, complex_jacobian_fd(lambda v: egg_automorphism(m, alpha, v), w0), atol=1e-7)


def test_stretch():
    N = 4.0
    w = 0.9 * sphere_sample(2, 30, 3)
    z = stretch(N, w)
    assert np.all(defining_value(stretched_ball(N), z) < 0)
    assert np.allclose(defining_value(stretched_ball(N), z), defining_value(ball(2), w))
    assert np.allclose(unstretch(N, z), w)
