import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kobmetric.domains import (DomainSpec, ball, boundary_distance, boundary_sample, bounding_radii,
                               circumscribing_radius, contains, defining_value, diagonal_ball_scale, egg, gauge,
                               gradient, gradient_fd, lempert, make_domain, normal_ray_point, outward_normal,
                               polydisc, quadratic_sup, radial_boundary, smooth_pieces, sphere_sample,
                               stretched_ball, support_function)

ALL = [ball(2), ball(3), polydisc(2, (1.0, 0.5)), egg(1, 2), egg(1, 3), egg(2, 3), lempert(0.25),
       stretched_ball(4.0)]
IDS = [str(d) for d in ALL]


def test_constructor_validation():
    with pytest.raises(ValueError):
        DomainSpec("cube", 2)
    with pytest.raises(ValueError):
        egg(1, 0)
    with pytest.raises(ValueError):
        lempert(1.5)
    with pytest.raises(ValueError):
        stretched_ball(0.5)
    with pytest.raises(ValueError):
        polydisc(2, (1.0, -1.0))


@pytest.mark.parametrize("dom", ALL, ids=IDS)
def test_descriptor_round_trip(dom):
    assert make_domain(dom.to_dict()) == dom
    assert make_domain(json.dumps(dom.to_dict())) == dom


def test_descriptor_from_file(tmp_path):
    p = tmp_path / "d.json"
    p.write_text('{"kind": "egg", "exponents": [1, 2]}')
    assert make_domain(str(p)) == egg(1, 2)
    with pytest.raises(ValueError):
        make_domain({"exponents": [1]})


def test_examples():
    assert contains(ball(2), (0.6, 0.7))
    assert contains(egg(1, 2), (0.9, 0.6))
    assert not contains(egg(1, 2), (0.9, 0.7))
    assert defining_value(lempert(0.25), (1, 0)) < 0
    assert defining_value(lempert(0.25), (0, 1)) < 0
    assert defining_value(ball(2), (1, 0)) == 0.0


@pytest.mark.parametrize("dom", ALL, ids=IDS)
def test_gradient_matches_finite_differences(dom):
    rng = np.random.default_rng(3)
    for _ in range(10):
        z = 0.6 * (rng.uniform(-1, 1, dom.n) + 1j * rng.uniform(-1, 1, dom.n))
        g, gfd = gradient(dom, z), gradient_fd(dom, z)
        assert np.allclose(g, gfd, atol=1e-6 * max(1, np.abs(g).max()))


@pytest.mark.parametrize("dom", ALL, ids=IDS)
def test_smooth_pieces_max_is_defining_function(dom):
    z = 0.4 * sphere_sample(dom.n, 50, seed=2)
    vals, grads = smooth_pieces(dom, z)
    assert grads.shape == vals.shape + (dom.n,)
    assert np.allclose(vals.max(axis=-1), defining_value(dom, z), atol=1e-14)


@pytest.mark.parametrize("dom", ALL, ids=IDS)
def test_radial_boundary_and_gauge(dom):
    u = sphere_sample(dom.n, 200, seed=4)
    t = radial_boundary(dom, u)
    assert np.allclose(defining_value(dom, t[:, None] * u), 0.0, atol=1e-10)
    assert np.allclose(gauge(dom, t[:, None] * u * 0.5), 0.5)


@pytest.mark.parametrize("dom", ALL, ids=IDS)
def test_radii_bound_the_boundary(dom):
    pts = boundary_sample(dom, 4096)
    if dom.kind == "polydisc":
        pts = np.concatenate([pts, np.asarray(dom.radii)[None, :]])
    R = circumscribing_radius(dom)
    assert np.linalg.norm(pts, axis=1).max() <= R * (1 + 1e-12)
    assert np.linalg.norm(pts, axis=1).max() >= R * (1 - 2e-2)
    assert np.all(np.abs(pts) <= bounding_radii(dom) * (1 + 1e-12))


@pytest.mark.parametrize("dom", ALL, ids=IDS)
def test_support_function_is_an_upper_bound(dom):
    pts = boundary_sample(dom, 4096)
    for u in sphere_sample(dom.n, 10, seed=5):
        sampled = np.max(np.real(pts @ u.conj()))
        h = support_function(dom, u)
        assert h >= sampled - 1e-12
        assert h <= sampled * 1.10 + 1e-9


def test_support_function_closed_forms():
    u = sphere_sample(3, 5, seed=8)
    for v in u:
        assert support_function(ball(3), v) == pytest.approx(1.0)
        assert support_function(polydisc(3, (1.0, 0.5, 2.0)), v) == pytest.approx(
            float(np.abs(v) @ np.array([1.0, 0.5, 2.0])))
    # egg(1, 2) along e1 reaches |z1| = 1
    assert support_function(egg(1, 2), np.array([1, 0])) == pytest.approx(1.0)


@pytest.mark.parametrize("dom", ALL, ids=IDS)
def test_quadratic_sup_and_diagonal_scale(dom):
    pts = boundary_sample(dom, 8192)
    rng = np.random.default_rng(6)
    w = rng.uniform(0.1, 2.0, dom.n)
    sampled = np.max(np.abs(pts) ** 2 @ w)
    q = quadratic_sup(dom, w)
    assert sampled <= q * (1 + 1e-12)
    assert q <= sampled * 1.02
    # s * diag(d) maps the closed ball into the closed domain, and no larger s does
    d = rng.uniform(0.3, 1.5, dom.n)
    s = diagonal_ball_scale(dom, d)
    u = sphere_sample(dom.n, 4096, seed=7)
    assert np.max(defining_value(dom, s * u * d)) <= 1e-9
    assert np.max(defining_value(dom, 1.02 * s * u * d)) > 0


def test_boundary_distance_closed_forms():
    assert boundary_distance(ball(2), (0.3, 0.4)) == pytest.approx(0.5)
    assert boundary_distance(polydisc(2, (1.0, 0.5)), (0.2, 0.3j)) == pytest.approx(0.2)
    assert boundary_distance(stretched_ball(4.0), (0, 0)) == pytest.approx(1.0)
    assert boundary_distance(egg(1, 2), (0, 0)) == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ValueError):
        boundary_distance(ball(2), (1, 0))


def test_normal_ray():
    P = np.array([0.6, 0.8])
    assert np.allclose(outward_normal(ball(2), P), P)
    assert np.allclose(normal_ray_point(ball(2), P, 0.1), 0.9 * P)
    with pytest.raises(ValueError):
        normal_ray_point(ball(2), (0.5, 0), 0.1)
    with pytest.raises(ValueError):
        normal_ray_point(ball(2), P, 3.0)


coord = st.floats(-1.2, 1.2, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(coord, min_size=4, max_size=4), st.sampled_from(range(len(ALL))))
def test_gauge_decides_membership(xs, i):
    dom = ALL[i]
    if dom.n != 2:
        return
    z = np.array([xs[0] + 1j * xs[1], xs[2] + 1j * xs[3]])
    if np.linalg.norm(z) == 0:
        return
    g = gauge(dom, z)
    if abs(g - 1) > 1e-9:
        assert contains(dom, z) == (g < 1)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0, 2 * np.pi))
def test_domains_are_circular(r, theta):
    # rotating each coordinate preserves every model domain
    for dom in ALL:
        u = sphere_sample(dom.n, 1, seed=11)[0] * r * circumscribing_radius(dom)
        v = u * np.exp(1j * theta * np.arange(1, dom.n + 1))
        assert defining_value(dom, u) == pytest.approx(defining_value(dom, v), abs=1e-12)
