import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kobmetric.dbar import (GridField, build_cutoff, bump, bump_dbar, cauchy_kernel, cauchy_solve, centered_grid,
                            correction_rhs, correction_scaling_experiment, dbar_fd, grad_norm_fd, grid_points,
                            relative_residual)


def _manufactured(n, half_width=1.0, radius=0.5):
    h, o = centered_grid(0j, half_width, n)
    z = grid_points(n, h, o)
    return z, GridField(bump_dbar(z, radius=radius), h, o)


def test_grid_field_validation(tmp_path):
    with pytest.raises(ValueError):
        GridField(np.zeros((3, 4)), 0.1)
    with pytest.raises(ValueError):
        GridField(np.full((2, 2), np.inf), 0.1)
    f = GridField(np.arange(9).reshape(3, 3) * (1 - 0.5j), 0.25, 0.1 - 0.2j)
    f.save(tmp_path / "field")
    g = GridField.load(tmp_path / "field")
    assert np.array_equal(f.values, g.values)
    assert (g.spacing, g.origin) == (f.spacing, f.origin)


def test_centered_grid_is_symmetric():
    h, o = centered_grid(0.5j, 1.0, 8)
    z = grid_points(8, h, o)
    assert z.mean() == pytest.approx(0.5j)
    assert h == pytest.approx(0.25)


def test_cutoff():
    for r in (0.1, 0.05, 0.025):
        g = build_cutoff(0.3, r)
        assert g(0.3) == 1.0 and g(0.3 + r) == pytest.approx(0.0, abs=1e-15) and g(0.3 + 0.4 * r) == 1.0
        h, o = centered_grid(0.3, 2 * r, 256)
        z = grid_points(256, h, o)
        vals = g(z)
        assert vals.min() >= 0 and vals.max() <= 1
        # |grad gamma| r is a constant: 15/8 * 2 for the quintic smoothstep
        assert np.max(g.grad_norm(z)) * r == pytest.approx(3.75, rel=1e-3)
        fd = grad_norm_fd(GridField(vals, h, o))
        assert np.max(fd) * r == pytest.approx(3.75, rel=2e-2)
        # the exact dbar matches finite differences away from the border
        assert np.allclose(dbar_fd(GridField(vals, h, o))[2:-2, 2:-2], g.dbar(z)[2:-2, 2:-2], atol=0.02 / r)
    with pytest.raises(ValueError):
        build_cutoff(0, 0)


def test_kernel_has_zero_singular_cell():
    k = cauchy_kernel(4, 0.5)
    assert k.shape == (7, 7)
    assert k[3, 3] == 0
    assert k[3, 4] == pytest.approx(0.25 / (np.pi * 0.5))


def test_zero_data_gives_zero_solution():
    f = GridField(np.zeros((16, 16)), 0.1)
    assert not np.any(cauchy_solve(f).values)


def test_manufactured_solution_converges():
    res = []
    for n in (128, 256, 512):
        z, tau = _manufactured(n)
        u = cauchy_solve(tau)
        res.append(relative_residual(u, tau))
        # the bump is compactly supported, so the Cauchy transform recovers it exactly
        assert np.max(np.abs(u.values - bump(z))) < 1e-3
    assert res[1] <= 0.02
    assert 4 / 1.5 <= res[0] / res[1] <= 4 * 1.5
    assert 4 / 1.5 <= res[1] / res[2] <= 4 * 1.5


def test_far_field_decay():
    # an indicator-like bump of radius 0.2: u(z) ~ (1/pi) (integral tau) / z far away
    n, hw = 512, 4.0
    h, o = centered_grid(0j, hw, n)
    z = grid_points(n, h, o)
    tau = GridField(bump(z, radius=0.2) ** 0.1, h, o)
    u = cauchy_solve(tau)
    mass = tau.values.sum() * h * h / np.pi
    far = np.abs(z) > 2.5
    assert np.isfinite(u.values).all()
    assert np.allclose(u.values[far] * z[far], mass, rtol=0.02)


@settings(max_examples=10, deadline=None)
@given(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_solver_is_linear(a, b):
    z, t1 = _manufactured(64)
    t2 = t1.with_values(np.conj(t1.values) * z)
    lhs = cauchy_solve(t1.with_values(a * t1.values + b * t2.values)).values
    rhs = a * cauchy_solve(t1).values + b * cauchy_solve(t2).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(rhs)))


def test_correction_rhs():
    r, n = 0.1, 128
    h, o = centered_grid(0j, 2 * r, n)
    g = build_cutoff(0, r)
    z = grid_points(n, h, o)
    tau = correction_rhs(lambda w: w, 1j, g, n, h, o)
    # supported in the annulus r/2 <= |z| <= r
    supp = np.abs(tau.values) > 0
    assert supp.any()
    assert np.all((np.abs(z[supp]) >= r / 2) & (np.abs(z[supp]) <= r))
    assert not np.any(correction_rhs(lambda w: w, 1.0, g, n, h, o).values)
    assert not np.any(correction_rhs(lambda w: 0 * w, 1j, g, n, h, o).values)
    with pytest.raises(ValueError):
        correction_rhs(lambda w: w + 1, 1j, g, n, h, o)
    with pytest.raises(ValueError):
        correction_rhs(lambda w: w, 2.0, g, n, h, o)
    with pytest.raises(ValueError):
        correction_rhs(lambda w: w, 1j, g, 16, 4 * r / 16, o)


def test_tau_bounded_uniformly_in_r():
    sups = []
    for r in (0.2, 0.1, 0.05, 0.025):
        h, o = centered_grid(0j, 2 * r, 128)
        tau = correction_rhs(lambda w: w + w * w, np.exp(1j * np.pi / 2), build_cutoff(0, r), 128, h, o)
        sups.append(np.max(np.abs(tau.values)))
    assert max(sups) <= 1.3 * min(sups)


def test_scaling_experiment():
    tab = correction_scaling_experiment(lambda w: w, 1j, [0.2, 0.1, 0.05])
    assert np.all(np.diff(tab.sup_u) < 0)
    # psi(z) = z is scale invariant: the slope is 1 up to rounding
    assert tab.slope == pytest.approx(1.0, abs=1e-9)
    assert len(tab.rows()) == 3
    zero = correction_scaling_experiment(lambda w: w, 1.0, [0.2, 0.1, 0.05])
    assert np.all(zero.sup_u == 0) and np.isnan(zero.slope)
    with pytest.raises(ValueError):
        correction_scaling_experiment(lambda w: w, 1j, [0.2, 0.1])
    with pytest.raises(ValueError):
        correction_scaling_experiment(lambda w: w, 1j, [0.1, 0.2, 0.05])
