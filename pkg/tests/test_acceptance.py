"""The ten acceptance criteria, each at its stated tolerance and runtime limit.

Every test records one PASS/FAIL line, repeated in the terminal summary.
"""

import math
import time

import numpy as np
import sympy

from kobmetric.budget import DEFAULT_BUDGET
from kobmetric.chains import ChainPath, ball_distance, lempert_lower_bound, one_disc_distance_upper, shorten_chain
from kobmetric.cli import main
from kobmetric.dbar import (GridField, bump_dbar, cauchy_solve, centered_grid, correction_scaling_experiment,
                            grid_points, relative_residual)
from kobmetric.domains import ball, egg, lempert, sphere_sample, stretched_ball
from kobmetric.harness import EXPERIMENTS
from kobmetric.invariants import circular_average, circular_center_exact, quotient_upper
from kobmetric.metrics import caratheodory_lower, kobayashi_exact_model, kobayashi_upper

# M(0) of Egg(1, 2) fixed by the diagonal brute force in test_invariants.py: (4/3)^(3/4)
EGG12_M0 = 1.2408064788027995
ALPHAS = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99)


def _random_ball_queries(n, count, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        z = sphere_sample(n, 1, int(rng.integers(1 << 30)))[0] * 0.9 * rng.uniform() ** (1 / (2 * n))
        xi = rng.normal(size=n) + 1j * rng.normal(size=n)
        out.append((z, xi))
    return out


def test_criterion_01_ball_exactness(record):
    t0 = time.perf_counter()
    worst = 0.0
    for n in (2, 3):
        for i, (z, xi) in enumerate(_random_ball_queries(n, 20, seed=100 + n)):
            exact = kobayashi_exact_model(ball(n), z, xi).value
            b = DEFAULT_BUDGET.with_(seed=i)
            for fn in (kobayashi_upper, caratheodory_lower):
                worst = max(worst, abs(fn(ball(n), z, xi, b).value / exact - 1))
    dt = time.perf_counter() - t0
    record(1, worst <= 0.02 and dt < 60, f"max relative error {worst:.2e} (<= 2e-2), {dt:.1f} s (< 60 s)")


def test_criterion_02_quotient_on_the_ball(record):
    t0 = time.perf_counter()
    worst = 0.0
    for z, _ in _random_ball_queries(2, 10, seed=7):
        worst = max(worst, quotient_upper(ball(2), z, DEFAULT_BUDGET).m_upper)
    dt = time.perf_counter() - t0
    record(2, worst <= 1 + 1e-6 and dt < 30, f"max m_upper {worst:.12f} (<= 1 + 1e-6), {dt:.1f} s (< 30 s)")


def test_criterion_03_egg_inequivalence(record):
    t0 = time.perf_counter()
    m = circular_center_exact(egg(1, 2), DEFAULT_BUDGET).m_upper
    dt = time.perf_counter() - t0
    rel = abs(m / EGG12_M0 - 1)
    record(3, m >= 1.05 and rel <= 5e-3 and dt < 120,
           f"M(0) = {m:.10f} vs pinned {EGG12_M0:.10f} (rel {rel:.1e} <= 5e-3, >= 1.05), {dt:.1f} s (< 120 s)")


def test_criterion_04_lempert_consistency(record):
    t0 = time.perf_counter()
    b = DEFAULT_BUDGET.with_(degree=20)
    lows, ups = [], []
    for k in range(2, 13):
        eps = 2.0**-k
        lows.append(lempert_lower_bound(eps)[1])
        ups.append(one_disc_distance_upper(lempert(eps), (1, 0), (0, 1), b).distance_upper)
    dt = time.perf_counter() - t0
    below = all(lo <= up for lo, up in zip(lows, ups))
    increasing = all(a < c for a, c in zip(lows, lows[1:]))
    k9 = abs(lows[9 - 2] - math.atanh(0.5))
    table = ", ".join(f"k={k}: {lo:.3f}<={up:.3f}" for k, lo, up in zip(range(2, 13), lows, ups))
    record(4, below and increasing and k9 <= 1e-15 and dt < 600,
           f"lower<=upper {below}, increasing {increasing}, |lower(9) - artanh(1/2)| = {k9:.1e}, "
           f"{dt:.0f} s (< 600 s); {table}")


def test_criterion_05_anisotropy(record):
    t0 = time.perf_counter()
    ratios = {}
    for N in (4.0, 16.0):
        dom = stretched_ball(N)
        e1 = kobayashi_upper(dom, (0, 0), (1, 0), DEFAULT_BUDGET).value
        e2 = kobayashi_upper(dom, (0, 0), (0, 1), DEFAULT_BUDGET).value
        ratios[N] = e1 / e2
    dt = time.perf_counter() - t0
    ok = all(abs(r / N - 1) <= 0.02 for N, r in ratios.items())
    record(5, ok and dt < 30, f"ratios {ratios} (N within 2%), {dt:.1f} s (< 30 s)")


def test_criterion_06_egg_comparability(record):
    t0 = time.perf_counter()
    dom = egg(1, 2)
    ratios = []
    for a in ALPHAS:
        for xi in ((1, 0), (0, 1)):
            z = np.array([a, 0], complex)
            up = kobayashi_upper(dom, z, xi, DEFAULT_BUDGET).value
            lo = caratheodory_lower(dom, z, xi, DEFAULT_BUDGET).value
            ratios.append(up / lo)
    dt = time.perf_counter() - t0
    ok = all(1 - 1e-9 <= r <= 3 for r in ratios)
    record(6, ok and dt < 300, f"ratios in [{min(ratios):.6f}, {max(ratios):.6f}] (within [1 - 1e-9, 3]), "
                               f"{dt:.0f} s (< 300 s)")


def test_criterion_07_chain_collapse(record):
    t0 = time.perf_counter()
    dom = ball(2)
    details, ok = [], True
    for seed in range(5):
        rng = np.random.default_rng(seed)
        pts = [sphere_sample(2, 1, int(rng.integers(1 << 30)))[0] * 0.6 * rng.uniform() ** 0.25 for _ in range(5)]
        b = DEFAULT_BUDGET.with_(seed=seed)
        legs = [one_disc_distance_upper(dom, pts[i], pts[i + 1], b, fast=True) for i in range(4)]
        short = shorten_chain(dom, ChainPath(pts, legs), budget=b)
        exact = ball_distance(pts[0], pts[-1])
        rel = short.total / exact - 1
        ok &= len(short.legs) == 1 and abs(rel) <= 0.01
        details.append(f"{len(legs)}->{len(short.legs)} legs, rel {rel:.1e}")
    dt = time.perf_counter() - t0
    record(7, ok and dt < 300, "; ".join(details) + f"; {dt:.0f} s (< 300 s)")


def test_criterion_08_dbar(record):
    t0 = time.perf_counter()
    res = []
    for n in (256, 512):
        h, o = centered_grid(0j, 1.0, n)
        tau = GridField(bump_dbar(grid_points(n, h, o)), h, o)
        res.append(relative_residual(cauchy_solve(tau), tau))
    ratio = res[0] / res[1]
    rot = correction_scaling_experiment(lambda z: z + z * z, 1j, [0.2, 0.1, 0.05, 0.025])
    ident = correction_scaling_experiment(lambda z: z + z * z, 1.0, [0.2, 0.1, 0.05, 0.025])
    dt = time.perf_counter() - t0
    ok = (res[0] <= 0.02 and 4 / 1.5 <= ratio <= 6 and rot.slope >= 1.0 and np.all(ident.sup_u == 0)
          and dt < 120)
    record(8, ok, f"residual {res[0]:.2e} at 256^2 (<= 2e-2), ratio {ratio:.2f} per doubling (in [2.67, 6]), "
                  f"slope {rot.slope:.4f} (>= 1), identity sup|u| = {ident.sup_u.max()}, {dt:.1f} s (< 120 s)")


def test_criterion_09_averaging(record):
    t0 = time.perf_counter()
    z1, z2 = sympy.symbols("z1 z2")
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(20):
        d1, d2 = rng.integers(1, 6, size=2)
        c = np.zeros((2, d1 + 1, d2 + 1), complex)
        exprs = []
        for j in range(2):
            e = 0
            for a in range(d1 + 1):
                for b in range(d2 + 1):
                    re, im = (sympy.Rational(int(v), 97) for v in rng.integers(-200, 200, size=2))
                    c[j, a, b] = complex(float(re), float(im))
                    e += (re + sympy.I * im) * z1**a * z2**b
            exprs.append(sympy.expand(e))
        exact = [complex(sympy.Poly(exprs[0], z1, z2).coeff_monomial(z1)),
                 complex(sympy.Poly(exprs[1], z1, z2).coeff_monomial(z2))]
        worst = max(worst, float(np.max(np.abs(circular_average(c) - exact))))
    dt = time.perf_counter() - t0
    record(9, worst <= 1e-10 and dt < 5, f"max error {worst:.1e} (<= 1e-10), {dt:.2f} s (< 5 s)")


# full default runs except the two longest sweeps, which are trimmed to a few points
DETERMINISM_PARAMS = {
    "lempert-sweep": '{"ks": [2, 5, 9]}',
    "egg-report": '{"alphas": [0.0, 0.5, 0.99]}',
}


def test_criterion_10_determinism(record, tmp_path):
    t0 = time.perf_counter()
    same = {}
    for exp in EXPERIMENTS:
        outs = []
        for rep in range(2):
            out = tmp_path / f"{exp}-{rep}.csv"
            args = [exp, "--seed", "11", "--out", str(out)]
            if exp in DETERMINISM_PARAMS:
                args += ["--params", DETERMINISM_PARAMS[exp]]
            assert main(args) == 0
            outs.append(out.read_bytes())
        same[exp] = outs[0] == outs[1]
    dt = time.perf_counter() - t0
    record(10, all(same.values()), f"byte-identical: {same}, {dt:.0f} s")
