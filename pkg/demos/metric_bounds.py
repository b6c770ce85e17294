"""Bracketing the Kobayashi metric between disc and map bounds.

On the unit ball both bounds close onto the closed form.  On Egg(1, 2) they no
longer meet, and the volume quotient at the centre shows that the egg is not a
ball in disguise.

Run with ``python3 demos/metric_bounds.py``.
"""

import numpy as np

from kobmetric.domains import ball, egg
from kobmetric.invariants import circular_center_exact
from kobmetric.metrics import caratheodory_lower, kobayashi_exact_model, kobayashi_upper


def ball_bracket():
    dom = ball(2)
    print("unit ball in C^2: lower <= exact <= upper")
    for z, xi in [((0, 0), (1, 0)), ((0.5, 0.2j), (1, 1j)), ((0.6 + 0.5j, -0.3 + 0.3j), (0.65 + 0.5j, -0.3 + 0.2j))]:
        lo = caratheodory_lower(dom, z, xi).value
        ex = kobayashi_exact_model(dom, z, xi).value
        up = kobayashi_upper(dom, z, xi)
        print(f"  z={np.round(z, 2)}  {lo:.6f} <= {ex:.6f} <= {up.value:.6f}   ({up.method})")


def egg_bracket():
    dom = egg(1, 2)
    print("Egg(1, 2) = {|z1|^2 + |z2|^4 < 1} along the z1 axis")
    for a in (0.0, 0.5, 0.9):
        for name, xi in (("normal", (1, 0)), ("tangential", (0, 1))):
            lo = caratheodory_lower(dom, (a, 0), xi).value
            up = kobayashi_upper(dom, (a, 0), xi).value
            print(f"  alpha={a:.1f} {name:10s}  [{lo:.6f}, {up:.6f}]  ratio {up / lo:.4f}")


def egg_quotient():
    est = circular_center_exact(egg(1, 2))
    print(f"Egg(1, 2) at the centre: C = {est.c_lower:.6f}, K = {est.k_upper:.6f}, M = {est.m_upper:.6f}")
    print("  M > 1, while every point of the ball has M = 1")


if __name__ == "__main__":
    ball_bracket()
    egg_bracket()
    egg_quotient()
