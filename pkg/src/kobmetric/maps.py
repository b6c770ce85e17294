"""Automorphisms of the ball and of Egg(1, m), and the stretching biholomorphism.

Ball automorphisms follow the involutive form

    phi_a(w) = (a - P_a w - s_a Q_a w) / (1 - <w, a>),   s_a = sqrt(1 - |a|^2),

where P_a is orthogonal projection onto the complex line through a and
Q_a = I - P_a.  phi_a swaps 0 and a, and phi_a'(0) = -(1 - |a|^2) P_a - s_a Q_a,
so |det phi_a'(0)| = (1 - |a|^2)^((n + 1) / 2).
"""

from __future__ import annotations

import numpy as np


def _projections(a):
    a = np.asarray(a, dtype=complex)
    n = a.size
    nrm = np.linalg.norm(a)
    if nrm == 0:
        return np.zeros((n, n), complex), np.eye(n, dtype=complex)
    u = a / nrm
    P = np.outer(u, u.conj())
    return P, np.eye(n) - P


def ball_automorphism(a, w):
    """phi_a(w), broadcasting over the leading axes of ``w``."""
    a = np.asarray(a, dtype=complex)
    w = np.asarray(w, dtype=complex)
    aa = np.vdot(a, a).real
    if aa >= 1:
        raise ValueError("automorphism centre must lie in the open ball")
    P, Q = _projections(a)
    s = np.sqrt(1.0 - aa)
    num = a - w @ P.T - s * (w @ Q.T)
    den = 1.0 - w @ a.conj()
    return num / den[..., None]


def ball_automorphism_jacobian_at_zero(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    P, Q = _projections(a)
    aa = np.vdot(a, a).real
    return -(1.0 - aa) * P - np.sqrt(1.0 - aa) * Q


def ball_automorphism_jacobian_at_center(a) -> np.ndarray:
    """phi_a'(a); phi_a is an involution, so this is the inverse of phi_a'(0)."""
    return np.linalg.inv(ball_automorphism_jacobian_at_zero(a))


def ball_volume_factor(a) -> float:
    """|det_C phi_a'(0)| = (1 - |a|^2)^((n + 1) / 2)."""
    a = np.asarray(a, dtype=complex)
    return float((1.0 - np.vdot(a, a).real) ** ((a.size + 1) / 2))


def complex_jacobian_fd(f, z, step: float = 1e-6) -> np.ndarray:
    """Complex Jacobian of a holomorphic map by central differences along real axes."""
    z = np.asarray(z, dtype=complex)
    cols = []
    for j in range(z.size):
        e = np.zeros(z.size, complex)
        e[j] = step
        cols.append((np.asarray(f(z + e)) - np.asarray(f(z - e))) / (2 * step))
    return np.stack(cols, axis=-1)


def egg_automorphism(m: int, alpha: complex, w):
    """Automorphism of Egg(1, m) = {|w1|^2 + |w2|^(2m) < 1} sending (alpha, 0) to 0.

    (w1, w2) -> ((w1 - alpha) / (1 - conj(alpha) w1),
                 w2 (1 - |alpha|^2)^(1/2m) / (1 - conj(alpha) w1)^(1/m)),
    using the principal branch; 1 - conj(alpha) w1 has positive real part on the egg.
    """
    w = np.asarray(w, dtype=complex)
    if abs(alpha) >= 1:
        raise ValueError("alpha must lie in the unit disc")
    den = 1.0 - np.conj(alpha) * w[..., 0]
    f1 = (w[..., 0] - alpha) / den
    f2 = w[..., 1] * (1.0 - abs(alpha) ** 2) ** (1.0 / (2 * m)) / den ** (1.0 / m)
    return np.stack([f1, f2], axis=-1)


def egg_automorphism_jacobian(m: int, alpha: complex, w=None) -> np.ndarray:
    """Complex Jacobian of :func:`egg_automorphism` at ``w`` (default (alpha, 0), where it is diagonal)."""
    w = np.array([alpha, 0.0], complex) if w is None else np.asarray(w, complex)
    s = 1.0 - abs(alpha) ** 2
    den = 1.0 - np.conj(alpha) * w[0]
    k = s ** (1.0 / (2 * m))
    return np.array([
        [s / den**2, 0.0],
        [w[1] * k * (np.conj(alpha) / m) * den ** (-1.0 / m - 1.0), k * den ** (-1.0 / m)],
    ], dtype=complex)


def egg_automorphism_inverse(m: int, alpha: complex, w):
    """Inverse of :func:`egg_automorphism`; sends 0 to (alpha, 0)."""
    w = np.asarray(w, dtype=complex)
    den = 1.0 + np.conj(alpha) * w[..., 0]
    f1 = (w[..., 0] + alpha) / den
    f2 = w[..., 1] * (1.0 - abs(alpha) ** 2) ** (1.0 / (2 * m)) / den ** (1.0 / m)
    return np.stack([f1, f2], axis=-1)


def stretch(N: float, w):
    """Psi(w1, w2) = (w1, N w2), a biholomorphism of the unit ball onto the stretched ball."""
    w = np.asarray(w, dtype=complex)
    return w * np.array([1.0, N])


def unstretch(N: float, z):
    z = np.asarray(z, dtype=complex)
    return z * np.array([1.0, 1.0 / N])
