"""Model domains in C^n: defining functions, membership, and boundary geometry.

Five bounded Reinhardt domains are supported, all star-shaped about the origin:

==================  =======================================================
kind                defining function rho (negative inside)
==================  =======================================================
``ball``            |z|^2 - 1
``polydisc``        max_j |z_j / r_j|^2 - 1
``egg``             sum_j |z_j|^(2 m_j) - 1
``lempert``         max(|z|^2/4 - 1, |w|^2/4 - 1, |z w|/eps - 1)   (n = 2)
``stretched_ball``  |z_1|^2 + |z_2 / N|^2 - 1                       (n = 2)
==================  =======================================================

Points are complex numpy arrays whose last axis has length ``n``; every
function here broadcasts over leading axes.  Gradients are returned in the
complex form ``d rho/dx + i d rho/dy`` per coordinate, so that the real
directional derivative along ``v`` is ``Re(conj(G) . v)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar

KINDS = ("ball", "polydisc", "egg", "lempert", "stretched_ball")


@dataclass(frozen=True)
class DomainSpec:
    """An immutable, validated description of one model domain."""

    kind: str
    n: int
    radii: tuple[float, ...] = ()
    exponents: tuple[int, ...] = ()
    epsilon: float | None = None
    N: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if self.kind == "polydisc":
            if len(self.radii) != self.n or min(self.radii) <= 0:
                raise ValueError("polydisc needs n positive radii")
        if self.kind == "egg":
            if len(self.exponents) != self.n:
                raise ValueError("egg needs one exponent per coordinate")
            for m in self.exponents:
                if int(m) != m or m < 1:
                    raise ValueError(f"egg exponents must be positive integers, got {m!r}")
        if self.kind == "lempert":
            if self.n != 2:
                raise ValueError("the Lempert domain lives in C^2")
            if self.epsilon is None or not 0.0 < self.epsilon < 1.0:
                raise ValueError("Lempert epsilon must lie in (0, 1)")
        if self.kind == "stretched_ball":
            if self.n != 2:
                raise ValueError("the stretched ball lives in C^2")
            if self.N is None or not self.N >= 1.0:
                raise ValueError("stretched ball needs N >= 1")

    @property
    def dimension(self) -> int:
        return self.n

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "n": self.n}
        if self.kind == "polydisc":
            d["radii"] = list(self.radii)
        if self.kind == "egg":
            d["exponents"] = list(self.exponents)
        if self.kind == "lempert":
            d["epsilon"] = self.epsilon
        if self.kind == "stretched_ball":
            d["N"] = self.N
        return d

    def __str__(self):
        if self.kind == "ball":
            return f"Ball({self.n})"
        if self.kind == "polydisc":
            return f"Polydisc({self.n}, {self.radii})"
        if self.kind == "egg":
            return "Egg(" + ",".join(str(m) for m in self.exponents) + ")"
        if self.kind == "lempert":
            return f"LempertDomain({self.epsilon:g})"
        return f"StretchedBall({self.N:g})"


def ball(n: int) -> DomainSpec:
    return DomainSpec("ball", int(n))


def polydisc(n: int, radii=None) -> DomainSpec:
    radii = (1.0,) * int(n) if radii is None else tuple(float(r) for r in radii)
    return DomainSpec("polydisc", int(n), radii=radii)


def egg(*exponents: int) -> DomainSpec:
    if len(exponents) == 1 and not np.isscalar(exponents[0]):
        exponents = tuple(exponents[0])
    return DomainSpec("egg", len(exponents), exponents=tuple(int(m) for m in exponents))


def lempert(epsilon: float) -> DomainSpec:
    return DomainSpec("lempert", 2, epsilon=float(epsilon))


def stretched_ball(N: float) -> DomainSpec:
    return DomainSpec("stretched_ball", 2, N=float(N))


def make_domain(descriptor) -> DomainSpec:
    """Build a domain from a JSON descriptor (dict, JSON text, or path to a JSON file).

    >>> make_domain({"kind": "egg", "exponents": [1, 2]})
    DomainSpec(kind='egg', n=2, radii=(), exponents=(1, 2), epsilon=None, N=None)
    """
    if isinstance(descriptor, DomainSpec):
        return descriptor
    if isinstance(descriptor, (str, Path)):
        text = str(descriptor)
        if not text.lstrip().startswith("{"):
            text = Path(text).read_text(encoding="utf-8")
        descriptor = json.loads(text)
    if not isinstance(descriptor, dict) or "kind" not in descriptor:
        raise ValueError("domain descriptor must be an object with a 'kind' field")
    kind = descriptor["kind"]
    if kind == "ball":
        return ball(descriptor.get("n", 2))
    if kind == "polydisc":
        radii = descriptor.get("radii")
        n = descriptor.get("n", len(radii) if radii else 2)
        return polydisc(n, radii)
    if kind == "egg":
        if "exponents" not in descriptor:
            raise ValueError("egg descriptor needs 'exponents'")
        return egg(*descriptor["exponents"])
    if kind == "lempert":
        return lempert(descriptor["epsilon"])
    if kind == "stretched_ball":
        return stretched_ball(descriptor["N"])
    raise ValueError(f"unknown domain kind {kind!r}")


def as_point(z, n: int | None = None) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        z = z.reshape(1)
    if n is not None and z.shape[-1] != n:
        raise ValueError(f"expected points of dimension {n}, got shape {z.shape}")
    if not np.all(np.isfinite(z)):
        raise ValueError("point coordinates must be finite")
    return z


# ---------------------------------------------------------------------------
# defining functions and gradients


def _lempert_pieces(domain, z):
    eps = domain.epsilon
    a = np.abs(z[..., 0])
    b = np.abs(z[..., 1])
    # far-out optimizer probes may overflow to inf, which is still a valid "outside"
    with np.errstate(over="ignore"):
        return np.stack([a * a / 4 - 1, b * b / 4 - 1, a * b / eps - 1], axis=-1)


def defining_value(domain: DomainSpec, z) -> np.ndarray | float:
    """rho(z): negative inside, zero on the boundary, positive outside."""
    z = as_point(z, domain.n)
    k = domain.kind
    if k == "ball":
        out = np.sum(np.abs(z) ** 2, axis=-1) - 1.0
    elif k == "polydisc":
        r = np.asarray(domain.radii)
        out = np.max(np.abs(z / r) ** 2, axis=-1) - 1.0
    elif k == "egg":
        m = np.asarray(domain.exponents)
        out = np.sum(np.abs(z) ** (2 * m), axis=-1) - 1.0
    elif k == "lempert":
        out = np.max(_lempert_pieces(domain, z), axis=-1)
    else:
        out = np.abs(z[..., 0]) ** 2 + np.abs(z[..., 1] / domain.N) ** 2 - 1.0
    return out if np.ndim(out) else float(out)


def gradient(domain: DomainSpec, z) -> np.ndarray:
    """Complex gradient d rho/dx + i d rho/dy of the (active piece of the) defining function."""
    z = as_point(z, domain.n)
    k = domain.kind
    if k == "ball":
        return 2.0 * z
    if k == "polydisc":
        r = np.asarray(domain.radii)
        act = np.argmax(np.abs(z / r) ** 2, axis=-1)
        g = np.zeros_like(z)
        mask = np.arange(domain.n) == act[..., None]
        return np.where(mask, 2.0 * z / r**2, g)
    if k == "egg":
        m = np.asarray(domain.exponents)
        a = np.abs(z)
        return 2.0 * m * a ** (2 * m - 2) * z
    if k == "stretched_ball":
        return np.stack([2.0 * z[..., 0], 2.0 * z[..., 1] / domain.N**2], axis=-1)
    # lempert
    eps = domain.epsilon
    pieces = _lempert_pieces(domain, z)
    act = np.argmax(pieces, axis=-1)
    z1, z2 = z[..., 0], z[..., 1]
    a1, a2 = np.abs(z1), np.abs(z2)
    u1 = np.divide(z1, a1, out=np.zeros_like(z1), where=a1 > 0)
    u2 = np.divide(z2, a2, out=np.zeros_like(z2), where=a2 > 0)
    g0 = np.stack([z1 / 2, np.zeros_like(z2)], axis=-1)
    g1 = np.stack([np.zeros_like(z1), z2 / 2], axis=-1)
    g2 = np.stack([a2 * u1 / eps, a1 * u2 / eps], axis=-1)
    act = act[..., None]
    return np.where(act == 0, g0, np.where(act == 1, g1, g2))


def smooth_pieces(domain: DomainSpec, z):
    """Split rho into pieces that are smooth near the boundary: rho = max_p piece_p.

    Returns ``(values, gradients)`` with shapes ``(..., P)`` and ``(..., P, n)``;
    gradients use the same complex convention as :func:`gradient`.  Constrained
    optimizers impose one smooth constraint per piece instead of the kinked max.
    """
    z = as_point(z, domain.n)
    k = domain.kind
    if k == "polydisc":
        r = np.asarray(domain.radii)
        vals = np.abs(z / r) ** 2 - 1.0
        eye = np.eye(domain.n)
        grads = eye * (2.0 * z / r**2)[..., None, :]
        return vals, grads
    if k == "lempert":
        eps = domain.epsilon
        vals = _lempert_pieces(domain, z)
        z1, z2 = z[..., 0], z[..., 1]
        a1, a2 = np.abs(z1), np.abs(z2)
        u1 = np.divide(z1, a1, out=np.zeros_like(z1), where=a1 > 0)
        u2 = np.divide(z2, a2, out=np.zeros_like(z2), where=a2 > 0)
        zero = np.zeros_like(z1)
        grads = np.stack([
            np.stack([z1 / 2, zero], axis=-1),
            np.stack([zero, z2 / 2], axis=-1),
            np.stack([a2 * u1 / eps, a1 * u2 / eps], axis=-1),
        ], axis=-2)
        return vals, grads
    return np.asarray(defining_value(domain, z))[..., None], gradient(domain, z)[..., None, :]


def gradient_fd(domain: DomainSpec, z, step: float = 1e-6) -> np.ndarray:
    """Central finite-difference gradient, for cross-checking :func:`gradient`."""
    z = as_point(z, domain.n)
    g = np.zeros(z.shape, dtype=complex)
    for j in range(domain.n):
        e = np.zeros(domain.n, dtype=complex)
        e[j] = step
        dx = (defining_value(domain, z + e) - defining_value(domain, z - e)) / (2 * step)
        dy = (defining_value(domain, z + 1j * e) - defining_value(domain, z - 1j * e)) / (2 * step)
        g[..., j] = dx + 1j * dy
    return g


def contains(domain: DomainSpec, z) -> bool | np.ndarray:
    v = defining_value(domain, z)
    return v < 0 if np.ndim(v) else bool(v < 0)


# ---------------------------------------------------------------------------
# global geometry: radii, support functions, gauges


def circumscribing_radius(domain: DomainSpec) -> float:
    """Radius of the smallest origin-centred Euclidean ball containing the domain."""
    k = domain.kind
    if k == "ball":
        return 1.0
    if k == "polydisc":
        return float(np.sqrt(np.sum(np.square(domain.radii))))
    if k == "stretched_ball":
        return float(domain.N)
    if k == "lempert":
        return float(np.sqrt(4.0 + domain.epsilon**2 / 4.0))
    return float(np.sqrt(_egg_max_sum(domain.exponents, np.ones(domain.n))))


def bounding_radii(domain: DomainSpec) -> np.ndarray:
    """sup |z_j| over the domain, coordinate by coordinate (an enclosing polydisc)."""
    k = domain.kind
    if k == "polydisc":
        return np.asarray(domain.radii, dtype=float)
    if k == "lempert":
        return np.array([2.0, 2.0])
    if k == "stretched_ball":
        return np.array([1.0, domain.N])
    return np.ones(domain.n)


def _egg_max_sum(exponents, weights) -> float:
    """max sum_j w_j s_j  subject to  sum_j s_j^(m_j) = 1, s_j >= 0 (w_j >= 0)."""
    m = np.asarray(exponents, dtype=float)
    w = np.asarray(weights, dtype=float)
    if np.all(w <= 0):
        return 0.0
    lin = (m == 1) & (w > 0)
    if np.any(lin):
        wl = w[lin].max()
        # KKT with multiplier wl on the linear coordinates
        s = np.zeros_like(w)
        nl = (m > 1) & (w > 0)
        s[nl] = (w[nl] / (wl * m[nl])) ** (1.0 / (m[nl] - 1.0))
        used = np.sum(s[nl] ** m[nl])
        if used <= 1.0:
            return float(wl * (1.0 - used) + np.sum(w[nl] * s[nl]))
    nl = (m > 1) & (w > 0)
    mm, ww = m[nl], w[nl]

    def s_of(loglam):
        return (ww / (np.exp(loglam) * mm)) ** (1.0 / (mm - 1.0))

    mu = brentq(lambda L: np.log(np.sum(s_of(L) ** mm)), -60.0, 60.0, xtol=1e-14)
    return float(np.sum(ww * s_of(mu))) * (1.0 + 1e-12)


def support_function(domain: DomainSpec, u) -> float:
    """Exact sup over the domain of |sum_j u_j z_j|."""
    u = np.asarray(u, dtype=complex)
    a = np.abs(u)
    k = domain.kind
    if k == "ball":
        return float(np.linalg.norm(a))
    if k == "polydisc":
        return float(np.dot(domain.radii, a))
    if k == "stretched_ball":
        return float(np.hypot(a[0], domain.N * a[1]))
    if k == "lempert":
        e = domain.epsilon
        return float(max(a[0] * e / 2 + 2 * a[1], 2 * a[0] + a[1] * e / 2))
    # egg: maximise sum a_j t_j with sum t_j^(2 m_j) = 1, i.e. s_j = t_j^2
    m = np.asarray(domain.exponents, dtype=float)
    if np.all(a == 0):
        return 0.0
    pos = a > 0
    mm, aa = m[pos], a[pos]
    if mm.size == 1:
        return float(aa[0])

    def t_of(loglam):
        return (aa / (2 * mm * np.exp(loglam))) ** (1.0 / (2 * mm - 1.0))

    mu = brentq(lambda L: np.log(np.sum(t_of(L) ** (2 * mm))), -80.0, 80.0, xtol=1e-14)
    # the root is only approximate; inflate so the result stays an upper bound
    return float(np.dot(aa, t_of(mu))) * (1.0 + 1e-12)


def quadratic_sup(domain: DomainSpec, weights) -> float:
    """Exact sup over the domain of sum_j w_j |z_j|^2 for weights w_j >= 0.

    A diagonal linear map D sends the domain into the unit ball exactly when
    ``quadratic_sup(domain, |d|^2) <= 1``.
    """
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    k = domain.kind
    if k == "ball":
        return float(w.max())
    if k == "polydisc":
        return float(np.dot(w, np.square(domain.radii)))
    if k == "stretched_ball":
        return float(max(w[0], w[1] * domain.N**2))
    if k == "lempert":
        e = domain.epsilon
        # the maximum of a convex function of (|z|^2, |w|^2) sits at a corner of the profile
        return float(max(4 * w[0] + w[1] * e * e / 4, w[0] * e * e / 4 + 4 * w[1]))
    return _egg_max_sum(domain.exponents, w)


def diagonal_ball_scale(domain: DomainSpec, d) -> float:
    """Largest s with s diag(d) (closed unit ball) inside the closed domain, exactly."""
    a = np.abs(np.asarray(d))
    if np.all(a == 0):
        return np.inf
    k = domain.kind
    with np.errstate(divide="ignore"):
        if k == "ball":
            return float(1.0 / a.max())
        if k == "polydisc":
            return float(np.min(np.asarray(domain.radii) / a))
        if k == "stretched_ball":
            return float(1.0 / max(a[0], a[1] / domain.N))
        if k == "egg":
            # sum_j c_j t_j^(m_j) is convex on the simplex {t_j = |w_j|^2}: vertices decide
            return float(np.min(1.0 / a))
        e = domain.epsilon
        return float(min(2.0 / a[0], 2.0 / a[1], np.sqrt(2.0 * e / (a[0] * a[1]))))


def radial_boundary(domain: DomainSpec, u) -> np.ndarray | float:
    """The t > 0 with rho(t u) = 0 (every kind is star-shaped about the origin)."""
    u = as_point(u, domain.n)
    a = np.abs(u)
    k = domain.kind
    with np.errstate(divide="ignore"):
        if k == "ball":
            t = 1.0 / np.linalg.norm(a, axis=-1)
        elif k == "polydisc":
            t = np.min(np.asarray(domain.radii) / a, axis=-1)
        elif k == "stretched_ball":
            t = 1.0 / np.hypot(a[..., 0], a[..., 1] / domain.N)
        elif k == "lempert":
            e = domain.epsilon
            t = np.minimum(np.minimum(2.0 / a[..., 0], 2.0 / a[..., 1]), np.sqrt(e / (a[..., 0] * a[..., 1])))
        else:
            t = _egg_radial(np.asarray(domain.exponents, dtype=float), a)
    return t if np.ndim(t) else float(t)


def _egg_radial(m, a):
    # t(s u) = t(u) / s, so solve for a / max(a) to keep a^(2m) from under- or overflowing
    s = np.max(a, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return _egg_radial_unit(m, a / np.where(s > 0, s, 1.0)[..., None]) / s


def _egg_radial_unit(m, a):
    # v = t^2 solves sum_j a_j^(2 m_j) v^(m_j) = 1 with max a_j = 1 (or a = 0, giving inf);
    # the sum is convex increasing in v, so Newton from the right
    c = a ** (2 * m)
    if np.all(m <= 2):
        c1 = np.sum(np.where(m == 1, c, 0.0), axis=-1)
        c2 = np.sum(np.where(m == 2, c, 0.0), axis=-1)
        v = np.where(c2 > 0, 2.0 / (c1 + np.sqrt(c1 * c1 + 4.0 * c2)), 1.0 / c1)
        return np.sqrt(v)
    zero = np.max(a, axis=-1) == 0
    v = np.where(zero, 1.0, 1.0 / np.max(a, axis=-1) ** 2)
    for _ in range(100):
        f = np.sum(c * v[..., None] ** m, axis=-1) - 1.0
        df = np.sum(c * m * v[..., None] ** (m - 1), axis=-1)
        step = f / df
        v = v - step
        if np.all(np.abs(step) <= 1e-15 * np.abs(v)):
            break
    return np.where(zero, np.inf, np.sqrt(v))


def gauge(domain: DomainSpec, z) -> np.ndarray | float:
    """Minkowski gauge about the origin: rho(z / gauge(z)) = 0; < 1 exactly inside."""
    t = radial_boundary(domain, z)
    return 1.0 / t


# ---------------------------------------------------------------------------
# samples, distances, normals


def sphere_sample(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Deterministic unit vectors in C^n (Gaussian directions, fixed seed)."""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def reinhardt_directions(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Unit directions mixing a structured modulus-by-phase grid (n = 2) with random ones."""
    if n != 2:
        return sphere_sample(n, count, seed)
    k = max(2, int(round(count ** (1 / 3))))
    beta = np.linspace(0.0, np.pi / 2, k)
    ph = np.linspace(0.0, 2 * np.pi, k, endpoint=False)
    B, P1, P2 = np.meshgrid(beta, ph, ph, indexing="ij")
    grid = np.stack([np.cos(B) * np.exp(1j * P1), np.sin(B) * np.exp(1j * P2)], axis=-1).reshape(-1, 2)
    rest = count - grid.shape[0]
    if rest > 0:
        grid = np.concatenate([grid, sphere_sample(2, rest, seed)])
    return grid[:count]


def boundary_sample(domain: DomainSpec, count: int = 4096, seed: int = 0) -> np.ndarray:
    """Points on the boundary, obtained by radial projection of a direction sample."""
    u = reinhardt_directions(domain.n, count, seed)
    t = radial_boundary(domain, u)
    pts = u * t[:, None]
    return pts[np.isfinite(t)]


def _first_exit(domain, z, dirs, tmax, steps=256, iters=60):
    """Smallest t in (0, tmax] with rho(z + t d) >= 0, per direction (march then bisect)."""
    ts = np.linspace(0.0, tmax, steps + 1)[1:]
    vals = defining_value(domain, z[None, None, :] + ts[None, :, None] * dirs[:, None, :])
    bad = vals >= 0
    idx = np.where(bad.any(axis=1), bad.argmax(axis=1), steps - 1)
    hi = ts[idx]
    lo = np.where(idx > 0, ts[np.maximum(idx - 1, 0)], 0.0)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        inside = defining_value(domain, z[None, :] + mid[:, None] * dirs) < 0
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return hi


def boundary_distance(domain: DomainSpec, z, directions: int = 2048) -> float:
    """Euclidean distance from an interior point to the boundary.

    Closed forms for the ball and the polydisc, a one-parameter minimisation for the
    stretched ball.  For the egg and the Lempert domain the value is the shortest
    first-exit length over ``directions`` sampled rays (plus the 4n coordinate rays),
    refined by a local search on the sphere; the ray lengths are bisected to 1e-12,
    so coordinate-ray answers are accurate to well below 1e-6.  For these two kinds
    the result is an upper estimate of the true distance.
    """
    z = as_point(z, domain.n)
    if not contains(domain, z):
        raise ValueError("point is not inside the domain")
    k = domain.kind
    if k == "ball":
        return float(1.0 - np.linalg.norm(z))
    if k == "polydisc":
        return float(np.min(np.asarray(domain.radii) - np.abs(z)))
    if k == "stretched_ball":
        return _ellipse_distance(abs(z[0]), abs(z[1]), 1.0, domain.N)
    n = domain.n
    eye = np.eye(n, dtype=complex)
    dirs = np.concatenate([eye, -eye, 1j * eye, -1j * eye, sphere_sample(n, directions, seed=1)])
    tmax = 2.0 * circumscribing_radius(domain)
    t = _first_exit(domain, z, dirs, tmax)
    best = int(np.argmin(t))

    def ray(x):
        d = (x[:n] + 1j * x[n:]).astype(complex)
        nd = np.linalg.norm(d)
        if nd == 0:
            return np.inf
        return float(_first_exit(domain, z, (d / nd)[None, :], tmax, steps=128, iters=50)[0])

    d0 = dirs[best]
    res = minimize(ray, np.concatenate([d0.real, d0.imag]), method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-12, "maxfev": 400})
    return float(min(t[best], res.fun))


def _ellipse_distance(p, q, a, b):
    """Distance from (p, q), p, q >= 0, inside the ellipse x^2/a^2 + y^2/b^2 = 1, to its boundary."""
    th = np.linspace(0.0, np.pi / 2, 4097)
    d = np.hypot(a * np.cos(th) - p, b * np.sin(th) - q)
    i = int(np.argmin(d))
    lo, hi = th[max(i - 1, 0)], th[min(i + 1, th.size - 1)]
    res = minimize_scalar(lambda t: np.hypot(a * np.cos(t) - p, b * np.sin(t) - q),
                          bounds=(lo, hi), method="bounded", options={"xatol": 1e-14})
    return float(min(res.fun, d[i]))


def outward_normal(domain: DomainSpec, P) -> np.ndarray:
    g = gradient(domain, P)
    ng = np.linalg.norm(g)
    if ng == 0:
        raise ValueError("defining-function gradient vanishes at this point")
    return g / ng


def normal_ray_point(domain: DomainSpec, boundary_point, eps: float, tol: float = 1e-8) -> np.ndarray:
    """P - eps * nu, with nu the unit outward normal at the boundary point P."""
    P = as_point(boundary_point, domain.n)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if abs(defining_value(domain, P)) > tol:
        raise ValueError("point is not on the boundary")
    Q = P - eps * outward_normal(domain, P)
    if not contains(domain, Q):
        raise ValueError("eps too large: the normal-ray point left the domain")
    return Q
