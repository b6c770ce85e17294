"""Bounds for the infinitesimal Kobayashi and Caratheodory metrics.

Conventions: the Poincare metric of the unit disc is |dzeta| / (1 - |zeta|^2),
so F_K(0, xi) = |xi| on the unit ball.  Every bound is computed for the unit
direction xi / |xi| and multiplied by |xi|, which makes positive homogeneity in
the direction exact.

Upper bounds for F_K come from feasible polynomial discs through the point
(maximise t over discs through z whose Poincare-normalised derivative there is
t xi / |xi|).  Lower bounds for F_C come
from explicit maps of the domain into the unit disc whose boundedness follows
from an exact support function or an exact inclusion, never from sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.optimize import minimize

from . import maps
from .budget import DEFAULT_BUDGET, OptimizerBudget
from .discs import AnalyticDisc, circle, linear_disc_radius, verified_margin
from .domains import (DomainSpec, as_point, boundary_distance, boundary_sample, bounding_radii,
                      circumscribing_radius, contains, defining_value, egg, smooth_pieces, support_function)


class OptimizationFailure(RuntimeError):
    """No feasible witness was found within the budget."""


@dataclass(frozen=True)
class MetricQuery:
    point: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        p = as_point(self.point)
        d = as_point(self.direction, p.size)
        if np.linalg.norm(d) == 0:
            raise ValueError("direction must be nonzero")
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "direction", d)

    @property
    def unit(self) -> np.ndarray:
        return self.direction / np.linalg.norm(self.direction)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.direction))


@dataclass(frozen=True)
class CandidateMap:
    """A holomorphic map of the domain into the unit disc vanishing at the query point.

    Families
    --------
    ``linear_functional_mobius``
        f(w) = M_c(<w, u> / S),  <w, u> = sum_j u_j w_j, S the exact sup of |<., u>|.
    ``ball_automorphism_component``
        f(w) = <phi_a(D w), e>, D diagonal with D(domain) inside the unit ball.
    ``egg_automorphism_component``
        f(w) = M_c(<E_alpha(w), u> / S) with E_alpha an automorphism of Egg(1, m).

    M_c(s) = (s - c) / (1 - conj(c) s).
    """

    family: str
    parameters: dict = field(default_factory=dict)

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        p = self.parameters
        if self.family == "ball_automorphism_component":
            v = maps.ball_automorphism(p["a"], w * p["diag"])
            return v @ np.conj(p["e"])
        if self.family == "egg_automorphism_component":
            w = maps.egg_automorphism(p["m"], p["alpha"], w)
        s = (w @ p["u"]) / p["scale"]
        c = p["c"]
        return (s - c) / (1 - np.conj(c) * s)

    def to_dict(self) -> dict:
        out = {"family": self.family}
        for k, v in self.parameters.items():
            v = np.asarray(v)
            if np.iscomplexobj(v):
                out[k] = np.stack([v.real, v.imag], axis=-1).tolist()
            else:
                out[k] = v.tolist()
        return out


@dataclass(frozen=True)
class MetricBound:
    value: float
    kind: str  # "upper", "lower" or "exact"
    method: str
    witness: object = None
    witness_node: complex = 0j  # parameter at which a witness disc passes through the point

    def __post_init__(self):
        if not (self.value >= 0 and np.isfinite(self.value)):
            raise ValueError(f"metric bounds are finite and non-negative, got {self.value}")
        if self.kind not in ("upper", "lower", "exact"):
            raise ValueError(f"unknown bound kind {self.kind!r}")

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, AnalyticDisc):
            w = {"disc": w.to_json()}
        elif isinstance(w, CandidateMap):
            w = w.to_dict()
        return {"value": self.value, "kind": self.kind, "method": self.method, "witness": w,
                "witness_node": [self.witness_node.real, self.witness_node.imag]}


def _query(domain: DomainSpec, point, direction=None) -> MetricQuery:
    q = point if isinstance(point, MetricQuery) else MetricQuery(point, direction)
    if q.point.size != domain.n:
        raise ValueError(f"query dimension {q.point.size} does not match the domain ({domain.n})")
    if not contains(domain, q.point):
        raise ValueError("query point must lie inside the domain")
    return q


# ---------------------------------------------------------------------------
# closed forms


def ball_metric(z, xi) -> float:
    """F_K = F_C on the unit ball: sqrt(|xi|^2 / (1-|z|^2) + |<z, xi>|^2 / (1-|z|^2)^2)."""
    z = np.asarray(z, complex)
    xi = np.asarray(xi, complex)
    a = 1.0 - np.vdot(z, z).real
    return float(np.sqrt(np.vdot(xi, xi).real / a + abs(np.vdot(z, xi)) ** 2 / a**2))


def polydisc_metric(radii, z, xi) -> float:
    """max_j r_j |xi_j| / (r_j^2 - |z_j|^2)."""
    r = np.asarray(radii, float)
    return float(np.max(r * np.abs(xi) / (r**2 - np.abs(z) ** 2)))


def kobayashi_exact_model(domain: DomainSpec, point, direction=None) -> MetricBound:
    """Closed-form F_K on the ball, the polydisc and the stretched ball."""
    q = _query(domain, point, direction)
    z, xi = q.point, q.direction
    if domain.kind == "ball":
        return MetricBound(ball_metric(z, xi), "exact", "ball closed form")
    if domain.kind == "polydisc":
        return MetricBound(polydisc_metric(domain.radii, z, xi), "exact", "polydisc closed form")
    if domain.kind == "stretched_ball":
        v = ball_metric(maps.unstretch(domain.N, z), maps.unstretch(domain.N, xi))
        return MetricBound(v, "exact", "pullback to the ball under (z1, z2) -> (z1, N z2)")
    raise ValueError(f"no closed form for kind {domain.kind!r}")


# ---------------------------------------------------------------------------
# Kobayashi upper bounds from discs


NODE_RADII = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.85, 0.9, 0.95)
NODE_ANGLES = 8
STALL_TOLERANCE = 1e-6


def _shift_matrix(degree: int, s: complex) -> np.ndarray:
    """B with (w - s)^k = sum_j B[k, j] w^j."""
    B = np.zeros((degree + 1, degree + 1), dtype=complex)
    for k in range(degree + 1):
        for j in range(k + 1):
            B[k, j] = comb(k, j) * (-s) ** (k - j)
    return B


class _DiscProblem:
    """phi(w) = z + t (w - s) / (1 - |s|^2) xhat + sum_{k>=2} a_k ((w - s) / (1 + |s|))^k.

    The a_k are packed as a real vector.  phi passes through z at the node s, and
    phi o m_s with m_s(zeta) = (zeta + s) / (1 + conj(s) zeta) has derivative t xhat
    at 0, so t plays the same role for every node.  s = 0 is the usual centred disc;
    the 1 + |s| scaling keeps the basis bounded by 1 on the circle.
    """

    def __init__(self, domain, z, xhat, degree, slack, node=0.0):
        self.domain, self.z, self.xhat, self.d, self.s = domain, z, xhat, degree, complex(node)
        self.n = z.size
        self.m = max(degree - 1, 0) * self.n
        K = max(128, 8 * (degree + 1))
        self.zeta = circle(K)
        self.rho = 1 + abs(self.s)
        self.pw = ((self.zeta[:, None] - self.s) / self.rho) ** np.arange(degree + 1)[None, :]
        self.lin = (self.zeta - self.s) / (1 - abs(self.s) ** 2)
        self.target = -2.0 * slack

    def unpack(self, x):
        c = (x[1:1 + self.m] + 1j * x[1 + self.m:]).reshape(-1, self.n)
        return x[0], c

    def coefficients(self, x):
        """Monomial coefficients (the shifted basis expanded about w = 0)."""
        t, c = self.unpack(x)
        c = c / self.rho ** np.arange(2, self.d + 1)[:, None]
        shifted = np.concatenate([self.z[None], (t / (1 - abs(self.s) ** 2) * self.xhat)[None], c])
        return _shift_matrix(shifted.shape[0] - 1, self.s).T @ shifted

    def image(self, x):
        t, c = self.unpack(x)
        return self.z[None] + t * self.lin[:, None] * self.xhat[None] + self.pw[:, 2:] @ c

    def cons(self, x):
        vals, _ = smooth_pieces(self.domain, self.image(x))
        return (self.target - vals).ravel()

    def jac(self, x):
        _, G = smooth_pieces(self.domain, self.image(x))
        Gc = np.conj(G)  # (K, P, n)
        K, P, _ = G.shape
        J = np.empty((K, P, 1 + 2 * self.m))
        J[:, :, 0] = np.real((Gc @ self.xhat) * self.lin[:, None])
        prod = Gc[:, :, None, :] * self.pw[:, None, 2:, None]  # (K, P, d-1, n)
        J[:, :, 1:1 + self.m] = prod.real.reshape(K, P, self.m)
        J[:, :, 1 + self.m:] = np.real(1j * prod).reshape(K, P, self.m)
        return -J.reshape(K * P, -1)

    def violation(self, x):
        vals, _ = smooth_pieces(self.domain, self.image(x))
        return np.maximum(vals - self.target, 0.0)


def _repair(domain, z, coeffs, slack):
    """Shrink phi towards z (phi -> z + lam (phi - z)) until the dense-sample margin certifies it."""
    if verified_margin(coeffs, domain) <= -slack:
        return 1.0, coeffs
    lam = 1.0
    for _ in range(40):
        lam *= 0.98
        c = coeffs * lam
        c[0] += (1 - lam) * z
        if verified_margin(c, domain) <= -slack:
            return lam, c
    return 0.0, None


def _affine_radius(domain, z, xhat, s, slack):
    """Largest t (bisection on a 256-point circle) with the affine disc of node s feasible."""
    ring = (circle(256) - s)[:, None] / (1 - abs(s) ** 2) * xhat[None, :]
    lo, hi = 0.0, 2.0 * circumscribing_radius(domain) + 1.0
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if np.max(defining_value(domain, z + mid * ring)) <= -2 * slack:
            lo = mid
        else:
            hi = mid
    return lo


def _best_node(domain, z, xhat, slack):
    """Node of the widest affine disc over a polar grid; 0 when the centred disc wins."""
    nodes = [0j] + [r * np.exp(2j * np.pi * k / NODE_ANGLES) for r in NODE_RADII for k in range(NODE_ANGLES)]
    t = [_affine_radius(domain, z, xhat, s, slack) for s in nodes]
    return complex(nodes[int(np.argmax(t))])


def _node_label(node: complex) -> str:
    return f"{node.real:.3g}{node.imag:+.3g}i"


def _disc_search_at(domain, z, xhat, budget, node, best):
    """Polish the discs of one node with restarts; ``best`` is (t, coefficients, method, node).

    Restarts perturb the best solution so far and stop early once two in a row gain
    less than STALL_TOLERANCE in t, so ``budget.restarts`` is an upper limit.
    """
    slack = budget.slack
    prob = _DiscProblem(domain, z, xhat, budget.degree, slack, node)
    rng = np.random.default_rng(budget.seed)
    x_best = np.zeros(1 + 2 * prob.m)
    x_best[0] = best[0]
    if node != 0:
        # the affine disc of this node is itself a candidate
        x_best[0] = _affine_radius(domain, z, xhat, node, slack)
        lam, c = _repair(domain, z, prob.coefficients(x_best), slack)
        if c is not None and lam * x_best[0] > best[0]:
            best = (lam * x_best[0], c, "affine disc with node " + _node_label(node), node)
    scale = max(x_best[0], 1e-3)
    stalls = 0
    for r in range(budget.restarts):
        if stalls >= 2:
            break
        before = best[0]
        x0 = x_best.copy()
        if r > 0:
            x0[1:] += 0.05 * scale * rng.standard_normal(2 * prob.m)
        if budget.method == "slsqp":
            e0 = np.zeros_like(x0)
            e0[0] = -1.0
            res = minimize(lambda x: -x[0], x0, jac=lambda x: e0, method="SLSQP",
                           constraints=[{"type": "ineq", "fun": prob.cons, "jac": prob.jac}],
                           options={"maxiter": budget.max_iterations, "ftol": 1e-12})
        else:
            w = 1e2 * 10.0**r

            def pen(x, w=w):
                v = prob.violation(x)
                return -x[0] + w * float(np.sum(v * v)) + w * max(-x[0], 0.0) ** 2

            res = minimize(pen, x0, method="Nelder-Mead",
                           options={"maxfev": budget.max_iterations * x0.size, "xatol": 1e-9, "fatol": 1e-12,
                                    "adaptive": True})
        x = res.x
        if not np.all(np.isfinite(x)) or x[0] <= 0:
            stalls += 1
            continue
        lam, c = _repair(domain, z, prob.coefficients(x), slack)
        if c is not None and lam * x[0] > best[0] * (1 + 1e-12):
            label = f"{budget.method} degree-{budget.degree} disc"
            if node:
                label += " with node " + _node_label(node)
            best = (lam * x[0], c, label, node)
            x_best = x * np.r_[lam, np.full(2 * prob.m, lam)]
        if r > 0:
            stalls = stalls + 1 if best[0] <= before * (1 + STALL_TOLERANCE) else 0
    return best


def _disc_search(domain, z, xhat, budget: OptimizerBudget):
    """Best certified (t, coefficients, method, node) for discs through z tangent to xhat.

    Only the node of the widest affine disc is polished.  Near the boundary the
    extremal disc usually passes through z off-centre, which a truncated centred
    expansion captures only slowly.
    """
    t_lin = linear_disc_radius(domain, z, xhat, budget.slack)
    best = (t_lin, np.stack([z, t_lin * xhat]), "linear disc", 0j)
    if budget.degree < 2:
        return best
    return _disc_search_at(domain, z, xhat, budget, _best_node(domain, z, xhat, budget.slack), best)


def kobayashi_upper(domain: DomainSpec, point, direction=None,
                    budget: OptimizerBudget = DEFAULT_BUDGET) -> MetricBound:
    """Upper bound |xi| / t for F_K from the widest certified disc found.

    Discs are polynomials phi(w) = z + t (w - s) xhat / (1 - |s|^2) + sum_{k>=2} a_k (w - s)^k
    through z at a node s, so phi o m_s has derivative t xhat at the origin.  The
    default optimizer is SLSQP maximising t subject to one smooth constraint
    rho_p(phi(w_k)) <= -2 slack per defining-function piece at max(128, 8(d+1))
    points of the unit circle (rho o phi is subharmonic, so the circle controls the
    closed disc).  The node is the one of the widest affine disc on a polar grid.  Each candidate is
    then certified against the closed-disc grid plus 2048 circle points at margin
    -slack, shrinking towards z if needed.  The shrunken linear disc is always
    available as a fallback.  The witness is the monomial-form disc, with the node
    recorded in ``witness_node``.
    """
    q = _query(domain, point, direction)
    t, c, method, node = _disc_search(domain, q.point, q.unit, budget)
    if t <= 0:
        raise OptimizationFailure("no feasible disc found")
    disc = AnalyticDisc(c, max(budget.degree, c.shape[0] - 1))
    return MetricBound(q.norm / t, "upper", method, disc, node)


def kobayashi_lower_inclusion(domain: DomainSpec, point, direction=None) -> MetricBound:
    """Lower bound for F_K from an enclosing ball or polydisc (F_K shrinks as domains grow)."""
    q = _query(domain, point, direction)
    z, xi = q.point, q.direction
    if domain.kind in ("ball", "polydisc", "stretched_ball"):
        b = kobayashi_exact_model(domain, q)
        return MetricBound(b.value, "lower", "self-inclusion " + b.method)
    if domain.kind == "lempert":
        return MetricBound(polydisc_metric((2.0, 2.0), z, xi), "lower", "inclusion in the polydisc |z|,|w| < 2")
    R = circumscribing_radius(domain)
    vb = ball_metric(z / R, xi / R)
    vp = polydisc_metric(bounding_radii(domain), z, xi)
    if vp >= vb:
        return MetricBound(vp, "lower", "inclusion in the enclosing polydisc")
    return MetricBound(vb, "lower", f"inclusion in the ball of radius {R:.6g}")


# ---------------------------------------------------------------------------
# Caratheodory lower bounds from candidate maps


def _lfm_value(domain, z, xhat, u):
    S = support_function(domain, u)
    if S <= 0:
        return 0.0, S
    c = np.dot(u, z) / S
    return abs(np.dot(u, xhat)) / S / (1.0 - abs(c) ** 2), S


def _egg_m(domain):
    if domain.kind == "egg" and domain.n == 2 and domain.exponents[0] == 1:
        return int(domain.exponents[1])
    return None


def _egg_value(m, z, xhat, u, alpha):
    """|f'(z) xhat| for f = M_c(<E_alpha(.), u> / S) on Egg(1, m)."""
    e = egg(1, m)
    S = support_function(e, u)
    if S <= 0:
        return 0.0, S, 0.0
    Ez = maps.egg_automorphism(m, alpha, z)
    J = maps.egg_automorphism_jacobian(m, alpha, z)
    c = np.dot(u, Ez) / S
    return abs(np.dot(u, J @ xhat)) / S / (1.0 - abs(c) ** 2), S, c


def _unpack_u(x, n):
    return x[:n] + 1j * x[n:2 * n]


def _starts(z, xhat, n):
    eye = np.eye(n, dtype=complex)
    out = [xhat.conj(), z.conj() if np.linalg.norm(z) > 0 else xhat.conj()] + list(eye)
    return [s / np.linalg.norm(s) for s in out if np.linalg.norm(s) > 0]


def caratheodory_lower(domain: DomainSpec, point, direction=None,
                       budget: OptimizerBudget = DEFAULT_BUDGET) -> MetricBound:
    """Lower bound for F_C = sup |f'(z) xi| over the candidate families of :class:`CandidateMap`."""
    q = _query(domain, point, direction)
    z, xhat, n = q.point, q.unit, domain.n
    best = (0.0, None, "zero map")

    # ball automorphism after an exact diagonal inclusion into the unit ball
    if domain.kind == "stretched_ball":
        diag = np.array([1.0, 1.0 / domain.N])
    else:
        diag = np.full(n, 1.0 / circumscribing_radius(domain))
    a = z * diag
    v = maps.ball_automorphism_jacobian_at_center(a) @ (xhat * diag)
    val = float(np.linalg.norm(v))
    if val > best[0]:
        e = v / val
        best = (val, CandidateMap("ball_automorphism_component", {"a": a, "diag": diag, "e": e}),
                "ball automorphism component")

    # linear functional + Mobius, optimised over u
    def neg(x):
        u = _unpack_u(x, n)
        if np.linalg.norm(u) == 0:
            return 0.0
        return -_lfm_value(domain, z, xhat, u / np.linalg.norm(u))[0]

    for s in _starts(z, xhat, n)[: max(budget.restarts, 2) + n]:
        x0 = np.r_[s.real, s.imag]
        res = minimize(neg, x0, method="Nelder-Mead",
                       options={"maxiter": budget.max_iterations, "xatol": 1e-10, "fatol": 1e-14})
        for x in (x0, res.x):
            u = _unpack_u(x, n)
            u = u / np.linalg.norm(u)
            val, S = _lfm_value(domain, z, xhat, u)
            if val > best[0] * (1 + 1e-12):
                c = np.dot(u, z) / S
                best = (val, CandidateMap("linear_functional_mobius", {"u": u, "scale": S, "c": c}),
                        "linear functional + Mobius")

    m = _egg_m(domain)
    if m is not None:
        alpha = complex(z[0])
        # E_alpha moves (alpha, z2) to (0, z2'); try both coordinate functionals, then optimise u
        def neg_egg(x):
            u = _unpack_u(x, 2)
            if np.linalg.norm(u) == 0:
                return 0.0
            return -_egg_value(m, z, xhat, u / np.linalg.norm(u), alpha)[0]

        for s in [np.array([1, 0], complex), np.array([0, 1], complex)] + _starts(z, xhat, 2)[:2]:
            x0 = np.r_[s.real, s.imag]
            res = minimize(neg_egg, x0, method="Nelder-Mead",
                           options={"maxiter": budget.max_iterations, "xatol": 1e-10, "fatol": 1e-14})
            for x in (x0, res.x):
                u = _unpack_u(x, 2)
                u = u / np.linalg.norm(u)
                val, S, c = _egg_value(m, z, xhat, u, alpha)
                if val > best[0] * (1 + 1e-12):
                    best = (val, CandidateMap("egg_automorphism_component",
                                              {"m": m, "alpha": alpha, "u": u, "scale": S, "c": c}),
                            "egg automorphism component")

    val, wit, method = best
    return MetricBound(val * q.norm, "lower", method, wit)


def candidate_sup(domain: DomainSpec, f, count: int = 4096, seed: int = 0) -> float:
    """Sampled sup of |f| over the boundary: a check, not a certificate."""
    return float(np.max(np.abs(f(boundary_sample(domain, count, seed)))))


# ---------------------------------------------------------------------------
# Egg(1, m): two-sided bounds along the normal and tangential axes


def uniform_power_tangential_candidate(m: int, alpha: float):
    """w -> (1 - alpha^2)^(1/2m) w2 / (1 - alpha w1).

    Kept to document that it is not a map into the disc for m > 1: at w1 = alpha on
    the boundary it takes modulus (1 - alpha^2)^(-1/2).
    """
    return lambda w: (1 - alpha**2) ** (1 / (2 * m)) * w[..., 1] / (1 - alpha * w[..., 0])


def egg_direction_bounds(m: int, alpha: float, direction: str):
    """(upper, lower) bounds on Egg(1, m) at (alpha, 0) along e1 ("normal") or e2 ("tangential").

    Both sides coincide: the normal bounds are 1 / (1 - alpha^2) (slice disc and the
    Mobius first coordinate), the tangential bounds (1 - alpha^2)^(-1/2m) (the linear
    disc zeta -> (alpha, (1 - alpha^2)^(1/2m) zeta) and the second component of the
    egg automorphism).  The candidate maps are checked for disc-boundedness on a
    boundary sample at construction.
    """
    if not 0 <= alpha < 1:
        raise ValueError("alpha must lie in [0, 1)")
    if m < 1 or int(m) != m:
        raise ValueError("m must be a positive integer")
    dom = egg(1, m)
    s = 1.0 - alpha**2
    if direction.lower() == "normal":
        u = np.array([1, 0], complex)
        val = 1.0 / s
        disc = AnalyticDisc(np.array([[0, 0], [1, 0]], complex))
        up_method = "slice disc zeta -> (zeta, 0) through the node alpha"
    elif direction.lower() == "tangential":
        u = np.array([0, 1], complex)
        val = s ** (-1.0 / (2 * m))
        disc = AnalyticDisc(np.array([[alpha, 0], [0, s ** (1.0 / (2 * m))]], complex))
        up_method = "linear disc zeta -> (alpha, (1-alpha^2)^(1/2m) zeta)"
    else:
        raise ValueError("direction must be 'normal' or 'tangential'")
    f = CandidateMap("egg_automorphism_component", {"m": m, "alpha": alpha, "u": u, "scale": 1.0, "c": 0.0})
    if candidate_sup(dom, f) > 1 + 1e-9:
        raise AssertionError("egg candidate map leaves the unit disc")
    lower = MetricBound(val, "lower", "egg automorphism component", f)
    upper = MetricBound(val, "upper", up_method, disc)
    return upper, lower


# ---------------------------------------------------------------------------
# comparability of directions on compact sets


@dataclass(frozen=True)
class ComparabilityReport:
    point: np.ndarray
    first: MetricBound
    second: MetricBound

    @property
    def difference(self) -> float:
        return abs(self.first.value - self.second.value)


def direction_comparability_report(domain: DomainSpec, P, xi1, xi2,
                                   budget: OptimizerBudget = DEFAULT_BUDGET,
                                   min_boundary_distance: float = 0.05) -> ComparabilityReport:
    """Caratheodory lower bounds in two unit directions at P and their gap."""
    P = as_point(P, domain.n)
    for xi in (xi1, xi2):
        if abs(np.linalg.norm(xi) - 1.0) > 1e-9:
            raise ValueError("directions must be Euclidean unit vectors")
    if not contains(domain, P) or boundary_distance(domain, P) < min_boundary_distance:
        raise ValueError("P is outside the configured compact subset")
    return ComparabilityReport(P, caratheodory_lower(domain, P, xi1, budget),
                               caratheodory_lower(domain, P, xi2, budget))


__all__ = [
    "OptimizationFailure", "MetricQuery", "CandidateMap", "MetricBound", "ComparabilityReport",
    "ball_metric", "polydisc_metric", "kobayashi_exact_model", "kobayashi_upper",
    "kobayashi_lower_inclusion", "caratheodory_lower", "candidate_sup", "egg_direction_bounds",
    "uniform_power_tangential_candidate", "direction_comparability_report",
]
