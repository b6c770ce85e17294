"""One-disc and chain upper bounds for the Kobayashi distance, and chain shortening.

A one-disc bound joins P and Q by a single feasible polynomial disc phi with
phi(a) = P and phi(b) = Q; its cost is the Poincare distance artanh|(a-b)/(1-conj(a) b)|.
The polynomial family is not invariant under disc automorphisms, so both nodes
stay free instead of pinning a = 0.  The endpoint conditions are built into the
parametrisation

    phi = P L_a + Q L_b + sum_{k>=2} c_k (zeta^k - a^k L_a - b^k L_b),
    L_a = (b - zeta) / (b - a),  L_b = (zeta - a) / (b - a),

so they hold to rounding error; only feasibility and the node positions are optimised.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .budget import DEFAULT_BUDGET, OptimizerBudget
from .discs import (AnalyticDisc, circle, horner, linear_disc_radius, poincare_distance,
                    pseudo_hyperbolic, sample_grid, verified_margin)
from .domains import (DomainSpec, as_point, bounding_radii, circumscribing_radius, contains,
                      gauge, smooth_pieces)
from .maps import ball_automorphism
from .metrics import OptimizationFailure

NODE_LIMIT = 0.9995
ENDPOINT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class OneDiscResult:
    """A certified disc through P and Q and the Poincare distance between its nodes."""

    distance_upper: float
    disc: AnalyticDisc | None
    node_a: complex
    node_b: complex
    residuals: tuple
    start: np.ndarray
    end: np.ndarray
    method: str = ""

    @property
    def node(self) -> float:
        """The second node after moving the first to 0 and rotating: |(b - a) / (1 - conj(a) b)|."""
        return pseudo_hyperbolic(self.node_a, self.node_b)

    @property
    def degenerate(self) -> bool:
        return self.distance_upper == 0.0

    def to_dict(self) -> dict:
        return {
            "distance": self.distance_upper,
            "node": self.node,
            "node_a": [self.node_a.real, self.node_a.imag],
            "node_b": [self.node_b.real, self.node_b.imag],
            "disc": self.disc.to_json() if self.disc is not None else None,
            "residuals": list(self.residuals),
            "method": self.method,
        }


@dataclass(eq=False)
class ChainPath:
    waypoints: list
    legs: list
    report: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return float(math.fsum(leg.distance_upper for leg in self.legs))

    def to_dict(self) -> dict:
        return {"total": self.total, "legs": [leg.to_dict() for leg in self.legs],
                "waypoints": [[[complex(c).real, complex(c).imag] for c in w] for w in self.waypoints],
                "report": self.report}


# ---------------------------------------------------------------------------
# closed forms


def ball_distance(P, Q) -> float:
    """Kobayashi distance of the unit ball: artanh |phi_P(Q)|."""
    P, Q = np.asarray(P, complex), np.asarray(Q, complex)
    return float(np.arctanh(np.linalg.norm(ball_automorphism(P, Q))))


def harnack_poisson_bounds(r: float):
    """((1 - r) / (1 + r), (1 + r) / (1 - r)): the Poisson kernel range at radius r."""
    if not 0 <= r < 1:
        raise ValueError("r must lie in [0, 1)")
    return (1 - r) / (1 + r), (1 + r) / (1 - r)


def lempert_lower_bound(epsilon: float):
    """(r_min, artanh r_min) for discs from (1, 0) to (0, 1) in the Lempert domain.

    With L = log(1/epsilon), any feasible normalised disc has node r with
    L <= ((1 + r) / (1 - r))^2 log 2, i.e. r >= (sqrt L - sqrt log2) / (sqrt L + sqrt log2).
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    L = math.log(1.0 / epsilon)
    l2 = math.log(2.0)
    if L <= l2:
        return 0.0, 0.0
    r = (math.sqrt(L) - math.sqrt(l2)) / (math.sqrt(L) + math.sqrt(l2))
    return r, math.atanh(r)


# ---------------------------------------------------------------------------
# one-disc optimisation


def _monomial_coefficients(P, Q, a, b, c):
    """Monomial coefficients (d+1, n) of the endpoint-interpolating parametrisation."""
    d = c.shape[0] + 1
    n = P.size
    out = np.zeros((max(d, 1) + 1, n), complex)
    k = np.arange(2, d + 1)
    ak, bk = a**k, b**k
    out[0] = (P * b - Q * a) / (b - a) - ((ak * b - bk * a) / (b - a)) @ c
    out[1] = (Q - P) / (b - a) + ((ak - bk) / (b - a)) @ c
    out[2:] = c
    return out


class _TwoPointProblem:
    """x = [Re a, Im a, Re b, Im b, Re c, Im c] with c of shape (d - 1, n)."""

    def __init__(self, domain, P, Q, degree, slack):
        self.domain, self.P, self.Q, self.d = domain, P, Q, degree
        self.n = P.size
        self.m = (degree - 1) * self.n
        self.zeta = circle(max(128, 8 * (degree + 1)))
        self.pw = self.zeta[:, None] ** np.arange(degree + 1)[None, :]
        self.target = -2.0 * slack

    def unpack(self, x):
        a, b = complex(x[0], x[1]), complex(x[2], x[3])
        c = (x[4:4 + self.m] + 1j * x[4 + self.m:]).reshape(-1, self.n)
        return a, b, c

    def pack(self, a, b, c):
        c = np.asarray(c, complex).reshape(-1)
        return np.r_[a.real, a.imag, b.real, b.imag, c.real, c.imag]

    def basis(self, a, b):
        z = self.zeta
        La = (b - z) / (b - a)
        Lb = (z - a) / (b - a)
        k = np.arange(2, self.d + 1)
        B = self.pw[:, 2:] - np.outer(La, a**k) - np.outer(Lb, b**k)
        return La, Lb, B

    def image(self, x):
        a, b, c = self.unpack(x)
        La, Lb, B = self.basis(a, b)
        return np.outer(La, self.P) + np.outer(Lb, self.Q) + B @ c

    def objective(self, x):
        a, b = complex(x[0], x[1]), complex(x[2], x[3])
        if abs(a) >= 1 or abs(b) >= 1:
            return 50.0
        return float(np.arctanh(min(abs(a - b) / abs(1 - a.conjugate() * b), 1 - 1e-16)))

    def objective_grad(self, x):
        g = np.zeros_like(x)
        h = 1e-8
        f0 = self.objective(x)
        for i in range(4):
            e = np.zeros_like(x)
            e[i] = h
            g[i] = (self.objective(x + e) - f0) / h
        return g

    def cons(self, x):
        a, b = complex(x[0], x[1]), complex(x[2], x[3])
        if abs(b - a) < 1e-12:
            return np.full(self.zeta.size * 3 + 2, -1.0)
        vals, _ = smooth_pieces(self.domain, self.image(x))
        nodes = np.array([NODE_LIMIT**2 - abs(a) ** 2, NODE_LIMIT**2 - abs(b) ** 2])
        return np.r_[(self.target - vals).ravel(), nodes]

    def jac(self, x):
        a, b, c = self.unpack(x)
        w = self.image(x)
        _, G = smooth_pieces(self.domain, w)
        Gc = np.conj(G)
        K, Pn, _ = G.shape
        J = np.zeros((K * Pn + 2, x.size))
        _, _, B = self.basis(a, b)
        prod = Gc[:, :, None, :] * B[:, None, :, None]  # (K, P, d-1, n)
        J[: K * Pn, 4:4 + self.m] = -prod.real.reshape(K * Pn, self.m)
        J[: K * Pn, 4 + self.m:] = -np.real(1j * prod).reshape(K * Pn, self.m)
        h = 1e-7
        for i in range(4):
            e = np.zeros_like(x)
            e[i] = h
            dv = (smooth_pieces(self.domain, self.image(x + e))[0]
                  - smooth_pieces(self.domain, self.image(x - e))[0]) / (2 * h)
            J[: K * Pn, i] = -dv.ravel()
        J[K * Pn, 0:2] = [-2 * a.real, -2 * a.imag]
        J[K * Pn + 1, 2:4] = [-2 * b.real, -2 * b.imag]
        return J


def _certify(domain, P, Q, a, b, coeffs, slack):
    """Return (a, b, coeffs) certified feasible, or None.

    A failing disc is replaced by zeta -> phi(s zeta) for the largest s < 1 that
    certifies, with nodes a / s, b / s (the closed-disc maxima of rho o phi grow with s).
    """
    def ok(c):
        return verified_margin(c, domain) <= -slack

    if ok(coeffs):
        return a, b, coeffs
    smax = max(abs(a), abs(b)) / NODE_LIMIT
    k = np.arange(coeffs.shape[0])[:, None]
    lo, hi = smax, 1.0
    if lo >= hi or not ok(coeffs * lo**k):
        return None
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if ok(coeffs * mid**k):
            lo = mid
        else:
            hi = mid
    return a / lo, b / lo, coeffs * lo**k


def _result(domain, P, Q, a, b, coeffs, method, max_degree):
    res = (float(np.linalg.norm(horner(coeffs, a) - P)), float(np.linalg.norm(horner(coeffs, b) - Q)))
    return OneDiscResult(poincare_distance(a, b), AnalyticDisc(coeffs, max_degree), complex(a), complex(b),
                         res, P.copy(), Q.copy(), method)


def _slice_start(domain, P, Q, slack):
    """Best Euclidean disc inside the complex line through P and Q (exact for the ball)."""
    v = Q - P
    L = np.linalg.norm(v)
    u = v / L

    def nodes(cc):
        center = P + cc * v
        R = linear_disc_radius(domain, center, u, slack) / L
        if R <= 0:
            return None
        a, b = -cc / R, (1 - cc) / R
        if max(abs(a), abs(b)) >= NODE_LIMIT:
            return None
        return a, b, R

    def cost(x):
        r = nodes(complex(x[0], x[1]))
        return pseudo_hyperbolic(r[0], r[1]) if r is not None else 2.0

    res = minimize(cost, np.array([0.5, 0.0]), method="Nelder-Mead",
                   options={"xatol": 1e-7, "fatol": 1e-12, "maxfev": 120})
    best = None
    for x in (np.array([0.5, 0.0]), res.x):
        r = nodes(complex(x[0], x[1]))
        if r is not None and (best is None or pseudo_hyperbolic(r[0], r[1]) < pseudo_hyperbolic(best[0], best[1])):
            best = r
    if best is None:
        return None
    a, b, R = best
    cc = -a * R
    coeffs = np.stack([P + cc * v, R * v])
    return a, b, coeffs


def _lempert_starts(domain, P, Q, degree, slack):
    """Explicit discs for P = (p, 0), Q = (0, q) in the Lempert domain.

    g1 = p ((1 + zeta) / (1 + s))^k (zeta + s) / (2 s),  g2 = q ((1 - zeta) / (1 + s))^k (s - zeta) / (2 s),
    with nodes s (value P) and -s (value Q); large k keeps |g1 g2| small on the circle.
    """
    if domain.kind != "lempert" or P[1] != 0 or Q[0] != 0:
        return []
    p, q = P[0], Q[1]
    out = []
    for k in range(1, degree):
        best = None
        for s in np.linspace(0.05, NODE_LIMIT - 1e-3, 120):
            g1 = np.polynomial.polynomial.polypow([1 / (1 + s), 1 / (1 + s)], k)
            g1 = np.polynomial.polynomial.polymul(g1, [s / (2 * s), 1 / (2 * s)]) * p
            g2 = np.polynomial.polynomial.polypow([1 / (1 + s), -1 / (1 + s)], k)
            g2 = np.polynomial.polynomial.polymul(g2, [s / (2 * s), -1 / (2 * s)]) * q
            coeffs = np.zeros((k + 2, 2), complex)
            coeffs[: g1.size, 0] = g1
            coeffs[: g2.size, 1] = g2
            if verified_margin(coeffs, domain, 512) <= -2 * slack:
                best = (s, coeffs)
                break
        if best is not None:
            s, coeffs = best
            out.append((complex(s), complex(-s), coeffs))
    out.sort(key=lambda t: pseudo_hyperbolic(t[0], t[1]))
    return out[:3]


def one_disc_distance_upper(domain: DomainSpec, P, Q, budget: OptimizerBudget = DEFAULT_BUDGET,
                            fast: bool = False) -> OneDiscResult:
    """Upper bound for the one-disc distance between P and Q.

    Warm starts: the best Euclidean disc in the complex line through P and Q,
    explicit families for the Lempert domain, and the segment disc through the
    midpoint.  Each start is refined by SLSQP over both nodes and the higher
    coefficients (sampled-circle constraints), then certified on the dense
    sample.  ``fast`` returns the best certified warm start and only runs the
    optimizer (from a single start) when no warm start certifies.
    """
    P, Q = as_point(P, domain.n), as_point(Q, domain.n)
    if not (contains(domain, P) and contains(domain, Q)):
        raise ValueError("P and Q must lie inside the domain")
    if np.linalg.norm(P - Q) == 0:
        return OneDiscResult(0.0, AnalyticDisc.constant(P, budget.degree), 0j, 0j, (0.0, 0.0), P.copy(), Q.copy(),
                             "constant disc")
    slack = budget.slack
    starts = []
    s = _slice_start(domain, P, Q, slack)
    if s is not None:
        starts.append((*s, "complex-line slice disc"))
    for a, b, c in _lempert_starts(domain, P, Q, budget.degree, slack):
        starts.append((a, b, c, "explicit Lempert-domain disc"))
    if not starts:
        raise OptimizationFailure("no feasible starting disc joins P and Q")

    best = None
    for a, b, c in [(a, b, c) for a, b, c, _ in starts]:
        cert = _certify(domain, P, Q, a, b, c, slack)
        if cert is not None:
            r = _result(domain, P, Q, *cert, "warm start", max(budget.degree, c.shape[0] - 1))
            if best is None or r.distance_upper < best.distance_upper:
                best = r
    if budget.degree >= 2 and not (fast and best is not None):
        prob = _TwoPointProblem(domain, P, Q, budget.degree, slack)
        tries = starts[:1] if fast else starts
        for a, b, c0, label in tries:
            c = np.zeros((budget.degree - 1, domain.n), complex)
            m = min(c0.shape[0] - 2, budget.degree - 1)
            if m > 0:
                c[:m] = c0[2:2 + m]
            x0 = prob.pack(a, b, c)
            res = minimize(prob.objective, x0, jac=prob.objective_grad, method="SLSQP",
                           constraints=[{"type": "ineq", "fun": prob.cons, "jac": prob.jac}],
                           options={"maxiter": budget.max_iterations // (2 if fast else 1), "ftol": 1e-10})
            if not np.all(np.isfinite(res.x)):
                continue
            a1, b1, c1 = prob.unpack(res.x)
            if abs(a1) >= NODE_LIMIT or abs(b1) >= NODE_LIMIT or abs(a1 - b1) < 1e-9:
                continue
            coeffs = _monomial_coefficients(P, Q, a1, b1, c1)
            cert = _certify(domain, P, Q, a1, b1, coeffs, slack)
            if cert is None:
                continue
            r = _result(domain, P, Q, *cert, f"slsqp from {label}", budget.degree)
            if max(r.residuals) <= ENDPOINT_TOL and (best is None or r.distance_upper < best.distance_upper):
                best = r
    if best is None or max(best.residuals) > ENDPOINT_TOL:
        raise OptimizationFailure("no certified disc joins P and Q within the budget")
    return best


# ---------------------------------------------------------------------------
# chains


def _inside(domain, w, margin=1e-3):
    g = gauge(domain, w)
    return w if g < 1 - margin else w * (1 - margin) / g


def _legs(domain, pts, budget, fast=False):
    return [one_disc_distance_upper(domain, pts[i], pts[i + 1], budget, fast=fast) for i in range(len(pts) - 1)]


def chain_distance_upper(domain: DomainSpec, P, Q, k: int, budget: OptimizerBudget = DEFAULT_BUDGET,
                         initial: ChainPath | None = None, rounds: int = 1) -> ChainPath:
    """Upper bound for the Kobayashi distance by a k-leg chain.

    Initial waypoint sets: the nested chain (``initial`` padded with copies of Q, or
    the one-disc chain with degenerate legs), the straight segment pulled inside,
    and the polyline through the origin.  Interior waypoints are then improved by
    coordinate descent, each step a Nelder-Mead search over one waypoint with fast
    one-disc evaluations of its two legs.  A candidate chain replaces the incumbent
    only if its certified total is smaller, so more legs never do worse than the
    nested start.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    P, Q = as_point(P, domain.n), as_point(Q, domain.n)
    if np.linalg.norm(P - Q) == 0:
        leg = one_disc_distance_upper(domain, P, Q, budget)
        return ChainPath([P, Q] + [Q] * (k - 1), [leg] * k)
    if initial is not None:
        nested = list(initial.waypoints[:-1]) + [Q] * (k - len(initial.legs) + 1)
        nested = nested[: k + 1]
        best = ChainPath(nested, list(initial.legs) + [one_disc_distance_upper(domain, Q, Q, budget)]
                         * (k - len(initial.legs)))
    else:
        lg = one_disc_distance_upper(domain, P, Q, budget)
        best = ChainPath([P] + [Q] * k, [lg] + [one_disc_distance_upper(domain, Q, Q, budget)] * (k - 1))
    if k == 1:
        return best
    inits = [[P] + [_inside(domain, P + (j / k) * (Q - P)) for j in range(1, k)] + [Q]]
    if k >= 2:
        half = k // 2
        poly = [P * (1 - j / half) for j in range(1, half + 1)] + [Q * (j / (k - half)) for j in range(1, k - half)]
        inits.append([P] + [_inside(domain, w) for w in poly] + [Q])
    for pts in inits:
        try:
            cand = ChainPath(pts, _legs(domain, pts, budget))
        except OptimizationFailure:
            continue
        if cand.total < best.total:
            best = cand

    pts = [np.array(w) for w in best.waypoints]
    fast_budget = budget.with_(degree=min(budget.degree, 6), restarts=1, max_iterations=min(budget.max_iterations, 100))

    def pair_cost(i, w):
        if not contains(domain, w):
            return 1e3
        try:
            return (one_disc_distance_upper(domain, pts[i - 1], w, fast_budget, fast=True).distance_upper
                    + one_disc_distance_upper(domain, w, pts[i + 1], fast_budget, fast=True).distance_upper)
        except OptimizationFailure:
            return 1e3

    n = domain.n
    for _ in range(rounds):
        for i in range(1, k):
            x0 = np.r_[pts[i].real, pts[i].imag]
            res = minimize(lambda x: pair_cost(i, x[:n] + 1j * x[n:]), x0, method="Nelder-Mead",
                           options={"maxfev": 15 * n, "xatol": 1e-4, "fatol": 1e-6})
            pts[i] = res.x[:n] + 1j * res.x[n:]
    try:
        cand = ChainPath(pts, _legs(domain, pts, budget))
        if cand.total < best.total:
            best = cand
    except OptimizationFailure:
        pass
    return best


# ---------------------------------------------------------------------------
# merging and shortening


@dataclass(frozen=True)
class NetSignature:
    net_points: frozenset
    disc_nodes: tuple

    def shares(self, other: "NetSignature") -> bool:
        return bool(self.net_points & other.net_points)


def domain_net(domain: DomainSpec, eta: float | None = None) -> np.ndarray:
    """Points of a cubic lattice with spacing eta (default diameter / 8) lying inside the domain."""
    if eta is None:
        eta = 2.0 * circumscribing_radius(domain) / 8.0
    R = bounding_radii(domain)
    axes = []
    for r in R:
        ticks = np.arange(-r + eta / 2, r, eta)
        axes.extend([ticks, ticks])
    grid = np.array(list(itertools.product(*axes)))
    pts = grid[:, 0::2] + 1j * grid[:, 1::2]
    return pts[contains(domain, pts)]


def poincare_net(eta_prime: float = 0.5, radius: float = 3.0) -> np.ndarray:
    """Points of the unit disc on hyperbolic rings spaced eta_prime, up to hyperbolic radius ``radius``."""
    pts = [0j]
    for j in range(1, int(radius / eta_prime) + 1):
        rho = j * eta_prime
        r = np.tanh(rho)
        circumference = np.pi * np.sinh(2 * rho)
        count = max(6, int(np.ceil(circumference / eta_prime)))
        pts.extend(r * np.exp(2j * np.pi * np.arange(count) / count))
    return np.array(pts)


def net_signature(domain: DomainSpec, leg: OneDiscResult, net: np.ndarray, eta: float,
                  pnet: np.ndarray) -> NetSignature:
    """Net points within eta of the leg's image (sampled at the Poincare net) and the net nodes used."""
    if leg.disc is None or leg.degenerate:
        close = np.linalg.norm(net - leg.start, axis=1) <= eta
        return NetSignature(frozenset(np.flatnonzero(close).tolist()), ())
    span = max(abs(leg.node_a), abs(leg.node_b))
    zs = pnet[np.abs(pnet) <= max(span, 0.5)]
    img = horner(leg.disc.coefficients, zs)
    dist = np.linalg.norm(net[:, None, :] - img[None, :, :], axis=2)
    used = tuple(int(np.argmin(np.abs(pnet - x))) for x in (leg.node_a, leg.node_b))
    return NetSignature(frozenset(np.flatnonzero(dist.min(axis=1) <= eta).tolist()), used)


def disc_sup_distance(leg1: OneDiscResult, leg2: OneDiscResult) -> float:
    z = sample_grid()
    return float(np.max(np.linalg.norm(horner(leg1.disc.coefficients, z) - horner(leg2.disc.coefficients, z), axis=1)))


def merge_discs(domain: DomainSpec, leg1: OneDiscResult, leg2: OneDiscResult, delta: float = np.inf,
                budget: OptimizerBudget = DEFAULT_BUDGET) -> OneDiscResult | None:
    """Replace two consecutive legs by one disc when that does not lengthen the chain.

    When ``delta`` is finite the discs must also be uniformly within delta of each
    other on the closed-disc sample grid; otherwise no merge is attempted.
    """
    if np.linalg.norm(leg1.end - leg2.start) > ENDPOINT_TOL:
        raise ValueError("leg1 must end where leg2 starts")
    if leg2.degenerate:
        return leg1
    if leg1.degenerate:
        return leg2
    if np.isfinite(delta) and disc_sup_distance(leg1, leg2) >= delta:
        return None
    try:
        merged = one_disc_distance_upper(domain, leg1.start, leg2.end, budget)
    except OptimizationFailure:
        return None
    if merged.distance_upper <= leg1.distance_upper + leg2.distance_upper:
        return merged
    return None


def shorten_chain(domain: DomainSpec, chain: ChainPath, eta: float | None = None, eta_prime: float = 0.5,
                  budget: OptimizerBudget = DEFAULT_BUDGET, delta: float = np.inf) -> ChainPath:
    """Merge adjacent legs until no merge is accepted.

    Each round first tries pairs whose net signatures share a net point, then every
    adjacent pair.  A merge is kept only if the total does not increase.  The
    report records the attempts and the combinatorial bound (2^M)^(2^M') on the leg
    count, with M, M' the sizes of the two nets, as log2(log2(bound)) = log2 M + M'.
    """
    if eta is None:
        eta = 2.0 * circumscribing_radius(domain) / 8.0
    net = domain_net(domain, eta)
    pnet = poincare_net(eta_prime)
    legs = list(chain.legs)
    pts = [np.array(w) for w in chain.waypoints]
    attempts = accepted = rejected = 0
    changed = True
    while changed and len(legs) > 1:
        changed = False
        sigs = [net_signature(domain, leg, net, eta, pnet) for leg in legs]
        pairs = [i for i in range(len(legs) - 1) if sigs[i].shares(sigs[i + 1])]
        pairs += [i for i in range(len(legs) - 1) if i not in pairs]
        for i in pairs:
            attempts += 1
            merged = merge_discs(domain, legs[i], legs[i + 1], delta, budget)
            if merged is not None and merged.distance_upper <= legs[i].distance_upper + legs[i + 1].distance_upper:
                legs[i: i + 2] = [merged]
                del pts[i + 1]
                accepted += 1
                changed = True
                break
            rejected += 1
    M, M2 = len(net), len(pnet)
    report = {"attempts": attempts, "accepted": accepted, "rejected": rejected, "legs": len(legs),
              "net_size": M, "node_net_size": M2, "leg_bound_log2_log2": math.log2(max(M, 1)) + M2}
    return ChainPath(pts, legs, report)
