"""Truncated polynomial analytic discs, disc automorphisms, and the Poincare distance."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .domains import DomainSpec, circumscribing_radius, defining_value

DEFAULT_MAX_DEGREE = 12
DEFAULT_SLACK = 1e-4


@dataclass(frozen=True, eq=False)
class AnalyticDisc:
    """phi(zeta) = sum_k a_k zeta^k with a_k in C^n, for zeta in the closed unit disc.

    ``coefficients`` has shape (degree + 1, n).
    """

    coefficients: np.ndarray
    max_degree: int = DEFAULT_MAX_DEGREE

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex)
        if c.ndim == 1:
            c = c[:, None]
        if c.ndim != 2 or c.shape[0] < 1:
            raise ValueError("coefficients must have shape (degree + 1, n)")
        if not np.all(np.isfinite(c)):
            raise ValueError("disc coefficients must be finite")
        if c.shape[0] - 1 > self.max_degree:
            raise ValueError(f"disc degree {c.shape[0] - 1} exceeds the maximum {self.max_degree}")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return self.coefficients.shape[0] - 1

    @property
    def n(self) -> int:
        return self.coefficients.shape[1]

    @classmethod
    def constant(cls, point, max_degree=DEFAULT_MAX_DEGREE):
        return cls(np.asarray(point, dtype=complex)[None, :], max_degree)

    @classmethod
    def linear(cls, center, velocity, max_degree=DEFAULT_MAX_DEGREE):
        return cls(np.stack([np.asarray(center, complex), np.asarray(velocity, complex)]), max_degree)

    def __call__(self, zeta):
        return evaluate(self, zeta)

    def to_json(self) -> list:
        """Coordinate-major list of ``[re, im]`` pairs, lowest degree first."""
        return [[[float(a.real), float(a.imag)] for a in self.coefficients[:, j]] for j in range(self.n)]

    @classmethod
    def from_json(cls, data, max_degree=None):
        if isinstance(data, str):
            data = json.loads(data)
        c = np.array([[complex(re, im) for re, im in coord] for coord in data]).T
        return cls(c, max_degree if max_degree is not None else max(DEFAULT_MAX_DEGREE, c.shape[0] - 1))


@dataclass(frozen=True)
class FeasibilityReport:
    margin: float
    sample_count: int
    worst_parameter: complex

    def feasible(self, slack: float = DEFAULT_SLACK) -> bool:
        return self.margin <= -slack


def _check_closed_disc(zeta):
    if np.any(np.abs(zeta) > 1.0 + 1e-12):
        raise ValueError("disc parameters must satisfy |zeta| <= 1")


def horner(coefficients: np.ndarray, zeta) -> np.ndarray:
    """Evaluate a coefficient array of shape (d+1, n) at an array of parameters (no checks)."""
    zeta = np.asarray(zeta, dtype=complex)
    out = np.broadcast_to(coefficients[-1], zeta.shape + coefficients.shape[1:]).copy()
    for a in coefficients[-2::-1]:
        out = out * zeta[..., None] + a
    return out


def evaluate(disc: AnalyticDisc, zeta) -> np.ndarray:
    zeta = np.asarray(zeta, dtype=complex)
    _check_closed_disc(zeta)
    return horner(disc.coefficients, zeta)


def derivative_at(disc: AnalyticDisc, zeta) -> np.ndarray:
    zeta = np.asarray(zeta, dtype=complex)
    _check_closed_disc(zeta)
    if disc.degree == 0:
        return np.zeros(zeta.shape + (disc.n,), dtype=complex)
    k = np.arange(1, disc.degree + 1)[:, None]
    return horner(disc.coefficients[1:] * k, zeta)


def mobius(a: complex, zeta):
    """The disc automorphism zeta -> (zeta + a) / (1 + conj(a) zeta), sending 0 to a."""
    return (zeta + a) / (1 + np.conj(a) * zeta)


def _mobius_series(a: complex, degree: int) -> np.ndarray:
    k = np.arange(1, degree + 1)
    s = np.empty(degree + 1, dtype=complex)
    s[0] = a
    s[1:] = (-np.conj(a)) ** (k - 1) * (1 - abs(a) ** 2)
    return s


def _compose_series(coefficients, series, degree):
    out = np.zeros((degree + 1, coefficients.shape[1]), dtype=complex)
    out[0] = coefficients[-1]
    for a in coefficients[-2::-1]:
        prod = np.zeros_like(out)
        for j in range(coefficients.shape[1]):
            prod[:, j] = np.convolve(out[:, j], series)[: degree + 1]
        prod[0] += a
        out = prod
    return out


def precompose_mobius(disc: AnalyticDisc, a: complex, return_tail: bool = False):
    """Truncated Taylor expansion of phi((zeta + a) / (1 + conj(a) zeta)).

    The result keeps ``disc.max_degree`` coefficients.  With ``return_tail`` the
    l1 norm of the discarded coefficients (computed out to four times the maximum
    degree) is returned as well; it bounds the sup-norm truncation error on the
    closed disc up to the geometrically small remainder beyond that.
    """
    if abs(a) >= 1:
        raise ValueError("Mobius parameter must lie inside the unit disc")
    D = disc.max_degree
    if a == 0:
        out = AnalyticDisc(disc.coefficients.copy(), D)
        return (out, 0.0) if return_tail else out
    big = 4 * D
    full = _compose_series(disc.coefficients, _mobius_series(a, big), big)
    out = AnalyticDisc(full[: D + 1], D)
    if return_tail:
        return out, float(np.sum(np.linalg.norm(full[D + 1:], axis=1)))
    return out


def pseudo_hyperbolic(a, b) -> float:
    a, b = complex(a), complex(b)
    if abs(a) >= 1 or abs(b) >= 1:
        raise ValueError("disc nodes must lie strictly inside the unit disc")
    return abs(a - b) / abs(1 - a.conjugate() * b)


def poincare_distance(a, b) -> float:
    """artanh |(a - b) / (1 - conj(a) b)|: the distance of the metric |dzeta| / (1 - |zeta|^2)."""
    return float(np.arctanh(pseudo_hyperbolic(a, b)))


@lru_cache(maxsize=32)
def sample_grid(radial_samples: int = 16, angular_samples: int = 64) -> np.ndarray:
    """Closed-disc sample grid, radii clustered towards the unit circle, r = 0 and r = 1 included."""
    j = np.arange(radial_samples)
    r = 1.0 - (1.0 - j / (radial_samples - 1)) ** 2
    th = 2 * np.pi * np.arange(angular_samples) / angular_samples
    out = (r[:, None] * np.exp(1j * th)[None, :]).ravel()
    out.setflags(write=False)
    return out


@lru_cache(maxsize=32)
def circle(count: int) -> np.ndarray:
    out = np.exp(2j * np.pi * np.arange(count) / count)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=8)
def _verification_parameters(circle_samples: int) -> np.ndarray:
    out = np.concatenate([sample_grid(), circle(circle_samples)])
    out.setflags(write=False)
    return out


def feasibility_margin(disc: AnalyticDisc, domain: DomainSpec,
                       radial_samples: int = 16, angular_samples: int = 64) -> FeasibilityReport:
    """max of rho over the image of a closed-disc sample grid."""
    if radial_samples < 8 or angular_samples < 8:
        raise ValueError("sample counts must be at least 8")
    zeta = sample_grid(radial_samples, angular_samples)
    vals = defining_value(domain, horner(disc.coefficients, zeta))
    i = int(np.argmax(vals))
    return FeasibilityReport(float(vals[i]), int(zeta.size), complex(zeta[i]))


def verified_margin(coefficients: np.ndarray, domain: DomainSpec, circle_samples: int = 2048) -> float:
    """Margin over the default grid together with a dense sample of the unit circle.

    Every defining function here is plurisubharmonic, so rho o phi is subharmonic and
    its maximum over the closed disc sits on the circle; the dense circle sample is
    what the witnesses are certified against.
    """
    zeta = _verification_parameters(circle_samples)
    return float(np.max(defining_value(domain, horner(coefficients, zeta))))


def linear_disc_radius(domain: DomainSpec, center, direction, slack: float = DEFAULT_SLACK) -> float:
    """Largest certified t with the disc center + t zeta direction/|direction| feasible.

    zeta -> rho(center + zeta v) is subharmonic, so its circle maxima grow with t and
    feasibility is monotone in t.  The bisection runs on a 256-point circle; the
    result is then certified on the dense sample and shrunk until it passes.
    """
    center = np.asarray(center, complex)
    v = np.asarray(direction, complex)
    v = v / np.linalg.norm(v)
    if float(defining_value(domain, center)) > -slack:
        return 0.0
    ring = circle(256)[:, None] * v[None, :]
    lo, hi = 0.0, 2.0 * circumscribing_radius(domain) + 1.0
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if np.max(defining_value(domain, center + mid * ring)) <= -slack:
            lo = mid
        else:
            hi = mid
    base = np.stack([center, v])
    for j in range(60):
        if verified_margin(base * np.array([1.0, lo])[:, None], domain) <= -slack:
            return lo
        lo *= 1.0 - 1e-6 * 2.0**j
    return 0.0
