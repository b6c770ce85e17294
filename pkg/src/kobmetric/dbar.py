"""One-variable Cauchy-transform solver for the dbar equation and the cutoff correction estimates.

Conventions: dbar = (d/dx + i d/dy) / 2, Lebesgue area measure, and

    u(z) = (1/pi) integral tau(xi) / (z - xi) dA(xi),

which solves dbar u = tau for compactly supported tau.  Fields live on square
grids; cell (j, k) sits at origin + h k + i h j (rows are y, columns are x).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import fftconvolve

MIN_CELLS_PER_RADIUS = 16


@dataclass(frozen=True, eq=False)
class GridField:
    values: np.ndarray
    spacing: float
    origin: complex = 0j

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("grid fields are square 2-D arrays")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @property
    def z(self) -> np.ndarray:
        return grid_points(self.size, self.spacing, self.origin)

    def with_values(self, values) -> "GridField":
        return GridField(values, self.spacing, self.origin)

    def save(self, prefix) -> tuple[Path, Path]:
        """Write ``prefix.csv`` (re, im per cell, row-major) and ``prefix.json`` (header)."""
        prefix = Path(prefix)
        csv_path, json_path = prefix.with_suffix(".csv"), prefix.with_suffix(".json")
        with csv_path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["re", "im"])
            for c in self.values.ravel():
                w.writerow([repr(float(c.real)), repr(float(c.imag))])
        header = {"size": self.size, "spacing": self.spacing, "origin": [self.origin.real, self.origin.imag]}
        json_path.write_text(json.dumps(header, sort_keys=True), encoding="utf-8")
        return csv_path, json_path

    @classmethod
    def load(cls, prefix) -> "GridField":
        prefix = Path(prefix)
        header = json.loads(prefix.with_suffix(".json").read_text(encoding="utf-8"))
        data = np.loadtxt(prefix.with_suffix(".csv"), delimiter=",", skiprows=1, ndmin=2)
        n = header["size"]
        return cls((data[:, 0] + 1j * data[:, 1]).reshape(n, n), header["spacing"], complex(*header["origin"]))


def grid_points(size: int, spacing: float, origin: complex = 0j) -> np.ndarray:
    k = np.arange(size)
    return origin + spacing * k[None, :] + 1j * spacing * k[:, None]


def centered_grid(center: complex, half_width: float, size: int):
    """(spacing, origin) of a size x size grid covering the square of the given half width."""
    h = 2.0 * half_width / size
    origin = center - half_width * (1 + 1j) + 0.5 * h * (1 + 1j)
    return h, origin


def dbar_fd(field: GridField) -> np.ndarray:
    """Centred-difference dbar on interior cells; the one-cell border is left at 0."""
    u, h = field.values, field.spacing
    out = np.zeros_like(u)
    ux = (u[1:-1, 2:] - u[1:-1, :-2]) / (2 * h)
    uy = (u[2:, 1:-1] - u[:-2, 1:-1]) / (2 * h)
    out[1:-1, 1:-1] = 0.5 * (ux + 1j * uy)
    return out


def grad_norm_fd(field: GridField) -> np.ndarray:
    """|grad u| = |du/dz| + |du/dzbar| on interior cells (operator norm of the real derivative)."""
    u, h = field.values, field.spacing
    out = np.zeros(u.shape)
    ux = (u[1:-1, 2:] - u[1:-1, :-2]) / (2 * h)
    uy = (u[2:, 1:-1] - u[:-2, 1:-1]) / (2 * h)
    out[1:-1, 1:-1] = np.abs(0.5 * (ux - 1j * uy)) + np.abs(0.5 * (ux + 1j * uy))
    return out


# ---------------------------------------------------------------------------
# the cutoff


def _smoothstep(s):
    s = np.clip(s, 0.0, 1.0)
    return np.clip(s**3 * (10 - 15 * s + 6 * s * s), 0.0, 1.0)


def _smoothstep_prime(s):
    inside = (s > 0) & (s < 1)
    return np.where(inside, 30 * s * s * (1 - s) ** 2, 0.0)


@dataclass(frozen=True)
class CutoffSpec:
    """gamma(z) = q(|z - center| / r) with q = 1 on [0, 1/2], 0 on [1, inf), quintic smoothstep between.

    q is C^2 and monotone, so sup |grad gamma| = 3.75 / r.
    """

    center: complex
    radius: float

    def __call__(self, z):
        t = np.abs(np.asarray(z) - self.center) / self.radius
        return 1.0 - _smoothstep(2 * t - 1)

    def dbar(self, z):
        """Exact dbar gamma = q'(t) / (2 r) (z - c) / |z - c|; zero off the annulus r/2 < |z - c| < r."""
        w = np.asarray(z) - self.center
        a = np.abs(w)
        t = a / self.radius
        qp = -2.0 * _smoothstep_prime(2 * t - 1)
        unit = np.divide(w, a, out=np.zeros_like(w, dtype=complex), where=a > 0)
        return qp / (2 * self.radius) * unit

    def grad_norm(self, z):
        return 2.0 * np.abs(self.dbar(z))


def build_cutoff(center, r: float) -> CutoffSpec:
    if not r > 0:
        raise ValueError("cutoff radius must be positive")
    return CutoffSpec(complex(center), float(r))


def correction_rhs(psi, mu: complex, gamma: CutoffSpec, size: int, spacing: float,
                   origin: complex) -> GridField:
    """tau = dbar(gamma) (psi - psi o mu^-1) on a grid, mu a rotation about the cutoff centre.

    ``psi`` is a holomorphic callable with psi(center) = 0.  The support of tau lies in
    the annulus r/2 < |z - center| < r because dbar(gamma) is evaluated exactly.
    """
    if abs(abs(mu) - 1) > 1e-12:
        raise ValueError("mu must be a rotation (|mu| = 1)")
    if gamma.radius / spacing < MIN_CELLS_PER_RADIUS:
        raise ValueError(f"grid too coarse: need at least {MIN_CELLS_PER_RADIUS} cells across r")
    c = gamma.center
    scale = max(1.0, abs(complex(psi(c + gamma.radius))))
    if abs(complex(psi(c))) > 1e-12 * scale:
        raise ValueError("psi must vanish at the cutoff centre")
    z = grid_points(size, spacing, origin)
    mu_inv = c + np.conj(mu) * (z - c)
    return GridField(gamma.dbar(z) * (psi(z) - psi(mu_inv)), spacing, origin)


# ---------------------------------------------------------------------------
# the solver


def cauchy_kernel(size: int, spacing: float) -> np.ndarray:
    """h^2 / (pi w) on the offsets w = h (k + i j), |j|, |k| < size; 0 at w = 0.

    The exact integral of 1 / (pi w) over the centred square cell vanishes by symmetry,
    which is what the zero at the origin encodes.
    """
    k = np.arange(-(size - 1), size)
    w = spacing * (k[None, :] + 1j * k[:, None])
    ker = np.zeros(w.shape, dtype=complex)
    nz = w != 0
    ker[nz] = spacing**2 / (np.pi * w[nz])
    return ker


def cauchy_solve(tau: GridField) -> GridField:
    """u = (1/pi) sum tau(xi) h^2 / (z - xi) over the grid, by FFT convolution."""
    n = tau.size
    if not np.any(tau.values):
        return tau.with_values(np.zeros_like(tau.values))
    ker = cauchy_kernel(n, tau.spacing)
    u = fftconvolve(tau.values, ker, mode="full")[n - 1: 2 * n - 1, n - 1: 2 * n - 1]
    return tau.with_values(u)


def relative_residual(u: GridField, tau: GridField, border: int = 2) -> float:
    """||dbar_fd(u) - tau||_2 / ||tau||_2 over the interior cells."""
    r = dbar_fd(u) - tau.values
    sl = (slice(border, -border), slice(border, -border))
    return float(np.linalg.norm(r[sl]) / np.linalg.norm(tau.values[sl]))


# ---------------------------------------------------------------------------
# test fields


def bump(z, center: complex = 0j, radius: float = 0.5):
    """C-infinity bump exp(-1 / (1 - |z - c|^2 / R^2)), zero outside the disc of radius R."""
    s = np.abs(np.asarray(z) - center) ** 2 / radius**2
    inside = s < 1
    out = np.zeros(np.shape(s))
    out[inside] = np.exp(-1.0 / (1.0 - s[inside]))
    return out


def bump_dbar(z, center: complex = 0j, radius: float = 0.5):
    """Exact dbar of :func:`bump`: -bump (z - c) / (R^2 (1 - s)^2)."""
    w = np.asarray(z) - center
    s = np.abs(w) ** 2 / radius**2
    inside = s < 1
    out = np.zeros(np.shape(s), dtype=complex)
    out[inside] = -np.exp(-1.0 / (1.0 - s[inside])) * w[inside] / (radius**2 * (1.0 - s[inside]) ** 2)
    return out


# ---------------------------------------------------------------------------
# the scaling experiment


@dataclass(frozen=True)
class ScalingTable:
    r: np.ndarray
    sup_u: np.ndarray
    sup_grad_u: np.ndarray
    sup_tau: np.ndarray
    slope: float

    def rows(self) -> list[dict]:
        return [{"r": float(a), "sup_u": float(b), "sup_grad_u": float(c), "sup_tau": float(d)}
                for a, b, c, d in zip(self.r, self.sup_u, self.sup_grad_u, self.sup_tau)]


def correction_scaling_experiment(psi, mu: complex, r_values, center: complex = 0j,
                                  cells: int = 128, half_width_factor: float = 2.0) -> ScalingTable:
    """sup |u| and sup |grad u| of the corrected term as the cutoff radius shrinks.

    The grid scales with r (half width ``half_width_factor`` r, ``cells`` per side),
    so every radius is resolved equally.  ``slope`` is the least-squares slope of
    log sup|u| against log r; it is nan when every sup|u| vanishes (mu = identity).
    """
    r_values = np.asarray(r_values, dtype=float)
    if r_values.size < 3:
        raise ValueError("need at least three radii")
    if np.any(np.diff(r_values) >= 0):
        raise ValueError("r_values must be strictly decreasing")
    sup_u, sup_g, sup_t = [], [], []
    for r in r_values:
        h, origin = centered_grid(center, half_width_factor * r, cells)
        tau = correction_rhs(psi, mu, build_cutoff(center, r), cells, h, origin)
        u = cauchy_solve(tau)
        sup_u.append(float(np.max(np.abs(u.values))))
        sup_g.append(float(np.max(grad_norm_fd(u))))
        sup_t.append(float(np.max(np.abs(tau.values))))
    sup_u = np.array(sup_u)
    if np.all(sup_u > 0):
        slope = float(np.polyfit(np.log(r_values), np.log(sup_u), 1)[0])
    else:
        slope = float("nan")
    return ScalingTable(r_values, sup_u, np.array(sup_g), np.array(sup_t), slope)
