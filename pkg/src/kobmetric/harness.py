"""Named experiments wiring the library together, and deterministic CSV/JSON reports.

Each experiment returns a list of flat rows (dicts of finite numbers, booleans,
strings or None).  Every row carries ``method`` and ``bound_kind`` columns, and
a ``status`` column that is ``"ok"`` or records why a sub-run produced no bound;
a failed sub-run never aborts the sweep.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dbar
from .budget import DEFAULT_BUDGET, OptimizerBudget
from .chains import ChainPath, ball_distance, lempert_lower_bound, one_disc_distance_upper, shorten_chain
from .domains import (DomainSpec, ball, boundary_distance, contains, egg, lempert, make_domain,
                      normal_ray_point, radial_boundary, stretched_ball)
from .invariants import circular_center_exact, quotient_upper
from .metrics import (OptimizationFailure, caratheodory_lower, egg_direction_bounds, kobayashi_exact_model,
                      kobayashi_upper)

EXPERIMENTS = ("ball-validation", "egg-report", "lempert-sweep", "anisotropy", "quotient-scan",
               "chain-demo", "dbar-scaling", "stability-sweep")
FORMATS = ("csv", "json")

EGG_ALPHAS = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99)
PSI = {"z": lambda z: z, "z+z^2": lambda z: z + z * z}


class ConfigError(ValueError):
    """An experiment configuration that cannot be run."""


_DEFAULT_DOMAINS = {
    "ball-validation": lambda: ball(2),
    "egg-report": lambda: egg(1, 2),
    "lempert-sweep": lambda: lempert(0.25),
    "anisotropy": lambda: stretched_ball(4.0),
    "quotient-scan": lambda: egg(1, 2),
    "chain-demo": lambda: ball(2),
    "dbar-scaling": lambda: ball(1),
    "stability-sweep": lambda: stretched_ball(4.0),
}

_ALLOWED_KINDS = {
    "ball-validation": ("ball", "polydisc"),
    "egg-report": ("egg",),
    "lempert-sweep": ("lempert",),
    "anisotropy": ("stretched_ball",),
    "quotient-scan": ("ball", "egg", "stretched_ball", "polydisc"),
    "chain-demo": ("ball", "polydisc", "egg", "stretched_ball", "lempert"),
    "dbar-scaling": ("ball",),
    "stability-sweep": ("stretched_ball",),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment run.

    ``domain`` defaults per experiment; ``parameters`` holds experiment-specific
    overrides (sweep values, counts), documented on each ``_run_*`` function.
    """

    experiment: str
    domain: DomainSpec | None = None
    budget: OptimizerBudget = DEFAULT_BUDGET
    seed: int = 0
    out: Path | None = None
    format: str = "csv"
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        dom = self.domain
        if dom is None:
            dom = _DEFAULT_DOMAINS[self.experiment]()
        elif not isinstance(dom, DomainSpec):
            try:
                dom = make_domain(dom)
            except (ValueError, KeyError, OSError) as exc:
                raise ConfigError(f"bad domain descriptor: {exc}") from exc
        if dom.kind not in _ALLOWED_KINDS[self.experiment]:
            raise ConfigError(f"{self.experiment} does not run on {dom}")
        if self.experiment == "egg-report" and (dom.n != 2 or dom.exponents[0] != 1):
            raise ConfigError("egg-report needs a domain Egg(1, m)")
        object.__setattr__(self, "domain", dom)
        if self.out is not None:
            object.__setattr__(self, "out", Path(self.out))

    def param(self, name, default):
        return self.parameters.get(name, default)


def _seeds(seed: int, count: int) -> list[int]:
    """Per-point seeds derived from the experiment seed."""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def _point_columns(prefix: str, z) -> dict:
    out = {}
    for j, c in enumerate(np.atleast_1d(np.asarray(z, complex))):
        out[f"{prefix}{j + 1}_re"] = float(c.real)
        out[f"{prefix}{j + 1}_im"] = float(c.imag)
    return out


def _ok(**cols) -> dict:
    return {"status": "ok", **cols}


def _failed(exc: Exception, **cols) -> dict:
    return {"status": f"failed: {exc}", **cols}


# ---------------------------------------------------------------------------
# experiments


def _random_point(domain: DomainSpec, rng, max_radius: float = 0.8):
    n = domain.n
    if domain.kind == "polydisc":
        r = np.asarray(domain.radii) * max_radius * np.sqrt(rng.uniform(size=n))
        return r * np.exp(2j * np.pi * rng.uniform(size=n))
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v) * max_radius * rng.uniform() ** (1.0 / (2 * n))


def _run_ball_validation(cfg: ExperimentConfig) -> list[dict]:
    """Disc and candidate-map bounds against the closed forms.

    parameters: ``queries`` (20), ``quotient_points`` (10, ball only), ``tolerance`` (0.02).
    """
    dom, budget = cfg.domain, cfg.budget
    count = int(cfg.param("queries", 20))
    tol = float(cfg.param("tolerance", 0.02))
    rng = np.random.default_rng(cfg.seed)
    seeds = _seeds(cfg.seed, count)
    rows = []
    for i in range(count):
        z = _random_point(dom, rng)
        xi = rng.normal(size=dom.n) + 1j * rng.normal(size=dom.n)
        exact = kobayashi_exact_model(dom, z, xi).value
        b = budget.with_(seed=seeds[i])
        base = {"query": i, **_point_columns("z", z), **_point_columns("xi", xi), "exact": exact}
        for name, fn in (("kobayashi", kobayashi_upper), ("caratheodory", caratheodory_lower)):
            try:
                bound = fn(dom, z, xi, b)
            except OptimizationFailure as exc:
                rows.append(_failed(exc, **base, metric=name, method="", bound_kind=""))
                continue
            rel = bound.value / exact - 1.0
            rows.append(_ok(**base, metric=name, value=bound.value, relative_error=rel,
                            within_tolerance=abs(rel) <= tol, method=bound.method, bound_kind=bound.kind))
    if dom.kind == "ball":
        for i in range(int(cfg.param("quotient_points", 10))):
            z = _random_point(dom, rng)
            est = quotient_upper(dom, z, budget)
            rows.append(_ok(query=i, **_point_columns("z", z), metric="quotient", exact=1.0, value=est.m_upper,
                            relative_error=est.m_upper - 1.0, within_tolerance=est.m_upper <= 1 + 1e-6,
                            c_lower=est.c_lower, k_upper=est.k_upper,
                            method="ball automorphism witnesses", bound_kind="upper"))
    return rows


def _run_egg_report(cfg: ExperimentConfig) -> list[dict]:
    """M(0) of Egg(1, m) and the normal/tangential metric ratio table along (alpha, 0).

    parameters: ``alphas`` (0, 0.1, ..., 0.9, 0.99), ``center`` (True).
    """
    dom, budget = cfg.domain, cfg.budget
    m = dom.exponents[1]
    rows = []
    if cfg.param("center", True):
        est = circular_center_exact(dom, budget)
        rows.append(_ok(table="center", c=est.c_lower, k=est.k_upper, m_value=est.m_upper,
                        method="circular averaging + diagonal brute force",
                        bound_kind="exact" if est.exact else "upper"))
    alphas = [float(a) for a in cfg.param("alphas", EGG_ALPHAS)]
    seeds = _seeds(cfg.seed, 2 * len(alphas))
    for i, a in enumerate(alphas):
        for j, (name, xi) in enumerate((("normal", (1, 0)), ("tangential", (0, 1)))):
            z = np.array([a, 0], complex)
            closed_up, closed_low = egg_direction_bounds(m, a, name)
            b = budget.with_(seed=seeds[2 * i + j])
            base = {"table": "comparability", "alpha": a, "direction": name, "closed_form": closed_up.value}
            try:
                up = kobayashi_upper(dom, z, xi, b)
                low = caratheodory_lower(dom, z, xi, b)
            except OptimizationFailure as exc:
                rows.append(_failed(exc, **base, method="", bound_kind=""))
                continue
            rows.append(_ok(**base, upper=up.value, lower=low.value, ratio=up.value / low.value,
                            method=f"{up.method} / {low.method}", bound_kind="ratio"))
    return rows


def _run_lempert_sweep(cfg: ExperimentConfig) -> list[dict]:
    """Lower bound versus one-disc upper bound between (1, 0) and (0, 1), epsilon = 2^-k.

    parameters: ``ks`` (2..12), ``degree`` (max(budget degree, 20)).
    """
    ks = [int(k) for k in cfg.param("ks", range(2, 13))]
    b = cfg.budget.with_(degree=int(cfg.param("degree", max(cfg.budget.degree, 20))))
    rows = []
    for k in ks:
        eps = 2.0 ** (-k)
        r, low = lempert_lower_bound(eps)
        base = {"k": k, "epsilon": eps, "lower_node": r, "lower": low}
        try:
            res = one_disc_distance_upper(lempert(eps), (1, 0), (0, 1), b)
        except OptimizationFailure as exc:
            rows.append(_failed(exc, **base, method="", bound_kind=""))
            continue
        rows.append(_ok(**base, upper=res.distance_upper, upper_node=res.node,
                        consistent=low <= res.distance_upper, method=res.method, bound_kind="interval"))
    return rows


def _run_anisotropy(cfg: ExperimentConfig) -> list[dict]:
    """F_K at the centre of StretchedBall(N) along e1 and e2.

    parameters: ``Ns`` (the domain's N and 16).
    """
    Ns = [float(v) for v in cfg.param("Ns", sorted({cfg.domain.N, 16.0}))]
    rows = []
    for N in Ns:
        dom = stretched_ball(N)
        z = np.zeros(2, complex)
        base = {"N": N}
        try:
            u1 = kobayashi_upper(dom, z, (1, 0), cfg.budget)
            u2 = kobayashi_upper(dom, z, (0, 1), cfg.budget)
        except OptimizationFailure as exc:
            rows.append(_failed(exc, **base, method="", bound_kind=""))
            continue
        e1 = kobayashi_exact_model(dom, z, (1, 0)).value
        e2 = kobayashi_exact_model(dom, z, (0, 1)).value
        rows.append(_ok(**base, fk_e1=u1.value, fk_e2=u2.value, ratio=u1.value / u2.value,
                        exact_e1=e1, exact_e2=e2, exact_ratio=e1 / e2,
                        method=u1.method, bound_kind="upper"))
    return rows


def _run_quotient_scan(cfg: ExperimentConfig) -> list[dict]:
    """quotient_upper along the inward normal ray at a boundary point.

    parameters: ``direction`` ((0.6, 0.8), a radial direction whose boundary point is
    strongly pseudoconvex on Egg(1, 2)), ``eps`` (0.2, 0.1, 0.05, 0.02).
    """
    dom = cfg.domain
    u = np.asarray(cfg.param("direction", (0.6, 0.8)), complex)
    if u.size != dom.n:
        raise ConfigError("direction must have the domain's dimension")
    u = u / np.linalg.norm(u)
    P = float(radial_boundary(dom, u)) * u
    rows = []
    for eps in [float(e) for e in cfg.param("eps", (0.2, 0.1, 0.05, 0.02))]:
        z = normal_ray_point(dom, P, eps)
        est = quotient_upper(dom, z, cfg.budget)
        rows.append(_ok(eps=eps, **_point_columns("z", z), c_lower=est.c_lower, k_upper=est.k_upper,
                        m_lower=est.m_lower, m_upper=est.m_upper,
                        method="diagonal and linear candidate maps", bound_kind="interval"))
    return rows


def _random_chain(domain: DomainSpec, rng, legs: int, budget: OptimizerBudget, radius: float):
    pts = [_random_point(domain, rng, radius) for _ in range(legs + 1)]
    out = [one_disc_distance_upper(domain, pts[i], pts[i + 1], budget, fast=True) for i in range(legs)]
    return ChainPath(pts, out)


def _run_chain_demo(cfg: ExperimentConfig) -> list[dict]:
    """Seeded random chains and their shortened forms.

    parameters: ``instances`` (1), ``legs`` (4), ``radius`` (0.5: waypoint radius).
    """
    dom = cfg.domain
    rng = np.random.default_rng(cfg.seed)
    seeds = _seeds(cfg.seed, int(cfg.param("instances", 1)))
    rows = []
    for i, s in enumerate(seeds):
        b = cfg.budget.with_(seed=s)
        chain = _random_chain(dom, rng, int(cfg.param("legs", 4)), b, float(cfg.param("radius", 0.5)))
        P, Q = chain.waypoints[0], chain.waypoints[-1]
        ref = ball_distance(P, Q) if dom.kind == "ball" else None
        base = {"instance": i, **_point_columns("p", P), **_point_columns("q", Q), "reference": ref}
        rows.append(_ok(**base, stage="initial", legs=len(chain.legs), total=chain.total,
                        method="one-disc legs through random waypoints", bound_kind="upper"))
        short = shorten_chain(dom, chain, budget=b)
        rows.append(_ok(**base, stage="shortened", legs=len(short.legs), total=short.total,
                        merges_accepted=short.report["accepted"], merges_rejected=short.report["rejected"],
                        method="adjacent-leg merging", bound_kind="upper"))
    return rows


def _run_dbar_scaling(cfg: ExperimentConfig) -> list[dict]:
    """Manufactured-solution residuals and the cutoff-correction scaling table.

    parameters: ``resolutions`` (128, 256, 512), ``r_values`` (0.2, 0.1, 0.05, 0.025),
    ``psi`` ("z+z^2" or "z"), ``angle`` (pi/2: the rotation mu), ``cells`` (128).
    """
    rows = []
    for n in [int(v) for v in cfg.param("resolutions", (128, 256, 512))]:
        h, o = dbar.centered_grid(0j, 1.0, n)
        z = dbar.grid_points(n, h, o)
        tau = dbar.GridField(dbar.bump_dbar(z), h, o)
        u = dbar.cauchy_solve(tau)
        rows.append(_ok(table="residual", resolution=n, residual=dbar.relative_residual(u, tau),
                        recovery_error=float(np.max(np.abs(u.values - dbar.bump(z)))),
                        method="FFT Cauchy transform", bound_kind="measured"))
    name = cfg.param("psi", "z+z^2")
    if name not in PSI:
        raise ConfigError(f"psi must be one of {sorted(PSI)}")
    mu = complex(np.exp(1j * float(cfg.param("angle", math.pi / 2))))
    table = dbar.correction_scaling_experiment(PSI[name], mu, cfg.param("r_values", (0.2, 0.1, 0.05, 0.025)),
                                               cells=int(cfg.param("cells", 128)))
    slope = table.slope if np.isfinite(table.slope) else None
    for row in table.rows():
        rows.append(_ok(table="scaling", psi=name, **row, slope=slope,
                        method="FFT Cauchy transform", bound_kind="measured"))
    return rows


def _run_stability_sweep(cfg: ExperimentConfig) -> list[dict]:
    """quotient_upper at fixed points of StretchedBall(N_j) with N_j -> N.

    parameters: ``offsets`` (1, 1/2, ..., 1/32, 0), ``points`` ([(0, 0), (0.3, 0.1), (0.5, -0.1j)]).
    """
    N = cfg.domain.N
    offsets = [float(v) for v in cfg.param("offsets", (1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.0))]
    points = [np.asarray(p, complex) for p in cfg.param("points", ((0, 0), (0.3, 0.1), (0.5, -0.1j)))]
    limit = stretched_ball(N)
    for p in points:
        if not contains(limit, p) or boundary_distance(limit, p) < 0.05:
            raise ConfigError("stability points must lie in a compact subset of the limit domain")
    rows = []
    for off in offsets:
        dom = stretched_ball(N + off)
        for i, p in enumerate(points):
            est = quotient_upper(dom, p, cfg.budget)
            rows.append(_ok(N_j=N + off, N=N, point=i, **_point_columns("z", p), c_lower=est.c_lower,
                            k_upper=est.k_upper, m_upper=est.m_upper,
                            method="stretched-ball pullback of ball automorphisms", bound_kind="upper"))
    return rows


_RUNNERS = {
    "ball-validation": _run_ball_validation,
    "egg-report": _run_egg_report,
    "lempert-sweep": _run_lempert_sweep,
    "anisotropy": _run_anisotropy,
    "quotient-scan": _run_quotient_scan,
    "chain-demo": _run_chain_demo,
    "dbar-scaling": _run_dbar_scaling,
    "stability-sweep": _run_stability_sweep,
}


def _clean(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError("rows must not contain NaN or inf")
        return value
    if value is None or isinstance(value, str):
        return value
    raise TypeError(f"unsupported column value {value!r}")


def run_experiment(config: ExperimentConfig) -> list[dict]:
    rows = _RUNNERS[config.experiment](config)
    out = []
    for row in rows:
        row = {k: _clean(v) for k, v in row.items()}
        lo, up = row.get("lower"), row.get("upper")
        if lo is not None and up is not None and lo > up * (1 + 1e-12):
            raise AssertionError(f"lower bound exceeds upper bound in {row}")
        out.append(row)
    return out


def failed_rows(rows) -> list[dict]:
    return [r for r in rows if r.get("status") != "ok"]


def _columns(rows) -> list[str]:
    cols = []
    seen = set()
    for r in rows:
        for k in r:
            if k not in seen:
                seen.add(k)
                cols.append(k)
    return cols


def format_report(rows, fmt: str = "csv") -> str:
    """Render rows as RFC-4180 CSV (CRLF line ends, header row) or a JSON array."""
    if not rows:
        raise ValueError("no rows to report")
    if fmt == "json":
        return json.dumps(rows, sort_keys=True, indent=2, allow_nan=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    cols = _columns(rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_csv_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return v


def emit_report(rows, config: ExperimentConfig) -> Path:
    """Write the report to ``config.out`` (UTF-8) and return the path."""
    if config.out is None:
        raise ValueError("the config has no output path")
    text = format_report(rows, config.format)
    config.out.parent.mkdir(parents=True, exist_ok=True)
    with config.out.open("w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return config.out


__all__ = ["EXPERIMENTS", "FORMATS", "ConfigError", "ExperimentConfig", "run_experiment", "failed_rows",
           "format_report", "emit_report"]
