"""Optimizer budget shared by the metric, invariant, and chain searches."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace

METHODS = ("slsqp", "nelder-mead")


@dataclass(frozen=True)
class OptimizerBudget:
    """Search effort for one bound.

    ``method`` selects the disc optimizer: ``"slsqp"`` (sampled boundary constraints
    with analytic Jacobians) or ``"nelder-mead"`` (penalised, derivative free, weight
    ramped x10 per restart).  Restarts are seeded from ``seed``.
    """

    max_iterations: int = 400
    restarts: int = 8
    degree: int = 12
    seed: int = 0
    method: str = "slsqp"
    slack: float = 1e-4

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown optimizer method {self.method!r}")
        if self.degree < 1 or self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("budget fields must be positive")
        if self.slack <= 0:
            raise ValueError("slack must be positive")

    def with_(self, **kw) -> "OptimizerBudget":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data) -> "OptimizerBudget":
        if data is None:
            return cls()
        if isinstance(data, str):
            data = json.loads(data)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown budget fields: {sorted(unknown)}")
        return cls(**data)


DEFAULT_BUDGET = OptimizerBudget()
