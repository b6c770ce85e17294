"""Command line entry point: ``kobmetric <experiment> [options]``.

Exit codes: 0 on success, 2 on a configuration error, 3 when any sub-run of the
sweep failed (the report is still written).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .budget import OptimizerBudget
from .harness import EXPERIMENTS, FORMATS, ConfigError, ExperimentConfig, emit_report, failed_rows, format_report, \
    run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_FAILED = 0, 2, 3


def _json_arg(text: str | None):
    """Inline JSON, or the path of a JSON file."""
    if text is None:
        return None
    if text.lstrip().startswith("{"):
        return json.loads(text)
    return json.loads(Path(text).read_text(encoding="utf-8"))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kobmetric", description="Run an invariant-metric experiment and "
                                                              "write a CSV or JSON report.")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--domain", help="domain descriptor: inline JSON or a JSON file (default depends on experiment)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", help="optimizer budget: inline JSON or a JSON file, "
                                    "fields max_iterations, restarts, degree, seed, method, slack")
    p.add_argument("--params", help="experiment parameters: inline JSON or a JSON file")
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--format", choices=FORMATS, default="csv")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        domain = _json_arg(args.domain)
        budget = OptimizerBudget.from_json(_json_arg(args.budget))
        params = _json_arg(args.params) or {}
        cfg = ExperimentConfig(args.experiment, domain=domain, budget=budget, seed=args.seed,
                               out=args.out, format=args.format, parameters=params)
    except (ValueError, TypeError, OSError) as exc:
        print(f"kobmetric: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rows = run_experiment(cfg)
    except ConfigError as exc:
        print(f"kobmetric: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.out is None:
        sys.stdout.write(format_report(rows, cfg.format))
    else:
        try:
            emit_report(rows, cfg)
        except OSError as exc:
            print(f"kobmetric: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    bad = failed_rows(rows)
    if bad:
        print(f"kobmetric: {len(bad)} of {len(rows)} sub-runs failed", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
