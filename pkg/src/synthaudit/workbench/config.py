"""Flat key=value experiment configs and the spec-driven entry points.

A config file is plain text: one ``key = value`` per line, ``#`` starts a
comment, no sections, no quoting. Every key maps to one ExperimentSpec
field; unknown keys are rejected so typos fail loudly. Lists (``models``,
``eps_grid``, ``dims``) are comma-separated; ``inf`` is a valid float.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from ..synthesis.dp import DpBudget
from . import experiments
from .report import RunReport


@dataclass
class ExperimentSpec:
    """Everything a run needs: dataset, model + budget, attack knobs,
    output directory, master seed."""

    # dataset
    dataset: str = "censuslite"       # censuslite | gauss
    dim: int = 2                      # gauss only
    n_rows: int = 0                   # 0: the dataset's standard size
    strategy: str = "uniform"         # discretization: uniform | quantile
    n_bins: int = 200

    # generator under audit
    model: str = "independent"        # independent | privbayes_lite | random | oracle
    eps: float = math.inf             # DP budget; inf disables noise
    metric: str = "hamming"           # hamming | euclidean
    sf_tau: float | None = None       # provider-side filters, None: off
    of_percentile: float | None = None
    quota: int | None = None          # provider call allowance, None: unlimited

    # attack
    attack: str = "reconsyn"          # reconsyn | any_record | membership | attribute
    rounds: int = 1000
    d_sra: int = 2
    n_targets: int = 100
    column: str = "occupation"
    n_train: int = 0                  # remote attacks only; local runs derive them
    n_out: int = 0

    # sweep grid
    models: tuple[str, ...] = ("independent", "privbayes_lite")
    eps_grid: tuple[float, ...] = (0.1, 1.0, math.inf)
    n_seeds: int = 5

    # reproduction sizes
    n_reps: int = 1000
    n_datasets: int = 100_000
    dims: tuple[int, ...] = (2, 3)
    time_budget: float = 600.0

    # provenance and output
    seed: int = 0
    out: str = "runs"


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(p.strip()) for p in text.split(","))


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(p.strip()) for p in text.split(","))


def _strs(text: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in text.split(","))


_PARSERS = {
    "dataset": str, "strategy": str, "model": str, "metric": str,
    "attack": str, "column": str, "out": str,
    "dim": int, "n_rows": int, "n_bins": int, "rounds": int, "d_sra": int,
    "n_targets": int, "n_train": int, "n_out": int, "n_seeds": int,
    "n_reps": int, "n_datasets": int, "quota": int, "seed": int,
    "eps": float, "sf_tau": float, "of_percentile": float,
    "time_budget": float,
    "models": _strs, "eps_grid": _floats, "dims": _ints,
}


def parse_config(path) -> dict:
    """Read a flat key=value file into typed values; unknown keys raise."""
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(
                    f"{path}:{line_no}: expected 'key = value', got {raw!r}")
            key = key.strip()
            if key not in _PARSERS:
                raise ValueError(f"{path}:{line_no}: unknown config key {key!r}")
            try:
                values[key] = _PARSERS[key](value.strip())
            except ValueError:
                raise ValueError(
                    f"{path}:{line_no}: bad value {value.strip()!r} for {key!r}")
    return values


def spec_from(values: dict) -> ExperimentSpec:
    return ExperimentSpec(**values)


def load_spec(path=None, **overrides) -> ExperimentSpec:
    """Config file (if any) plus keyword overrides, CLI flags last."""
    spec = spec_from(parse_config(path)) if path else ExperimentSpec()
    live = {k: v for k, v in overrides.items() if v is not None}
    return dataclasses.replace(spec, **live) if live else spec


def budget(eps: float) -> DpBudget | None:
    return None if math.isinf(eps) else DpBudget(eps)


def run_attack(spec: ExperimentSpec) -> RunReport:
    """Dispatch one attack run per the spec; raises CheckFailure when the
    run's own assertions fail."""
    dp = budget(spec.eps)
    if spec.attack == "membership":
        return experiments.membership_experiment(
            spec.model, n_each=spec.n_targets, seed=spec.seed, dp=dp)
    if spec.attack == "attribute":
        return experiments.attribute_experiment(
            spec.model, n_targets=spec.n_targets, column=spec.column,
            seed=spec.seed, dp=dp)
    if spec.attack == "reconsyn":
        if spec.dataset == "gauss":
            return experiments.gauss_attack_experiment(
                rounds=spec.rounds, seed=spec.seed, n_bins=spec.n_bins)
        return experiments.census_attack_experiment(
            spec.model, dp=dp, rounds=spec.rounds, d_sra=spec.d_sra,
            seed=spec.seed)
    if spec.attack == "any_record":
        return experiments.any_record_experiment(
            spec.model, rounds=spec.rounds, seed=spec.seed)
    raise ValueError(f"unknown attack {spec.attack!r}")


def dp_sweep(spec: ExperimentSpec) -> RunReport:
    return experiments.dp_sweep(
        models=spec.models, eps_grid=spec.eps_grid, n_seeds=spec.n_seeds,
        rounds=spec.rounds, seed=spec.seed)
