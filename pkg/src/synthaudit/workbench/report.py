"""Run reports: one JSON-serializable record per experiment or
reproduction, plus a tidy-CSV flattening for plotting.

A report's canonical bytes cover everything except wall-clock timings, so
re-running with the same inputs and master seed produces identical bytes
even though the clock moved.
"""
from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field


class CheckFailure(AssertionError):
    """One or more hard checks of a reproduction failed."""

    def __init__(self, name: str, failed: list[str], report: "RunReport"):
        super().__init__(f"{name}: failed checks: {', '.join(failed)}")
        self.failed = failed
        self.report = report


def _jsonable(value):
    # canonical floats survive a JSON round trip unchanged; numpy scalars
    # and tuples do not, so normalize containers up front
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value
    if hasattr(value, "item"):
        return _jsonable(value.item())
    return str(value)


@dataclass
class RunReport:
    name: str
    seed: int
    spec: dict
    results: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def config_hash(self) -> str:
        blob = json.dumps(_jsonable(self.spec), sort_keys=True,
                          separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def canonical_bytes(self) -> bytes:
        body = {
            "name": self.name,
            "seed": self.seed,
            "config_hash": self.config_hash,
            "spec": _jsonable(self.spec),
            "results": _jsonable(self.results),
            "checks": _jsonable(self.checks),
        }
        return json.dumps(body, sort_keys=True, separators=(",", ":")).encode()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "seed": self.seed,
            "config_hash": self.config_hash,
            "spec": _jsonable(self.spec),
            "results": _jsonable(self.results),
            "checks": _jsonable(self.checks),
            "timings": _jsonable(self.timings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    def require(self) -> "RunReport":
        """Raise unless every recorded check passed."""
        failed = [k for k, ok in self.checks.items() if not ok]
        if failed:
            raise CheckFailure(self.name, failed, self)
        return self


def report_from_dict(d: dict) -> RunReport:
    """Rebuild a report from its JSON form (config_hash is recomputed)."""
    rep = RunReport(d["name"], d["seed"], d.get("spec", {}))
    rep.results = d.get("results", {})
    rep.checks = d.get("checks", {})
    rep.timings = d.get("timings", {})
    return rep


def _flatten(prefix: str, value, rows: list):
    if isinstance(value, dict):
        for k in sorted(value, key=str):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], rows)
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, value))


def tidy_rows(report: RunReport) -> list[dict]:
    """One row per scalar measurement, ready for any plotting tool."""
    rows: list = []
    _flatten("", _jsonable(report.results), rows)
    _flatten("", {"check": _jsonable(report.checks)}, rows)
    return [
        {"report": report.name, "seed": report.seed, "key": k, "value": v}
        for k, v in rows
    ]


def write_tidy_csv(reports, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["report", "seed", "key", "value"])
        w.writeheader()
        for rep in reports:
            for row in tidy_rows(rep):
                w.writerow(row)
