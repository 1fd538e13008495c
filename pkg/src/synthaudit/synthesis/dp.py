"""Differential-privacy budget carried by fitted generators."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class DpBudget:
    eps: float
    delta: float | None = None   # None: resolved to 1/n at fit time

    def __post_init__(self):
        if not (self.eps > 0.0):
            raise ValueError("eps must be positive (inf allowed)")
        if self.delta is not None and not (0.0 <= self.delta < 1.0):
            raise ValueError("delta must be in [0, 1)")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.eps)

    def resolved(self, n: int) -> "DpBudget":
        if self.delta is not None:
            return self
        return DpBudget(self.eps, 1.0 / n)
