"""Residual statistics and their JSON serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass
class ResidualReport:
    """Max/mean of a residual over interior grid points."""

    name: str
    grid: tuple
    max: float
    mean: float
    order_vs_coarser: Optional[float] = None

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "grid": [int(self.grid[0]), int(self.grid[1])],
            "max": float(self.max),
            "mean": float(self.mean),
        }
        if self.order_vs_coarser is not None:
            d["order_vs_coarser"] = float(self.order_vs_coarser)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def report_from_values(name: str, grid, values) -> ResidualReport:
    """Build a report from an array of absolute residual values."""
    values = np.abs(np.asarray(values, dtype=float))
    if values.size == 0:
        return ResidualReport(name, tuple(grid), 0.0, 0.0)
    return ResidualReport(name, tuple(grid), float(values.max()), float(values.mean()))


# residuals below this are treated as exactly converged when estimating orders
CONVERGED_FLOOR = 1e-12


def convergence_order(coarse: ResidualReport, fine: ResidualReport) -> Optional[float]:
    """log2 ratio of max residuals under one grid refinement.

    Returns None when both residuals sit at the floor (already exact), so
    order assertions can treat that as a pass.
    """
    if fine.max <= CONVERGED_FLOOR and coarse.max <= CONVERGED_FLOOR:
        return None
    if fine.max <= CONVERGED_FLOOR:
        return math.inf
    return math.log2(coarse.max / fine.max)


def attach_order(coarse: ResidualReport, fine: ResidualReport) -> ResidualReport:
    fine.order_vs_coarser = convergence_order(coarse, fine)
    return fine


def order_passes(order: Optional[float], threshold: float = 1.9) -> bool:
    return order is None or order >= threshold
