"""Compare simulated and closed-form distance distributions."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import DistanceDistribution, distribution
from .constellation import ConstellationSpec, ObservationPoint
from .montecarlo import EmpiricalCdf

DEFAULT_THRESHOLD = 0.01
REFERENCE_TRIALS = 100_000
GRID_STEP_KM = 1.0


def scaled_threshold(trials: int, base: float = DEFAULT_THRESHOLD,
                     reference: int = REFERENCE_TRIALS) -> float:
    """KS threshold for ``trials``, scaled as ``1/sqrt(trials)`` from ``base`` at ``reference``."""
    return base * math.sqrt(reference / trials)


@dataclass(frozen=True)
class KsReport:
    statistic: float
    threshold: float
    trials: int
    grid: np.ndarray
    argmax_km: float

    @property
    def passed(self) -> bool:
        return self.statistic <= self.threshold


def ks_statistic(emp: EmpiricalCdf, dist: DistanceDistribution,
                 grid_step: float = GRID_STEP_KM) -> tuple[float, float, np.ndarray]:
    """Sup-distance between ``emp`` and ``dist`` over jump points and a regular grid.

    Returns ``(statistic, location, grid)``.
    """
    grid = np.arange(0.0, dist.top + grid_step, grid_step)
    jumps = np.unique(emp.distances)
    f_jump = dist.cdf(jumps)
    # both one-sided limits of the step function at every jump
    diffs_jump = np.maximum(np.abs(emp(jumps) - f_jump), np.abs(emp.left(jumps) - f_jump))
    diffs_grid = np.abs(emp(grid) - dist.cdf(grid))
    stat_grid = float(diffs_grid.max()) if grid.size else 0.0
    stat_jump = float(diffs_jump.max()) if jumps.size else 0.0
    if stat_jump >= stat_grid and jumps.size:
        return stat_jump, float(jumps[np.argmax(diffs_jump)]), grid
    return stat_grid, float(grid[np.argmax(diffs_grid)]), grid


def ks_compare(emp: EmpiricalCdf, spec: ConstellationSpec, obs: ObservationPoint,
               threshold: float = DEFAULT_THRESHOLD) -> KsReport:
    if emp.n_total == 0:
        raise ValueError("empirical distribution is empty")
    stat, where, grid = ks_statistic(emp, distribution(spec, obs))
    return KsReport(stat, threshold, emp.n_total, grid, where)


@dataclass(frozen=True)
class VisibilityCheck:
    expected: float
    observed: float
    sigma: float
    n_sigma: float = 4.0

    @property
    def passed(self) -> bool:
        return abs(self.observed - self.expected) <= self.n_sigma * self.sigma


def visibility_check(emp: EmpiricalCdf, spec: ConstellationSpec, obs: ObservationPoint,
                     n_sigma: float = 4.0) -> VisibilityCheck:
    """Binomial check of the no-visible-point fraction against ``1 - visibility_probability``."""
    p = 1.0 - distribution(spec, obs).visibility_probability
    sigma = math.sqrt(max(p * (1.0 - p), 0.0) / emp.n_total)
    return VisibilityCheck(p, emp.infinite_fraction, sigma, n_sigma)


def sweep_report(spec: ConstellationSpec, obs: ObservationPoint, d_grid) -> tuple[list[str], list[tuple]]:
    """Table of ``(d_km, cdf, ccdf_1, ..., ccdf_n)`` rows over ``d_grid``."""
    d = np.asarray(d_grid, dtype=float)
    if d.ndim != 1:
        raise ValueError("grid must be one-dimensional")
    if np.any(np.diff(d) < 0):
        raise ValueError("grid must be sorted ascending")
    dist = distribution(spec, obs)
    per_shell = dist.ccdf_by_shell(d)
    cdf = 1.0 - np.prod(per_shell, axis=0)
    header = ["d_km", "cdf"] + [f"ccdf_{k}" for k in range(1, len(spec) + 1)]
    rows = [(float(d[j]), float(cdf[j]), *map(float, per_shell[:, j])) for j in range(d.size)]
    return header, rows


def grid_distance(first: DistanceDistribution, second: DistanceDistribution, grid) -> float:
    """Largest ``|F_first - F_second|`` over ``grid``."""
    grid = np.asarray(grid, dtype=float)
    return float(np.max(np.abs(first.cdf(grid) - second.cdf(grid)), initial=0.0))
