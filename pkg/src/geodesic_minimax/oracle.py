"""Brute-force grid minimax: the independent oracle for solver results.

For a grid pair the oracle computes, exactly on the grid,

    maxmin = max_i min_j f(x_i, y_j)        minmax = min_j max_i f(x_i, y_j)

Weak duality ``maxmin <= minmax`` holds on every grid; under the minimax
hypotheses the gap closes as the grids refine.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import GridTooLargeError
from .geometry import GeodesicSpace
from .ppa import IterateTrace
from .problems import SaddleProblem
from .spaces import EuclideanSpace, GridSpec, MetricTree, PoincareBall

DEFAULT_MAX_EVALS = 10**8


def max_evals() -> int:
    """The evaluation cap, overridable through ``GM_MAX_EVALS``."""
    raw = os.environ.get("GM_MAX_EVALS")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_EVALS
    try:
        cap = int(float(raw))
    except ValueError:
        raise GridTooLargeError(f"GM_MAX_EVALS must be a number, got {raw!r}") from None
    return max(cap, 0)


def is_bounded(space: GeodesicSpace) -> bool:
    if isinstance(space, EuclideanSpace):
        return space.constraint is not None
    return isinstance(space, MetricTree)


def grid_size_bound(space: GeodesicSpace, spec: GridSpec) -> int:
    """Upper bound on the number of grid points, computed without enumerating them."""
    res = spec.resolution
    if isinstance(space, EuclideanSpace):
        if space.constraint == "simplex":
            return math.comb(res - 1 + space.dim - 1, space.dim - 1)
        return res ** space.dim
    if isinstance(space, PoincareBall):
        if space.dim == 1:
            return res
        if space.dim == 2:
            return 1 + (res - 1) * res
        return res ** space.dim
    if isinstance(space, MetricTree):
        return res * len(space.edges)
    return res


@dataclass
class MinimaxReport:
    maxmin: float
    minmax: float
    maxmin_point: tuple
    minmax_point: tuple
    step_x: float
    step_y: float
    n_x: int
    n_y: int
    resolution: dict = field(default_factory=dict)
    #: "exact grid" or "boxed approximation" (an unbounded space was truncated)
    approximation: str = "exact grid"

    @property
    def gap(self) -> float:
        return self.minmax - self.maxmin

    @property
    def step(self) -> float:
        return max(self.step_x, self.step_y)

    @property
    def value(self) -> float:
        return 0.5 * (self.maxmin + self.minmax)

    @property
    def saddle_candidate(self) -> tuple:
        """x from the maxmin argument, y from the minmax argument."""
        return (self.maxmin_point[0], self.minmax_point[1])


def _as_spec(spec) -> GridSpec:
    if isinstance(spec, GridSpec):
        return spec
    if isinstance(spec, int):
        return GridSpec(spec)
    return GridSpec(**spec)


def evaluate_grid(problem: SaddleProblem, xs: Sequence, ys: Sequence) -> np.ndarray:
    values = np.empty((len(xs), len(ys)))
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            values[i, j] = problem(x, y)
    return values


def grid_minimax(problem: SaddleProblem, grid_x, grid_y=None, *, cap: int | None = None) -> MinimaxReport:
    """Exact grid maxmin/minmax; argpoints break ties by first enumeration index."""
    gx = _as_spec(grid_x)
    gy = gx if grid_y is None else _as_spec(grid_y)
    cap = max_evals() if cap is None else cap
    X, Y = problem.space_x, problem.space_y
    bound = grid_size_bound(X, gx) * grid_size_bound(Y, gy)
    if bound > cap:
        raise GridTooLargeError(f"grid needs up to {bound} evaluations, cap is {cap}")
    xs, step_x = X.grid(gx)
    ys, step_y = Y.grid(gy)
    if len(xs) * len(ys) > cap:
        raise GridTooLargeError(f"grid needs {len(xs) * len(ys)} evaluations, cap is {cap}")
    F = evaluate_grid(problem, xs, ys)
    row_min = F.min(axis=1)
    i = int(np.argmax(row_min))
    j_i = int(np.argmin(F[i]))
    col_max = F.max(axis=0)
    j = int(np.argmin(col_max))
    i_j = int(np.argmax(F[:, j]))
    boxed = not (is_bounded(X) and is_bounded(Y))
    return MinimaxReport(
        maxmin=float(row_min[i]), minmax=float(col_max[j]),
        maxmin_point=(xs[i], ys[j_i]), minmax_point=(xs[i_j], ys[j]),
        step_x=float(step_x), step_y=float(step_y), n_x=len(xs), n_y=len(ys),
        resolution={"x": gx.resolution, "y": gy.resolution},
        approximation="boxed approximation" if boxed else "exact grid",
    )


def estimate_lipschitz(problem: SaddleProblem, grid_x, grid_y=None, *, n: int = 2000,
                       seed: int = 0) -> float:
    """Sampled Lipschitz bound of ``f`` along product geodesics inside the grid region.

    Pairs are a random grid point and a point a random fraction (down to 1e-4)
    of the way toward another grid point, so both long and short range slopes
    are seen.  A sample can only underestimate the true constant.
    """
    gx = _as_spec(grid_x)
    gy = gx if grid_y is None else _as_spec(grid_y)
    xs, _ = problem.space_x.grid(gx)
    ys, _ = problem.space_y.grid(gy)
    prod = problem.product
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(n):
        z = (xs[rng.integers(len(xs))], ys[rng.integers(len(ys))])
        w = (xs[rng.integers(len(xs))], ys[rng.integers(len(ys))])
        t = 10.0 ** rng.uniform(-4.0, 0.0)
        w = prod.geodesic_point(z, w, t)
        dist = prod.distance(z, w)
        if dist > 0.0:
            best = max(best, abs(problem(*z) - problem(*w)) / dist)
    return best


@dataclass
class SionGapStudy:
    resolutions: list[int]
    gaps: list[float]
    steps: list[float]
    lipschitz: float
    reports: list[MinimaxReport] = field(default_factory=list)
    noise: float = 1e-12

    @property
    def bounds(self) -> list[float]:
        """The covering bound ``4 L step`` at each resolution."""
        return [4.0 * self.lipschitz * s for s in self.steps]

    @property
    def within_bounds(self) -> bool:
        return all(g <= b + self.noise for g, b in zip(self.gaps, self.bounds))

    @property
    def shrinking(self) -> bool:
        """Final gap no larger than the first (within noise): a trend, not strict monotonicity."""
        return bool(self.gaps) and self.gaps[-1] <= self.gaps[0] + self.noise

    @property
    def weak_duality(self) -> bool:
        return all(g >= -self.noise for g in self.gaps)


def sion_gap_study(problem: SaddleProblem, resolutions: Sequence[int] = (11, 51, 201), *,
                   radius: float = 1.0, cap: int | None = None, lipschitz_samples: int = 2000,
                   seed: int = 0) -> SionGapStudy:
    """Gap at each resolution plus the sampled Lipschitz constant on the finest grid region."""
    reports = [grid_minimax(problem, GridSpec(r, radius=radius), cap=cap) for r in resolutions]
    L = estimate_lipschitz(problem, GridSpec(max(resolutions), radius=radius),
                           n=lipschitz_samples, seed=seed)
    return SionGapStudy(list(resolutions), [r.gap for r in reports], [r.step for r in reports], L, reports)


@dataclass
class OracleComparison:
    distance: float
    value_difference: float
    grid_step: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.distance <= self.tolerance


def oracle_vs_solver(problem: SaddleProblem, report: MinimaxReport, trace: IterateTrace, *,
                     solver_tol: float = 1e-6) -> OracleComparison:
    """Distance from the trace's final iterate to the grid saddle candidate, and the value gap."""
    final = trace.final
    cand = report.saddle_candidate
    dist = problem.product.distance(final, cand)
    diff = abs(problem(*final) - report.value)
    return OracleComparison(dist, diff, report.step, report.step + solver_tol)


def report_to_json(problem: SaddleProblem, report: MinimaxReport) -> dict:
    X, Y = problem.space_x, problem.space_y

    def pair(p):
        return {"x": X.point_to_json(p[0]), "y": Y.point_to_json(p[1])}

    return {
        "problem": problem.name,
        "maxmin": report.maxmin,
        "minmax": report.minmax,
        "gap": report.gap,
        "maxmin_point": pair(report.maxmin_point),
        "minmax_point": pair(report.minmax_point),
        "step_x": report.step_x,
        "step_y": report.step_y,
        "n_x": report.n_x,
        "n_y": report.n_y,
        "resolution": report.resolution,
        "approximation": report.approximation,
    }
