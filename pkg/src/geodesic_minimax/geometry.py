"""Geodesic-space interface, l2 products and CAT(0) diagnostics.

Every backend in :mod:`geodesic_minimax.spaces` subclasses
:class:`GeodesicSpace`.  The module-level functions validate their inputs;
the space methods themselves do not, so hot loops can call them directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .errors import (
    EmptyTailError,
    InvalidPointError,
    ParameterOutOfRangeError,
    TriangleInequalityError,
)
from .linesearch import minimize_convex

EUCLIDEAN_TOL = 1e-9
CURVED_TOL = 1e-7


@dataclass(frozen=True)
class GeodesicLine:
    """Unit-speed geodesic ``s -> point(s)`` defined for ``lo <= s <= hi``."""

    point: Callable[[float], Any]
    lo: float
    hi: float


class GeodesicSpace:
    """Base class for uniquely geodesic metric spaces."""

    kind = "abstract"
    #: True when ``frame_line`` enumerates segments covering the whole space
    #: (finite trees), so one pass over them minimises a convex function.
    exhaustive_lines = False
    #: Distances are smooth away from the diagonal (False for trees).
    smooth = True
    #: Default check tolerance for this backend.
    tolerance = EUCLIDEAN_TOL
    unit_dim = 0

    def check(self, p):
        """Return the canonical form of ``p`` or raise :class:`InvalidPointError`."""
        raise NotImplementedError

    def contains(self, p) -> bool:
        try:
            self.check(p)
        except InvalidPointError:
            return False
        return True

    def distance(self, p, q) -> float:
        raise NotImplementedError

    def geodesic_point(self, p, q, t: float):
        raise NotImplementedError

    @property
    def frame_size(self) -> int:
        raise NotImplementedError

    def frame_line(self, p, i: int) -> GeodesicLine:
        raise NotImplementedError

    def line_toward(self, p, q) -> GeodesicLine:
        """Geodesic through ``p`` (at s=0) heading to ``q`` (at s=d(p,q))."""
        raise NotImplementedError

    def from_unit(self, u: np.ndarray, radius: float = 1.0):
        """Map a point of the unit cube ``[0,1]**unit_dim`` into the space."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, radius: float = 1.0):
        return self.from_unit(rng.random(self.unit_dim), radius)

    def ray(self, p, u: np.ndarray, r: float):
        """Point at distance ``r`` from ``p`` in the direction coded by ``u``.

        Bounded spaces stop at their boundary, so the distance may fall short.
        """
        raise NotImplementedError

    def grid(self, spec) -> tuple[list, float]:
        """Enumerate a sampling lattice; returns ``(points, step)``."""
        raise NotImplementedError

    def flatten(self, p) -> list[float]:
        raise NotImplementedError

    def coord_names(self, prefix: str) -> list[str]:
        raise NotImplementedError

    def unflatten(self, values: Sequence[float]):
        raise NotImplementedError

    def point_to_json(self, p):
        raise NotImplementedError

    def point_from_json(self, obj):
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


class ProductSpace(GeodesicSpace):
    """The product ``X x Y`` with the l2 metric (or the l-infinity metric).

    Points are pairs ``(x, y)``; geodesics act componentwise.
    """

    kind = "product"

    def __init__(self, left: GeodesicSpace, right: GeodesicSpace, metric: str = "ell2"):
        if metric not in ("ell2", "ell_inf"):
            raise ValueError(f"unknown product metric {metric!r}")
        self.left = left
        self.right = right
        self.metric = metric
        self.smooth = left.smooth and right.smooth
        self.tolerance = max(left.tolerance, right.tolerance)
        self.unit_dim = left.unit_dim + right.unit_dim

    def with_metric(self, metric: str) -> "ProductSpace":
        return ProductSpace(self.left, self.right, metric)

    def check(self, p):
        try:
            x, y = p
        except (TypeError, ValueError):
            raise InvalidPointError("product point must be a pair (x, y)") from None
        return (self.left.check(x), self.right.check(y))

    def distance(self, p, q) -> float:
        dx = self.left.distance(p[0], q[0])
        dy = self.right.distance(p[1], q[1])
        if self.metric == "ell2":
            return math.hypot(dx, dy)
        return max(dx, dy)

    def geodesic_point(self, p, q, t: float):
        return (self.left.geodesic_point(p[0], q[0], t), self.right.geodesic_point(p[1], q[1], t))

    def from_unit(self, u, radius: float = 1.0):
        k = self.left.unit_dim
        return (self.left.from_unit(u[:k], radius), self.right.from_unit(u[k:], radius))

    def flatten(self, p) -> list[float]:
        return self.left.flatten(p[0]) + self.right.flatten(p[1])

    def coord_names(self, prefix: str = "") -> list[str]:
        return self.left.coord_names(prefix + "x") + self.right.coord_names(prefix + "y")

    def unflatten(self, values):
        k = len(self.left.coord_names("x"))
        return (self.left.unflatten(values[:k]), self.right.unflatten(values[k:]))

    def point_to_json(self, p):
        return {"x": self.left.point_to_json(p[0]), "y": self.right.point_to_json(p[1])}

    def point_from_json(self, obj):
        if isinstance(obj, dict):
            try:
                x, y = obj["x"], obj["y"]
            except KeyError:
                raise InvalidPointError("product point needs 'x' and 'y'") from None
        else:
            x, y = obj
        return self.check((self.left.point_from_json(x), self.right.point_from_json(y)))

    def describe(self) -> dict:
        return {"kind": "product", "metric": self.metric,
                "left": self.left.describe(), "right": self.right.describe()}


# -- validated operations ---------------------------------------------------


def distance(space: GeodesicSpace, p, q) -> float:
    return space.distance(space.check(p), space.check(q))


def geodesic_point(space: GeodesicSpace, p, q, t: float):
    """The convex combination ``(1-t) p (+) t q``."""
    if not 0.0 <= t <= 1.0:
        raise ParameterOutOfRangeError(f"geodesic parameter {t} outside [0, 1]")
    return space.geodesic_point(space.check(p), space.check(q), t)


@dataclass(frozen=True)
class ComparisonTriangle:
    x: tuple[float, float]
    y: tuple[float, float]
    z: tuple[float, float]

    def side_lengths(self) -> tuple[float, float, float]:
        """Return ``(|y-z|, |z-x|, |x-y|)``, the input order ``(a, b, c)``."""
        return (math.dist(self.y, self.z), math.dist(self.z, self.x), math.dist(self.x, self.y))


def comparison_triangle(a: float, b: float, c: float, rel_tol: float = 1e-12) -> ComparisonTriangle:
    """Euclidean triangle with ``|y-z| = a``, ``|z-x| = b``, ``|x-y| = c``.

    The longest side is placed on the horizontal axis from the origin, then
    vertex labels are restored.
    """
    sides = (float(a), float(b), float(c))
    if min(sides) < 0.0 or not all(math.isfinite(s) for s in sides):
        raise TriangleInequalityError(f"side lengths must be finite and nonnegative: {sides}")
    slack = rel_tol * max(sides)
    a, b, c = sides
    if a > b + c + slack or b > c + a + slack or c > a + b + slack:
        raise TriangleInequalityError(f"sides {sides} violate the triangle inequality")

    # rotate labels so the longest side is the (x, y) side
    k = int(np.argmax([c, a, b]))  # 0: keep, 1: a longest, 2: b longest
    rot = [(a, b, c), (b, c, a), (c, a, b)][k]
    a2, b2, c2 = rot
    if c2 == 0.0:
        p = q = r = (0.0, 0.0)
    else:
        heron = (a2 + b2 + c2) * (a2 + b2 - c2) * (b2 + c2 - a2) * (c2 + a2 - b2)
        p = (0.0, 0.0)
        q = (c2, 0.0)
        r = ((b2 * b2 + c2 * c2 - a2 * a2) / (2.0 * c2), math.sqrt(max(heron, 0.0)) / (2.0 * c2))
    # undo the relabelling: rotated (x', y', z') = (x, y, z), (y, z, x), (z, x, y)
    if k == 0:
        return ComparisonTriangle(p, q, r)
    if k == 1:
        return ComparisonTriangle(r, p, q)
    return ComparisonTriangle(q, r, p)


def check_cn_inequality(space: GeodesicSpace, x, y, z, alpha: float) -> float:
    """Signed residual of the CN inequality; nonpositive in CAT(0) spaces."""
    if not 0.0 <= alpha <= 1.0:
        raise ParameterOutOfRangeError(f"alpha {alpha} outside [0, 1]")
    x, y, z = space.check(x), space.check(y), space.check(z)
    m = space.geodesic_point(x, y, alpha)
    dxz, dyz, dxy = space.distance(x, z), space.distance(y, z), space.distance(x, y)
    rhs = (1 - alpha) * dxz**2 + alpha * dyz**2 - alpha * (1 - alpha) * dxy**2
    return space.distance(m, z) ** 2 - rhs


def check_quadrilateral_cs(space: GeodesicSpace, x1, x2, x3, x4) -> float:
    """Signed residual of the four-point Cauchy-Schwarz inequality."""
    x1, x2, x3, x4 = (space.check(p) for p in (x1, x2, x3, x4))
    d = space.distance
    lhs = 0.5 * (d(x1, x4) ** 2 + d(x2, x3) ** 2 - d(x1, x3) ** 2 - d(x2, x4) ** 2)
    return lhs - d(x1, x2) * d(x3, x4)


def project_to_segment(space: GeodesicSpace, a, b, x):
    """Metric projection of ``x`` onto the geodesic segment ``[a, b]``."""
    a, b, x = space.check(a), space.check(b), space.check(x)
    if space.distance(a, b) == 0.0:
        return a
    t = minimize_convex(lambda t: space.distance(space.geodesic_point(a, b, t), x), 0.0, 1.0)
    return space.geodesic_point(a, b, t)


def minimize_on_space(
    space: GeodesicSpace,
    h: Callable[[Any], float],
    start,
    *,
    targets: Callable[[Any], list] | None = None,
    tol: float = 1e-12,
    max_sweeps: int = 200,
    polish: bool = True,
):
    """Minimise a geodesically convex ``h`` by cyclic geodesic line searches.

    Each sweep searches along the backend's frame lines through the current
    point, plus lines toward ``targets(p)`` if given.  Trees enumerate their
    edges instead, which is exact for convex ``h`` after a single pass.
    Returns ``(point, value, sweeps)``.
    """
    polish = polish or not space.smooth
    if space.exhaustive_lines:
        best, best_h = start, h(start)
        for i in range(space.frame_size):
            line = space.frame_line(start, i)
            s = minimize_convex(lambda s: h(line.point(s)), line.lo, line.hi, polish=polish)
            cand = line.point(s)
            hc = h(cand)
            if hc < best_h:
                best, best_h = cand, hc
        return best, best_h, 1

    p, hp = start, h(start)
    single = space.frame_size == 1 and targets is None
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        p_sweep = p
        lines = [lambda p, i=i: space.frame_line(p, i) for i in range(space.frame_size)]
        if targets is not None:
            lines += [lambda p, q=q: space.line_toward(p, q) for q in targets(p)]
        for make in lines:
            line = make(p)
            if line is None or not line.hi > line.lo:
                continue
            s = minimize_convex(lambda s: h(line.point(s)), line.lo, line.hi,
                                start=0.0, polish=polish)
            cand = line.point(s)
            hc = h(cand)
            if hc <= hp:
                p, hp = cand, hc
        if single or space.distance(p_sweep, p) <= tol:
            break
    return p, hp, sweeps


@dataclass
class AsymptoticCenter:
    point: Any
    radius: float
    status: str = "ok"  # or "unbounded-tail"
    tail_diameter: float = 0.0


def asymptotic_center_estimate(
    space: GeodesicSpace,
    points: Sequence,
    tail_start: int | None = None,
    *,
    diameter_cap: float = 1e6,
    max_sweeps: int = 200,
    tol: float = 1e-8,
) -> AsymptoticCenter:
    """Minimise ``y -> max_{n >= tail_start} d(y, x_n)``.

    The finite tail stands in for the limsup of an infinite sequence.  A tail
    wider than ``diameter_cap`` is reported as ``"unbounded-tail"`` instead of
    being minimised.
    """
    if tail_start is None:
        tail_start = math.ceil(len(points) / 2)
    tail = [space.check(p) for p in points[tail_start:]]
    if not tail:
        raise EmptyTailError(f"no points at or after index {tail_start} (length {len(points)})")
    diam = max((space.distance(p, q) for i, p in enumerate(tail) for q in tail[i + 1:]), default=0.0)
    if diam > diameter_cap:
        return AsymptoticCenter(None, math.inf, "unbounded-tail", diam)

    def phi(y):
        return max(space.distance(y, p) for p in tail)

    def targets(y):
        # max-type objectives stall under pure coordinate search; also move
        # toward the farthest points and the midpoints between them
        far = sorted(tail, key=lambda p: -space.distance(y, p))[:3]
        mids = [space.geodesic_point(far[i], far[j], 0.5)
                for i in range(len(far)) for j in range(i + 1, len(far))]
        return far + mids

    point, radius, _ = minimize_on_space(space, phi, tail[0], targets=targets,
                                         tol=tol, max_sweeps=max_sweeps, polish=True)
    return AsymptoticCenter(point, radius, "ok", diam)


@dataclass
class DeltaProbeReport:
    consistent: bool
    bounded: bool
    tails: dict[int, list[float]] = field(default_factory=dict)
    tail_max: dict[int, float] = field(default_factory=dict)
    skipped: list[int] = field(default_factory=list)


def delta_convergence_probe(
    space: GeodesicSpace,
    points: Sequence,
    candidate,
    witnesses: Sequence,
    *,
    tail_start: int | None = None,
    tol: float = 1e-6,
    bound_cap: float = 1e12,
) -> DeltaProbeReport:
    """Check that projections of the tail onto ``[candidate, w]`` approach ``candidate``.

    A sequence Delta-converging to ``candidate`` has this property for every
    witness ``w``; the probe can only refute, never prove, Delta-convergence.
    Witnesses equal to the candidate are skipped.
    """
    pts = [space.check(p) for p in points]
    candidate = space.check(candidate)
    spread = max(space.distance(pts[0], p) for p in pts) if pts else 0.0
    bounded = math.isfinite(spread) and spread <= bound_cap
    if tail_start is None:
        tail_start = len(pts) // 2
    report = DeltaProbeReport(consistent=bounded, bounded=bounded)
    for k, w in enumerate(witnesses):
        w = space.check(w)
        if space.distance(candidate, w) == 0.0:
            report.skipped.append(k)
            continue
        tail = [space.distance(project_to_segment(space, candidate, w, p), candidate)
                for p in pts[tail_start:]]
        report.tails[k] = tail
        report.tail_max[k] = max(tail) if tail else 0.0
        if report.tail_max[k] > tol:
            report.consistent = False
    return report
