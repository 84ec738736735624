"""Concrete Hadamard spaces: Euclidean (optionally constrained), Poincare ball, metric trees."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import (
    ConfigError,
    DimensionMismatchError,
    InvalidEdgeError,
    InvalidPointError,
    OffsetOutOfRangeError,
    ParameterOutOfRangeError,
    PointOnBoundaryError,
)
from .geometry import CURVED_TOL, EUCLIDEAN_TOL, GeodesicLine, GeodesicSpace

MEMBERSHIP_TOL = 1e-12
BALL_MARGIN = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Sampling lattice request.

    ``resolution`` is the per-axis (Euclidean), per-radius (Poincare) or
    per-edge (tree) sample count.  ``radius`` bounds unbounded spaces;
    ``lo``/``hi`` override the Euclidean box.
    """

    resolution: int
    radius: float = 1.0
    lo: tuple[float, ...] | None = None
    hi: tuple[float, ...] | None = None


def _as_vector(p, dim: int) -> np.ndarray:
    try:
        v = np.asarray(p, dtype=float).reshape(-1)
    except (TypeError, ValueError):
        raise InvalidPointError(f"cannot read {p!r} as a coordinate vector") from None
    if v.shape[0] != dim:
        raise DimensionMismatchError(f"expected {dim} coordinates, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise InvalidPointError("coordinates must be finite")
    return v


# -- Euclidean --------------------------------------------------------------


class EuclideanSpace(GeodesicSpace):
    """R^n, or a closed convex subset of it (ball, box or probability simplex).

    Build constrained variants with :meth:`box`, :meth:`ball` and
    :meth:`simplex`.  Geodesics are affine segments in every case.
    """

    kind = "euclidean"
    tolerance = EUCLIDEAN_TOL

    def __init__(self, dim: int, constraint: str | None = None, *, lo=None, hi=None,
                 radius: float | None = None, center=None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        if constraint not in (None, "box", "ball", "simplex"):
            raise ValueError(f"unknown constraint {constraint!r}")
        self.dim = dim
        self.constraint = constraint
        self.lo = self.hi = None
        self.radius = radius
        self.center = None
        if constraint == "box":
            self.lo = np.broadcast_to(np.asarray(lo, dtype=float), (dim,)).copy()
            self.hi = np.broadcast_to(np.asarray(hi, dtype=float), (dim,)).copy()
            if np.any(self.lo > self.hi):
                raise ValueError("box needs lo <= hi")
        elif constraint == "ball":
            if radius is None or radius <= 0:
                raise ValueError("ball constraint needs a positive radius")
            self.center = np.zeros(dim) if center is None else _as_vector(center, dim)
        elif constraint == "simplex" and dim < 2:
            raise ValueError("simplex needs at least two coordinates")
        self.unit_dim = dim - 1 if constraint == "simplex" else dim

    @classmethod
    def box(cls, lo, hi, dim: int | None = None) -> "EuclideanSpace":
        if dim is None:
            dim = np.size(lo)
        return cls(dim, "box", lo=lo, hi=hi)

    @classmethod
    def ball(cls, dim: int, radius: float = 1.0, center=None) -> "EuclideanSpace":
        return cls(dim, "ball", radius=radius, center=center)

    @classmethod
    def simplex(cls, dim: int) -> "EuclideanSpace":
        return cls(dim, "simplex")

    def __repr__(self):
        extra = "" if self.constraint is None else f", {self.constraint}"
        return f"EuclideanSpace({self.dim}{extra})"

    # membership --------------------------------------------------------

    def membership(self, v: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
        if self.constraint is None:
            return True
        if self.constraint == "box":
            return bool(np.all(v >= self.lo - tol) and np.all(v <= self.hi + tol))
        if self.constraint == "ball":
            return float(np.linalg.norm(v - self.center)) <= self.radius + tol
        return bool(np.all(v >= -tol) and abs(v.sum() - 1.0) <= tol)

    def check(self, p) -> np.ndarray:
        v = _as_vector(p, self.dim)
        if not self.membership(v):
            raise InvalidPointError(f"{v.tolist()} violates the {self.constraint} constraint")
        return v

    # metric ------------------------------------------------------------

    def distance(self, p, q) -> float:
        return float(np.linalg.norm(p - q))

    def geodesic_point(self, p, q, t: float):
        if t == 0.0:
            return p
        if t == 1.0:
            return q
        return (1.0 - t) * p + t * q

    # line searches -----------------------------------------------------

    def line_interval(self, p: np.ndarray, direction: np.ndarray) -> tuple[float, float]:
        """Parameter range keeping ``p + s * direction`` feasible."""
        if self.constraint is None:
            return -math.inf, math.inf
        if self.constraint == "ball":
            w = p - self.center
            b = float(w @ direction)
            c = float(w @ w) - self.radius**2
            disc = b * b - c
            if disc < 0.0:
                return 0.0, 0.0
            r = math.sqrt(disc)
            return min(-b - r, 0.0), max(-b + r, 0.0)
        if self.constraint == "box":
            lo_b, hi_b = self.lo, self.hi
            base = p
        else:
            lo_b, hi_b = np.zeros(self.dim), np.full(self.dim, math.inf)
            base = np.maximum(p, 0.0)
        s_lo, s_hi = -math.inf, math.inf
        for k in range(self.dim):
            dk = direction[k]
            if dk > 0.0:
                s_lo = max(s_lo, (lo_b[k] - base[k]) / dk)
                s_hi = min(s_hi, (hi_b[k] - base[k]) / dk)
            elif dk < 0.0:
                s_lo = max(s_lo, (hi_b[k] - base[k]) / dk)
                s_hi = min(s_hi, (lo_b[k] - base[k]) / dk)
        return min(s_lo, 0.0), max(s_hi, 0.0)

    def _directions(self) -> list[np.ndarray]:
        if self.constraint == "simplex":
            dirs = []
            for i, j in itertools.combinations(range(self.dim), 2):
                d = np.zeros(self.dim)
                d[i], d[j] = 1.0, -1.0
                dirs.append(d / math.sqrt(2.0))
            return dirs
        return [np.eye(self.dim)[i] for i in range(self.dim)]

    @property
    def frame_size(self) -> int:
        n = self.dim
        return n * (n - 1) // 2 if self.constraint == "simplex" else n

    def frame_line(self, p, i: int) -> GeodesicLine:
        d = self._directions()[i]
        lo, hi = self.line_interval(p, d)
        return GeodesicLine(lambda s: p + s * d, lo, hi)

    def line_toward(self, p, q) -> GeodesicLine | None:
        diff = q - p
        n = float(np.linalg.norm(diff))
        if n == 0.0:
            return None
        d = diff / n
        lo, hi = self.line_interval(p, d)
        return GeodesicLine(lambda s: p + s * d, lo, hi)

    # sampling ----------------------------------------------------------

    def from_unit(self, u, radius: float = 1.0) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.constraint is None:
            return radius * (2.0 * u - 1.0)
        if self.constraint == "box":
            return self.lo + u * (self.hi - self.lo)
        if self.constraint == "ball":
            v = 2.0 * u - 1.0
            n2 = float(np.linalg.norm(v))
            if n2 == 0.0:
                return self.center.copy()
            return self.center + self.radius * v * (float(np.max(np.abs(v))) / n2)
        cuts = np.concatenate(([0.0], np.sort(u), [1.0]))
        return np.diff(cuts)

    def _direction_from_unit(self, u) -> np.ndarray:
        v = 2.0 * np.asarray(u, dtype=float)[: self.dim] - 1.0
        if v.shape[0] < self.dim:
            v = np.concatenate((v, np.zeros(self.dim - v.shape[0])))
        if self.constraint == "simplex":
            v = v - v.mean()
        n = float(np.linalg.norm(v))
        if n == 0.0:
            v = self._directions()[0]
            n = 1.0
        return v / n

    def ray(self, p, u, r: float):
        d = self._direction_from_unit(np.resize(np.asarray(u, dtype=float), self.dim))
        lo, hi = self.line_interval(p, d)
        return p + min(r, hi) * d

    def grid(self, spec: GridSpec):
        res = spec.resolution
        if res < 2:
            raise ParameterOutOfRangeError("grids need at least 2 samples per dimension")
        if self.constraint == "simplex":
            n = res - 1
            pts = [np.array(c, dtype=float) / n for c in _compositions(n, self.dim)]
            return pts, math.sqrt(2.0) / n
        if spec.lo is not None:
            lo = np.broadcast_to(np.asarray(spec.lo, dtype=float), (self.dim,))
            hi = np.broadcast_to(np.asarray(spec.hi, dtype=float), (self.dim,))
        elif self.constraint == "box":
            lo, hi = self.lo, self.hi
        elif self.constraint == "ball":
            lo, hi = self.center - self.radius, self.center + self.radius
        else:
            lo, hi = np.full(self.dim, -spec.radius), np.full(self.dim, spec.radius)
        axes = [np.linspace(lo[k], hi[k], res) for k in range(self.dim)]
        pts = [np.array(c) for c in itertools.product(*axes)]
        if self.constraint is not None:
            pts = [p for p in pts if self.membership(p)]
        return pts, float(np.max(hi - lo)) / (res - 1)

    # serialisation -----------------------------------------------------

    def flatten(self, p):
        return [float(c) for c in p]

    def coord_names(self, prefix):
        return [f"{prefix}_{k}" for k in range(self.dim)]

    def unflatten(self, values):
        return self.check(values)

    def point_to_json(self, p):
        return [float(c) for c in p]

    def point_from_json(self, obj):
        if isinstance(obj, (int, float)):
            obj = [obj]
        return self.check(obj)

    def describe(self):
        out = {"kind": "euclidean", "dim": self.dim}
        if self.constraint == "box":
            out.update(constraint="box", lo=self.lo.tolist(), hi=self.hi.tolist())
        elif self.constraint == "ball":
            out.update(constraint="ball", radius=self.radius, center=self.center.tolist())
        elif self.constraint == "simplex":
            out.update(constraint="simplex")
        return out


def _compositions(n: int, k: int):
    """All k-tuples of nonnegative integers summing to n, lexicographically descending."""
    if k == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def constrained_euclidean_membership(space: EuclideanSpace, p) -> bool:
    """True iff ``p`` satisfies the space's constraint within 1e-12."""
    v = np.asarray(p, dtype=float).reshape(-1)
    if v.shape[0] != space.dim:
        raise DimensionMismatchError(f"expected {space.dim} coordinates, got {v.shape[0]}")
    return space.membership(v)


# -- Poincare ball ----------------------------------------------------------


def mobius_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Mobius addition; ``y -> a (+) y`` is an isometry taking 0 to ``a``."""
    ab = float(a @ b)
    aa = float(a @ a)
    bb = float(b @ b)
    num = (1.0 + 2.0 * ab + bb) * a + (1.0 - aa) * b
    return num / (1.0 + 2.0 * ab + aa * bb)


def poincare_distance(p: np.ndarray, q: np.ndarray) -> float:
    diff = p - q
    x = 2.0 * float(diff @ diff) / ((1.0 - float(p @ p)) * (1.0 - float(q @ q)))
    # arcosh(1 + x) without cancellation for small x
    return math.log1p(x + math.sqrt(x * (x + 2.0)))


class PoincareBall(GeodesicSpace):
    """Hyperbolic space of curvature -1 in the Poincare ball model.

    Points are stored as coordinate vectors of norm below ``1 - 1e-9``;
    anything outside that margin is rejected, never clamped.
    """

    kind = "poincare"
    tolerance = CURVED_TOL
    max_norm = 1.0 - BALL_MARGIN
    #: hyperbolic radius of the admissible region around the origin
    max_radius = 2.0 * math.atanh(1.0 - BALL_MARGIN)

    def __init__(self, dim: int = 2):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        self.unit_dim = dim

    def __repr__(self):
        return f"PoincareBall({self.dim})"

    def check(self, p) -> np.ndarray:
        v = _as_vector(p, self.dim)
        if float(np.linalg.norm(v)) >= self.max_norm:
            raise PointOnBoundaryError(f"norm {np.linalg.norm(v)} not below 1 - {BALL_MARGIN}")
        return v

    def distance(self, p, q) -> float:
        return poincare_distance(p, q)

    def geodesic_point(self, p, q, t: float):
        if t == 0.0:
            return p
        if t == 1.0:
            return q
        w = mobius_add(-p, q)
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return p
        r = math.tanh(t * math.atanh(min(nw, self.max_norm)))
        return mobius_add(p, (r / nw) * w)

    def _line(self, p, direction: np.ndarray) -> GeodesicLine:
        # stay inside the admissible ball: d(0, point) <= d(0, p) + |s|
        reach = self.max_radius * 0.999 - 2.0 * math.atanh(min(float(np.linalg.norm(p)), self.max_norm))
        reach = max(reach, 0.0)
        return GeodesicLine(lambda s: mobius_add(p, math.tanh(s / 2.0) * direction), -reach, reach)

    @property
    def frame_size(self) -> int:
        return self.dim

    def frame_line(self, p, i: int) -> GeodesicLine:
        return self._line(p, np.eye(self.dim)[i])

    def line_toward(self, p, q) -> GeodesicLine | None:
        w = mobius_add(-p, q)
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return None
        return self._line(p, w / nw)

    def _from_tangent(self, v: np.ndarray, radius: float) -> np.ndarray:
        n_inf = float(np.max(np.abs(v))) if v.size else 0.0
        n2 = float(np.linalg.norm(v))
        if n2 == 0.0:
            return np.zeros(self.dim)
        r = min(radius * n_inf, self.max_radius * 0.999)
        return math.tanh(r / 2.0) * v / n2

    def from_unit(self, u, radius: float = 1.0) -> np.ndarray:
        return self._from_tangent(2.0 * np.asarray(u, dtype=float) - 1.0, radius)

    def ray(self, p, u, r: float):
        v = 2.0 * np.resize(np.asarray(u, dtype=float), self.dim) - 1.0
        n = float(np.linalg.norm(v))
        d = v / n if n > 0 else np.eye(self.dim)[0]
        line = self._line(p, d)
        return line.point(min(r, line.hi))

    def grid(self, spec: GridSpec):
        res = spec.resolution
        if res < 2:
            raise ParameterOutOfRangeError("grids need at least 2 samples per dimension")
        R = spec.radius
        radii = [R * k / (res - 1) for k in range(res)]
        if self.dim == 1:
            pts = [np.array([math.tanh(r / 2.0)]) for r in np.linspace(-R, R, res)]
            return pts, 2.0 * R / (res - 1)
        if self.dim == 2:
            pts = [np.zeros(2)]
            for r in radii[1:]:
                for j in range(res):
                    ang = 2.0 * math.pi * j / res
                    pts.append(math.tanh(r / 2.0) * np.array([math.cos(ang), math.sin(ang)]))
            return pts, max(R / (res - 1), math.sinh(R) * 2.0 * math.pi / res)
        axes = [np.linspace(-1.0, 1.0, res)] * self.dim
        pts = [self._from_tangent(np.array(c), R) for c in itertools.product(*axes)]
        return pts, 2.0 * math.sinh(R) / (res - 1)

    def flatten(self, p):
        return [float(c) for c in p]

    def coord_names(self, prefix):
        return [f"{prefix}_{k}" for k in range(self.dim)]

    def unflatten(self, values):
        return self.check(values)

    def point_to_json(self, p):
        return [float(c) for c in p]

    def point_from_json(self, obj):
        if isinstance(obj, (int, float)):
            obj = [obj]
        return self.check(obj)

    def describe(self):
        return {"kind": "poincare", "dim": self.dim}


def poincare_geodesic(p, q, t: float, space: PoincareBall | None = None) -> np.ndarray:
    """Point at hyperbolic fraction ``t`` of the way from ``p`` to ``q``.

    Translates ``p`` to the origin, moves radially, then translates back.
    """
    p = np.asarray(p, dtype=float)
    if space is None:
        space = PoincareBall(p.shape[0])
    if not 0.0 <= t <= 1.0:
        raise ParameterOutOfRangeError(f"geodesic parameter {t} outside [0, 1]")
    return space.geodesic_point(space.check(p), space.check(q), t)


# -- metric trees -----------------------------------------------------------


@dataclass(frozen=True)
class TreePoint:
    """A point ``offset`` along edge ``edge``, measured from the edge's first vertex."""

    edge: int
    offset: float


class MetricTree(GeodesicSpace):
    """Finite weighted tree viewed as a geodesic metric space (an R-tree).

    Vertex points are canonicalised to the incident edge of smallest id, so
    equal points compare equal.
    """

    kind = "tree"
    tolerance = EUCLIDEAN_TOL
    exhaustive_lines = True
    smooth = False
    unit_dim = 1

    def __init__(self, n_vertices: int, edges: Sequence[Sequence[float]]):
        edges = [(int(u), int(v), float(w)) for u, v, w in edges]
        if n_vertices < 2 or len(edges) != n_vertices - 1:
            raise ValueError("a tree on n vertices needs exactly n - 1 edges (n >= 2)")
        for u, v, w in edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices) or u == v:
                raise ValueError(f"bad edge ({u}, {v})")
            if not w > 0.0:
                raise ValueError("edge lengths must be positive")
        rows = [u for u, v, _ in edges] + [v for u, v, _ in edges]
        cols = [v for u, v, _ in edges] + [u for u, v, _ in edges]
        wts = [w for *_, w in edges] * 2
        graph = csr_matrix((wts, (rows, cols)), shape=(n_vertices, n_vertices))
        n_comp, _ = connected_components(graph, directed=False)
        if n_comp != 1:
            raise ValueError("edges do not form a connected tree")
        self.n_vertices = n_vertices
        self.edges = edges
        self.dist, self.pred = shortest_path(graph, directed=False, return_predecessors=True)
        self._edge_id = {}
        for k, (u, v, _) in enumerate(edges):
            self._edge_id[(u, v)] = k
            self._edge_id[(v, u)] = k
        self._incident = {}
        for k, (u, v, _) in enumerate(edges):
            self._incident.setdefault(u, k)
            self._incident.setdefault(v, k)
        self._cum = np.cumsum([0.0] + [w for *_, w in edges])

    def __repr__(self):
        return f"MetricTree({self.n_vertices}, {len(self.edges)} edges)"

    @property
    def total_length(self) -> float:
        return float(self._cum[-1])

    def vertex(self, v: int) -> TreePoint:
        if not 0 <= v < self.n_vertices:
            raise InvalidPointError(f"no vertex {v}")
        k = self._incident[v]
        u0, _, w = self.edges[k]
        return TreePoint(k, 0.0 if u0 == v else w)

    def _make(self, edge: int, offset: float) -> TreePoint:
        u, v, w = self.edges[edge]
        snap = 1e-13 * max(1.0, w)
        if offset <= snap:
            return self.vertex(u)
        if offset >= w - snap:
            return self.vertex(v)
        return TreePoint(edge, offset)

    def check(self, p) -> TreePoint:
        if isinstance(p, TreePoint):
            edge, offset = p.edge, p.offset
        else:
            try:
                edge, offset = p
            except (TypeError, ValueError):
                raise InvalidPointError(f"cannot read {p!r} as (edge, offset)") from None
        if isinstance(edge, float) and edge.is_integer():
            edge = int(edge)
        if not isinstance(edge, (int, np.integer)) or not 0 <= edge < len(self.edges):
            raise InvalidEdgeError(f"no edge {edge!r}")
        offset = float(offset)
        w = self.edges[edge][2]
        if not (-MEMBERSHIP_TOL <= offset <= w + MEMBERSHIP_TOL):
            raise OffsetOutOfRangeError(f"offset {offset} outside [0, {w}] on edge {edge}")
        return self._make(int(edge), min(max(offset, 0.0), w))

    def _ends(self, p: TreePoint):
        u, v, w = self.edges[p.edge]
        return ((u, p.offset), (v, w - p.offset))

    def _route(self, p: TreePoint, q: TreePoint):
        best = (math.inf, None, None)
        for a, da in self._ends(p):
            for b, db in self._ends(q):
                total = da + self.dist[a, b] + db
                if total < best[0]:
                    best = (total, a, b)
        return best

    def distance(self, p, q) -> float:
        if p.edge == q.edge:
            return abs(p.offset - q.offset)
        return float(self._route(p, q)[0])

    def _vertex_path(self, a: int, b: int) -> list[int]:
        path = [b]
        while path[-1] != a:
            path.append(int(self.pred[a, path[-1]]))
        return path[::-1]

    def _along_edge_from(self, vertex: int, edge: int, s: float) -> TreePoint:
        u, _, w = self.edges[edge]
        return self._make(edge, s if u == vertex else w - s)

    def geodesic_point(self, p, q, t: float):
        if t == 0.0:
            return p
        if t == 1.0:
            return q
        if p.edge == q.edge:
            return self._make(p.edge, p.offset + t * (q.offset - p.offset))
        total, a, b = self._route(p, q)
        s = t * total
        da = dict(self._ends(p))[a]
        if s <= da:
            return self._along_edge_from(a, p.edge, da - s)
        s -= da
        path = self._vertex_path(a, b)
        for w0, w1 in zip(path, path[1:]):
            k = self._edge_id[(w0, w1)]
            length = self.edges[k][2]
            if s <= length:
                return self._along_edge_from(w0, k, s)
            s -= length
        return self._along_edge_from(b, q.edge, min(s, dict(self._ends(q))[b]))

    @property
    def frame_size(self) -> int:
        return len(self.edges)

    def frame_line(self, p, i: int) -> GeodesicLine:
        return GeodesicLine(lambda s, i=i: self._make(i, s), 0.0, self.edges[i][2])

    def line_toward(self, p, q) -> GeodesicLine | None:
        d = self.distance(p, q)
        if d == 0.0:
            return None
        return GeodesicLine(lambda s: self.geodesic_point(p, q, min(max(s / d, 0.0), 1.0)), 0.0, d)

    def _at_arclength(self, s: float) -> TreePoint:
        k = int(np.searchsorted(self._cum, s, side="right")) - 1
        k = min(max(k, 0), len(self.edges) - 1)
        return self._make(k, min(s - self._cum[k], self.edges[k][2]))

    def from_unit(self, u, radius: float = 1.0) -> TreePoint:
        return self._at_arclength(float(np.asarray(u).reshape(-1)[0]) * self.total_length)

    def leaves(self) -> list[int]:
        deg = np.zeros(self.n_vertices, dtype=int)
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return [int(v) for v in np.flatnonzero(deg == 1)]

    def ray(self, p, u, r: float):
        leaves = self.leaves()
        k = min(int(float(np.asarray(u).reshape(-1)[0]) * len(leaves)), len(leaves) - 1)
        target = self.vertex(leaves[k])
        d = self.distance(p, target)
        if d == 0.0:
            return p
        return self.geodesic_point(p, target, min(r / d, 1.0))

    def grid(self, spec: GridSpec):
        res = spec.resolution
        if res < 2:
            raise ParameterOutOfRangeError("grids need at least 2 samples per edge")
        seen, pts = set(), []
        for k, (_, _, w) in enumerate(self.edges):
            for j in range(res):
                p = self._make(k, w * j / (res - 1))
                if p not in seen:
                    seen.add(p)
                    pts.append(p)
        return pts, max(w for *_, w in self.edges) / (res - 1)

    def flatten(self, p):
        return [float(p.edge), float(p.offset)]

    def coord_names(self, prefix):
        return [f"{prefix}_edge", f"{prefix}_offset"]

    def unflatten(self, values):
        return self.check((int(values[0]), float(values[1])))

    def point_to_json(self, p):
        return {"edge": int(p.edge), "offset": float(p.offset)}

    def point_from_json(self, obj):
        if isinstance(obj, dict):
            if "vertex" in obj:
                return self.vertex(int(obj["vertex"]))
            try:
                return self.check((obj["edge"], obj["offset"]))
            except KeyError:
                raise InvalidPointError("tree point needs 'edge' and 'offset' or 'vertex'") from None
        return self.check(obj)

    def describe(self):
        return {"kind": "tree", "vertices": self.n_vertices,
                "edges": [[u, v, w] for u, v, w in self.edges]}


def tree_geodesic(tree: MetricTree, p, q, t: float) -> TreePoint:
    """Point at arc length ``t * d(p, q)`` along the unique path from ``p`` to ``q``."""
    if not 0.0 <= t <= 1.0:
        raise ParameterOutOfRangeError(f"geodesic parameter {t} outside [0, 1]")
    return tree.geodesic_point(tree.check(p), tree.check(q), t)


def space_from_config(obj: dict) -> GeodesicSpace:
    """Build a backend from a JSON descriptor such as ``{"kind": "poincare", "dim": 2}``."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError(f"space descriptor needs a 'kind': {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "euclidean":
            dim = int(obj.get("dim", 1))
            constraint = obj.get("constraint")
            if constraint == "box":
                return EuclideanSpace(dim, "box", lo=obj["lo"], hi=obj["hi"])
            if constraint == "ball":
                return EuclideanSpace(dim, "ball", radius=float(obj.get("radius", 1.0)),
                                      center=obj.get("center"))
            if constraint == "simplex":
                return EuclideanSpace(dim, "simplex")
            if constraint is not None:
                raise ConfigError(f"unknown constraint {constraint!r}")
            return EuclideanSpace(dim)
        if kind == "poincare":
            return PoincareBall(int(obj.get("dim", 2)))
        if kind == "tree":
            edges = obj["edges"]
            n = int(obj.get("vertices", len(edges) + 1))
            return MetricTree(n, edges)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad {kind} descriptor: {exc}") from None
    raise ConfigError(f"unknown space kind {kind!r}")
