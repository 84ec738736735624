"""Saddle functions f: X x Y -> R, their bifunction, residuals and a benchmark library.

Convention: ``f`` is maximised over ``x`` and minimised over ``y``; a saddle
point satisfies ``f(x, y0) <= f(x0, y0) <= f(x0, y)`` for all ``(x, y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from scipy.stats import qmc

from .errors import ConfigError, EmptyProbeSetError
from .geometry import GeodesicSpace, ProductSpace
from .spaces import EuclideanSpace, MetricTree, PoincareBall, TreePoint, space_from_config


@dataclass(frozen=True)
class Certificates:
    """Declared structure of ``f``; spot-checked by :func:`certificate_violations`."""

    concave_x: bool = True
    convex_y: bool = True
    quasi_concave_x: bool = True
    quasi_convex_y: bool = True
    usc_x: bool = True
    lsc_y: bool = True

    @property
    def concave_convex(self) -> bool:
        return self.concave_x and self.convex_y and self.usc_x and self.lsc_y

    @property
    def quasi(self) -> bool:
        return self.quasi_concave_x and self.quasi_convex_y and self.usc_x and self.lsc_y


@dataclass
class SaddleProblem:
    name: str
    space_x: GeodesicSpace
    space_y: GeodesicSpace
    f: Callable[[Any, Any], float]
    certificates: Certificates = field(default_factory=Certificates)
    known_saddle: tuple | None = None
    value: float | None = None
    closed_form_resolvent: Callable[[Any, Any, float], tuple] | None = None
    #: half-width (Euclidean) or hyperbolic radius bounding probes on unbounded spaces
    probe_radius: float = 1.0
    #: False when f has kinks, so line searches must polish their minimisers
    smooth: bool = True
    #: the saddle set is known to be empty
    saddle_free: bool = False

    def __call__(self, x, y) -> float:
        return float(self.f(x, y))

    @property
    def product(self) -> ProductSpace:
        return ProductSpace(self.space_x, self.space_y)

    def check(self, z):
        return self.product.check(z)

    def sample(self, rng: np.random.Generator, radius: float | None = None):
        r = self.probe_radius if radius is None else radius
        return (self.space_x.sample(rng, r), self.space_y.sample(rng, r))

    def default_probes(self, n: int = 256) -> list:
        """Deterministic low-discrepancy probes (unscrambled Halton) plus the known saddle."""
        prod = self.product
        units = qmc.Halton(d=prod.unit_dim, scramble=False).random(n + 1)[1:]
        probes = [prod.from_unit(u, self.probe_radius) for u in units]
        if self.known_saddle is not None:
            probes.append(self.known_saddle)
        return probes


@dataclass(frozen=True)
class ProblemLibraryEntry:
    name: str
    problem: SaddleProblem
    notes: str = ""


def bifunction(problem: SaddleProblem, z, w) -> float:
    """``F((x, y), (x', y')) = f(x, y') - f(x', y)``."""
    (x, y), (xp, yp) = z, w
    return problem(x, yp) - problem(xp, y)


def saddle_residual(problem: SaddleProblem, candidate, probes: Sequence | None = None) -> float:
    """Largest violation of ``F(candidate, w) >= 0`` over the probes (0 if none)."""
    if probes is None:
        probes = problem.default_probes()
    if len(probes) == 0:
        raise EmptyProbeSetError("saddle_residual needs at least one probe")
    candidate = problem.check(candidate)
    worst = 0.0
    for w in probes:
        worst = max(worst, -bifunction(problem, candidate, w))
    return worst


@dataclass
class CoercivityReport:
    radii: list[float]
    worst: list[float]
    best: list[float]
    consistent: bool


def coercivity_probe(
    problem: SaddleProblem,
    a,
    b,
    escape_radii: Sequence[float],
    *,
    n_directions: int = 64,
    seed: int = 0,
) -> CoercivityReport:
    """Sample ``f(x, b) - f(a, y)`` on spheres of growing radius around ``(a, b)``.

    Coercivity asks this quantity to become negative along *every* escaping
    sequence, so each radius records the worst (largest) sampled value.  The
    verdict is "consistent" when the worst case is negative and nonincreasing
    over the outer half of the radii; finitely many directions can never
    verify the property.
    """
    a, b = problem.space_x.check(a), problem.space_y.check(b)
    rng = np.random.default_rng(seed)
    dx, dy = problem.space_x.unit_dim, problem.space_y.unit_dim
    dirs = rng.random((n_directions, 1 + max(dx, 1) + max(dy, 1)))
    # always include the two axis splits and the diagonal split
    dirs[:3, 0] = (0.0, 1.0, 0.5)
    worst, best = [], []
    for r in escape_radii:
        vals = []
        for u in dirs:
            theta = 0.5 * math.pi * u[0]
            x = problem.space_x.ray(a, u[1:1 + max(dx, 1)], r * math.cos(theta))
            y = problem.space_y.ray(b, u[1 + max(dx, 1):], r * math.sin(theta))
            vals.append(problem(x, b) - problem(a, y))
        worst.append(max(vals))
        best.append(min(vals))
    half = len(worst) // 2
    outer = worst[half:]
    consistent = bool(outer) and outer[-1] < 0.0 and all(
        later <= earlier + 1e-12 for earlier, later in zip(outer, outer[1:]))
    return CoercivityReport(list(escape_radii), worst, best, consistent)


def certificate_violations(problem: SaddleProblem, rng: np.random.Generator, n: int = 1000,
                           tol: float = 1e-7) -> dict[str, float]:
    """Worst sampled violation of each declared certificate (<= tol means not falsified)."""
    X, Y = problem.space_x, problem.space_y
    cert = problem.certificates
    worst = {}
    for key, flag in (("concave_x", cert.concave_x), ("convex_y", cert.convex_y),
                      ("quasi_concave_x", cert.quasi_concave_x), ("quasi_convex_y", cert.quasi_convex_y)):
        if flag:
            worst[key] = -math.inf
    for _ in range(n):
        x0, x1 = problem.sample(rng)[0], problem.sample(rng)[0]
        y0, y1 = problem.sample(rng)[1], problem.sample(rng)[1]
        x, y = problem.sample(rng)
        t = float(rng.random())
        fx0, fx1 = problem(x0, y), problem(x1, y)
        fxt = problem(X.geodesic_point(x0, x1, t), y)
        fy0, fy1 = problem(x, y0), problem(x, y1)
        fyt = problem(x, Y.geodesic_point(y0, y1, t))
        if "concave_x" in worst:
            worst["concave_x"] = max(worst["concave_x"], (1 - t) * fx0 + t * fx1 - fxt)
        if "quasi_concave_x" in worst:
            worst["quasi_concave_x"] = max(worst["quasi_concave_x"], min(fx0, fx1) - fxt)
        if "convex_y" in worst:
            worst["convex_y"] = max(worst["convex_y"], fyt - (1 - t) * fy0 - t * fy1)
        if "quasi_convex_y" in worst:
            worst["quasi_convex_y"] = max(worst["quasi_convex_y"], fyt - max(fy0, fy1))
    return worst


# -- problem families -------------------------------------------------------


def zero_problem(space_x: GeodesicSpace | None = None, space_y: GeodesicSpace | None = None) -> SaddleProblem:
    X = space_x or EuclideanSpace(1)
    Y = space_y or EuclideanSpace(1)
    origin = (X.sample(np.random.default_rng(0), 0.0), Y.sample(np.random.default_rng(0), 0.0))
    return SaddleProblem(
        "zero", X, Y, lambda x, y: 0.0,
        known_saddle=origin, value=0.0,
        closed_form_resolvent=lambda x, y, lam: (x, y),
    )


def bilinear_problem(box: float | None = None) -> SaddleProblem:
    """``f(u, v) = u v`` on R x R, or on ``[-box, box]**2``."""
    if box is None:
        def resolvent(x, y, lam):
            x0, y0 = float(x[0]), float(y[0])
            s = 1.0 + lam * lam
            return np.array([(x0 + lam * y0) / s]), np.array([(y0 - lam * x0) / s])

        X = Y = EuclideanSpace(1)
        name, cf = "bilinear", resolvent
    else:
        X = Y = EuclideanSpace.box([-box], [box])
        name, cf = "bilinear_box", None
    return SaddleProblem(
        name, X, Y, lambda x, y: float(x[0] * y[0]),
        known_saddle=(np.zeros(1), np.zeros(1)), value=0.0,
        closed_form_resolvent=cf,
    )


def matrix_game(A, name: str = "matrix_game", saddle=None, value=None) -> SaddleProblem:
    """Mixed extension ``x^T A y`` with the row player maximising over the simplex."""
    A = np.asarray(A, dtype=float)
    X, Y = EuclideanSpace.simplex(A.shape[0]), EuclideanSpace.simplex(A.shape[1])
    return SaddleProblem(name, X, Y, lambda x, y: float(x @ A @ y), known_saddle=saddle, value=value)


def distance_saddle(name: str, space_x: GeodesicSpace, space_y: GeodesicSpace, a, b,
                    weight: float = 0.5, probe_radius: float = 1.0) -> SaddleProblem:
    """``f(x, y) = w d(y, b)**2 - w d(x, a)**2``, saddle point ``(a, b)``.

    The regularised subproblems separate, and each best response lies on the
    geodesic toward the anchor at fraction ``2 w lam / (1 + 2 w lam)``, which
    gives a closed-form resolvent on every backend.
    """
    a, b = space_x.check(a), space_y.check(b)
    dX, dY = space_x.distance, space_y.distance

    def f(x, y):
        return weight * dY(y, b) ** 2 - weight * dX(x, a) ** 2

    def resolvent(x, y, lam):
        t = 2.0 * weight * lam / (1.0 + 2.0 * weight * lam)
        return space_x.geodesic_point(x, a, t), space_y.geodesic_point(y, b, t)

    return SaddleProblem(
        name, space_x, space_y, f, known_saddle=(a, b), value=0.0,
        closed_form_resolvent=resolvent, probe_radius=probe_radius,
        smooth=space_x.smooth and space_y.smooth,
    )


def quasi_sion_problem(a: float = 0.2, b: float = -0.4) -> SaddleProblem:
    """``sqrt(d(y, b)) - sqrt(d(x, a))`` on ``[-1, 1]**2``.

    Quasi-concave in x and quasi-convex in y (sublevel sets are intervals) but
    neither concave nor convex, so only the weaker minimax hypotheses hold.
    """
    X = Y = EuclideanSpace.box([-1.0], [1.0])
    a_pt, b_pt = np.array([a]), np.array([b])
    cert = Certificates(concave_x=False, convex_y=False)
    return SaddleProblem(
        "sion_quasi", X, Y,
        lambda x, y: math.sqrt(abs(float(y[0]) - b)) - math.sqrt(abs(float(x[0]) - a)),
        certificates=cert, known_saddle=(a_pt, b_pt), value=0.0, smooth=False,
    )


def saddle_free_problem() -> SaddleProblem:
    """``f(x, y) = x - y`` on R x R: concave-convex with an empty saddle set."""
    X = Y = EuclideanSpace(1)
    return SaddleProblem(
        "saddle_free", X, Y, lambda x, y: float(x[0] - y[0]),
        closed_form_resolvent=lambda x, y, lam: (x + lam, y + lam),
        saddle_free=True,
    )


def convex_convex_control() -> SaddleProblem:
    """``(x - y)**2`` on ``[-1, 1]**2``; convex in x, so the minimax gap is 1."""
    X = Y = EuclideanSpace.box([-1.0], [1.0])
    cert = Certificates(concave_x=False, quasi_concave_x=False)
    return SaddleProblem("control", X, Y, lambda x, y: float((x[0] - y[0]) ** 2),
                         certificates=cert, saddle_free=True)


def default_tree() -> MetricTree:
    return MetricTree(6, [(0, 1, 1.0), (1, 2, 0.7), (1, 3, 1.3), (3, 4, 0.5), (3, 5, 0.9)])


def library() -> list[ProblemLibraryEntry]:
    tree = default_tree()
    ball = PoincareBall(2)
    return [
        ProblemLibraryEntry("zero", zero_problem(), "f = 0; every point is a saddle, resolvent is the identity"),
        ProblemLibraryEntry("bilinear", bilinear_problem(), "u v on R x R, closed-form resolvent"),
        ProblemLibraryEntry("bilinear_box", bilinear_problem(box=1.0), "u v on [-1,1]^2, generic solver"),
        ProblemLibraryEntry(
            "matrix_game",
            matrix_game([[0.0, 1.0], [-1.0, 0.0]], "matrix_game",
                        saddle=(np.array([1.0, 0.0]), np.array([1.0, 0.0])), value=0.0),
            "antisymmetric 2x2 game; value 0 at pure strategies (e1, e1)"),
        ProblemLibraryEntry(
            "matching_pennies",
            matrix_game([[1.0, -1.0], [-1.0, 1.0]], "matching_pennies",
                        saddle=(np.array([0.5, 0.5]), np.array([0.5, 0.5])), value=0.0),
            "value 0 at uniform strategies"),
        ProblemLibraryEntry(
            "quadratic",
            distance_saddle("quadratic", EuclideanSpace(2), EuclideanSpace(2),
                            [0.5, -0.25], [-0.3, 0.7], weight=1.0, probe_radius=2.0),
            "-|x-a|^2 + |y-b|^2 on R^2 x R^2"),
        ProblemLibraryEntry(
            "quadratic_line",
            distance_saddle("quadratic_line", EuclideanSpace(1), EuclideanSpace(1),
                            [0.3], [-0.2], weight=1.0),
            "one-dimensional quadratic saddle, grid-friendly"),
        ProblemLibraryEntry("sion_quasi", quasi_sion_problem(),
                            "quasi-concave/quasi-convex but not concave/convex"),
        ProblemLibraryEntry(
            "hyperbolic",
            distance_saddle("hyperbolic", ball, ball, [0.3, -0.2], [-0.1, 0.45], probe_radius=2.0),
            "d(y,b)^2/2 - d(x,a)^2/2 on two Poincare disks"),
        ProblemLibraryEntry(
            "tree",
            distance_saddle("tree", tree, tree, TreePoint(2, 0.3), tree.vertex(4)),
            "d(y,b)^2/2 - d(x,a)^2/2 on a six-vertex metric tree"),
        ProblemLibraryEntry("saddle_free", saddle_free_problem(), "x - y: empty saddle set"),
        ProblemLibraryEntry("control", convex_convex_control(),
                            "violates quasi-concavity; positive minimax gap"),
    ]


def get_problem(name: str) -> SaddleProblem:
    for entry in library():
        if entry.name == name:
            return entry.problem
    raise ConfigError(f"no library problem named {name!r}")


def problem_from_config(obj) -> SaddleProblem:
    """Resolve a library name or an inline family definition.

    Inline families: ``bilinear`` (optional ``box``), ``matrix_game`` (``A``),
    ``distance_saddle`` (``space``/``space_x``/``space_y``, ``a``, ``b``,
    optional ``weight``), ``saddle_free``, ``zero``.
    """
    if isinstance(obj, str):
        return get_problem(obj)
    if not isinstance(obj, dict) or "family" not in obj:
        raise ConfigError("problem must be a library name or an object with a 'family'")
    fam = obj["family"]
    try:
        if fam == "bilinear":
            return bilinear_problem(box=obj.get("box"))
        if fam == "matrix_game":
            return matrix_game(obj["A"], obj.get("name", "matrix_game"))
        if fam == "distance_saddle":
            X = space_from_config(obj.get("space_x", obj.get("space")))
            Y = space_from_config(obj.get("space_y", obj.get("space")))
            return distance_saddle(obj.get("name", "distance_saddle"), X, Y,
                                   X.point_from_json(obj["a"]), Y.point_from_json(obj["b"]),
                                   weight=float(obj.get("weight", 0.5)),
                                   probe_radius=float(obj.get("probe_radius", 1.0)))
        if fam == "saddle_free":
            return saddle_free_problem()
        if fam == "zero":
            return zero_problem()
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad {fam} definition: {exc}") from None
    raise ConfigError(f"unknown problem family {fam!r}")
