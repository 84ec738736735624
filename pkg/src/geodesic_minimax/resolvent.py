"""Resolvents of saddle functions and checks of their metric properties.

``R_lam(x, y)`` is the unique saddle point of

    g(u, v) = lam f(u, v) - d_X(u, x)**2 / 2 + d_Y(v, y)**2 / 2,

i.e. the resolvent of ``lam f``.  Problems may supply a closed form; otherwise
an alternating best-response scheme runs, with ``u`` slaved to ``v`` and the
``v`` update damped along the geodesic toward its best response.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import InvalidLambdaError, NoConvergenceError
from .geometry import minimize_on_space
from .problems import SaddleProblem, saddle_residual

DEFAULT_INNER_TOL = 1e-8
DEFAULT_MAX_SWEEPS = 10_000
MIN_DAMPING = 1e-8
CAP_RELAX = 1.25
GROWTH = 1.01  # flat residuals jitter; only real growth tightens the cap


@dataclass(frozen=True)
class ResolventQuery:
    problem: SaddleProblem
    base: tuple
    lam: float
    inner_tol: float = DEFAULT_INNER_TOL
    max_sweeps: int = DEFAULT_MAX_SWEEPS
    #: starting point for the alternating scheme (defaults to ``base``)
    init: tuple | None = None
    #: "auto" uses a closed form when the problem has one
    method: str = "auto"


@dataclass
class ResolventResult:
    point: tuple
    fixed_point_gap: float
    regularized_residual: float
    sweeps_used: int
    method: str
    converged: bool = True
    damping: float = 1.0


def _regularized(problem: SaddleProblem, base, lam: float):
    (x, y), X, Y = base, problem.space_x, problem.space_y

    def g(u, v):
        return lam * problem(u, v) - 0.5 * X.distance(u, x) ** 2 + 0.5 * Y.distance(v, y) ** 2

    return g


def _closed_form(query: ResolventQuery) -> ResolventResult:
    problem, (x, y), lam = query.problem, query.base, query.lam
    u, v = problem.closed_form_resolvent(x, y, lam)
    g = _regularized(problem, query.base, lam)
    # probe the regularised saddle inequality at the base point only
    residual = max(0.0, -(g(u, y) - g(x, v)))
    return ResolventResult((u, v), 0.0, residual, 0, "closed-form")


def _alternating(query: ResolventQuery) -> ResolventResult:
    problem, lam, tol = query.problem, query.lam, query.inner_tol
    X, Y = problem.space_x, problem.space_y
    x, y = query.base
    polish = not problem.smooth
    br_tol = 1e-3 * tol

    def best_u(v, start):
        h = lambda u: 0.5 * X.distance(u, x) ** 2 - lam * problem(u, v)
        return minimize_on_space(X, h, start, tol=br_tol, polish=polish)[0]

    def best_v(u, start):
        h = lambda v: 0.5 * Y.distance(v, y) ** 2 + lam * problem(u, v)
        return minimize_on_space(Y, h, start, tol=br_tol, polish=polish)[0]

    u0, v = query.init if query.init is not None else query.base
    u0, v = X.check(u0), Y.check(v)
    u = best_u(v, u0)
    omega, cap, prev = 1.0, 1.0, None
    gap, sweeps = math.inf, 0
    for sweeps in range(1, query.max_sweeps + 1):
        v_br = best_v(u, v)
        u_br = best_u(v_br, u)
        r = Y.distance(v, v_br)
        gap = math.hypot(r, X.distance(u, u_br))
        if not math.isfinite(gap):
            break
        if gap <= tol:
            u, v = u_br, v_br
            break
        if prev is not None:
            # growth means the last factor was too bold for some mode; piecewise
            # maps (clipping, simplex faces) switch modes, so the cap only
            # relaxes slowly while the residual keeps shrinking
            if r > GROWTH * prev[1]:
                cap = max(MIN_DAMPING, min(cap, prev[2] / 2.0))
            else:
                cap = min(1.0, cap * CAP_RELAX)
            omega = min(cap, _next_damping(Y, prev, v, v_br, r))
        prev = (v, r, omega)
        if omega == 1.0:
            u, v = u_br, v_br
        else:
            v = Y.geodesic_point(v, v_br, omega)
            u = best_u(v, u)
    else:
        u, v = u_br, v_br

    g = _regularized(problem, query.base, lam)
    v_star = best_v(u, v)
    residual = max(0.0, g(u, v) - g(u, v_star))
    return ResolventResult((u, v), gap, residual, sweeps, "alternating",
                           converged=gap <= tol, damping=omega)


def _next_damping(Y, prev, v, v_br, r: float) -> float:
    """Pick the damping factor from the observed signed contraction of the last step.

    Models the v-update as ``e_{k+1} = (1 - omega (1 + mu)) e_k`` and chooses
    ``omega = 1 / (1 + mu)``, which annihilates the estimated mode.  The sign
    of the step ratio comes from the comparison angle at the current point.
    """
    v_prev, r_prev, omega_prev = prev
    a = Y.distance(v_prev, v)
    if a == 0.0 or r_prev == 0.0 or r == 0.0:
        return omega_prev
    c = Y.distance(v_prev, v_br)
    cos = max(-1.0, min(1.0, (a * a + r * r - c * c) / (2.0 * a * r)))
    sigma = -cos * r / r_prev
    mu = (1.0 - sigma) / omega_prev - 1.0
    omega = 1.0 / (1.0 + max(mu, 0.0))
    return min(1.0, max(MIN_DAMPING, omega))


def resolvent(query: ResolventQuery) -> ResolventResult:
    """Approximate ``R_lam(base)``; an unconverged result is flagged, not raised."""
    if not (query.lam > 0.0 and math.isfinite(query.lam)):
        raise InvalidLambdaError(f"lambda must be positive and finite, got {query.lam}")
    if not query.inner_tol > 0.0:
        raise ValueError("inner_tol must be positive")
    if query.method not in ("auto", "closed-form", "alternating"):
        raise ValueError(f"unknown resolvent method {query.method!r}")
    query = ResolventQuery(query.problem, query.problem.check(query.base), query.lam,
                           query.inner_tol, query.max_sweeps, query.init, query.method)
    has_cf = query.problem.closed_form_resolvent is not None
    if query.method == "closed-form" or (query.method == "auto" and has_cf):
        if not has_cf:
            raise ValueError(f"problem {query.problem.name!r} has no closed-form resolvent")
        return _closed_form(query)
    return _alternating(query)


def resolve(problem: SaddleProblem, z, lam: float, *, inner_tol: float = DEFAULT_INNER_TOL,
            max_sweeps: int = DEFAULT_MAX_SWEEPS, method: str = "auto", init=None) -> tuple:
    """``R_lam(z)`` as a point; raises :class:`NoConvergenceError` if unconverged."""
    result = resolvent(ResolventQuery(problem, z, lam, inner_tol, max_sweeps, init, method))
    if not result.converged:
        raise NoConvergenceError(
            f"resolvent of {problem.name} did not converge in {result.sweeps_used} sweeps "
            f"(gap {result.fixed_point_gap:.3e})", result)
    return result.point


# -- property checks ----------------------------------------------------------


@dataclass
class FixedPointEntry:
    candidate: Any
    gap: float
    residual: float
    is_fixed: bool
    is_saddle: bool


@dataclass
class FixedPointReport:
    entries: list[FixedPointEntry] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        """True when fixed points and saddle points coincide on every candidate."""
        return all(e.is_fixed == e.is_saddle for e in self.entries)


def check_fixed_points(problem: SaddleProblem, lam: float, candidates: Sequence, *,
                       probes: Sequence | None = None, inner_tol: float = DEFAULT_INNER_TOL,
                       gap_tol: float | None = None, residual_tol: float = 1e-8,
                       method: str = "auto") -> FixedPointReport:
    """Compare ``d(R_lam z, z)`` with the saddle residual of ``z`` for each candidate."""
    gap_tol = 10 * inner_tol if gap_tol is None else gap_tol
    product = problem.product
    report = FixedPointReport()
    for z in candidates:
        z = problem.check(z)
        rz = resolve(problem, z, lam, inner_tol=inner_tol, method=method)
        gap = product.distance(rz, z)
        res = saddle_residual(problem, z, probes)
        report.entries.append(FixedPointEntry(z, gap, res, gap <= gap_tol, res <= residual_tol))
    return report


def check_resolvent_inequality(problem: SaddleProblem, lam: float, z, w, *,
                               inner_tol: float = DEFAULT_INNER_TOL, method: str = "auto") -> float:
    """LHS - RHS of

    d(Rz, w)^2 + d(Rz, z)^2 + 2 lam [f(x', R2 z) - f(R1 z, y')] <= d(z, w)^2
    """
    d = problem.product.distance
    z, w = problem.check(z), problem.check(w)
    rz = resolve(problem, z, lam, inner_tol=inner_tol, method=method)
    (r1, r2), (xp, yp) = rz, w
    lhs = d(rz, w) ** 2 + d(rz, z) ** 2 + 2.0 * lam * (problem(xp, r2) - problem(r1, yp))
    return lhs - d(z, w) ** 2


def check_resolvent_comparison(problem: SaddleProblem, lam: float, mu: float, z, w, *,
                               inner_tol: float = DEFAULT_INNER_TOL, method: str = "auto") -> float:
    """LHS - RHS of

    (lam+mu) d(R_lam z, R_mu w)^2 + mu d(R_lam z, z)^2 + lam d(R_mu w, w)^2
        <= lam d(R_lam z, w)^2 + mu d(R_mu w, z)^2
    """
    d = problem.product.distance
    z, w = problem.check(z), problem.check(w)
    a = resolve(problem, z, lam, inner_tol=inner_tol, method=method)
    b = resolve(problem, w, mu, inner_tol=inner_tol, method=method)
    lhs = (lam + mu) * d(a, b) ** 2 + mu * d(a, z) ** 2 + lam * d(b, w) ** 2
    return lhs - (lam * d(a, w) ** 2 + mu * d(b, z) ** 2)


@dataclass
class NonspreadingReport:
    firm_residuals: list[float] = field(default_factory=list)
    expansion_residuals: list[float] = field(default_factory=list)
    tol: float = 1e-6

    @property
    def worst_firm(self) -> float:
        return max(self.firm_residuals, default=-math.inf)

    @property
    def worst_expansion(self) -> float:
        return max(self.expansion_residuals, default=-math.inf)

    @property
    def ok(self) -> bool:
        return self.worst_firm <= self.tol and self.worst_expansion <= self.tol


def check_firm_nonspreading_and_nonexpansive(problem: SaddleProblem, lam: float, pairs: Sequence, *,
                                             inner_tol: float = DEFAULT_INNER_TOL, tol: float = 1e-6,
                                             method: str = "auto") -> NonspreadingReport:
    """Firm metric nonspreadingness and nonexpansiveness of ``R_lam`` on each pair."""
    d = problem.product.distance
    report = NonspreadingReport(tol=tol)
    for z, w in pairs:
        z, w = problem.check(z), problem.check(w)
        rz = resolve(problem, z, lam, inner_tol=inner_tol, method=method)
        rw = resolve(problem, w, lam, inner_tol=inner_tol, method=method)
        firm = 2 * d(rz, rw) ** 2 + d(rz, z) ** 2 + d(rw, w) ** 2 - d(rz, w) ** 2 - d(rw, z) ** 2
        report.firm_residuals.append(firm)
        report.expansion_residuals.append(d(rz, rw) - d(z, w))
    return report


def check_step_estimate(problem: SaddleProblem, lam: float, mu: float, z, *,
                        inner_tol: float = DEFAULT_INNER_TOL, method: str = "auto") -> float:
    """``d(R_mu R_lam z, R_lam z) / mu - d(R_lam z, z) / lam``; nonpositive in theory."""
    d = problem.product.distance
    z = problem.check(z)
    rz = resolve(problem, z, lam, inner_tol=inner_tol, method=method)
    rrz = resolve(problem, rz, mu, inner_tol=inner_tol, method=method)
    return d(rrz, rz) / mu - d(rz, z) / lam


@dataclass
class PropertyResiduals:
    """LHS - RHS of each inequality (nonpositive in theory) and the magnitude of its terms.

    ``scale`` is the largest absolute term, so ``value / max(1, scale)`` is the
    violation in units of floating-point resolution of the computation.
    """

    values: dict[str, float]
    scales: dict[str, float]

    def relative(self, key: str) -> float:
        return self.values[key] / max(1.0, self.scales[key])


def property_residuals(problem: SaddleProblem, lam: float, mu: float, z, w, *,
                       inner_tol: float = DEFAULT_INNER_TOL, method: str = "auto") -> PropertyResiduals:
    """All pairwise resolvent inequalities at one instance from four resolvent solves.

    Keys: ``inequality``, ``comparison``, ``firm``, ``nonexpansive`` and
    ``step_estimate``.
    """
    d = problem.product.distance
    z, w = problem.check(z), problem.check(w)
    solve = lambda p, t: resolve(problem, p, t, inner_tol=inner_tol, method=method)
    rz, rw, rmw = solve(z, lam), solve(w, lam), solve(w, mu)
    rrz = solve(rz, mu)
    (r1, r2), (xp, yp) = rz, w
    terms = {
        "inequality": ([d(rz, w) ** 2, d(rz, z) ** 2, 2.0 * lam * problem(xp, r2), -2.0 * lam * problem(r1, yp)],
                       [d(z, w) ** 2]),
        "comparison": ([(lam + mu) * d(rz, rmw) ** 2, mu * d(rz, z) ** 2, lam * d(rmw, w) ** 2],
                       [lam * d(rz, w) ** 2, mu * d(rmw, z) ** 2]),
        "firm": ([2 * d(rz, rw) ** 2, d(rz, z) ** 2, d(rw, w) ** 2], [d(rz, w) ** 2, d(rw, z) ** 2]),
        "nonexpansive": ([d(rz, rw)], [d(z, w)]),
        "step_estimate": ([d(rrz, rz) / mu], [d(rz, z) / lam]),
    }
    values = {k: sum(lhs) - sum(rhs) for k, (lhs, rhs) in terms.items()}
    scales = {k: max(abs(t) for t in lhs + rhs) for k, (lhs, rhs) in terms.items()}
    return PropertyResiduals(values, scales)
