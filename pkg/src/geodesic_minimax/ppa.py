"""The proximal point algorithm ``z_{n+1} = R_{lam_n}(z_n)`` and its diagnostics."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import ConfigError, NoConvergenceError, ParameterOutOfRangeError
from .geometry import DeltaProbeReport, delta_convergence_probe
from .problems import SaddleProblem
from .resolvent import DEFAULT_INNER_TOL, resolve

DEFAULT_STEP_TOL = 1e-7
DEFAULT_MAX_ITER = 10_000
MIN_VERDICT_LENGTH = 8


@dataclass(frozen=True)
class Schedule:
    """Step sizes ``lam_n`` (n = 1, 2, ...).

    ``constant``: ``lam``; ``power``: ``c * n**(-p)``; ``explicit``: the given
    list, continued by its last value.
    """

    kind: str = "constant"
    lam: float = 1.0
    c: float = 1.0
    p: float = 0.5
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind == "constant":
            if not (self.lam > 0.0 and math.isfinite(self.lam)):
                raise ParameterOutOfRangeError(f"constant schedule needs lam > 0, got {self.lam}")
        elif self.kind == "power":
            if not (self.c > 0.0 and math.isfinite(self.c)) or not (self.p >= 0.0 and math.isfinite(self.p)):
                raise ParameterOutOfRangeError("power schedule needs c > 0 and p >= 0")
        elif self.kind == "explicit":
            if not self.values or not all(v > 0.0 and math.isfinite(v) for v in self.values):
                raise ParameterOutOfRangeError("explicit schedule needs a nonempty list of positive values")
        else:
            raise ParameterOutOfRangeError(f"unknown schedule kind {self.kind!r}")

    @classmethod
    def constant(cls, lam: float = 1.0) -> "Schedule":
        return cls("constant", lam=float(lam))

    @classmethod
    def power(cls, c: float = 1.0, p: float = 0.5) -> "Schedule":
        return cls("power", c=float(c), p=float(p))

    @classmethod
    def explicit(cls, values: Sequence[float]) -> "Schedule":
        return cls("explicit", values=tuple(float(v) for v in values))

    def __call__(self, n: int) -> float:
        if n < 1:
            raise ParameterOutOfRangeError("schedules are indexed from n = 1")
        if self.kind == "constant":
            return self.lam
        if self.kind == "power":
            return self.c * n ** (-self.p)
        return self.values[min(n, len(self.values)) - 1]

    def __iter__(self) -> Iterator[float]:
        n = 1
        while True:
            yield self(n)
            n += 1

    @property
    def sum_diverges(self) -> bool:
        return self.kind != "power" or self.p <= 1.0

    @property
    def sumsq_diverges(self) -> bool:
        return self.kind != "power" or self.p <= 0.5

    def to_json(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "lam": self.lam}
        if self.kind == "power":
            return {"kind": "power", "c": self.c, "p": self.p}
        return {"kind": "explicit", "values": list(self.values)}

    @classmethod
    def from_json(cls, obj) -> "Schedule":
        if obj is None:
            return cls.constant()
        if isinstance(obj, (int, float)):
            return cls.constant(obj)
        try:
            kind = obj.get("kind", "constant")
            if kind == "constant":
                return cls.constant(obj.get("lam", 1.0))
            if kind == "power":
                return cls.power(obj.get("c", 1.0), obj.get("p", 0.5))
            if kind == "explicit":
                return cls.explicit(obj["values"])
        except (AttributeError, KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad schedule: {exc}") from None
        raise ConfigError(f"unknown schedule kind {kind!r}")


@dataclass
class IterateTrace:
    """``iterates[0]`` is z1; step ``k`` maps ``iterates[k]`` to ``iterates[k+1]`` with ``lambdas[k]``."""

    iterates: list = field(default_factory=list)
    lambdas: list[float] = field(default_factory=list)
    steps: list[float] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)
    ref_distances: list[float] | None = None
    truncated: bool = False
    converged: bool = False
    stop_reason: str = ""

    def __len__(self) -> int:
        return len(self.iterates)

    @property
    def final(self):
        return self.iterates[-1]

    def check_consistent(self) -> None:
        n = len(self.iterates) - 1
        if not (len(self.lambdas) == len(self.steps) == len(self.residuals) == max(n, 0)):
            raise ValueError("trace lengths are inconsistent")
        if self.ref_distances is not None and len(self.ref_distances) != len(self.iterates):
            raise ValueError("reference distances do not match the iterates")
        if any(s < 0.0 for s in self.steps):
            raise ValueError("negative step distance")


def run_ppa(problem: SaddleProblem, z1, schedule: Schedule | None = None, *,
            max_iter: int = DEFAULT_MAX_ITER, step_tol: float = DEFAULT_STEP_TOL,
            residual_tol: float | None = None, inner_tol: float = DEFAULT_INNER_TOL,
            reference=None, method: str = "auto") -> IterateTrace:
    """Run ``max_iter`` resolvent steps or until step <= step_tol and residual <= residual_tol.

    ``residual_tol`` defaults to ``step_tol``.  An inner no-convergence ends
    the run early with ``truncated`` set; the trace up to that point is kept.
    """
    schedule = schedule or Schedule.constant()
    residual_tol = step_tol if residual_tol is None else residual_tol
    d = problem.product.distance
    z = problem.check(z1)
    if reference is not None:
        reference = problem.check(reference)
    trace = IterateTrace(iterates=[z], ref_distances=None if reference is None else [d(z, reference)])
    trace.stop_reason = "max_iter"
    for n in range(1, max_iter + 1):
        lam = schedule(n)
        try:
            z_next = resolve(problem, z, lam, inner_tol=inner_tol, method=method)
        except NoConvergenceError:
            trace.truncated = True
            trace.stop_reason = "inner-no-convergence"
            break
        step = d(z_next, z)
        trace.iterates.append(z_next)
        trace.lambdas.append(lam)
        trace.steps.append(step)
        trace.residuals.append(step / lam)
        if reference is not None:
            trace.ref_distances.append(d(z_next, reference))
        z = z_next
        if step <= step_tol and step / lam <= residual_tol:
            trace.converged = True
            trace.stop_reason = "step_tol"
            break
    return trace


def picard_iterate(problem: SaddleProblem, z1, lam: float, n_steps: int, *,
                   inner_tol: float = DEFAULT_INNER_TOL, reference=None,
                   method: str = "auto") -> IterateTrace:
    """Iterate the single resolvent ``R_lam`` exactly ``n_steps`` times."""
    return run_ppa(problem, z1, Schedule.constant(lam), max_iter=n_steps, step_tol=-1.0,
                   inner_tol=inner_tol, reference=reference, method=method)


# -- diagnostics ------------------------------------------------------------


@dataclass
class FejerReport:
    distances: list[float]
    max_violation: float
    slack: float

    @property
    def ok(self) -> bool:
        return self.max_violation <= self.slack


def fejer_check(problem: SaddleProblem, trace: IterateTrace, reference, *,
                slack: float = 10 * DEFAULT_INNER_TOL) -> FejerReport:
    """Largest increase of ``d(reference, z_n)`` between consecutive iterates."""
    d = problem.product.distance
    ref = problem.check(reference)
    dists = [d(ref, z) for z in trace.iterates]
    worst = max((b - a for a, b in zip(dists, dists[1:])), default=0.0)
    return FejerReport(dists, max(worst, 0.0), slack)


@dataclass
class ResidualReport:
    residuals: list[float]
    max_increase: float
    tail: float
    slack: float
    #: None when vanishing is not asserted (schedule or trace outside the hypotheses)
    vanishing: bool | None

    @property
    def monotone(self) -> bool:
        return self.max_increase <= self.slack

    @property
    def ok(self) -> bool:
        return self.monotone and self.vanishing is not False


def residual_series(trace: IterateTrace, schedule: Schedule | None = None, *,
                    slack: float = 10 * DEFAULT_INNER_TOL, tail_tol: float = 1e-6,
                    bounded: bool | None = None) -> ResidualReport:
    """Monotonicity of ``step_n / lam_n`` and, where the hypotheses hold, its vanishing tail.

    The increase is measured relative to ``1 / lam_{n+1}`` because an inexact
    step of size ``inner_tol`` shows up scaled by that factor in the residual.
    """
    res = trace.residuals
    worst = 0.0
    for k in range(1, len(res)):
        worst = max(worst, (res[k] - res[k - 1]) * min(1.0, trace.lambdas[k]))
    tail = res[-1] if res else 0.0
    vanishing = None
    if bounded and (schedule is None or schedule.sumsq_diverges):
        vanishing = tail < tail_tol
    return ResidualReport(list(res), worst, tail, slack, vanishing)


def _radius(problem: SaddleProblem, points: Sequence, center) -> float:
    d = problem.product.distance
    return max((d(center, z) for z in points), default=0.0)


def _diameter(problem: SaddleProblem, points: Sequence) -> float:
    d = problem.product.distance
    return max((d(p, q) for i, p in enumerate(points) for q in points[i + 1:]), default=0.0)


def boundedness_verdict(problem: SaddleProblem, trace: IterateTrace, cap: float = 100.0,
                        step_tol: float = DEFAULT_STEP_TOL) -> str:
    """``"escaped"``, ``"bounded"`` or ``"inconclusive"``.

    Escaped: some iterate is farther than ``cap`` from z1.  Bounded: the run
    converged, or the last quarter has diameter below ``step_tol * length``,
    or the radius around z1 stopped growing over the last quarter.
    """
    pts = trace.iterates
    if _radius(problem, pts, pts[0]) > cap:
        return "escaped"
    if trace.converged:
        return "bounded"
    n = len(pts)
    if n < MIN_VERDICT_LENGTH:
        return "inconclusive"
    head = pts[: (3 * n) // 4]
    tail = pts[(3 * n) // 4:]
    if _diameter(problem, tail) < step_tol * n:
        return "bounded"
    if _radius(problem, pts, pts[0]) - _radius(problem, head, pts[0]) <= step_tol * n:
        return "bounded"
    return "inconclusive"


def delta_probe(problem: SaddleProblem, trace: IterateTrace, candidate=None,
                witnesses: Sequence | None = None, *, tol: float = 1e-6) -> DeltaProbeReport:
    """Delta-convergence probe of the trace toward ``candidate`` (default: the final iterate).

    Default witnesses: the known saddle (if any) and the first iterate.
    """
    candidate = trace.final if candidate is None else candidate
    if witnesses is None:
        witnesses = [trace.iterates[0]]
        if problem.known_saddle is not None:
            witnesses.append(problem.known_saddle)
    return delta_convergence_probe(problem.product, trace.iterates, candidate, witnesses, tol=tol)


# -- CSV ----------------------------------------------------------------------


def trace_to_csv(problem: SaddleProblem, trace: IterateTrace) -> str:
    """Rows n = 1..N for iterates z_n; the step columns of row n describe z_n -> z_{n+1}.

    Floats use ``repr`` (shortest round-trip form); the last row has empty step
    columns.  Coordinates are flattened per backend (tree points as edge, offset).
    """
    prod = problem.product
    ref = trace.ref_distances is not None
    header = ["n", "lambda_n", "step_distance", "residual"]
    if ref:
        header.append("dist_to_reference")
    header += prod.coord_names("")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for k, z in enumerate(trace.iterates):
        row = [str(k + 1)]
        if k < len(trace.steps):
            row += [repr(float(trace.lambdas[k])), repr(float(trace.steps[k])), repr(float(trace.residuals[k]))]
        else:
            row += ["", "", ""]
        if ref:
            row.append(repr(float(trace.ref_distances[k])))
        row += [repr(float(c)) for c in prod.flatten(z)]
        w.writerow(row)
    return buf.getvalue()


def trace_from_csv(problem: SaddleProblem, text: str) -> IterateTrace:
    prod = problem.product
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    ref = "dist_to_reference" in header
    first = 5 if ref else 4
    trace = IterateTrace(ref_distances=[] if ref else None)
    for row in body:
        trace.iterates.append(prod.unflatten([float(c) for c in row[first:]]))
        if row[1] != "":
            trace.lambdas.append(float(row[1]))
            trace.steps.append(float(row[2]))
            trace.residuals.append(float(row[3]))
        if ref:
            trace.ref_distances.append(float(row[4]))
    return trace
