import math

import numpy as np
import pytest

from geodesic_minimax.errors import ConfigError, ParameterOutOfRangeError
from geodesic_minimax.ppa import (
    IterateTrace,
    Schedule,
    boundedness_verdict,
    delta_probe,
    fejer_check,
    picard_iterate,
    residual_series,
    run_ppa,
    trace_from_csv,
    trace_to_csv,
)
from geodesic_minimax.problems import get_problem


def arr(*v):
    return np.array(v, dtype=float)


BIL = get_problem("bilinear")
SF = get_problem("saddle_free")
Z1 = (arr(1), arr(0))
ORIGIN = (arr(0), arr(0))


def norm(z):
    return math.hypot(float(z[0][0]), float(z[1][0]))


def test_schedule_flags():
    assert Schedule.constant(2.0).sum_diverges and Schedule.constant(2.0).sumsq_diverges
    assert Schedule.power(1.0, 0.5).sumsq_diverges
    s = Schedule.power(1.0, 0.75)
    assert s.sum_diverges and not s.sumsq_diverges
    s = Schedule.power(1.0, 1.5)
    assert not s.sum_diverges and not s.sumsq_diverges
    e = Schedule.explicit([3.0, 2.0])
    assert [e(n) for n in (1, 2, 3, 10)] == [3.0, 2.0, 2.0, 2.0]
    assert Schedule.power(2.0, 0.5)(4) == pytest.approx(1.0)


def test_schedule_validation_and_json():
    with pytest.raises(ParameterOutOfRangeError):
        Schedule.constant(0.0)
    with pytest.raises(ParameterOutOfRangeError):
        Schedule.explicit([1.0, -1.0])
    with pytest.raises(ConfigError):
        Schedule.from_json({"kind": "cosine"})
    for s in (Schedule.constant(0.5), Schedule.power(2.0, 0.6), Schedule.explicit([1.0, 0.5])):
        assert Schedule.from_json(s.to_json()) == s


def test_zero_problem_constant_trace():
    zero = get_problem("zero")
    tr = run_ppa(zero, (arr(0.4), arr(-0.2)), max_iter=100)
    assert len(tr.steps) == 1 and tr.converged and tr.steps[0] == 0.0


def test_bilinear_norm_recursion():
    tr = run_ppa(BIL, Z1, Schedule.constant(1.0), max_iter=30, step_tol=0.0)
    for k, z in enumerate(tr.iterates):
        assert norm(z) == pytest.approx(2.0 ** (-k / 2.0), abs=1e-12)
    assert norm(tr.final) < 1e-4
    tr.check_consistent()


def test_saddle_free_escapes_linearly():
    tr = run_ppa(SF, ORIGIN, Schedule.constant(1.0), max_iter=10)
    for k, (x, y) in enumerate(tr.iterates):
        assert float(x[0]) == float(y[0]) == float(k)
    assert tr.steps == pytest.approx([math.sqrt(2.0)] * 10)


def test_picard_equals_constant_ppa():
    a = picard_iterate(BIL, Z1, 0.8, 20)
    b = run_ppa(BIL, Z1, Schedule.constant(0.8), max_iter=20, step_tol=-1.0)
    assert len(a.iterates) == 21
    assert all(BIL.product.distance(p, q) == 0.0 for p, q in zip(a.iterates, b.iterates))


def test_picard_from_saddle_is_constant():
    quad = get_problem("quadratic")
    tr = picard_iterate(quad, quad.known_saddle, 1.0, 5)
    assert all(s == 0.0 for s in tr.steps)


def test_fejer_examples():
    lam = 0.5
    tr = run_ppa(BIL, Z1, Schedule.constant(lam), max_iter=20, step_tol=0.0)
    rep = fejer_check(BIL, tr, ORIGIN)
    ratios = [b / a for a, b in zip(rep.distances, rep.distances[1:])]
    assert ratios == pytest.approx([1 / math.sqrt(1 + lam**2)] * 20)
    assert rep.ok and rep.max_violation == 0.0
    quad = get_problem("quadratic")
    tr = run_ppa(quad, quad.sample(np.random.default_rng(0)), max_iter=200)
    assert fejer_check(quad, tr, quad.known_saddle).ok
    const = picard_iterate(quad, quad.known_saddle, 1.0, 4)
    assert fejer_check(quad, const, quad.known_saddle).distances == [0.0] * 5


def test_residual_series_examples():
    tr = run_ppa(BIL, Z1, Schedule.constant(1.0), max_iter=50, step_tol=0.0)
    rep = residual_series(tr, Schedule.constant(1.0), bounded=True)
    assert rep.monotone and rep.vanishing and rep.tail < 1e-6
    tr = run_ppa(SF, ORIGIN, Schedule.constant(1.0), max_iter=50)
    rep = residual_series(tr, Schedule.constant(1.0), bounded=False)
    assert rep.monotone and rep.vanishing is None
    assert rep.tail == pytest.approx(math.sqrt(2.0))


def test_boundedness_verdicts():
    tr = run_ppa(BIL, Z1, max_iter=100)
    assert boundedness_verdict(BIL, tr) == "bounded"
    tr = run_ppa(SF, ORIGIN, max_iter=120)
    assert boundedness_verdict(SF, tr, cap=100.0) == "escaped"
    first = next(k for k, z in enumerate(tr.iterates) if SF.product.distance(z, ORIGIN) > 100.0)
    assert first == 71
    short = IterateTrace(iterates=tr.iterates[:3], lambdas=tr.lambdas[:2], steps=tr.steps[:2],
                         residuals=tr.residuals[:2], truncated=True)
    assert boundedness_verdict(SF, short, cap=100.0) == "inconclusive"


def test_truncated_on_inner_failure():
    box = get_problem("bilinear_box")
    tr = run_ppa(box, (arr(0.9), arr(0.9)), Schedule.constant(50.0), max_iter=10)
    assert not tr.truncated
    import geodesic_minimax.ppa as ppa_mod

    orig = ppa_mod.resolve

    def flaky(problem, z, lam, **kw):
        return orig(problem, z, lam, max_sweeps=1, **kw)

    ppa_mod.resolve = flaky
    try:
        tr = run_ppa(box, (arr(0.9), arr(0.9)), Schedule.constant(50.0), max_iter=10)
    finally:
        ppa_mod.resolve = orig
    assert tr.truncated and tr.stop_reason == "inner-no-convergence"
    assert len(tr.iterates) == 1


def test_delta_probe_on_converged_trace():
    tr = run_ppa(BIL, Z1, max_iter=100, step_tol=0.0)
    rep = delta_probe(BIL, tr, BIL.known_saddle, witnesses=[(arr(1), arr(1)), (arr(-2), arr(0.5))])
    assert rep.consistent


def test_csv_round_trip():
    for name in ("bilinear", "tree", "hyperbolic"):
        p = get_problem(name)
        z1 = p.sample(np.random.default_rng(4))
        tr = run_ppa(p, z1, max_iter=15, reference=p.known_saddle)
        back = trace_from_csv(p, trace_to_csv(p, tr))
        assert back.lambdas == tr.lambdas
        assert back.steps == tr.steps
        assert back.residuals == tr.residuals
        assert back.ref_distances == tr.ref_distances
        assert all(p.product.distance(a, b) == 0.0 for a, b in zip(back.iterates, tr.iterates))
    header = trace_to_csv(BIL, run_ppa(BIL, Z1, max_iter=2)).splitlines()[0]
    assert header == "n,lambda_n,step_distance,residual,x_0,y_0"
