import math

import numpy as np
import pytest

from geodesic_minimax.errors import InvalidLambdaError, NoConvergenceError
from geodesic_minimax.problems import get_problem, library
from geodesic_minimax.resolvent import (
    ResolventQuery,
    check_firm_nonspreading_and_nonexpansive,
    check_fixed_points,
    check_resolvent_comparison,
    check_resolvent_inequality,
    check_step_estimate,
    property_residuals,
    resolve,
    resolvent,
)


def arr(*v):
    return np.array(v, dtype=float)


BIL = get_problem("bilinear")


def test_zero_problem_resolvent_is_identity():
    zero = get_problem("zero")
    z = (arr(0.7), arr(-1.2))
    for method in ("auto", "alternating"):
        rz = resolve(zero, z, 3.0, method=method)
        assert zero.product.distance(rz, z) == 0.0


def test_bilinear_closed_form_example():
    u, v = resolve(BIL, (arr(1), arr(0)), 1.0)
    assert float(u[0]) == 0.5 and float(v[0]) == -0.5


@pytest.mark.parametrize("lam", [0.01, 0.3, 1.0, 5.0, 50.0])
def test_alternating_matches_closed_form(lam):
    rng = np.random.default_rng(int(lam * 100))
    for _ in range(5):
        z = BIL.sample(rng, 2.0)
        got = resolvent(ResolventQuery(BIL, z, lam, method="alternating"))
        assert got.converged
        assert BIL.product.distance(got.point, BIL.closed_form_resolvent(*z, lam)) <= 1e-7


@pytest.mark.parametrize("name", ["quadratic", "hyperbolic", "tree"])
def test_alternating_matches_closed_form_on_curved_backends(name):
    p = get_problem(name)
    rng = np.random.default_rng(2)
    for lam in (0.1, 1.0, 10.0):
        z = p.sample(rng)
        got = resolve(p, z, lam, method="alternating")
        assert p.product.distance(got, p.closed_form_resolvent(*z, lam)) <= 1e-7


def test_generic_result_is_regularised_saddle():
    p = get_problem("matching_pennies")
    rng = np.random.default_rng(5)
    for lam in (0.1, 1.0, 10.0):
        res = resolvent(ResolventQuery(p, p.sample(rng), lam))
        assert res.converged and res.method == "alternating"
        assert res.regularized_residual <= 1e-8


def test_invalid_lambda():
    with pytest.raises(InvalidLambdaError):
        resolve(BIL, (arr(0), arr(0)), 0.0)
    with pytest.raises(InvalidLambdaError):
        resolve(BIL, (arr(0), arr(0)), math.inf)


def test_no_convergence_is_flagged_and_raised():
    p = get_problem("bilinear_box")
    q = ResolventQuery(p, (arr(0.9), arr(0.9)), 50.0, max_sweeps=1)
    res = resolvent(q)
    assert not res.converged
    with pytest.raises(NoConvergenceError) as info:
        resolve(p, (arr(0.9), arr(0.9)), 50.0, max_sweeps=1)
    assert info.value.result is not None


def test_fixed_points_match_saddles():
    quad = get_problem("quadratic")
    rep = check_fixed_points(quad, 1.0, [quad.known_saddle])
    assert rep.consistent and rep.entries[0].gap <= 1e-8 and rep.entries[0].residual <= 1e-8
    rep = check_fixed_points(BIL, 0.7, [(arr(0), arr(0)), (arr(1), arr(1))])
    assert rep.consistent
    assert rep.entries[0].gap == 0.0
    lam = 0.7
    expected = math.hypot(1 - (1 + lam) / (1 + lam**2), 1 - (1 - lam) / (1 + lam**2))
    assert rep.entries[1].gap == pytest.approx(expected)
    assert rep.entries[1].residual > 0.0


def test_resolvent_inequality_examples():
    s = BIL.known_saddle
    assert check_resolvent_inequality(BIL, 1.0, s, s) == 0.0
    z = (arr(1), arr(0.5))
    w = BIL.closed_form_resolvent(*z, 1.0)
    assert check_resolvent_inequality(BIL, 1.0, z, w) <= 0.0


def test_comparison_examples():
    z = (arr(0.3), arr(-0.8))
    assert check_resolvent_comparison(BIL, 1.3, 1.3, z, z) == pytest.approx(0.0, abs=1e-15)
    assert check_resolvent_comparison(BIL, 1.0, 2.0, (arr(1), arr(0)), (arr(0), arr(1))) <= 1e-15


def test_nonexpansive_contraction_factor():
    z, w = (arr(1), arr(0)), (arr(-0.5), arr(2))
    lam = 2.0
    rep = check_firm_nonspreading_and_nonexpansive(BIL, lam, [(z, w), (z, z)])
    assert rep.ok
    d = BIL.product.distance
    rz, rw = resolve(BIL, z, lam), resolve(BIL, w, lam)
    assert d(rz, rw) == pytest.approx(d(z, w) / math.sqrt(1 + lam**2))
    assert rep.firm_residuals[1] == pytest.approx(0.0, abs=1e-15)


def test_step_estimate_examples():
    assert check_step_estimate(BIL, 1.0, 1.0, BIL.known_saddle) == 0.0
    # R1 z = (0.5, -0.5), R1 R1 z = (0, -0.5)
    assert check_step_estimate(BIL, 1.0, 1.0, (arr(1), arr(0))) == pytest.approx(0.5 - math.sqrt(0.5))


def test_property_residuals_across_library():
    rng = np.random.default_rng(11)
    for entry in library():
        p = entry.problem
        if not p.certificates.concave_convex or entry.name == "control":
            continue
        for _ in range(3):
            lam, mu = (float(v) for v in np.exp(rng.uniform(-2, 2, 2)))
            res = property_residuals(p, lam, mu, p.sample(rng), p.sample(rng))
            assert max(res.values.values()) <= 1e-6, entry.name
