import json

import numpy as np
import pytest

from geodesic_minimax.errors import GridTooLargeError
from geodesic_minimax.oracle import (
    estimate_lipschitz,
    grid_minimax,
    max_evals,
    oracle_vs_solver,
    report_to_json,
    sion_gap_study,
)
from geodesic_minimax.ppa import run_ppa
from geodesic_minimax.problems import SaddleProblem, get_problem, library
from geodesic_minimax.spaces import EuclideanSpace, GridSpec


def test_zero_problem():
    rep = grid_minimax(get_problem("zero"), GridSpec(11))
    assert rep.maxmin == rep.minmax == rep.gap == 0.0
    assert rep.approximation == "boxed approximation"


def test_mixed_quadratic_on_square():
    box = EuclideanSpace.box([-1.0], [1.0])
    p = SaddleProblem("mixed", box, box, lambda x, y: float(-x[0] ** 2 + y[0] ** 2 + x[0] * y[0]))
    rep = grid_minimax(p, GridSpec(201))
    assert abs(rep.maxmin) <= 2 * rep.step**2
    assert abs(rep.minmax) <= 2 * rep.step**2
    assert rep.gap <= 2 * rep.step**2
    for pt in (rep.maxmin_point, rep.minmax_point):
        assert abs(float(pt[0][0])) <= rep.step or abs(float(pt[1][0])) <= rep.step
    cand = rep.saddle_candidate
    assert abs(float(cand[0][0])) <= rep.step and abs(float(cand[1][0])) <= rep.step


def test_matrix_games():
    rep = grid_minimax(get_problem("matching_pennies"), GridSpec(101))
    assert rep.maxmin == rep.minmax == 0.0
    np.testing.assert_allclose(rep.saddle_candidate[0], [0.5, 0.5])
    np.testing.assert_allclose(rep.saddle_candidate[1], [0.5, 0.5])
    rep = grid_minimax(get_problem("matrix_game"), GridSpec(101))
    assert rep.maxmin == rep.minmax == 0.0


def test_tie_break_first_in_order():
    rep = grid_minimax(get_problem("zero"), GridSpec(5))
    assert float(rep.maxmin_point[0][0]) == -1.0 and float(rep.maxmin_point[1][0]) == -1.0


def test_weak_duality_on_every_entry():
    for entry in library():
        rep = grid_minimax(entry.problem, GridSpec(7))
        assert rep.maxmin <= rep.minmax + 1e-12, entry.name


def test_maxmin_monotone_under_refinement():
    # nested x-grids (5 -> 9 -> 17 points) against a fixed y-grid
    p = get_problem("control")
    vals = [grid_minimax(p, GridSpec(r), GridSpec(9)).maxmin for r in (5, 9, 17)]
    assert vals[0] <= vals[1] <= vals[2]


def test_gap_study():
    study = sion_gap_study(get_problem("bilinear_box"), (11, 51, 201))
    assert study.within_bounds and study.shrinking and study.weak_duality
    study = sion_gap_study(get_problem("control"), (11, 51))
    assert min(study.gaps) > 0.1


def test_lipschitz_estimate_bilinear():
    L = estimate_lipschitz(get_problem("bilinear_box"), GridSpec(21), n=3000)
    assert 1.0 < L <= np.sqrt(2.0) + 1e-9


def test_grid_cap(monkeypatch):
    p = get_problem("quadratic_line")
    with pytest.raises(GridTooLargeError):
        grid_minimax(p, GridSpec(100_000))
    monkeypatch.setenv("GM_MAX_EVALS", "100")
    assert max_evals() == 100
    with pytest.raises(GridTooLargeError):
        grid_minimax(p, GridSpec(11))
    monkeypatch.setenv("GM_MAX_EVALS", "121")
    grid_minimax(p, GridSpec(11))


def test_oracle_vs_solver():
    for name in ("bilinear_box", "quadratic_line"):
        p = get_problem(name)
        rep = grid_minimax(p, GridSpec(201))
        tr = run_ppa(p, p.sample(np.random.default_rng(0)), max_iter=500)
        cmp = oracle_vs_solver(p, rep, tr)
        assert cmp.ok, name
    zero = get_problem("zero")
    tr = run_ppa(zero, (np.array([0.3]), np.array([0.1])), max_iter=3)
    assert oracle_vs_solver(zero, grid_minimax(zero, GridSpec(5)), tr).value_difference == 0.0


def test_report_json_deterministic():
    p = get_problem("tree")
    a = json.dumps(report_to_json(p, grid_minimax(p, GridSpec(5))), sort_keys=True)
    b = json.dumps(report_to_json(p, grid_minimax(p, GridSpec(5))), sort_keys=True)
    assert a == b
