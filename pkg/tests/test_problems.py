import numpy as np
import pytest

from geodesic_minimax.errors import ConfigError, EmptyProbeSetError
from geodesic_minimax.problems import (
    SaddleProblem,
    bifunction,
    certificate_violations,
    coercivity_probe,
    get_problem,
    library,
    problem_from_config,
    saddle_residual,
)
from geodesic_minimax.spaces import EuclideanSpace, GridSpec


def arr(*v):
    return np.array(v, dtype=float)


def test_bifunction_examples():
    bil = get_problem("bilinear")
    assert bifunction(bil, (arr(1), arr(2)), (arr(3), arr(4))) == -2.0
    z = (arr(0.4), arr(-0.3))
    assert bifunction(bil, z, z) == 0.0
    zero = get_problem("zero")
    assert bifunction(zero, (arr(1), arr(2)), (arr(3), arr(4))) == 0.0


def test_saddle_residual_examples():
    box = get_problem("bilinear_box")
    grid, _ = box.space_x.grid(GridSpec(21))
    probes = [(x, y) for x in grid for y in grid]
    assert saddle_residual(box, (arr(0), arr(0)), probes) == 0.0
    assert saddle_residual(box, (arr(0.5), arr(0)), [(arr(0.5), arr(-1))]) == pytest.approx(0.5)
    assert saddle_residual(get_problem("zero"), (arr(3), arr(-2))) == 0.0
    with pytest.raises(EmptyProbeSetError):
        saddle_residual(box, (arr(0), arr(0)), [])


def test_known_saddles_have_zero_residual():
    for entry in library():
        p = entry.problem
        if p.known_saddle is not None:
            assert saddle_residual(p, p.known_saddle) <= 1e-12, entry.name


def test_matrix_game_saddle_is_pure():
    game = get_problem("matrix_game")
    assert saddle_residual(game, (arr(1, 0), arr(1, 0))) == 0.0
    # the uniform pair is not a saddle of this game
    assert saddle_residual(game, (arr(0.5, 0.5), arr(0.5, 0.5))) > 0.1
    assert saddle_residual(get_problem("matching_pennies"), (arr(0.5, 0.5), arr(0.5, 0.5))) == 0.0


def test_coercivity_examples():
    R = EuclideanSpace(1)
    quad = SaddleProblem("q", R, R, lambda x, y: float(-x[0] ** 2 + y[0] ** 2))
    rep = coercivity_probe(quad, arr(0), arr(0), [1, 2, 4, 8])
    assert rep.consistent
    assert rep.worst[-1] == pytest.approx(-64.0, rel=0.2)
    rep = coercivity_probe(get_problem("saddle_free"), arr(0), arr(0), [1, 2, 4, 8])
    assert not rep.consistent
    rep = coercivity_probe(get_problem("zero"), arr(0), arr(0), [1, 2, 4, 8])
    assert not rep.consistent and rep.worst == [0.0] * 4


def test_certificates_hold_where_declared():
    rng = np.random.default_rng(0)
    for name in ("bilinear_box", "quadratic", "hyperbolic", "tree", "sion_quasi", "matching_pennies"):
        worst = certificate_violations(get_problem(name), rng, n=200)
        assert all(v <= 1e-7 for v in worst.values()), (name, worst)


def test_sion_example_is_not_concave():
    rng = np.random.default_rng(1)
    p = get_problem("sion_quasi")
    p_concave = SaddleProblem(p.name, p.space_x, p.space_y, p.f)  # claims concavity
    assert certificate_violations(p_concave, rng, n=300)["concave_x"] > 1e-3


def test_problem_from_config():
    assert problem_from_config("tree").name == "tree"
    p = problem_from_config({"family": "matrix_game", "A": [[1, -1], [-1, 1]]})
    assert p.space_x.constraint == "simplex"
    p = problem_from_config({"family": "distance_saddle", "space": {"kind": "poincare"},
                             "a": [0.1, 0.0], "b": [0.0, 0.2]})
    assert saddle_residual(p, p.known_saddle) == 0.0
    with pytest.raises(ConfigError):
        problem_from_config("nonexistent")
    with pytest.raises(ConfigError):
        problem_from_config({"family": "matrix_game"})
