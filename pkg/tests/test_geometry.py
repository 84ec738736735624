import math

import numpy as np
import pytest

from geodesic_minimax.errors import EmptyTailError, ParameterOutOfRangeError, TriangleInequalityError
from geodesic_minimax.geometry import (
    ProductSpace,
    asymptotic_center_estimate,
    check_cn_inequality,
    check_quadrilateral_cs,
    comparison_triangle,
    delta_convergence_probe,
    distance,
    geodesic_point,
    project_to_segment,
)
from geodesic_minimax.spaces import EuclideanSpace, MetricTree, PoincareBall

R2 = EuclideanSpace(2)


def test_euclidean_distance_examples():
    assert distance(R2, [0.3, -1], [0.3, -1]) == 0.0
    assert distance(R2, [0, 0], [3, 4]) == pytest.approx(5.0, abs=1e-15)


def test_geodesic_endpoints_and_affine():
    p, q = np.array([0.0, 0.0]), np.array([2.0, 0.0])
    assert np.array_equal(geodesic_point(R2, p, q, 0.0), p)
    assert np.array_equal(geodesic_point(R2, p, q, 1.0), q)
    np.testing.assert_allclose(geodesic_point(R2, p, q, 0.25), [0.5, 0.0])
    with pytest.raises(ParameterOutOfRangeError):
        geodesic_point(R2, p, q, 1.5)


def test_comparison_triangle_345():
    tri = comparison_triangle(3.0, 4.0, 5.0)
    assert tri.x == (0.0, 0.0)
    assert tri.y == (5.0, 0.0)
    assert tri.z == pytest.approx((3.2, 2.4), abs=1e-15)
    assert tri.side_lengths() == pytest.approx((3.0, 4.0, 5.0), rel=1e-12)


@pytest.mark.parametrize("sides", [(5.0, 3.0, 4.0), (4.0, 5.0, 3.0), (1.0, 1.0, 1.0), (2.0, 1.5, 0.7)])
def test_comparison_triangle_any_longest_side(sides):
    assert comparison_triangle(*sides).side_lengths() == pytest.approx(sides, rel=1e-12)


def test_comparison_triangle_degenerate():
    tri = comparison_triangle(0.0, 0.0, 0.0)
    assert tri.x == tri.y == tri.z == (0.0, 0.0)
    tri = comparison_triangle(1.0, 2.0, 3.0)  # collinear
    assert tri.z[1] == 0.0
    assert 0.0 <= tri.z[0] <= 3.0


def test_comparison_triangle_rejects_bad_sides():
    with pytest.raises(TriangleInequalityError):
        comparison_triangle(1.0, 1.0, 3.0)
    with pytest.raises(TriangleInequalityError):
        comparison_triangle(-1.0, 1.0, 1.0)


def test_cn_equality_in_euclidean_space():
    rng = np.random.default_rng(1)
    for _ in range(20):
        x, y, z = rng.normal(size=(3, 2))
        assert abs(check_cn_inequality(R2, x, y, z, 0.5)) < 1e-12
        assert abs(check_cn_inequality(R2, x, y, z, 0.0)) < 1e-12
    with pytest.raises(ParameterOutOfRangeError):
        check_cn_inequality(R2, x, y, z, -0.1)


def test_cn_poincare_fuzz():
    ball = PoincareBall(2)
    rng = np.random.default_rng(7)
    worst = max(check_cn_inequality(ball, ball.sample(rng, 2.0), ball.sample(rng, 2.0),
                                    ball.sample(rng, 2.0), a)
                for a in np.linspace(0.1, 0.9, 9) for _ in range(111))
    assert worst <= 1e-7


def test_quadrilateral_cs_examples():
    sq = [[0, 0], [1, 0], [1, 1], [0, 1]]
    assert check_quadrilateral_cs(R2, *sq) == pytest.approx(-2.0)
    a, b, c = np.array([0.3, 0.1]), np.array([-1.0, 2.0]), np.array([0.5, 0.5])
    assert check_quadrilateral_cs(R2, a, a, b, c) == pytest.approx(0.0, abs=1e-14)


def test_quadrilateral_cs_tree_fuzz():
    tree = MetricTree(6, [(0, 1, 1.0), (1, 2, 0.7), (1, 3, 1.3), (3, 4, 0.5), (3, 5, 0.9)])
    rng = np.random.default_rng(3)
    worst = max(check_quadrilateral_cs(tree, *[tree.sample(rng) for _ in range(4)]) for _ in range(1000))
    assert worst <= 1e-9


def test_project_to_segment():
    a, b = [0.0, 0.0], [2.0, 0.0]
    np.testing.assert_allclose(project_to_segment(R2, a, b, [1.0, 1.0]), [1.0, 0.0], atol=1e-9)
    np.testing.assert_allclose(project_to_segment(R2, a, b, [5.0, 3.0]), [2.0, 0.0], atol=1e-9)
    np.testing.assert_allclose(project_to_segment(R2, a, b, [0.7, 0.0]), [0.7, 0.0], atol=1e-9)


def test_asymptotic_center_examples():
    c = asymptotic_center_estimate(R2, [np.array([0.3, 0.4])] * 6)
    np.testing.assert_allclose(c.point, [0.3, 0.4])
    assert c.radius == 0.0
    alt = [np.array([0.0, 0.0]), np.array([2.0, 0.0])] * 5
    c = asymptotic_center_estimate(R2, alt)
    np.testing.assert_allclose(c.point, [1.0, 0.0], atol=1e-6)
    assert c.radius == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(EmptyTailError):
        asymptotic_center_estimate(R2, alt, tail_start=50)


def test_asymptotic_center_tree_two_leaves():
    # path 0 - 1 - 2 - 3 with a spur at 1; alternate between leaves 0 and 3
    tree = MetricTree(5, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 2.0), (1, 4, 0.5)])
    pts = [tree.vertex(0), tree.vertex(3)] * 4
    c = asymptotic_center_estimate(tree, pts)
    assert tree.distance(c.point, tree.vertex(0)) == pytest.approx(2.0, abs=1e-6)
    assert c.radius == pytest.approx(2.0, abs=1e-6)


def test_asymptotic_center_unbounded_tail():
    pts = [np.array([10.0**k, 0.0]) for k in range(10)]
    c = asymptotic_center_estimate(R2, pts, diameter_cap=1e3)
    assert c.status == "unbounded-tail"


def test_delta_probe():
    cand = np.array([0.0, 0.0])
    conv = [cand + np.array([2.0**-k, 0.0]) for k in range(40)]
    witnesses = [np.array([1.0, 1.0]), np.array([-2.0, 0.5]), cand]
    rep = delta_convergence_probe(R2, conv, cand, witnesses)
    assert rep.consistent and rep.skipped == [2]

    # rotating unit vectors with shrinking amplitude around the candidate
    spiral = [cand + (1.0 / (k + 1)) * np.array([math.cos(k), math.sin(k)]) for k in range(2000)]
    rep = delta_convergence_probe(R2, spiral, cand, witnesses[:2], tol=1e-2)
    assert rep.consistent

    q = np.array([1.0, 0.0])
    alt = [cand, q] * 10
    rep = delta_convergence_probe(R2, alt, cand, [q])
    assert not rep.consistent
    assert rep.tail_max[0] == pytest.approx(1.0, abs=1e-6)


def test_product_space_metric():
    prod = ProductSpace(R2, EuclideanSpace(1))
    p = (np.array([0.0, 0.0]), np.array([0.0]))
    q = (np.array([3.0, 0.0]), np.array([4.0]))
    assert prod.distance(p, q) == pytest.approx(5.0)
    assert prod.with_metric("ell_inf").distance(p, q) == pytest.approx(4.0)
    mid = prod.geodesic_point(p, q, 0.5)
    np.testing.assert_allclose(mid[0], [1.5, 0.0])
    np.testing.assert_allclose(mid[1], [2.0])
