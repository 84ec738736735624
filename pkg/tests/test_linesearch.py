import math

import pytest

from geodesic_minimax.linesearch import bracket_minimum, golden_section, minimize_convex


def test_smooth_minimum_to_high_precision():
    t = minimize_convex(lambda t: (t - 0.3141592653589793) ** 2, -5.0, 5.0, polish=False)
    assert t == pytest.approx(0.3141592653589793, abs=1e-10)


def test_kink_minimum_exact():
    t = minimize_convex(lambda t: abs(t - 0.7), 0.0, 2.0)
    assert t == pytest.approx(0.7, abs=1e-12)


def test_boundary_minimum():
    assert minimize_convex(lambda t: t, 1.0, 3.0) == pytest.approx(1.0, abs=1e-12)
    assert minimize_convex(lambda t: -t, 1.0, 3.0) == pytest.approx(3.0, abs=1e-12)


def test_unbounded_interval_brackets():
    t = minimize_convex(lambda t: (t - 40.0) ** 2, -math.inf, math.inf, start=0.0)
    assert t == pytest.approx(40.0, abs=1e-8)
    lo, hi = bracket_minimum(lambda t: (t + 3.0) ** 2, -math.inf, math.inf, 0.0, 0.5)
    assert lo <= -3.0 <= hi


def test_unbounded_below_raises():
    with pytest.raises(ArithmeticError):
        minimize_convex(lambda t: t, -math.inf, math.inf)


def test_golden_section_shrinks():
    a, b, t, _ = golden_section(lambda t: (t - 1.0) ** 2, 0.0, 3.0, 1e-6)
    assert b - a <= 1e-6
    assert t == pytest.approx(1.0, abs=1e-6)
