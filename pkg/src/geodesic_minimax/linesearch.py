"""One-dimensional minimisation of convex functions along geodesics.

Golden-section search localises the minimiser; a bracketed root find on a
central-difference slope then recovers the digits that value comparisons lose
near a smooth minimum (values there differ by O(dt**2), far below machine
precision long before dt does).  For functions with a kink at the minimiser
a final golden-section pass in a tiny window takes over.
"""

from __future__ import annotations

import math
from typing import Callable

from scipy.optimize import brentq

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
EPS = 2.220446049250313e-16

_COARSE = 1e-3  # golden-section stop, relative to the bracket width
_DELTA = 1e-7  # central-difference half-width, relative to the bracket width


def golden_section(h: Callable[[float], float], a: float, b: float, tol: float, max_iter: int = 300):
    """Shrink ``[a, b]`` around the minimiser of a unimodal ``h``.

    Returns ``(a, b, t_best, h_best)`` where ``t_best`` is the best interior
    probe.  Ties keep the left half so the smallest minimiser wins.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    hc, hd = h(c), h(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if hc <= hd:
            b, d, hd = d, c, hc
            c = b - INV_PHI * (b - a)
            hc = h(c)
        else:
            a, c, hc = c, d, hd
            d = a + INV_PHI * (b - a)
            hd = h(d)
    if hc <= hd:
        return a, b, c, hc
    return a, b, d, hd


def bracket_minimum(h, lo: float, hi: float, start: float, step: float, max_expand: int = 200):
    """Return a finite interval inside ``[lo, hi]`` holding a minimiser of convex ``h``.

    Expands geometrically from ``start`` in the downhill direction.
    """
    start = min(max(start, lo), hi)
    h0 = h(start)
    for direction in (1.0, -1.0):
        bound = hi if direction > 0 else lo
        t1 = min(max(start + direction * step, lo), hi)
        if t1 == start:
            continue
        h1 = h(t1)
        if h1 >= h0:
            continue
        back, t_prev, h_prev = start, t1, h1
        s = step
        for _ in range(max_expand):
            if t_prev == bound:
                return min(back, bound), max(back, bound)
            s *= 2.0
            t_next = min(max(start + direction * s, lo), hi)
            h_next = h(t_next)
            if h_next >= h_prev:
                return min(back, t_next), max(back, t_next)
            back, t_prev, h_prev = t_prev, t_next, h_next
        raise ArithmeticError("function appears unbounded below along the line")
    return max(start - step, lo), min(start + step, hi)


def minimize_convex(
    h: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    start: float | None = None,
    step: float = 0.5,
    polish: bool = True,
) -> float:
    """Minimise a convex function of one variable over ``[lo, hi]``.

    ``lo``/``hi`` may be infinite, in which case a bracket is grown from
    ``start``.  Set ``polish=False`` only when ``h`` is known to be smooth at
    its minimiser; polishing costs ~45 extra evaluations.
    """
    if math.isinf(lo) or math.isinf(hi):
        if start is None:
            start = 0.0 if lo <= 0.0 <= hi else (lo if math.isfinite(lo) else hi)
        lo, hi = bracket_minimum(h, lo, hi, start, step)
    width = hi - lo
    if not width > 0.0:
        return lo

    a, b, _, _ = golden_section(h, lo, hi, _COARSE * width)
    delta = _DELTA * width

    def slope(t: float) -> float:
        t0, t1 = max(lo, t - delta), min(hi, t + delta)
        return (h(t1) - h(t0)) / (t1 - t0)

    sa, sb = slope(a), slope(b)
    at_end = False
    if sa >= 0.0:
        t, at_end = a, a != lo
    elif sb <= 0.0:
        t, at_end = b, b != hi
    else:
        t = brentq(slope, a, b, xtol=max(1e-15 * width, 1e-300), rtol=4 * EPS, maxiter=200)

    if polish or at_end:
        w0, w1 = max(lo, t - 4 * delta), min(hi, t + 4 * delta)
        _, _, g, hg = golden_section(h, w0, w1, max(1e-15 * width, 1e-300))
        ht = h(t)
        if hg < ht - 16 * EPS * max(1.0, abs(ht)):
            t = g
    return t
