"""Adaptive complex-path quadrature.

Straight segments are integrated by embedded Gauss-Legendre pairs (24 vs
12 nodes) with bisection until the local error estimate meets the target.
Integrands must be vectorized: they receive an ndarray of path points and
return an ndarray of values.  All reductions are serial and in a fixed
order, so results are bit-for-bit reproducible.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericsError

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gl_nodes(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _panel(f, z0, z1, order):
    nodes, weights = gl_nodes(order)
    mid = 0.5 * (z0 + z1)
    half = 0.5 * (z1 - z0)
    vals = f(mid + half * nodes)
    return half * np.sum(weights * vals)


def integrate_segment(f, z0, z1, abs_tol=1e-10, max_depth=24):
    """Integral of f along the straight segment z0 -> z1.

    Returns (value, error_estimate).  Each panel gets an error budget
    proportional to its share of the segment, so the accepted panels sum
    to roughly abs_tol; the estimate is the summed difference between the
    24- and 12-point rules.
    """
    z0 = complex(z0)
    z1 = complex(z1)
    length = abs(z1 - z0)
    if length == 0.0:
        return 0j, 0.0
    total = 0j
    err_total = 0.0
    stack = [(z0, z1, 0)]
    panels = 0
    while stack:
        a, b, depth = stack.pop()
        panels += 1
        if panels > 40000:
            raise NumericsError("quadrature panel budget exhausted")
        hi = _panel(f, a, b, 24)
        lo = _panel(f, a, b, 12)
        err = abs(hi - lo)
        budget = abs_tol * abs(b - a) / length
        if err <= budget or depth >= max_depth:
            total += hi
            err_total += err
        else:
            m = 0.5 * (a + b)
            stack.append((m, b, depth + 1))
            stack.append((a, m, depth + 1))
    return total, err_total


def integrate_path(f, points, abs_tol=1e-10):
    """Integral of f along the polyline through the given points."""
    total = 0j
    err = 0.0
    for z0, z1 in zip(points[:-1], points[1:]):
        v, e = integrate_segment(f, z0, z1, abs_tol)
        total += v
        err += e
    return total, err


def vertical_ray_up(f, x, height, abs_tol=1e-10, grow=8.0):
    """Integral of f over s = x + it, t in [0, height], taken upward.

    Panels widen geometrically with height (the integrands here decay
    exponentially); ds = i dt is included.
    """
    total = 0j
    err = 0.0
    t0 = 0.0
    width = 2.0
    while t0 < height:
        t1 = min(height, t0 + width)
        v, e = integrate_segment(f, complex(x, t0), complex(x, t1), abs_tol)
        total += v
        err += e
        t0 = t1
        width = min(width * 1.5, grow)
    return total, err


def vertical_ray_down(f, x, depth, abs_tol=1e-10, grow=8.0):
    """Integral of f over s = x + it, t in [-depth, 0], taken upward."""
    total = 0j
    err = 0.0
    t1 = 0.0
    width = 2.0
    while t1 > -depth:
        t0 = max(-depth, t1 - width)
        v, e = integrate_segment(f, complex(x, t0), complex(x, t1), abs_tol)
        total += v
        err += e
        t1 = t0
        width = min(width * 1.5, grow)
    return total, err
