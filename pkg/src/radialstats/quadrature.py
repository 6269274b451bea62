"""Numerical integration helpers.

One-dimensional integrals go through scipy's adaptive Gauss-Kronrod
routine.  The two-dimensional reductions used by the divergence and scan
code get a vectorized adaptive integrator based on nested Gauss-Legendre
rules with cell bisection; every result carries an error estimate and a
convergence flag.  All tolerances are relative with an absolute floor.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import IndeterminateError

#: Absolute tolerance floor applied everywhere.
ABS_FLOOR = 1e-14

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_rule(order: int):
    if order not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(order)
        # transform from [-1, 1] to [0, 1]
        _GL_CACHE[order] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[order]


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    converged: bool

    def __float__(self) -> float:
        return self.value


def _cell_estimates(f, x0, x1, y0, y1):
    """Low/high order tensor estimates of the integral over one cell."""
    area = (x1 - x0) * (y1 - y0)
    out = []
    for order in (8, 16):
        nodes, weights = _gl_rule(order)
        gx = x0 + (x1 - x0) * nodes
        gy = y0 + (y1 - y0) * nodes
        X, Y = np.meshgrid(gx, gy, indexing="ij")
        vals = f(X.ravel(), Y.ravel()).reshape(order, order)
        out.append(area * float(weights @ vals @ weights))
    return out[0], out[1]


def adaptive_quad_2d(
    f,
    x_range: tuple[float, float],
    y_range: tuple[float, float],
    epsrel: float = 1e-9,
    epsabs: float = ABS_FLOOR,
    max_cells: int = 4096,
) -> QuadResult:
    """Integrate a vectorized ``f(x, y)`` over a rectangle adaptively.

    Cells are bisected along their longer side, worst estimated error
    first, until the summed error estimate meets
    ``max(epsabs, epsrel * |integral|)`` or the cell budget runs out (in
    which case the result is flagged unconverged).
    """
    x0, x1 = x_range
    y0, y1 = y_range
    lo, hi = _cell_estimates(f, x0, x1, y0, y1)
    # heap entries: (-err, counter, x0, x1, y0, y1, value)
    counter = 0
    heap = [(-abs(hi - lo), counter, x0, x1, y0, y1, hi)]
    total = hi
    total_err = abs(hi - lo)
    cells = 1
    while total_err > max(epsabs, epsrel * abs(total)) and cells < max_cells:
        neg_err, _, cx0, cx1, cy0, cy1, cval = heapq.heappop(heap)
        total -= cval
        total_err -= -neg_err
        if (cx1 - cx0) >= (cy1 - cy0):
            xm = 0.5 * (cx0 + cx1)
            children = [(cx0, xm, cy0, cy1), (xm, cx1, cy0, cy1)]
        else:
            ym = 0.5 * (cy0 + cy1)
            children = [(cx0, cx1, cy0, ym), (cx0, cx1, ym, cy1)]
        for child in children:
            lo, hi = _cell_estimates(f, *child)
            counter += 1
            heapq.heappush(heap, (-abs(hi - lo), counter, *child, hi))
            total += hi
            total_err += abs(hi - lo)
        cells += 1
    converged = total_err <= max(epsabs, epsrel * abs(total))
    return QuadResult(value=float(total), error=float(total_err), converged=converged)


def quad_1d(f, lo: float, hi: float, epsrel: float = 1e-10) -> float:
    """Adaptive 1-D integral with this package's default tolerances."""
    val, _ = quad(f, lo, hi, epsabs=ABS_FLOOR, epsrel=epsrel, limit=400)
    return float(val)


def cumulative_weight_table(weight, r_hi: float, nodes: int):
    """Cumulative integral of a vectorized weight on a uniform grid.

    Returns ``(grid, cumulative)`` where ``cumulative[i]`` approximates the
    integral of ``weight`` from 0 to ``grid[i]``, computed with a fixed
    Gauss-Legendre rule per interval (exact to rule order for smooth
    weights).
    """
    grid = np.linspace(0.0, r_hi, nodes)
    gl_nodes, gl_weights = _gl_rule(8)
    h = grid[1] - grid[0]
    pts = grid[:-1, None] + h * gl_nodes[None, :]
    vals = weight(pts.ravel()).reshape(pts.shape)
    increments = h * (vals @ gl_weights)
    cumulative = np.concatenate([[0.0], np.cumsum(increments)])
    return grid, cumulative


def truncation_radius(
    integrand,
    r_start: float = 1.0,
    rel_tail: float = 1e-12,
    r_limit: float = 1e6,
) -> float:
    """Radius beyond which the integrand's tail mass is negligible.

    Doubles the horizon until the next segment's mass, padded with a
    geometric continuation bound, drops below ``rel_tail`` of the total.
    Raises :class:`IndeterminateError` when no decaying tail is found
    before ``r_limit``.
    """
    r = float(r_start)
    total = quad_1d(integrand, 0.0, r, epsrel=1e-9)
    while r < r_limit:
        seg = quad_1d(integrand, r, 2.0 * r, epsrel=1e-9)
        g_near, g_far = float(integrand(r)), float(integrand(2.0 * r))
        ratio = g_far / g_near if g_near > 0 else 0.0
        total_here = total + seg
        if ratio < 0.5 and total_here > 0:
            tail_bound = seg * (1.0 + ratio / (1.0 - ratio))
            if tail_bound < rel_tail * total_here:
                return 2.0 * r
        total = total_here
        r *= 2.0
    raise IndeterminateError(
        f"integrand tail does not decay within r <= {r_limit:g}"
    )
