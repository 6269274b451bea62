"""Hyperbolic space in the hyperboloid (Lorentz) model.

Points are vectors x in R^{m+1} with Minkowski square <x,x>_L = -1 and
x0 > 0, where <x,y>_L = -x0*y0 + sum_i xi*yi.  This model gives numerically
stable closed forms for the exponential and logarithm maps.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .base import ATOL, Manifold, as_float_array


def minkowski_dot(x: np.ndarray, y: np.ndarray) -> float:
    return float(-x[0] * y[0] + np.dot(x[1:], y[1:]))


def _sinhc(s):
    """sinh(s)/s, accurate near zero."""
    s = np.asarray(s, dtype=float)
    small = np.abs(s) < 1e-4
    safe = np.where(small, 1.0, s)
    out = np.where(small, 1.0 + s * s / 6.0 + s**4 / 120.0, np.sinh(safe) / safe)
    return out


class Hyperbolic(Manifold):
    """H^m with constant sectional curvature -1."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("Hyperbolic dimension must be >= 1")
        self.kind = "hyperbolic"
        self.dim = int(m)
        self.ambient_shape = (self.dim + 1,)
        self.kappa_min = -1.0
        self.kappa_max = -1.0
        self.r_max = np.inf
        self.inj = np.inf

    def spec_string(self) -> str:
        return f"hyperbolic:{self.dim}"

    def base_point(self) -> np.ndarray:
        x = np.zeros(self.dim + 1)
        x[0] = 1.0
        return x

    def check_point(self, coords: np.ndarray) -> None:
        arr = as_float_array(coords, self.ambient_shape)
        if abs(minkowski_dot(arr, arr) + 1.0) >= ATOL * max(1.0, arr[0] ** 2):
            raise DomainError("hyperboloid point must have Minkowski square -1")
        if arr[0] <= 0:
            raise DomainError("hyperboloid point must lie on the upper sheet")

    def check_tangent(self, base: np.ndarray, v: np.ndarray) -> None:
        arr = as_float_array(v, self.ambient_shape)
        scale = 1.0 + np.linalg.norm(arr) * np.linalg.norm(base)
        if abs(minkowski_dot(base, arr)) >= ATOL * scale:
            raise DomainError("hyperboloid tangent must be Minkowski-orthogonal to base")

    def _project(self, y: np.ndarray) -> np.ndarray:
        # Rescale onto the sheet; guards against drift from rounding.
        q = -minkowski_dot(y, y)
        if q <= 0:
            raise DomainError("cannot project non-timelike vector onto hyperboloid")
        y = y / np.sqrt(q)
        if y[0] < 0:
            y = -y
        return y

    def exp(self, x, v):
        s2 = minkowski_dot(v, v)
        s = np.sqrt(max(s2, 0.0))
        y = np.cosh(s) * x + float(_sinhc(s)) * v
        return self._project(y)

    def log(self, x, y):
        c = max(-minkowski_dot(x, y), 1.0)
        d = float(np.arccosh(c))
        w = y - c * x
        sinh_d = np.sqrt(max(c * c - 1.0, 0.0))
        if sinh_d < 1e-16:
            return np.zeros_like(x)
        return w * (d / sinh_d)

    def dist(self, x, y) -> float:
        c = max(-minkowski_dot(x, y), 1.0)
        if c < 1.0 + 1e-8:
            # chordal form 2*asinh(|x-y|_L / 2): accurate for nearby points
            q = max(minkowski_dot(x - y, x - y), 0.0)
            return float(2.0 * np.arcsinh(np.sqrt(q) / 2.0))
        return float(np.arccosh(c))

    def inner(self, x, u, v) -> float:
        return minkowski_dot(u, v)

    def tangent_basis(self, x) -> np.ndarray:
        # Parallel transport of the standard basis at (1, 0, ..., 0) to x;
        # rows are Minkowski-orthonormal and tangent at x.
        m = self.dim
        basis = np.zeros((m, m + 1))
        shift = x.copy()
        shift[0] += 1.0
        for i in range(m):
            basis[i, i + 1] = 1.0
            basis[i] += (x[i + 1] / (1.0 + x[0])) * shift
        return basis

    def exp_batch(self, x, V):
        s2 = -V[:, 0] ** 2 + np.sum(V[:, 1:] ** 2, axis=1)
        s = np.sqrt(np.maximum(s2, 0.0))
        Y = np.cosh(s)[:, None] * x[None, :] + _sinhc(s)[:, None] * V
        q = np.maximum(Y[:, 0] ** 2 - np.sum(Y[:, 1:] ** 2, axis=1), 1e-300)
        return Y / np.sqrt(q)[:, None]

    def log_dist_batch(self, x, Y, clamp_cut: bool = False):
        c = np.maximum(Y[:, 0] * x[0] - Y[:, 1:] @ x[1:], 1.0)
        d = self.dist_batch(x, Y)
        W = Y - c[:, None] * x[None, :]
        sinh_d = np.sqrt(np.maximum(c * c - 1.0, 0.0))
        scale = np.where(sinh_d > 1e-16, d / np.maximum(sinh_d, 1e-300), 0.0)
        return W * scale[:, None], d

    def dist_batch(self, x, Y):
        c = np.maximum(Y[:, 0] * x[0] - Y[:, 1:] @ x[1:], 1.0)
        diff = Y - x[None, :]
        q = np.maximum(-diff[:, 0] ** 2 + np.sum(diff[:, 1:] ** 2, axis=1), 0.0)
        near = 2.0 * np.arcsinh(np.sqrt(q) / 2.0)
        return np.where(c < 1.0 + 1e-8, near, np.arccosh(c))
