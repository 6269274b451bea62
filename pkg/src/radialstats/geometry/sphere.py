"""The unit m-sphere embedded in R^{m+1}."""

from __future__ import annotations

import numpy as np

from ..errors import CutLocusError, DomainError
from .base import ATOL, Manifold, as_float_array

#: Logarithm maps are rejected this close to the antipode.
ANTIPODAL_MARGIN = 1e-9


class Sphere(Manifold):
    """S^m = {x in R^{m+1} : |x| = 1} with the round metric (curvature +1).

    Requires m >= 2; the circle is excluded because it is not simply
    connected.
    """

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("Sphere dimension must be >= 2")
        self.kind = "sphere"
        self.dim = int(m)
        self.ambient_shape = (self.dim + 1,)
        self.kappa_min = 1.0
        self.kappa_max = 1.0
        self.r_max = np.pi
        self.inj = np.pi

    def spec_string(self) -> str:
        return f"sphere:{self.dim}"

    def check_point(self, coords: np.ndarray) -> None:
        arr = as_float_array(coords, self.ambient_shape)
        if abs(np.dot(arr, arr) - 1.0) >= ATOL:
            raise DomainError("sphere point must be a unit vector")

    def check_tangent(self, base: np.ndarray, v: np.ndarray) -> None:
        arr = as_float_array(v, self.ambient_shape)
        if abs(np.dot(base, arr)) >= ATOL * (1.0 + np.linalg.norm(arr)):
            raise DomainError("sphere tangent must be orthogonal to the base point")

    def _normalize(self, y: np.ndarray) -> np.ndarray:
        return y / np.linalg.norm(y)

    def exp(self, x, v):
        theta = float(np.linalg.norm(v))
        if theta < 1e-16:
            return self._normalize(x + v)
        y = np.cos(theta) * x + (np.sin(theta) / theta) * v
        return self._normalize(y)

    def log(self, x, y):
        c = float(np.clip(np.dot(x, y), -1.0, 1.0))
        d = float(np.arccos(c))
        if d >= np.pi - ANTIPODAL_MARGIN:
            raise CutLocusError(
                "logarithm map undefined: points are antipodal within tolerance"
            )
        if d < 1e-16:
            return np.zeros_like(x)
        w = y - c * x
        return w * (d / np.linalg.norm(w))

    def dist(self, x, y) -> float:
        # Chordal two-branch arc length: accurate both near 0 and near pi,
        # unlike arccos of the inner product.
        if np.dot(x, y) >= 0:
            return float(2.0 * np.arcsin(min(np.linalg.norm(y - x) / 2.0, 1.0)))
        return float(np.pi - 2.0 * np.arcsin(min(np.linalg.norm(y + x) / 2.0, 1.0)))

    def inner(self, x, u, v) -> float:
        return float(np.dot(u, v))

    def tangent_basis(self, x) -> np.ndarray:
        # Householder reflection sending e1 to -sign(x0)*x; the remaining
        # columns are an orthonormal basis of the orthogonal complement of x.
        # The sign choice keeps the reflector vector well away from zero.
        n = self.dim + 1
        e1 = np.zeros(n)
        e1[0] = 1.0
        w = x + e1 if x[0] >= 0 else x - e1
        w = w / np.linalg.norm(w)
        H = np.eye(n) - 2.0 * np.outer(w, w)
        return H[:, 1:].T

    def exp_batch(self, x, V):
        theta = np.linalg.norm(V, axis=1)
        # sinc(theta/pi) = sin(theta)/theta, exact at zero
        Y = np.cos(theta)[:, None] * x[None, :] + np.sinc(theta / np.pi)[:, None] * V
        return Y / np.linalg.norm(Y, axis=1)[:, None]

    def log_dist_batch(self, x, Y, clamp_cut: bool = False):
        c = np.clip(Y @ x, -1.0, 1.0)
        d = self.dist_batch(x, Y)
        if not clamp_cut and np.any(d >= np.pi - ANTIPODAL_MARGIN):
            raise CutLocusError("logarithm map undefined for antipodal sample points")
        W = Y - c[:, None] * x[None, :]
        norms = np.linalg.norm(W, axis=1)
        scale = np.where(norms > 1e-16, d / np.maximum(norms, 1e-300), 0.0)
        return W * scale[:, None], d

    def dist_batch(self, x, Y):
        c = Y @ x
        near = 2.0 * np.arcsin(np.minimum(np.linalg.norm(Y - x[None, :], axis=1) / 2.0, 1.0))
        far = np.pi - 2.0 * np.arcsin(
            np.minimum(np.linalg.norm(Y + x[None, :], axis=1) / 2.0, 1.0)
        )
        return np.where(c >= 0, near, far)
