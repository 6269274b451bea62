"""Flat Euclidean space R^m."""

from __future__ import annotations

import numpy as np

from .base import Manifold, as_float_array


class Euclidean(Manifold):
    """R^m with the standard inner product; geodesics are straight lines."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("Euclidean dimension must be >= 1")
        self.kind = "euclidean"
        self.dim = int(m)
        self.ambient_shape = (self.dim,)
        self.kappa_min = 0.0
        self.kappa_max = 0.0
        self.r_max = np.inf
        self.inj = np.inf

    def spec_string(self) -> str:
        return f"euclidean:{self.dim}"

    def check_point(self, coords: np.ndarray) -> None:
        as_float_array(coords, self.ambient_shape)

    def check_tangent(self, base: np.ndarray, v: np.ndarray) -> None:
        as_float_array(v, self.ambient_shape)

    def exp(self, x, v):
        return x + v

    def log(self, x, y):
        return y - x

    def dist(self, x, y) -> float:
        return float(np.linalg.norm(y - x))

    def inner(self, x, u, v) -> float:
        return float(np.dot(u, v))

    def tangent_basis(self, x) -> np.ndarray:
        return np.eye(self.dim)

    def exp_batch(self, x, V):
        return x[None, :] + V

    def log_dist_batch(self, x, Y, clamp_cut: bool = False):
        V = Y - x[None, :]
        return V, np.linalg.norm(V, axis=1)

    def dist_batch(self, x, Y):
        return np.linalg.norm(Y - x[None, :], axis=1)
