"""Product manifolds with the L2 combination of factor metrics."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import DomainError
from .base import Manifold, as_float_array


class Product(Manifold):
    """Cartesian product of manifolds; coordinates are concatenated flat.

    Geodesics, exponential and logarithm maps act factorwise; the distance
    is the Euclidean combination sqrt(sum of squared factor distances).
    Curvature bounds are taken as the min/max over factors (mixed tangent
    planes are flat, which only widens the true range toward zero; only
    kappa_min feeds the integrability checks, conservatively).
    """

    def __init__(self, factors: Sequence[Manifold]):
        factors = list(factors)
        if len(factors) < 2:
            raise ValueError("Product requires at least two factors")
        self.factors = factors
        self.kind = "product"
        self.dim = sum(f.dim for f in factors)
        lens = [f.ambient_len for f in factors]
        self.ambient_shape = (sum(lens),)
        self._offsets = np.cumsum([0] + lens)
        self.kappa_min = min(f.kappa_min for f in factors)
        self.kappa_max = max(f.kappa_max for f in factors)
        r2 = [f.r_max**2 for f in factors]
        self.r_max = np.inf if any(np.isinf(r) for r in r2) else float(np.sqrt(sum(r2)))
        self.inj = min(f.inj for f in factors)

    def spec_string(self) -> str:
        return "product:" + "+".join(f.spec_string() for f in self.factors)

    def _split(self, flat: np.ndarray):
        return [
            f.unflatten(flat[..., self._offsets[i] : self._offsets[i + 1]])
            for i, f in enumerate(self.factors)
        ]

    def _join(self, parts) -> np.ndarray:
        return np.concatenate(
            [f.flatten(p) for f, p in zip(self.factors, parts)], axis=-1
        )

    def check_point(self, coords: np.ndarray) -> None:
        arr = as_float_array(coords, self.ambient_shape)
        for f, p in zip(self.factors, self._split(arr)):
            f.check_point(p)

    def check_tangent(self, base: np.ndarray, v: np.ndarray) -> None:
        arr = as_float_array(v, self.ambient_shape)
        for f, b, p in zip(self.factors, self._split(base), self._split(arr)):
            f.check_tangent(b, p)

    def exp(self, x, v):
        return self._join(
            [f.exp(b, p) for f, b, p in zip(self.factors, self._split(x), self._split(v))]
        )

    def log(self, x, y):
        return self._join(
            [f.log(b, p) for f, b, p in zip(self.factors, self._split(x), self._split(y))]
        )

    def dist(self, x, y) -> float:
        parts = [
            f.dist(b, p)
            for f, b, p in zip(self.factors, self._split(x), self._split(y))
        ]
        return float(np.sqrt(sum(d * d for d in parts)))

    def inner(self, x, u, v) -> float:
        return float(
            sum(
                f.inner(b, a, c)
                for f, b, a, c in zip(
                    self.factors, self._split(x), self._split(u), self._split(v)
                )
            )
        )

    def tangent_basis(self, x) -> np.ndarray:
        rows = []
        for i, (f, b) in enumerate(zip(self.factors, self._split(x))):
            for vec in f.tangent_basis(b):
                flat = np.zeros(self.ambient_len)
                flat[self._offsets[i] : self._offsets[i + 1]] = f.flatten(vec)
                rows.append(flat)
        return np.stack(rows)

    def exp_batch(self, x, V):
        parts = []
        for i, (f, b) in enumerate(zip(self.factors, self._split(x))):
            chunk = V[:, self._offsets[i] : self._offsets[i + 1]]
            shaped = chunk.reshape((len(V),) + f.ambient_shape)
            out = f.exp_batch(b, shaped)
            parts.append(out.reshape(len(V), -1))
        return np.concatenate(parts, axis=1)

    def log_dist_batch(self, x, Y, clamp_cut: bool = False):
        vs, d2 = [], np.zeros(len(Y))
        for i, (f, b) in enumerate(zip(self.factors, self._split(x))):
            chunk = Y[:, self._offsets[i] : self._offsets[i + 1]]
            shaped = chunk.reshape((len(Y),) + f.ambient_shape)
            V, d = f.log_dist_batch(b, shaped, clamp_cut=clamp_cut)
            vs.append(V.reshape(len(Y), -1))
            d2 += d * d
        return np.concatenate(vs, axis=1), np.sqrt(d2)

    def dist_batch(self, x, Y):
        d2 = np.zeros(len(Y))
        for i, (f, b) in enumerate(zip(self.factors, self._split(x))):
            chunk = Y[:, self._offsets[i] : self._offsets[i + 1]]
            shaped = chunk.reshape((len(Y),) + f.ambient_shape)
            d = f.dist_batch(b, shaped)
            d2 += d * d
        return np.sqrt(d2)
