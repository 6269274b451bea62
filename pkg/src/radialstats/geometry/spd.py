"""Symmetric positive-definite matrices with the affine-invariant metric.

The metric at X is <U, V>_X = tr(X^{-1} U X^{-1} V).  With this
normalization the sectional curvatures lie in [-1/2, 0]; this range is a
standard external constant (it is used only by integrability checks).
Matrix functions are evaluated through symmetric eigendecompositions.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .base import ATOL, Manifold, as_float_array

#: Eigenvalues are clamped below at this floor before logarithms.
EIG_FLOOR = 1e-14
#: Clamping by more than this relative amount is treated as a domain error.
EIG_CLAMP_REL = 1e-10


def _sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + np.swapaxes(a, -1, -2))


def _eigh_checked(a: np.ndarray):
    w, q = np.linalg.eigh(a)
    scale = np.max(np.abs(w), axis=-1, keepdims=True)
    floor = np.maximum(w, EIG_FLOOR)
    if np.any(floor - w > EIG_CLAMP_REL * np.maximum(scale, 1.0)):
        raise DomainError("matrix is not positive definite within tolerance")
    return floor, q

def _apply_spectral(a: np.ndarray, fn) -> np.ndarray:
    w, q = _eigh_checked(a)
    fw = fn(w)
    return _sym(np.einsum("...ik,...k,...jk->...ij", q, fw, q))


def spd_logm(a: np.ndarray) -> np.ndarray:
    return _apply_spectral(a, np.log)


def spd_expm(a: np.ndarray) -> np.ndarray:
    # exp of a symmetric (not necessarily definite) matrix
    w, q = np.linalg.eigh(a)
    return _sym(np.einsum("...ik,...k,...jk->...ij", q, np.exp(w), q))


def spd_sqrtm(a: np.ndarray) -> np.ndarray:
    return _apply_spectral(a, np.sqrt)


def spd_invsqrtm(a: np.ndarray) -> np.ndarray:
    return _apply_spectral(a, lambda w: 1.0 / np.sqrt(w))


class SPD(Manifold):
    """Positive-definite n x n matrices; a noncompact symmetric space."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("SPD matrix size must be >= 1")
        self.n = int(n)
        self.kind = "spd"
        self.dim = self.n * (self.n + 1) // 2
        self.ambient_shape = (self.n, self.n)
        self.kappa_min = -0.5
        self.kappa_max = 0.0
        self.r_max = np.inf
        self.inj = np.inf

    def spec_string(self) -> str:
        return f"spd:{self.n}"

    def base_point(self) -> np.ndarray:
        return np.eye(self.n)

    def check_point(self, coords: np.ndarray) -> None:
        arr = as_float_array(coords, self.ambient_shape)
        scale = max(1.0, float(np.max(np.abs(arr))))
        if np.max(np.abs(arr - arr.T)) >= ATOL * scale:
            raise DomainError("SPD point must be symmetric")
        if np.min(np.linalg.eigvalsh(_sym(arr))) <= 0:
            raise DomainError("SPD point must be positive definite")

    def check_tangent(self, base: np.ndarray, v: np.ndarray) -> None:
        arr = as_float_array(v, self.ambient_shape)
        scale = max(1.0, float(np.max(np.abs(arr))))
        if np.max(np.abs(arr - arr.T)) >= ATOL * scale:
            raise DomainError("SPD tangent must be symmetric")

    def exp(self, x, v):
        xh = spd_sqrtm(x)
        xih = spd_invsqrtm(x)
        inner = _sym(xih @ v @ xih)
        return _sym(xh @ spd_expm(inner) @ xh)

    def log(self, x, y):
        xh = spd_sqrtm(x)
        xih = spd_invsqrtm(x)
        inner = _sym(xih @ y @ xih)
        return _sym(xh @ spd_logm(inner) @ xh)

    def dist(self, x, y) -> float:
        xih = spd_invsqrtm(x)
        w, _ = _eigh_checked(_sym(xih @ y @ xih))
        return float(np.sqrt(np.sum(np.log(w) ** 2)))

    def inner(self, x, u, v) -> float:
        a = np.linalg.solve(x, u)
        b = np.linalg.solve(x, v)
        return float(np.sum(a * b.T))

    def tangent_basis(self, x) -> np.ndarray:
        # Push an orthonormal basis of symmetric matrices at the identity
        # through W -> X^{1/2} W X^{1/2}, an isometry onto T_X.
        xh = spd_sqrtm(x)
        basis = np.zeros((self.dim, self.n, self.n))
        k = 0
        for i in range(self.n):
            basis[k, i, i] = 1.0
            k += 1
        s = 1.0 / np.sqrt(2.0)
        for i in range(self.n):
            for j in range(i + 1, self.n):
                basis[k, i, j] = s
                basis[k, j, i] = s
                k += 1
        return _sym(xh @ basis @ xh)

    def exp_batch(self, x, V):
        xh = spd_sqrtm(x)
        xih = spd_invsqrtm(x)
        inner = _sym(xih[None] @ V @ xih[None])
        return _sym(xh[None] @ spd_expm(inner) @ xh[None])

    def log_dist_batch(self, x, Y, clamp_cut: bool = False):
        xh = spd_sqrtm(x)
        xih = spd_invsqrtm(x)
        inner = _sym(xih[None] @ Y @ xih[None])
        w, q = _eigh_checked(inner)
        logw = np.log(w)
        L = _sym(np.einsum("kij,kj,klj->kil", q, logw, q))
        V = _sym(xh[None] @ L @ xh[None])
        return V, np.sqrt(np.sum(logw**2, axis=-1))

    def dist_batch(self, x, Y):
        xih = spd_invsqrtm(x)
        inner = _sym(xih[None] @ Y @ xih[None])
        w, _ = _eigh_checked(inner)
        return np.sqrt(np.sum(np.log(w) ** 2, axis=-1))

    def flatten(self, coords: np.ndarray) -> np.ndarray:
        return np.reshape(coords, -1)

    def unflatten(self, flat: np.ndarray) -> np.ndarray:
        return np.reshape(flat, self.ambient_shape)
