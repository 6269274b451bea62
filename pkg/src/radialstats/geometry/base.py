"""Core geometric types: manifold descriptors, points, and tangent vectors.

Each manifold exposes closed-form Riemannian kernels (exponential and
logarithm maps, geodesic distance, tangent inner products) on a concrete
ambient coordinate representation, plus vectorized variants used by the
samplers and estimators.  All operations are pure functions of immutable
inputs and safe to call concurrently.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import DomainError, UsageError

#: Tolerance for on-manifold / tangency invariant checks.
ATOL = 1e-10


def as_float_array(coords, shape=None) -> np.ndarray:
    """Coerce input to a float64 array, rejecting non-finite entries."""
    arr = np.asarray(coords, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("coordinates contain non-finite entries")
    if shape is not None and arr.shape != shape:
        raise DomainError(f"expected coordinate shape {shape}, got {arr.shape}")
    return arr


class Manifold(ABC):
    """Descriptor of one supported space together with its geometry kernels.

    Attributes
    ----------
    kind : str
        Short identifier, e.g. ``"sphere"``.
    dim : int
        Intrinsic dimension.
    ambient_shape : tuple
        Shape of the ambient coordinate array of a single point.
    kappa_min, kappa_max : float
        Sectional curvature bounds.
    r_max : float
        Maximum distance between two points (``inf`` when noncompact).
    inj : float
        Injectivity radius.
    """

    kind: str
    dim: int
    ambient_shape: tuple
    kappa_min: float
    kappa_max: float
    r_max: float
    inj: float

    # -- descriptor ---------------------------------------------------------

    @abstractmethod
    def spec_string(self) -> str:
        """Compact textual form, e.g. ``sphere:2``; parseable by the CLI."""

    @property
    def ambient_len(self) -> int:
        return int(np.prod(self.ambient_shape))

    @property
    def is_compact(self) -> bool:
        return np.isfinite(self.r_max)

    def __eq__(self, other) -> bool:
        return isinstance(other, Manifold) and self.spec_string() == other.spec_string()

    def __hash__(self) -> int:
        return hash(self.spec_string())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec_string()!r})"

    # -- invariant checks ----------------------------------------------------

    @abstractmethod
    def check_point(self, coords: np.ndarray) -> None:
        """Raise :class:`DomainError` if ``coords`` violates point invariants."""

    @abstractmethod
    def check_tangent(self, base: np.ndarray, v: np.ndarray) -> None:
        """Raise :class:`DomainError` if ``v`` is not tangent at ``base``."""

    # -- single-point kernels -------------------------------------------------

    @abstractmethod
    def exp(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Endpoint of the geodesic from ``x`` with initial velocity ``v``."""

    @abstractmethod
    def log(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Initial velocity of the minimizing geodesic from ``x`` to ``y``."""

    @abstractmethod
    def dist(self, x: np.ndarray, y: np.ndarray) -> float:
        """Geodesic distance."""

    @abstractmethod
    def inner(self, x: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
        """Riemannian inner product of tangents ``u`` and ``v`` at ``x``."""

    def norm(self, x: np.ndarray, v: np.ndarray) -> float:
        return float(np.sqrt(max(self.inner(x, v, v), 0.0)))

    @abstractmethod
    def tangent_basis(self, x: np.ndarray) -> np.ndarray:
        """Orthonormal basis of the tangent space at ``x``.

        Returns an array of shape ``(dim, *ambient_shape)``; rows are
        orthonormal with respect to the Riemannian metric at ``x``.
        """

    # -- vectorized kernels (same base point, stacked targets) ----------------

    def exp_batch(self, x: np.ndarray, V: np.ndarray) -> np.ndarray:
        """Apply :meth:`exp` at ``x`` to every tangent in the stack ``V``."""
        return np.stack([self.exp(x, v) for v in V])

    def log_dist_batch(self, x: np.ndarray, Y: np.ndarray, clamp_cut: bool = False):
        """Logarithm maps and distances from ``x`` to every point in ``Y``.

        Returns ``(V, d)`` where ``V`` stacks tangents at ``x`` and ``d`` the
        distances.  With ``clamp_cut`` points at or past the cut locus get a
        clamped direction instead of raising; estimation uses this mode.
        """
        V = np.empty_like(Y, dtype=float)
        d = np.empty(len(Y))
        for i, y in enumerate(Y):
            V[i] = self.log(x, y)
            d[i] = self.dist(x, y)
        return V, d

    def dist_batch(self, x: np.ndarray, Y: np.ndarray) -> np.ndarray:
        return np.array([self.dist(x, y) for y in Y])

    # -- flat coordinate embedding (CSV rows, product factors) ---------------

    def flatten(self, coords: np.ndarray) -> np.ndarray:
        return np.reshape(coords, -1)

    def unflatten(self, flat: np.ndarray) -> np.ndarray:
        return np.reshape(flat, self.ambient_shape)


@dataclass(frozen=True, eq=False)
class Point:
    """A validated point on a manifold, in ambient coordinates."""

    manifold: Manifold
    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = as_float_array(self.coords, self.manifold.ambient_shape)
        self.manifold.check_point(arr)
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coords", arr)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Point)
            and self.manifold == other.manifold
            and np.array_equal(self.coords, other.coords)
        )

    def __repr__(self) -> str:
        return f"Point({self.manifold.spec_string()}, {np.round(self.coords, 6).tolist()})"


@dataclass(frozen=True, eq=False)
class Tangent:
    """A validated tangent vector attached to a base point."""

    base: Point
    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = as_float_array(self.coords, self.base.manifold.ambient_shape)
        self.base.manifold.check_tangent(self.base.coords, arr)
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coords", arr)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Tangent)
            and self.base == other.base
            and np.array_equal(self.coords, other.coords)
        )

    @property
    def manifold(self) -> Manifold:
        return self.base.manifold

    def norm(self) -> float:
        return self.manifold.norm(self.base.coords, self.coords)


def require_same_manifold(a, b) -> None:
    ma = a.manifold if hasattr(a, "manifold") else a
    mb = b.manifold if hasattr(b, "manifold") else b
    if ma != mb:
        raise UsageError(
            f"operands live on different manifolds: {ma.spec_string()} vs {mb.spec_string()}"
        )


def unit_sphere_area(m: int) -> float:
    """Surface measure of the unit sphere S^{m-1} inside R^m."""
    if m < 1:
        raise UsageError("dimension must be >= 1")
    from scipy.special import gammaln

    return float(np.exp(np.log(2.0) + (m / 2.0) * np.log(np.pi) - gammaln(m / 2.0)))
