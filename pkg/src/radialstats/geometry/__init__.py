"""Geometry kernels for the supported manifolds.

The point-level operations (`exp_map`, `log_map`, `distance`,
`tangent_inner`, `random_unit_tangent`) work on validated :class:`Point`
and :class:`Tangent` wrappers; the manifold classes additionally expose
vectorized kernels on raw coordinate arrays for the samplers and
estimators.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError, UsageError
from .base import Manifold, Point, Tangent, require_same_manifold, unit_sphere_area
from .euclidean import Euclidean
from .hyperboloid import Hyperbolic, minkowski_dot
from .product import Product
from .sphere import Sphere
from .spd import SPD

__all__ = [
    "Manifold",
    "Point",
    "Tangent",
    "Euclidean",
    "Sphere",
    "Hyperbolic",
    "SPD",
    "Product",
    "exp_map",
    "log_map",
    "distance",
    "tangent_inner",
    "random_unit_tangent",
    "sn",
    "base_point",
    "manifold_from_spec",
    "unit_sphere_area",
    "minkowski_dot",
]


def exp_map(x: Point, v: Tangent) -> Point:
    """Follow the geodesic from ``x`` with initial velocity ``v`` for unit time."""
    if v.base != x:
        raise UsageError("tangent is not based at the given point")
    return Point(x.manifold, x.manifold.exp(x.coords, v.coords))


def log_map(x: Point, y: Point) -> Tangent:
    """Inverse of :func:`exp_map`; defined away from the cut locus of ``x``."""
    require_same_manifold(x, y)
    return Tangent(x, x.manifold.log(x.coords, y.coords))


def distance(x: Point, y: Point) -> float:
    """Geodesic distance between two points on the same manifold."""
    require_same_manifold(x, y)
    return x.manifold.dist(x.coords, y.coords)


def tangent_inner(u: Tangent, v: Tangent) -> float:
    """Riemannian inner product of two tangents with a common base point."""
    if u.base != v.base:
        raise UsageError("tangents are based at different points")
    return u.manifold.inner(u.base.coords, u.coords, v.coords)


def random_unit_tangent(x: Point, rng: np.random.Generator) -> Tangent:
    """Draw a unit tangent at ``x``, uniform on the unit sphere of T_x.

    Sampling uses i.i.d. standard-normal coefficients in an orthonormal
    basis of the tangent space, which is exactly isotropic under the metric
    at ``x`` on every supported manifold.
    """
    man = x.manifold
    basis = man.tangent_basis(x.coords)
    while True:
        g = rng.standard_normal(man.dim)
        norm = np.linalg.norm(g)
        if norm > 1e-12:
            break
    v = np.tensordot(g / norm, basis, axes=(0, 0))
    return Tangent(x, v)


def sn(kappa: float, r) -> float | np.ndarray:
    """Comparison radius function for curvature ``kappa``.

    Equals sin(sqrt(k) r)/sqrt(k) for k > 0 (zero beyond its first root),
    r for k = 0, and sinh(sqrt(-k) r)/sqrt(-k) for k < 0.  Continuous in
    ``kappa`` at zero; vectorized over ``r``.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise DomainError("radius must be nonnegative")
    scalar = np.isscalar(r) or r_arr.ndim == 0
    kappa = float(kappa)
    if abs(kappa) * np.max(r_arr * r_arr, initial=0.0) < 1e-8:
        # series sn_k(r) = r (1 - k r^2/6 + k^2 r^4/120 - ...)
        out = r_arr * (1.0 - kappa * r_arr**2 / 6.0 + kappa**2 * r_arr**4 / 120.0)
    elif kappa > 0:
        sq = np.sqrt(kappa)
        out = np.where(r_arr <= np.pi / sq, np.sin(sq * r_arr) / sq, 0.0)
    else:
        sq = np.sqrt(-kappa)
        out = np.sinh(sq * r_arr) / sq
    return float(out) if scalar else out


def base_point(manifold: Manifold) -> Point:
    """A canonical point: the origin, north pole, or identity matrix."""
    if isinstance(manifold, Euclidean):
        coords = np.zeros(manifold.dim)
    elif isinstance(manifold, Sphere):
        coords = np.zeros(manifold.dim + 1)
        coords[0] = 1.0
    elif isinstance(manifold, Hyperbolic):
        coords = manifold.base_point()
    elif isinstance(manifold, SPD):
        coords = manifold.base_point()
    elif isinstance(manifold, Product):
        coords = np.concatenate(
            [f.flatten(base_point(f).coords) for f in manifold.factors]
        )
    else:
        raise UsageError(f"unsupported manifold kind {manifold.kind!r}")
    return Point(manifold, coords)


def manifold_from_spec(spec: str) -> Manifold:
    """Parse a compact manifold descriptor such as ``sphere:2``.

    Accepted forms: ``euclidean:m``, ``sphere:m``, ``hyperbolic:m``,
    ``spd:n``, and ``product:<spec>+<spec>+...``.
    """
    spec = spec.strip()
    if spec.startswith("product:"):
        body = spec[len("product:") :]
        parts = [p for p in body.split("+") if p]
        if len(parts) < 2:
            raise UsageError("product manifold needs at least two '+'-separated factors")
        return Product([manifold_from_spec(p) for p in parts])
    try:
        kind, _, num = spec.partition(":")
        n = int(num)
    except ValueError:
        raise UsageError(f"cannot parse manifold spec {spec!r}") from None
    try:
        if kind == "euclidean":
            return Euclidean(n)
        if kind == "sphere":
            return Sphere(n)
        if kind == "hyperbolic":
            return Hyperbolic(n)
        if kind == "spd":
            return SPD(n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError(f"unknown manifold kind {kind!r}")
