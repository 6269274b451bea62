"""KL divergence and Hellinger distance between radial distributions.

For two distributions sharing a profile on a sphere or hyperbolic space,
the integrals over the manifold reduce to two dimensions: a radial
coordinate around the first center and the polar angle toward the second
center; the remaining sphere directions integrate to a constant.  The
reduction makes machine-precision quadrature affordable.  A seeded Monte
Carlo path covers everything else.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distribution import RadialDistribution
from .errors import UsageError
from .geometry import Hyperbolic, Manifold, Sphere, unit_sphere_area
from .profiles import RadialProfile
from .quadrature import QuadResult, adaptive_quad_2d, quad_1d, truncation_radius


@dataclass(frozen=True)
class DivergenceEstimate:
    value: float
    standard_error: float | None
    method: str
    converged: bool = True

    def __float__(self) -> float:
        return self.value


def pair_reduction_integral(
    manifold: Manifold,
    integrand,
    t: float,
    epsrel: float = 1e-9,
    r_hi: float | None = None,
) -> QuadResult:
    """Integrate ``integrand(d1, d2)`` over the manifold.

    ``d1`` and ``d2`` are the distances from the running point to two
    reference points a geodesic distance ``t`` apart.  Supported on spheres
    and hyperbolic spaces of dimension at least two, where both distances
    are functions of the radial coordinate around the first reference point
    and one polar angle.
    """
    m = manifold.dim
    if m < 2:
        raise UsageError("pair reduction needs manifold dimension >= 2")
    shell = unit_sphere_area(m - 1)
    t = float(t)
    if isinstance(manifold, Sphere):

        def f(phi1, phi2):
            d2 = np.arccos(
                np.clip(
                    np.cos(phi1) * np.cos(t)
                    + np.sin(phi1) * np.cos(phi2) * np.sin(t),
                    -1.0,
                    1.0,
                )
            )
            weight = np.sin(phi1) ** (m - 1) * np.sin(phi2) ** (m - 2)
            return integrand(phi1, d2) * weight

        res = adaptive_quad_2d(f, (0.0, np.pi), (0.0, np.pi), epsrel=epsrel)
    elif isinstance(manifold, Hyperbolic):
        if r_hi is None:
            raise UsageError("hyperbolic pair reduction needs a radial horizon r_hi")

        def f(r, phi2):
            arg = np.maximum(
                np.cosh(r) * np.cosh(t)
                - np.sinh(r) * np.cos(phi2) * np.sinh(t),
                1.0,
            )
            d2 = np.arccosh(arg)
            weight = np.sinh(r) ** (m - 1) * np.sin(phi2) ** (m - 2)
            return integrand(r, d2) * weight

        res = adaptive_quad_2d(f, (0.0, r_hi), (0.0, np.pi), epsrel=epsrel)
    else:
        raise UsageError(
            f"pair reduction unsupported on {manifold.spec_string()}"
        )
    return QuadResult(res.value * shell, res.error * shell, res.converged)


def _pair_horizon(dist: RadialDistribution, t: float) -> float | None:
    if isinstance(dist.manifold, Sphere):
        return None
    prof = dist.profile

    def envelope(r):
        return (1.0 + np.abs(prof.phi(r + abs(t)))) * np.exp(-prof.phi(r)) * np.cosh(
            r
        ) ** (dist.manifold.dim - 1)

    return truncation_radius(envelope, rel_tail=1e-16)


def _require_pair(d1: RadialDistribution, d2: RadialDistribution, for_quad: bool):
    if d1.manifold != d2.manifold:
        raise UsageError("distributions live on different manifolds")
    p1, p2 = d1.profile, d2.profile
    if p1.kind != p2.kind or p1.p != p2.p:
        raise UsageError("divergences require the same profile family")
    if for_quad:
        if not isinstance(d1.manifold, (Sphere, Hyperbolic)):
            raise UsageError(
                "quadrature2d supports spheres and hyperbolic spaces only"
            )
        if abs(p1.beta - p2.beta) > 0:
            raise UsageError(
                "quadrature2d requires a shared profile; only the centers may differ"
            )


def kl_divergence(
    d1: RadialDistribution,
    d2: RadialDistribution,
    method: str = "quadrature2d",
    n: int | None = None,
    seed: int | None = None,
    epsrel: float = 1e-8,
) -> DivergenceEstimate:
    """KL divergence of ``d1`` from ``d2``.

    ``method="quadrature2d"`` integrates the reduced two-dimensional form
    (same profile, different centers, sphere or hyperbolic).
    ``method="monte_carlo"`` averages the log density ratio over ``n``
    seeded draws from ``d1`` and reports a standard error.
    """
    if method == "quadrature2d":
        _require_pair(d1, d2, for_quad=True)
        t = d1.manifold.dist(d1.center.coords, d2.center.coords)
        phi = d1.profile.phi

        def integrand(r1, r2):
            return (np.asarray(phi(r2)) - np.asarray(phi(r1))) * np.exp(
                -np.asarray(phi(r1))
            )

        res = pair_reduction_integral(
            d1.manifold, integrand, t, epsrel=epsrel, r_hi=_pair_horizon(d1, t)
        )
        value = res.value / np.exp(d1.log_z)
        return DivergenceEstimate(
            value=float(value),
            standard_error=None,
            method=method,
            converged=res.converged,
        )
    if method == "monte_carlo":
        if n is None or seed is None:
            raise UsageError("monte_carlo requires n and seed")
        _require_pair(d1, d2, for_quad=False)
        ratios = _log_ratio_samples(d1, d2, n, seed)
        value = float(np.mean(ratios))
        se = float(np.std(ratios, ddof=1) / np.sqrt(n))
        return DivergenceEstimate(value=value, standard_error=se, method=method)
    raise UsageError(f"unknown divergence method {method!r}")


def _log_ratio_samples(d1, d2, n, seed) -> np.ndarray:
    samples = d1.sample(n, seed)
    pts = samples.natural()
    dist1 = d1.manifold.dist_batch(d1.center.coords, pts)
    dist2 = d2.manifold.dist_batch(d2.center.coords, pts)
    logf1 = -np.asarray(d1.profile.phi(dist1))
    logf2 = -np.asarray(d2.profile.phi(dist2))
    if d1.log_z is not None and d2.log_z is not None:
        logf1 -= d1.log_z
        logf2 -= d2.log_z
    elif not (
        d1.profile.kind == d2.profile.kind
        and d1.profile.beta == d2.profile.beta
        and d1.profile.p == d2.profile.p
    ):
        raise UsageError(
            "Monte Carlo divergence without normalizers needs identical profiles"
        )
    return logf1 - logf2


def hellinger_distance(
    d1: RadialDistribution,
    d2: RadialDistribution,
    method: str = "quadrature2d",
    n: int | None = None,
    seed: int | None = None,
    epsrel: float = 1e-9,
) -> DivergenceEstimate:
    """Hellinger distance (L2 between square-root densities), in [0, sqrt(2)]."""
    if method == "quadrature2d":
        _require_pair(d1, d2, for_quad=True)
        t = d1.manifold.dist(d1.center.coords, d2.center.coords)
        phi = d1.profile.phi
        z = np.exp(d1.log_z)

        def integrand(r1, r2):
            a = np.exp(-0.5 * np.asarray(phi(r1)))
            b = np.exp(-0.5 * np.asarray(phi(r2)))
            return (a - b) ** 2

        res = pair_reduction_integral(
            d1.manifold, integrand, t, epsrel=epsrel, r_hi=_pair_horizon(d1, t)
        )
        value = float(np.sqrt(max(res.value / z, 0.0)))
        return DivergenceEstimate(
            value=value, standard_error=None, method=method, converged=res.converged
        )
    if method == "monte_carlo":
        if n is None or seed is None:
            raise UsageError("monte_carlo requires n and seed")
        _require_pair(d1, d2, for_quad=False)
        ratios = _log_ratio_samples(d1, d2, n, seed)
        sq = (1.0 - np.exp(-0.5 * ratios)) ** 2
        value = float(np.sqrt(max(np.mean(sq), 0.0)))
        se = float(np.std(sq, ddof=1) / np.sqrt(n))
        return DivergenceEstimate(value=value, standard_error=se, method=method)
    raise UsageError(f"unknown divergence method {method!r}")


def vmf_kl_closed_form(beta: float, m: int, r0: float) -> float:
    """Exact KL divergence between two equal-concentration vMF laws.

    For centers a geodesic distance ``r0`` apart on the m-sphere the
    divergence equals ``beta * (1 - cos r0) * A_m(beta)``, where
    ``A_m(beta)`` is the mean of cos(d) under the radial law with weight
    exp(beta cos(phi)) sin(phi)^(m-1); the cross term integrates to zero by
    symmetry around the axis through the centers.
    """
    if beta <= 0:
        raise UsageError("beta must be positive")
    if m < 2:
        raise UsageError("sphere dimension must be >= 2")
    if not 0.0 <= r0 <= np.pi:
        raise UsageError("center separation must lie in [0, pi]")
    num = quad_1d(
        lambda u: np.cos(u) * np.exp(beta * np.cos(u)) * np.sin(u) ** (m - 1),
        0.0,
        np.pi,
        epsrel=1e-12,
    )
    den = quad_1d(
        lambda u: np.exp(beta * np.cos(u)) * np.sin(u) ** (m - 1),
        0.0,
        np.pi,
        epsrel=1e-12,
    )
    return float(beta * (1.0 - np.cos(r0)) * num / den)
