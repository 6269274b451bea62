"""Radial distributions: densities, normalizing constants, and samplers."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, UnsupportedNormalizerError, UsageError
from .geometry import (
    Euclidean,
    Hyperbolic,
    Manifold,
    Point,
    Product,
    Sphere,
    base_point,
    sn,
    unit_sphere_area,
)
from .profiles import RadialProfile, check_integrability
from .quadrature import cumulative_weight_table, quad_1d, truncation_radius

#: Nodes in the tabulated radial CDF.
CDF_TABLE_SIZE = 4096
#: Neglected tail mass when truncating a noncompact radial table.
TAIL_MASS = 1e-12

MCMC_BURN_IN = 500
MCMC_THINNING = 10


class ClampedRadiusWarning(RuntimeWarning):
    """Raised when a radial CDF query lies outside the tabulated range."""


def constant_curvature(manifold: Manifold) -> float | None:
    """The constant sectional curvature, or None when curvature varies.

    Products qualify only when every factor is flat; a product of curved
    factors mixes flat planes with curved ones and has no radial volume
    density.
    """
    if isinstance(manifold, (Euclidean, Sphere, Hyperbolic)):
        return manifold.kappa_min
    if isinstance(manifold, Product):
        if all(isinstance(f, Euclidean) for f in manifold.factors):
            return 0.0
        return None
    return None


def radial_weight(profile: RadialProfile, kappa: float, m: int):
    """Unnormalized radial density r -> exp(-phi(r)) sn_kappa(r)^(m-1)."""

    def weight(r):
        r = np.asarray(r, dtype=float)
        return np.exp(-profile.phi(r)) * sn(kappa, r) ** (m - 1)

    return weight


def normalizing_constant(manifold: Manifold, profile: RadialProfile) -> float:
    """Log of the mass of exp(-phi(d(x, center))) over the manifold.

    Supported on constant-curvature spaces, where the volume element
    reduces to the one-dimensional radial weight; the result does not
    depend on the center.
    """
    kappa = constant_curvature(manifold)
    if kappa is None:
        raise UnsupportedNormalizerError(
            f"no radial reduction of the volume density on {manifold.spec_string()}"
        )
    res = check_integrability(profile, manifold)
    if not res.passed:
        raise ParameterError(f"density is not integrable: {res.reason}")
    m = manifold.dim
    r_hi = manifold.r_max if manifold.is_compact else _radial_cut(profile, kappa, m)
    weight = radial_weight(profile, kappa, m)
    integral = quad_1d(lambda r: float(weight(r)), 0.0, r_hi, epsrel=1e-10)
    return float(np.log(unit_sphere_area(m)) + np.log(integral))


def _radial_cut(profile: RadialProfile, kappa: float, m: int) -> float:
    return truncation_radius(radial_weight(profile, kappa, m), rel_tail=TAIL_MASS)


@dataclass
class SampleSet:
    """Points drawn from (or fed to) a radial model, stored as flat rows."""

    manifold: Manifold
    points: np.ndarray  # shape (n, ambient_len), flattened coordinates
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(
            -1, self.manifold.ambient_len
        )

    def __len__(self) -> int:
        return len(self.points)

    def point(self, i: int) -> Point:
        return Point(self.manifold, self.manifold.unflatten(self.points[i]))

    def natural(self) -> np.ndarray:
        """Points reshaped to the manifold's natural ambient shape."""
        return self.points.reshape((len(self),) + self.manifold.ambient_shape)


class RadialDistribution:
    """A center, a profile, and the derived normalizer and radial CDF.

    On constant-curvature manifolds the normalizing constant and a
    4096-node radial CDF table are computed at construction, enabling exact
    inverse-CDF sampling.  Elsewhere (SPD, curved products) the density is
    available only up to a constant and sampling falls back to a
    Metropolis chain; construction then requires ``unnormalized=True``.
    """

    def __init__(
        self,
        manifold: Manifold,
        center: Point,
        profile: RadialProfile,
        unnormalized: bool = False,
    ):
        if center.manifold != manifold:
            raise UsageError("center must lie on the stated manifold")
        res = check_integrability(profile, manifold)
        if not res.passed:
            raise ParameterError(f"density is not integrable: {res.reason}")
        self.manifold = manifold
        self.center = center
        self.profile = profile
        self._kappa = constant_curvature(manifold)
        if self._kappa is None:
            if not unnormalized:
                raise UnsupportedNormalizerError(
                    "normalizer unavailable on "
                    f"{manifold.spec_string()}; construct with unnormalized=True "
                    "for density ratios and MCMC sampling"
                )
            self.log_z = None
            self.r_cut = None
            self._cdf_grid = None
            self._cdf_values = None
        else:
            m = manifold.dim
            self.r_cut = (
                manifold.r_max if manifold.is_compact else _radial_cut(profile, self._kappa, m)
            )
            weight = radial_weight(profile, self._kappa, m)
            integral = quad_1d(lambda r: float(weight(r)), 0.0, self.r_cut, epsrel=1e-10)
            self.log_z = float(np.log(unit_sphere_area(m)) + np.log(integral))
            grid, cumulative = cumulative_weight_table(weight, self.r_cut, CDF_TABLE_SIZE)
            cdf = cumulative / cumulative[-1]
            cdf = np.clip(cdf, 0.0, 1.0)
            cdf[0], cdf[-1] = 0.0, 1.0
            self._cdf_grid = grid
            self._cdf_values = cdf
            self._build_interpolants()

    def _build_interpolants(self):
        from scipy.interpolate import PchipInterpolator

        grid, cdf = self._cdf_grid, self._cdf_values
        self._cdf_fn = PchipInterpolator(grid, cdf, extrapolate=False)
        # invert on the strictly increasing part; plateaus (numerically
        # dead radii) collapse to their left edge
        keep = np.concatenate([[True], np.diff(cdf) > 0.0])
        self._inv_fn = PchipInterpolator(cdf[keep], grid[keep], extrapolate=False)
        self._inv_lo, self._inv_hi = cdf[keep][0], cdf[keep][-1]

    # -- densities -------------------------------------------------------------

    def log_density(self, x: Point, allow_unnormalized: bool = False) -> float:
        """Log density at ``x``; radially symmetric about the center."""
        if x.manifold != self.manifold:
            raise UsageError("point lives on a different manifold")
        d = self.manifold.dist(self.center.coords, x.coords)
        energy = -float(self.profile.phi(d))
        if self.log_z is None:
            if not allow_unnormalized:
                raise UnsupportedNormalizerError(
                    "normalizer unavailable; pass allow_unnormalized=True for "
                    "the unnormalized log density"
                )
            return energy
        return energy - self.log_z

    def log_density_batch(self, flat_points: np.ndarray) -> np.ndarray:
        pts = flat_points.reshape((len(flat_points),) + self.manifold.ambient_shape)
        d = self.manifold.dist_batch(self.center.coords, pts)
        if self.log_z is None:
            raise UnsupportedNormalizerError("normalizer unavailable")
        return -np.asarray(self.profile.phi(d)) - self.log_z

    # -- radial CDF --------------------------------------------------------------

    def radial_cdf_eval(self, r: float) -> float:
        """P(distance from center <= r) from the cached table."""
        if self._cdf_grid is None:
            raise UnsupportedNormalizerError("no radial CDF on this manifold")
        if r < 0.0 or r > self.r_cut:
            warnings.warn(
                f"radius {r:g} outside [0, {self.r_cut:g}]; clamped",
                ClampedRadiusWarning,
                stacklevel=2,
            )
            r = min(max(r, 0.0), self.r_cut)
        return float(self._cdf_fn(r))

    def radial_quantile(self, u) -> np.ndarray:
        """Inverse of the radial CDF, vectorized over probabilities."""
        u = np.clip(np.asarray(u, dtype=float), self._inv_lo, self._inv_hi)
        return np.asarray(self._inv_fn(u), dtype=float)

    # -- sampling ---------------------------------------------------------------

    def sample(self, n: int, seed: int) -> SampleSet:
        """Draw ``n`` points; deterministic given ``seed``.

        Constant-curvature spaces use inverse-CDF radii with isotropic
        directions.  Other manifolds run a Metropolis chain in the tangent
        space (burn-in 500, thinning 10) and are flagged approximate.
        """
        if n < 0:
            raise UsageError("sample size must be nonnegative")
        meta = {
            "seed": int(seed),
            "manifold": self.manifold.spec_string(),
            "profile": self.profile.kind,
            "beta": self.profile.beta,
        }
        if n == 0:
            return SampleSet(self.manifold, np.empty((0, self.manifold.ambient_len)), meta)
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        if self._kappa is not None:
            flat = self._sample_exact(n, rng)
            meta.update(method="inverse-cdf", approximate=False)
        else:
            flat = self._sample_mcmc(n, rng)
            meta.update(
                method="mcmc",
                approximate=True,
                burn_in=MCMC_BURN_IN,
                thinning=MCMC_THINNING,
            )
        return SampleSet(self.manifold, flat, meta)

    def _sample_exact(self, n: int, rng) -> np.ndarray:
        man = self.manifold
        radii = self.radial_quantile(rng.random(n))
        gauss = rng.standard_normal((n, man.dim))
        norms = np.linalg.norm(gauss, axis=1)
        # a zero draw has probability zero; redraw defensively
        while np.any(norms < 1e-12):
            bad = norms < 1e-12
            gauss[bad] = rng.standard_normal((int(bad.sum()), man.dim))
            norms = np.linalg.norm(gauss, axis=1)
        basis = man.tangent_basis(self.center.coords)
        flat_basis = basis.reshape(man.dim, -1)
        directions = (gauss / norms[:, None]) @ flat_basis
        tangents = radii[:, None] * directions
        shaped = tangents.reshape((n,) + man.ambient_shape)
        out = man.exp_batch(self.center.coords, shaped)
        return out.reshape(n, -1)

    def _sample_mcmc(self, n: int, rng) -> np.ndarray:
        man = self.manifold
        center = self.center.coords
        phi = self.profile.phi
        state = center.copy()
        energy = 0.0  # phi(d(center, center))
        sigma = 0.5
        accepted_recent = 0
        out = np.empty((n, man.ambient_len))
        collected = 0
        step = 0
        next_keep = MCMC_BURN_IN
        while collected < n:
            basis = man.tangent_basis(state).reshape(man.dim, -1)
            coeff = rng.standard_normal(man.dim) * sigma
            xi = (coeff @ basis).reshape(man.ambient_shape)
            candidate = man.exp(state, xi)
            cand_energy = float(phi(man.dist(center, candidate)))
            if np.log(rng.random()) < energy - cand_energy:
                state = candidate
                energy = cand_energy
                accepted_recent += 1
            step += 1
            if step <= MCMC_BURN_IN and step % 50 == 0:
                # steer acceptance toward ~0.3 during burn-in only
                rate = accepted_recent / 50.0
                sigma = float(np.clip(sigma * np.exp(rate - 0.3), 1e-3, 10.0))
                accepted_recent = 0
            if step >= next_keep:
                out[collected] = man.flatten(state)
                collected += 1
                next_keep += MCMC_THINNING
        return out


def sample(dist: RadialDistribution, n: int, seed: int) -> SampleSet:
    """Functional alias for :meth:`RadialDistribution.sample`."""
    return dist.sample(n, seed)


def radial_cdf_eval(dist: RadialDistribution, r: float) -> float:
    """Functional alias for :meth:`RadialDistribution.radial_cdf_eval`."""
    return dist.radial_cdf_eval(r)


def make_distribution(
    manifold: Manifold,
    profile: RadialProfile,
    center: Point | None = None,
    unnormalized: bool = False,
) -> RadialDistribution:
    """Convenience constructor defaulting the center to the base point."""
    if center is None:
        center = base_point(manifold)
    return RadialDistribution(manifold, center, profile, unnormalized=unnormalized)
