"""Maximum likelihood estimation of the center and temperature.

The location estimate minimizes F(a) = sum_i phi(d(x_i, a)) by Riemannian
gradient descent with Armijo backtracking along the exponential map.  The
gradient of F is -sum_i phi'(d_i) Log_a(x_i) / d_i; terms with d_i below
1e-8 are dropped, and the laplacian profile is optimized through the
smoothed radius sqrt(d^2 + eps^2) because its objective is not
differentiable at sample points.  Only a local minimizer is certified: the
objective can be nonconvex on compact manifolds, so deterministic
extrinsic-mean initializers are used instead of random restarts.

The temperature estimate solves the stationarity condition of the
profiled likelihood: the model moment E_beta[phi(d)] must match the sample
moment, a strictly decreasing relation solved by bisection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distribution import RadialDistribution, SampleSet, constant_curvature
from .errors import BracketError, DomainError, UnsupportedNormalizerError, UsageError
from .geometry import SPD, Euclidean, Hyperbolic, Manifold, Point, Product, Sphere, sn
from .profiles import RadialProfile, check_regularity
from .quadrature import _gl_rule, truncation_radius

#: Sample terms closer than this to the iterate are dropped from gradients.
DISTANCE_DROP = 1e-8
#: Armijo sufficient-decrease constant.
ARMIJO_C1 = 1e-4
#: Maximum step halvings in one line search.
MAX_HALVINGS = 60


@dataclass
class EstimationResult:
    """Outcome of a location fit."""

    alpha_hat: Point
    beta_hat: float | None
    objective: float
    iterations: int
    grad_norm: float
    converged: bool
    trace: list[float] | None = None

    def to_dict(self) -> dict:
        return {
            "alpha_hat": np.asarray(self.alpha_hat.coords).reshape(-1).tolist(),
            "beta_hat": self.beta_hat,
            "objective": self.objective,
            "iterations": self.iterations,
            "grad_norm": self.grad_norm,
            "converged": self.converged,
        }


@dataclass
class TemperatureFit:
    """Outcome of a temperature solve."""

    beta_hat: float
    at_boundary: bool
    moment_residual: float
    iterations: int


def objective_eval(samples: SampleSet, profile: RadialProfile, alpha: Point) -> float:
    """Sum of phi(d(x_i, alpha)), accumulated left to right."""
    if alpha.manifold != samples.manifold:
        raise UsageError("alpha lives on a different manifold than the samples")
    d = samples.manifold.dist_batch(alpha.coords, samples.natural())
    return float(sum(np.asarray(profile.phi(d)).tolist()))


def auto_init(samples: SampleSet) -> Point:
    """Deterministic initializer: extrinsic or chart means, first sample for SPD."""
    man = samples.manifold
    pts = samples.natural()
    if isinstance(man, Euclidean):
        coords = pts.mean(axis=0)
    elif isinstance(man, Sphere):
        mean = pts.mean(axis=0)
        norm = np.linalg.norm(mean)
        if norm < 1e-12:
            coords = pts[0]
        else:
            coords = mean / norm
    elif isinstance(man, Hyperbolic):
        mean = pts.mean(axis=0)
        q = mean[0] ** 2 - np.dot(mean[1:], mean[1:])
        coords = mean / np.sqrt(q)
    elif isinstance(man, SPD):
        coords = pts[0]
    elif isinstance(man, Product):
        parts = []
        for i, f in enumerate(man.factors):
            lo, hi = man._offsets[i], man._offsets[i + 1]
            sub = SampleSet(f, samples.points[:, lo:hi])
            parts.append(f.flatten(auto_init(sub).coords))
        coords = np.concatenate(parts)
    else:
        raise UsageError(f"no initializer for manifold {man.spec_string()}")
    return Point(man, man.unflatten(coords))


def _laplacian_epsilon(man: Manifold, init: np.ndarray, pts: np.ndarray) -> float:
    spread = float(np.max(man.dist_batch(init, pts), initial=0.0))
    return 1e-6 * max(2.0 * spread, 1e-6)


def mle_location(
    samples: SampleSet,
    profile: RadialProfile,
    init: Point | str = "auto",
    max_iter: int = 200,
    grad_tol: float | None = None,
    step_rule: str = "armijo",
    keep_trace: bool = False,
    check: bool = True,
) -> EstimationResult:
    """Fit the center by Riemannian gradient descent.

    ``init="auto"`` picks the deterministic extrinsic/chart mean.  The fit
    converges when the Riemannian gradient norm drops below ``grad_tol``
    (default ``1e-8 * n``, keeping optimizer error below statistical
    error).  A failed line search yields ``converged=False``, never an
    exception.
    """
    if len(samples) == 0:
        raise UsageError("cannot estimate a center from an empty sample set")
    if step_rule != "armijo":
        raise UsageError(f"unknown step rule {step_rule!r}")
    if check:
        report = check_regularity(profile, samples.manifold)
        if not report.strictly_increasing_ok:
            raise UsageError(
                "profile is not strictly increasing; the center is not "
                "identifiable (pass check=False to override)"
            )
    man = samples.manifold
    pts = samples.natural()
    n = len(samples)
    if grad_tol is None:
        grad_tol = 1e-8 * n

    if isinstance(init, Point):
        if init.manifold != man:
            raise UsageError("init point lives on a different manifold")
        alpha = init.coords
    elif init == "auto":
        alpha = auto_init(samples).coords
    else:
        raise UsageError("init must be 'auto' or a Point")

    smoothing = (
        _laplacian_epsilon(man, alpha, pts) if profile.kind == "laplacian" else None
    )

    def objective_and_grad(a):
        V, d = man.log_dist_batch(a, pts, clamp_cut=True)
        if smoothing is not None:
            smoothed = np.sqrt(d * d + smoothing * smoothing)
            value = profile.beta * float(np.sum(smoothed))
            weights = profile.beta / smoothed
        else:
            value = float(np.sum(np.asarray(profile.phi(d))))
            keep = d >= DISTANCE_DROP
            weights = np.zeros_like(d)
            weights[keep] = np.asarray(profile.dphi(d[keep])) / d[keep]
        descent = np.tensordot(weights, V, axes=(0, 0))
        return value, descent, float(np.sum(weights))

    value, descent, weight_sum = objective_and_grad(alpha)
    trace = [value]
    grad_norm = man.norm(alpha, descent)
    iterations = 0
    converged = grad_norm < grad_tol
    while not converged and iterations < max_iter:
        accepted = False
        # the trial step 1 / sum(weights) is the reweighted-mean step: it
        # reproduces the flat-space minimizer exactly for quadratic energy
        # and stays inside the stable region on the curved spaces
        step = 1.0 / max(weight_sum, 1e-300)
        for _ in range(MAX_HALVINGS):
            try:
                with np.errstate(over="ignore", invalid="ignore"):
                    candidate = man.exp(alpha, step * descent)
                    cand_value, cand_descent, cand_wsum = objective_and_grad(candidate)
            except (DomainError, FloatingPointError):
                step *= 0.5
                continue
            # the slack keeps the test meaningful once the true decrease
            # falls below the floating-point resolution of the summed
            # objective; without it the search stalls with the gradient
            # still above tolerance
            slack = 4.0 * np.finfo(float).eps * (1.0 + abs(value))
            if np.isfinite(cand_value) and cand_value <= value - ARMIJO_C1 * step * grad_norm**2 + slack:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        alpha, value, descent, weight_sum = candidate, cand_value, cand_descent, cand_wsum
        grad_norm = man.norm(alpha, descent)
        trace.append(value)
        iterations += 1
        converged = grad_norm < grad_tol

    alpha_point = Point(man, alpha)
    d = man.dist_batch(alpha, pts)
    true_objective = float(np.sum(np.asarray(profile.phi(d))))
    return EstimationResult(
        alpha_hat=alpha_point,
        beta_hat=None,
        objective=true_objective,
        iterations=iterations,
        grad_norm=float(grad_norm),
        converged=bool(converged),
        trace=trace if keep_trace else None,
    )


class _MomentCurve:
    """Model moment E_beta[phi0(d)] on a fixed composite quadrature grid.

    The grid is a composite Gauss-Legendre rule dense enough to resolve
    sharply concentrated radial laws; each evaluation is two dot products.
    """

    def __init__(self, manifold: Manifold, base: RadialProfile, beta_lo: float):
        kappa = constant_curvature(manifold)
        if kappa is None:
            raise UnsupportedNormalizerError(
                "temperature estimation needs a constant-curvature manifold"
            )
        m = manifold.dim
        if manifold.is_compact:
            r_hi = manifold.r_max
        else:
            r_hi = truncation_radius(
                lambda r: (1.0 + np.asarray(base.phi(r)))
                * np.exp(-beta_lo * np.asarray(base.phi(r)))
                * sn(kappa, r) ** (m - 1),
                rel_tail=1e-14,
            )
        nodes, weights = _gl_rule(8)
        edges = np.linspace(0.0, r_hi, 2049)
        h = edges[1] - edges[0]
        pts = (edges[:-1, None] + h * nodes[None, :]).ravel()
        w = np.tile(h * weights, len(edges) - 1)
        self.phi0 = np.asarray(base.phi(pts))
        self.log_sn_weight = np.log(w) + (m - 1) * np.log(
            np.maximum(sn(kappa, pts), 1e-300)
        )

    def __call__(self, beta: float) -> float:
        logs = self.log_sn_weight - beta * self.phi0
        logs -= np.max(logs)
        dens = np.exp(logs)
        return float(np.sum(self.phi0 * dens) / np.sum(dens))


def mle_temperature(
    samples: SampleSet,
    alpha_hat: Point,
    family: RadialProfile,
    bounds: tuple[float, float],
) -> TemperatureFit:
    """Solve E_beta[phi(d)] = sample mean of phi(d_i) by bisection.

    The model moment is strictly decreasing in the temperature, so the
    solve brackets.  If the sample moment falls outside the moment range
    spanned by ``bounds``, the nearer boundary is returned with
    ``at_boundary=True``.
    """
    if len(samples) == 0:
        raise UsageError("cannot estimate a temperature from an empty sample set")
    lo, hi = (float(b) for b in bounds)
    if not (0 < lo < hi):
        raise BracketError("bounds must satisfy 0 < beta_lo < beta_hi")
    man = samples.manifold
    if alpha_hat.manifold != man:
        raise UsageError("alpha_hat lives on a different manifold")
    base = family.family_base()
    from .profiles import check_integrability

    res = check_integrability(base.with_beta(lo), man)
    if not res.passed:
        raise BracketError(
            f"family not integrable at beta_lo={lo:g}: {res.reason}"
        )
    d = man.dist_batch(alpha_hat.coords, samples.natural())
    moment = float(np.mean(np.asarray(base.phi(d))))

    curve = _MomentCurve(man, base, beta_lo=lo)
    m_lo, m_hi = curve(lo), curve(hi)
    if moment >= m_lo:
        return TemperatureFit(lo, True, moment - m_lo, 0)
    if moment <= m_hi:
        return TemperatureFit(hi, True, moment - m_hi, 0)

    iterations = 0
    a, b = lo, hi
    mid = 0.5 * (a + b)
    while iterations < 200:
        mid = 0.5 * (a + b)
        val = curve(mid)
        if abs(val - moment) < 1e-10 * (1.0 + moment) or (b - a) < 1e-13 * max(1.0, mid):
            break
        if val > moment:
            a = mid  # model too spread: raise the temperature
        else:
            b = mid
        iterations += 1
    return TemperatureFit(float(mid), False, float(curve(mid) - moment), iterations)


@dataclass
class MomentEstimate:
    value: float
    standard_error: float
    n: int


def lp_objective(
    dist: RadialDistribution, b: Point, p: float, n: int, seed: int
) -> MomentEstimate:
    """Monte Carlo estimate of the expected p-th power distance to ``b``.

    Sharing the seed across candidate points pairs the estimates, so
    differences between nearby candidates are far more precise than the
    individual standard errors suggest.
    """
    if p <= 0:
        raise UsageError("moment order p must be positive")
    if b.manifold != dist.manifold:
        raise UsageError("candidate point lives on a different manifold")
    if not dist.manifold.is_compact:
        _check_p_moment(dist, p)
    pts = dist.sample(n, seed).natural()
    vals = dist.manifold.dist_batch(b.coords, pts) ** p
    return MomentEstimate(
        value=float(vals.mean()),
        standard_error=float(vals.std(ddof=1) / np.sqrt(n)),
        n=n,
    )


def _check_p_moment(dist: RadialDistribution, p: float) -> None:
    prof = dist.profile
    kappa_min = dist.manifold.kappa_min
    m = dist.manifold.dim
    truncation_radius(
        lambda r: (1.0 + np.asarray(r) ** p)
        * np.exp(-np.asarray(prof.phi(r)))
        * sn(kappa_min, r) ** (m - 1),
        rel_tail=1e-10,
    )
