"""Radial probability distributions on Riemannian symmetric spaces.

The package provides exact geometry kernels for Euclidean spaces, spheres,
hyperbolic spaces, SPD matrix manifolds and their products; radial density
families with temperature parameters; exact and MCMC samplers; maximum
likelihood estimators for the location and temperature parameters; KL and
Hellinger divergence calculators; and an experiment harness for convergence
rate, symmetry, covering/packing, and information lower-bound studies at
desk scale.
"""

from .errors import (
    BracketError,
    CutLocusError,
    DomainError,
    IndeterminateError,
    ParameterError,
    RadialStatsError,
    UnsupportedNormalizerError,
    UsageError,
)
from .geometry import (
    SPD,
    Euclidean,
    Hyperbolic,
    Manifold,
    Point,
    Product,
    Sphere,
    Tangent,
    base_point,
    distance,
    exp_map,
    log_map,
    manifold_from_spec,
    random_unit_tangent,
    sn,
    tangent_inner,
)
from .profiles import (
    RadialProfile,
    check_integrability,
    check_regularity,
    load_profile_table,
    make_profile,
)
from .distribution import (
    RadialDistribution,
    SampleSet,
    make_distribution,
    normalizing_constant,
    radial_cdf_eval,
    sample,
)
from .divergence import (
    DivergenceEstimate,
    hellinger_distance,
    kl_divergence,
    vmf_kl_closed_form,
)

__version__ = "0.1.0"
