"""Numerical toolkit for the approximate-stability dynamics of Lorentz and
general linear systems: Cartan decompositions, stable subspaces of matrix
sequences, boundary limit sets, torus cocycles and the explicit model
spaces (flat tori, Hopf surfaces, anti-de Sitter 3-space)."""

from .cartan import KakFactorization, boost, kak, lorentz_kak, norm_growth, spatial_rotation
from .cocycles import (
    CocycleValue,
    EntropyReport,
    TorusAutomorphism,
    big_lambda,
    cocycle,
    entropy_dichotomy,
    lyapunov_exponent,
    normal_directions,
)
from .minkowski import (
    CausalType,
    QuadraticForm,
    Subspace,
    causal_type,
    evaluate,
    grassmann_distance,
    is_isometry,
    lightlike_hyperplane,
    orthogonal_complement,
)
from .models import (
    EntireCone,
    HopfModel,
    IsotropicPlane2,
    RationalLorentzForm,
    ads_form,
    ads_pair_orbit,
    ads_plane_family,
    ads_second_factor_action,
    fixed_isotropic_directions,
    hopf_return_cocycle,
    integer_isometries,
    mobius_rp1,
    plus_minus_identity_check,
    rp1_distance,
    split_boost,
    split_form_3d,
    split_unipotent,
)
from .projective import (
    BoundaryPoint,
    CardinalityClass,
    GroupClass,
    HyperbolicPoint,
    LimitSetEstimate,
    act_boundary,
    classify_elementary,
    hyperbolic_orbit_limit,
    limit_set,
    north_south_certificate,
)
from .stability import (
    ASResult,
    BruteForceScores,
    MatrixSequence,
    StabilityKind,
    as_all_oracles,
    as_subspace_ellipsoid,
    as_subspace_graph,
    as_subspace_kak,
    brute_force_as,
    is_divergent,
    lorentz_as_check,
    spas_subspace,
)

__version__ = "0.1.0"
