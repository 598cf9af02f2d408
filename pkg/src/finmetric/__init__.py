"""Exact computations on finite metric spaces and finite metric groups."""
from .metric import (
    AdmissibilityWarning,
    AdmissibleUnionSpec,
    AsymmetryError,
    DerivativeResult,
    DiagonalError,
    FiniteMetricSpace,
    MetricError,
    NonPositiveError,
    PointMap,
    PseudometricMatrix,
    ShapeError,
    TriangleError,
    admissible_union,
    diameter,
    dist_sets,
    hausdorff_distance,
    pseudometric_closure,
    quotient_by_zero,
    scale,
    to_rational,
    validate_pseudometric,
    validate_space,
)
from .isometry import (
    AlphaSpec,
    IhtResult,
    IsometryGroup,
    OrbitPartition,
    alpha_derivative,
    alpha_matrix,
    are_isometric,
    is_iso_rigid,
    iso_derivative,
    iso_height,
    iso_orbits,
    isometry_group,
    limit_tower_space,
    successor_space,
)
from .gh import (
    CauchyCertificate,
    Correspondence,
    GhEstimate,
    SizeLimitExceeded,
    gh_bounds,
    gh_convergence_certificate,
    gh_estimate,
    gh_exact,
    verify_disjoint_sum_convergence,
)
from .orders import (
    NotMonotoneError,
    OrderVerdict,
    UniformCompactnessReport,
    common_superspace,
    monotone_limit,
    preceq,
    preceq_i,
    preceq_s,
    uniform_compactness,
    verify_verdict,
)
from .groups import (
    AffineFamily,
    AssociativityError,
    FiniteMetricGroup,
    GroupHom,
    HatMetricResult,
    IdentityError,
    InverseError,
    LeftInvarianceError,
    NotHomomorphism,
    QuotientGroupResult,
    check_hom,
    group_inductive_limit,
    group_quotient_metric,
    hat_lemma_check,
    hat_metric,
    is_bi_invariant,
    left_invariant_floor,
    normal_closure,
    validate_group,
)
from .systems import (
    CoherenceError,
    DirectSystemPrefix,
    ExpansiveBond,
    GrowthWitness,
    InverseSystemPrefix,
    LimitApproximation,
    LimitRefused,
    NonSurjectiveBond,
    derivative_tower_system,
    direct_limit_approx,
    inverse_limit_approx,
    inverse_limit_exists,
    mediating_maps,
    validate_direct_system,
    validate_inverse_system,
)
from .corpus import build_example

__version__ = "0.1.0"
