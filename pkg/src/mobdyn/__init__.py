"""Moebius-family dynamics on the Riemann sphere.

Library + CLI for the chordal geometry of the sphere, SL(2,C) Moebius maps
and their iterate dynamics, one-parameter subgroups exp(tA), and numerical
certification of the shared-gauge equicontinuity property of those families.
"""

from .config import DEFAULTS, VerdictConfig
from .equibaire import (
    BASIS_FLOW_ALGEBRAIC,
    BASIS_FLOW_COLLAPSE,
    BASIS_FLOW_COMPACT,
    BASIS_ITERATES_GAUGE,
    FAILS,
    HOLDS,
    OUT_OF_SCOPE,
    BasisDisagreementError,
    CollapseCertificate,
    EquiBaireReport,
    FamilySpec,
    GaugeEstimate,
    LinearBoundResult,
    approximating_sequence,
    approximating_times,
    certify_linear_bound,
    detect_collapse,
    estimate_gauge,
    flow_verdict,
    iterates_verdict,
    probe_density_error,
)
from .flows import (
    CompactnessResult,
    FlowGenerator,
    SubgroupType,
    classify_subgroup,
    flow_action_matrix,
    flow_conjugator,
    flow_exp,
    flow_trajectory,
    is_relatively_compact,
)
from .moebius import (
    FixedPointData,
    MapClass,
    MoebiusMap,
    NormalForm,
    apply,
    classify,
    compose,
    fixed_points,
    in_attracting_basin,
    inverse,
    iterate_orbit,
    loxodromic_normal_form,
    matrix_power,
)
from .sphere import (
    INFINITY,
    ZERO,
    ChordalBall,
    SphereGrid,
    SpherePoint,
    affine_grid,
    chordal_ball_grid,
    chordal_distance,
    fibonacci_grid,
    sphere_point_from_affine,
    stereographic_embed,
    stereographic_lift,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULTS",
    "VerdictConfig",
    "SpherePoint",
    "ChordalBall",
    "SphereGrid",
    "INFINITY",
    "ZERO",
    "sphere_point_from_affine",
    "chordal_distance",
    "stereographic_embed",
    "stereographic_lift",
    "chordal_ball_grid",
    "fibonacci_grid",
    "affine_grid",
    "MoebiusMap",
    "MapClass",
    "FixedPointData",
    "NormalForm",
    "classify",
    "fixed_points",
    "loxodromic_normal_form",
    "iterate_orbit",
    "in_attracting_basin",
    "matrix_power",
    "compose",
    "inverse",
    "apply",
    "FlowGenerator",
    "SubgroupType",
    "CompactnessResult",
    "flow_exp",
    "flow_action_matrix",
    "flow_conjugator",
    "classify_subgroup",
    "is_relatively_compact",
    "flow_trajectory",
    "FamilySpec",
    "GaugeEstimate",
    "LinearBoundResult",
    "CollapseCertificate",
    "EquiBaireReport",
    "BasisDisagreementError",
    "estimate_gauge",
    "certify_linear_bound",
    "iterates_verdict",
    "detect_collapse",
    "flow_verdict",
    "approximating_sequence",
    "approximating_times",
    "probe_density_error",
    "HOLDS",
    "FAILS",
    "OUT_OF_SCOPE",
    "BASIS_ITERATES_GAUGE",
    "BASIS_FLOW_ALGEBRAIC",
    "BASIS_FLOW_COLLAPSE",
    "BASIS_FLOW_COMPACT",
    "__version__",
]
