"""Numerical geometry engine for the indefinite complex projective space.

Core layers: indefinite linear algebra and pseudo-sphere calculus, the
circle-quotient model with horizontal lifts and closed-form geodesics,
frame-built isometries and totally geodesic leaves, Frenet machinery for
curves, ruled hypersurface parametrizations with numeric shape operators,
and four closed-form hypersurface families used as oracles.
"""

from .config import RunConfig
from .curves import (
    ClosedFormCurve,
    CurveClass,
    FrenetResult,
    SampledCurve,
    case_c1_curve,
    case_c2_curve,
    case_c_verify,
    covariant_derivative,
    frenet_apparatus,
    horizontal_lift,
    is_totally_real_circle,
    model_circle_curve,
    sampled_curve_from_fn,
)
from .errors import GeometryError
from .examples import (
    ExampleSpec,
    example_cross_check,
    example_fields,
    example_integral_curve,
    example_map,
    example_spec,
    gamma_seed,
)
from .isometries import (
    IndefiniteUnitaryMatrix,
    LeafKind,
    TotallyGeodesicLeaf,
    complex_hyperplane_leaf,
    frame_to_isometry,
    totally_real_surface,
    totally_real_threefold,
)
from .linalg import (
    CausalCharacter,
    Signature,
    causal_character,
    hermitian_product,
    jmul,
    real_metric,
    sphere_gauss_split,
    sphere_tangent_project,
)
from .projective import (
    ProjectivePoint,
    ProjectiveTangent,
    canonicalize,
    curvature_tensor,
    exp_map,
    horizontal_project,
    log_in_leaf,
    sphere_geodesic,
)
from .ruled import (
    AlmostContactFrame,
    ClassificationReport,
    GeodesicSpherePatch,
    RHSParametrization,
    RHSPatch,
    ShapeForm,
    ShapeReport,
    MinimalCase,
    almost_contact_at,
    classify_generating_curve,
    classify_minimal_ruled,
    minimality,
    rhs_evaluate,
    shape_operator,
    transport_basis,
    verify_ruled,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
