"""Dynamics of finite Blaschke products, their epicycloid parameter boundaries,
the degree-2 conjugacy invariant and the Multibrot central component."""

from .blaschke import (
    DynamicsClass,
    DynamicsKind,
    FiniteBlaschkeProduct,
    JuliaClass,
    JuliaKind,
    blaschke_derivative,
    blaschke_eval,
    blaschke_fixed_points,
    classify_dynamics,
    classify_dynamics_many,
    julia_classify,
    julia_sample,
)
from .config import DEFAULT, Tolerances
from .core import (
    MoebiusMap,
    cross_ratio,
    disk_automorphism,
    format_complex,
    hyperbolic_distance,
    moebius_apply,
    moebius_compose,
    moebius_inverse,
    parse_complex,
)
from .degree2 import (
    ConjugacyWitness,
    Degree2Product,
    LambdaInvariant,
    classify_degree2,
    conjugator,
    critical_point,
    f_lambda,
    geodesic_side,
    lambda_invariant,
    lambda_real,
)
from .errors import (
    AmbiguousClassification,
    ConvergenceError,
    DegenerateError,
    DomainError,
    EpiError,
    ExcludedPoint,
    InconsistentClassification,
    NoRepellingFixedPoint,
    PoleError,
)
from .multibrot import (
    CentralComponentResult,
    CentralStatus,
    MultibrotQuery,
    multibrot_boundary_point,
    multibrot_central_classify,
    multibrot_component_raster,
)
from .raster import ClassificationRaster, Rect
from .roots import ComplexPolynomial, poly_roots
from .unicritical import (
    Epicycloid,
    MembershipResult,
    Region,
    UnicriticalParameter,
    classify_unicritical,
    cusps,
    epicycloid_membership,
    epicycloid_point,
    gamma_d_derivative,
    gamma_d_point,
    parabolic_parameter,
    rotate_sector,
    sector_reduce,
)

__version__ = "0.1.0"
