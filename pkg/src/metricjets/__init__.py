"""Exact normal forms, normal tensors and O(2) strata for jets of Riemannian metrics."""
from .errors import (
    DimensionMismatch,
    DocumentError,
    FrameError,
    JetError,
    NonUnitError,
    NotNormalForm,
    OrderError,
    SingularLinearPart,
)
from .gaussian import GaussRational
from .jet import DiffeoJet, JetScalar, compose, map_invert, series_arith, series_partial, substitute
from .metric import (
    CurvatureData,
    MetricJet,
    christoffel,
    curvature_data,
    gauss_curvature,
    inverse_metric,
    pullback,
    unit_frame,
)
from .normal_form import (
    NormalTensor,
    dim_moduli,
    dim_normal,
    dim_normal_bruteforce,
    exp_map_jet,
    extract_h,
    gauss_check,
    metric_from_h,
    metric_from_tensors,
    normal_tensors,
    normalize,
)
from .strata import (
    Equivalence,
    O2,
    SO2,
    GroupType,
    InvariantVector,
    ZBarPoly,
    census,
    from_zbar,
    invariants,
    orbit_equivalent,
    preset_h,
    solve_unit_root_system,
    stabilizer,
    to_zbar,
    type_of_jet,
    y_membership,
)

__version__ = "0.1.0"
