"""Reliability of series and parallel systems with dependent components."""

from .error_analysis import (
    AssessmentReport,
    ErrorCurve,
    assess_signs,
    closed_form_error,
    monotone_ratio,
    relative_error_curve,
)
from .exceptions import (
    DegenerateError,
    DomainError,
    IntegrationFailure,
    InvalidParameter,
    SizeLimit,
    SysdepError,
    Unsupported,
    UnsupportedFamily,
)
from .models import (
    FAMILIES,
    FGMW,
    LB1,
    LB2,
    MG1,
    MOME,
    MOMW,
    Baseline,
    Crowder,
    IndExp,
    IndWeibull,
    Lee,
    LifetimeModel,
    SubsetRateMap,
    from_dict,
    independent_counterpart,
    joint_sf,
    marginal_sf,
    validate,
)
from .orders import (
    DependenceLabel,
    Direction,
    OrderVerdict,
    Relation,
    audit_implications,
    check_series_parallel_sign,
    classify_orthant_dependence,
    compare_order,
)
from .simulate import EmpiricalCurve, SampleMatrix, empirical_system_sf, mc_validate, sample_model
from .systems import (
    Assumption,
    CurveSet,
    EvalGrid,
    Func,
    Provenance,
    Structure,
    SystemSpec,
    classify_aging,
    closed_form_value,
    curves,
    evaluate,
    system_function,
    system_sf,
)

__version__ = "0.1.0"
