"""germflow: contracting one-dimensional flows near the origin.

Explicit hyperbolic vector-field families on (0, delta], their time maps
and flows, the canonical conjugacies between flows, conjugacy-class
classification (bi-Lipschitz / C1) from tail behavior, and the variation
asymptotics of the profile-generated conjugacies.

Everything is deterministic (no randomness anywhere); hot kernels run under
numba unless GERMFLOW_NUMBA=0 selects the pure-numpy path.
"""

from .conjugacy import ConjugacyMap, closed_form
from .errors import (
    BoundViolation,
    BudgetExceeded,
    DegeneracyError,
    DomainError,
    GermflowError,
    InsufficientSamples,
    NonConvergence,
    NonFiniteError,
    NotHyperbolic,
    ParseError,
    RangeExceeded,
)
from .fields import (
    FieldSpec,
    SGenSpec,
    eval_DX,
    eval_Ds,
    eval_Du,
    eval_X,
    eval_s,
    eval_u,
    field_from_s,
    format_field_spec,
    multiplier_estimate,
    parse_field_spec,
)
from .logcoord import LogCoord
from .quadrature import Integrand, QuadResult, TailSamples, integrate, tail_sequence
from .regularity import (
    AcConditionsReport,
    ClassifyParams,
    RegularityVerdict,
    TailBehavior,
    check_ac_conditions,
    classify_pair,
    flow_ac_bound_check,
    tail_behavior,
)
from .timemap import TimeMapCache
from .variation import (
    AsymptoteFit,
    TanFixedPoints,
    VariationCurve,
    asymptote_fit,
    conjugacy_variation_curve,
    shat,
    shat_variation,
    tan_fixed_points,
    total_variation,
)

__version__ = "0.1.0"

__all__ = [
    "ConjugacyMap",
    "closed_form",
    "GermflowError",
    "DomainError",
    "DegeneracyError",
    "ParseError",
    "NonConvergence",
    "BudgetExceeded",
    "NonFiniteError",
    "RangeExceeded",
    "InsufficientSamples",
    "NotHyperbolic",
    "BoundViolation",
    "FieldSpec",
    "SGenSpec",
    "LogCoord",
    "eval_X",
    "eval_DX",
    "eval_s",
    "eval_Ds",
    "eval_u",
    "eval_Du",
    "field_from_s",
    "multiplier_estimate",
    "parse_field_spec",
    "format_field_spec",
    "Integrand",
    "QuadResult",
    "TailSamples",
    "integrate",
    "tail_sequence",
    "TimeMapCache",
    "ConjugacyMap",
    "TailBehavior",
    "RegularityVerdict",
    "AcConditionsReport",
    "ClassifyParams",
    "tail_behavior",
    "classify_pair",
    "check_ac_conditions",
    "flow_ac_bound_check",
    "shat",
    "TanFixedPoints",
    "tan_fixed_points",
    "total_variation",
    "shat_variation",
    "VariationCurve",
    "AsymptoteFit",
    "asymptote_fit",
    "conjugacy_variation_curve",
    "__version__",
]
