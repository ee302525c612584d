"""Best approximation by finitely supported functions in L_p.

Decreasing rearrangements, Lorentz and approximation-space quasinorms,
K-functional brackets and numerical checks of the Jackson, Bernstein and
Hardy inequalities that tie them together.
"""

from finapprox.errors import DomainError, ParseError, PreconditionError
from finapprox.profile import (
    NormParams,
    PowerTail,
    ProfilePiece,
    RearrangementProfile,
    approx_error,
    distribution,
    evaluate,
    p_moment,
)
from finapprox.stepfn import (
    IntervalSet,
    SampledFunction,
    StepFunction,
    best_approx,
    best_support_set,
    ingest_samples,
    rearrange,
)
from finapprox.norms import (
    QuadratureSpec,
    approx_space_norm,
    lorentz_norm,
    lp_norm,
    weak_lorentz_norm,
)
from finapprox.kfunc import (
    BoundReport,
    interp_norm_bounds,
    k_lower,
    k_upper_dyadic,
    k_upper_truncation,
)

__all__ = [
    "BoundReport",
    "DomainError",
    "IntervalSet",
    "NormParams",
    "ParseError",
    "PowerTail",
    "PreconditionError",
    "ProfilePiece",
    "QuadratureSpec",
    "RearrangementProfile",
    "SampledFunction",
    "StepFunction",
    "approx_error",
    "approx_space_norm",
    "best_approx",
    "best_support_set",
    "distribution",
    "evaluate",
    "ingest_samples",
    "interp_norm_bounds",
    "k_lower",
    "k_upper_dyadic",
    "k_upper_truncation",
    "lorentz_norm",
    "lp_norm",
    "p_moment",
    "rearrange",
    "weak_lorentz_norm",
]

__version__ = "0.1.0"
