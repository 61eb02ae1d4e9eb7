"""Numerical laboratory for EM on symmetric two-Gaussian mixtures.

Exposes the quadrature spec, the scalar kernels, the population and
sample-based EM steps/runners, the expected log-likelihood landscape tools,
and the consistency harness.  See the command-line entry point ``emlab``
for the packaged experiments.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DegenerateState,
    DegenerateWeights,
    DimensionMismatch,
    DomainError,
    InsufficientData,
    NonConvergence,
    NotPositiveDefinite,
)
from .geometry import (
    ABState,
    MeanPair,
    MixtureModel,
    PlanarCoords,
    angle_beta,
    from_ab,
    planar_reduce,
    to_ab,
    whiten,
)
from .harness import (
    ConsistencyResult,
    ContractionEstimate,
    concentration_check,
    consistency_ladder,
    contraction_estimate,
    coupled_run,
    error_accumulation_check,
    rate_fit,
)
from .kernels import (
    AuxBounds,
    KernelArgs,
    eval_aux_bounds,
    eval_F,
    eval_Gamma,
    eval_K,
    eval_P,
    eval_R,
    eval_S,
    kernel_f,
    kernel_gamma,
    kernel_k,
    kernel_p,
    kernel_r,
    kernel_s,
    tabulate,
)
from .landscape import (
    Classification,
    StationaryReport,
    classify_stationary,
    expected_loglik,
    fixed_stationary_correspondence,
    grad_G,
)
from .population import (
    APrioriBounds,
    LimitClass,
    PopStepRecord,
    StopRule,
    Trajectory,
    a_priori_bounds,
    classify_limit,
    model1_step,
    model2_step,
    posterior_mass,
    run,
    run_model1,
)
from .quadrature import QuadratureSpec
from .sampling import (
    Dataset,
    model1_step_sample,
    model2_step_ab,
    model2_step_mu,
    run_sample,
    sample_loglik,
    sample_mixture,
)

__all__ = [
    "__version__",
    "ABState",
    "APrioriBounds",
    "AuxBounds",
    "Classification",
    "ConfigError",
    "ConsistencyResult",
    "ContractionEstimate",
    "Dataset",
    "DegenerateState",
    "DegenerateWeights",
    "DimensionMismatch",
    "DomainError",
    "InsufficientData",
    "KernelArgs",
    "LimitClass",
    "MeanPair",
    "MixtureModel",
    "NonConvergence",
    "NotPositiveDefinite",
    "PlanarCoords",
    "PopStepRecord",
    "QuadratureSpec",
    "StationaryReport",
    "StopRule",
    "Trajectory",
    "a_priori_bounds",
    "angle_beta",
    "classify_limit",
    "classify_stationary",
    "concentration_check",
    "consistency_ladder",
    "contraction_estimate",
    "coupled_run",
    "error_accumulation_check",
    "eval_F",
    "eval_Gamma",
    "eval_K",
    "eval_P",
    "eval_R",
    "eval_S",
    "eval_aux_bounds",
    "expected_loglik",
    "fixed_stationary_correspondence",
    "from_ab",
    "grad_G",
    "kernel_f",
    "kernel_gamma",
    "kernel_k",
    "kernel_p",
    "kernel_r",
    "kernel_s",
    "model1_step",
    "model1_step_sample",
    "model2_step",
    "model2_step_ab",
    "model2_step_mu",
    "planar_reduce",
    "posterior_mass",
    "rate_fit",
    "run",
    "run_model1",
    "run_sample",
    "sample_loglik",
    "sample_mixture",
    "tabulate",
    "to_ab",
    "whiten",
]
