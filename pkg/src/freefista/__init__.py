"""freefista: composite convex optimization with a parameter-free
restarted, adaptively backtracked accelerated proximal-gradient solver."""

from .adabt import AdaBtOutput, fista_adabt, harmonic_L_bar, t_update
from .core import (
    BacktrackConfig,
    BacktrackDivergenceError,
    FBStepResult,
    acceptance_test,
    bregman_f,
    composite_gradient_mapping,
    fb_bt,
    forward_backward_map,
)
from .problems import (
    CompositeProblem,
    GroundTruth,
    InpaintingInstance,
    LogisticL2L1Instance,
    PoissonSRInstance,
    inpainting_problem,
    kl_lipschitz_estimate,
    kl_value_grad,
    logistic_lipschitz_estimate,
    logistic_problem,
    logistic_value_grad,
    make_inpainting_instance,
    make_logistic_instance,
    make_poisson_sr_instance,
    make_quadratic_growth_test,
    poisson_problem,
)
from .restart import (
    EXIT_BUDGET,
    EXIT_EPSILON,
    FreeFistaConfig,
    RestartState,
    SolveReport,
    doubling_rule,
    free_fista,
    kappa_estimate,
    restart_fista_fixed_step,
    vanilla_fista,
)
from .trace import CSV_HEADER, TraceRecord, read_trace_csv, write_trace_csv
from .transforms import (
    haar_forward,
    haar_inverse,
    haar_transform,
    soft_threshold,
    soft_threshold_nonneg,
)

__version__ = "0.1.0"

__all__ = [
    "AdaBtOutput",
    "BacktrackConfig",
    "BacktrackDivergenceError",
    "CompositeProblem",
    "CSV_HEADER",
    "EXIT_BUDGET",
    "EXIT_EPSILON",
    "FBStepResult",
    "FreeFistaConfig",
    "GroundTruth",
    "InpaintingInstance",
    "LogisticL2L1Instance",
    "PoissonSRInstance",
    "RestartState",
    "SolveReport",
    "TraceRecord",
    "acceptance_test",
    "bregman_f",
    "composite_gradient_mapping",
    "doubling_rule",
    "fb_bt",
    "fista_adabt",
    "forward_backward_map",
    "free_fista",
    "haar_forward",
    "haar_inverse",
    "haar_transform",
    "harmonic_L_bar",
    "inpainting_problem",
    "kappa_estimate",
    "kl_lipschitz_estimate",
    "kl_value_grad",
    "logistic_lipschitz_estimate",
    "logistic_problem",
    "logistic_value_grad",
    "make_inpainting_instance",
    "make_logistic_instance",
    "make_poisson_sr_instance",
    "make_quadratic_growth_test",
    "poisson_problem",
    "read_trace_csv",
    "restart_fista_fixed_step",
    "soft_threshold",
    "soft_threshold_nonneg",
    "t_update",
    "vanilla_fista",
    "write_trace_csv",
]
