"""Sparse adaptive filtering under impulsive noise.

Online sign-error (least absolute deviation) and mean-square filters with
zero-attracting and reweighted zero-attracting updates, a symmetric
alpha-stable noise generator, and a seeded Monte-Carlo harness for
time-varying sparse system identification.
"""
from .filters import (
    Algorithm,
    FilterParams,
    FilterState,
    StepRecord,
    l1_penalized_cost,
    l1_penalized_gradient,
    log_sum_penalized_cost,
    log_sum_penalized_gradient,
    predict,
    reweight_vector,
    sgn,
    step,
    step_lad,
    step_lms,
    step_rza_lad,
    step_rza_lms,
    step_za_lad,
    step_za_lms,
)
from .harness import ExperimentResult, TrialResult, TrialSeed, run_experiment, run_trial
from .metrics import MsdSeries, msd, msd_trajectory, to_db
from .noise import GsnrSpec, NoiseParams, calibrate_scale, sample_gaussian, sample_stable
from .scenarios import (
    Example,
    Phase,
    ScenarioConfig,
    SystemTrajectory,
    default_filter_params,
    make_example,
    phase_index_at,
    phase_segments,
    true_weights_at,
)
from .signals import (
    InputKind,
    InputSpec,
    RegressorWindow,
    generate_input,
    next_input,
    regressor_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "Example",
    "ExperimentResult",
    "FilterParams",
    "FilterState",
    "GsnrSpec",
    "InputKind",
    "InputSpec",
    "MsdSeries",
    "NoiseParams",
    "Phase",
    "RegressorWindow",
    "ScenarioConfig",
    "StepRecord",
    "SystemTrajectory",
    "TrialResult",
    "TrialSeed",
    "calibrate_scale",
    "default_filter_params",
    "generate_input",
    "l1_penalized_cost",
    "l1_penalized_gradient",
    "log_sum_penalized_cost",
    "log_sum_penalized_gradient",
    "make_example",
    "msd",
    "msd_trajectory",
    "next_input",
    "phase_index_at",
    "phase_segments",
    "predict",
    "regressor_matrix",
    "reweight_vector",
    "run_experiment",
    "run_trial",
    "sample_gaussian",
    "sample_stable",
    "sgn",
    "step",
    "step_lad",
    "step_lms",
    "step_rza_lad",
    "step_rza_lms",
    "step_za_lad",
    "step_za_lms",
    "to_db",
    "true_weights_at",
    "__version__",
]
