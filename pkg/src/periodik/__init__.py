"""Recovery of periodicities hidden in heavy-tailed noise.

Estimates the number N, the frequencies lambda_n, and the complex
amplitudes alpha_n of x(t) = sum_n alpha_n exp(-i lambda_n t) + eps_t via
two-threshold discrete superlevel arcs of weighted partial sums, with
probability tail bounds and a Monte-Carlo consistency harness.
"""

from .arcs import (
    ArcFamily,
    DiscreteArc,
    hausdorff_distance,
    localization_set,
    refined_family,
    superlevel_arcs,
    two_threshold_family,
)
from .bounds import (
    CorollaryRates,
    LocalizationBounds,
    SweepPlan,
    SweepReport,
    TailBoundQuery,
    consistency_sweep,
    corollary_event_rates,
    localization_failure_bounds,
    poisson_noise_sup_tail_bound,
    subgaussian_poly_tail_bound,
)
from .errors import (
    ConfigurationError,
    DegenerateLocalizationError,
    InputLengthError,
    KernelDecompositionError,
    ParameterError,
    PeriodikError,
)
from .estimators import ComponentEstimate, EstimationReport, estimate, estimate_two_stage
from .kernels import (
    DIRICHLET,
    POISSON,
    GridEvaluation,
    SummationMatrix,
    check_kernel_bounds,
    evaluate_grid,
    kernel_at_one,
    kernel_f,
    partial_sum_at,
    poisson_remainder_bound,
    weight,
    weights,
)
from .schedules import ScheduleValues, ThresholdSchedule, schedule_at, validate_schedule
from .signal_model import (
    NoiseSpec,
    SampledSignal,
    SignalModel,
    derive_seed,
    draw_noise,
    read_signal_csv,
    rescale_decaying,
    synthesize,
    write_signal_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ArcFamily", "DiscreteArc", "hausdorff_distance", "localization_set",
    "refined_family", "superlevel_arcs", "two_threshold_family",
    "CorollaryRates", "LocalizationBounds", "SweepPlan", "SweepReport",
    "TailBoundQuery", "consistency_sweep", "corollary_event_rates",
    "localization_failure_bounds", "poisson_noise_sup_tail_bound",
    "subgaussian_poly_tail_bound",
    "ConfigurationError", "DegenerateLocalizationError", "InputLengthError",
    "KernelDecompositionError", "ParameterError", "PeriodikError",
    "ComponentEstimate", "EstimationReport", "estimate", "estimate_two_stage",
    "DIRICHLET", "POISSON", "GridEvaluation", "SummationMatrix",
    "check_kernel_bounds", "evaluate_grid", "kernel_at_one", "kernel_f",
    "partial_sum_at", "poisson_remainder_bound", "weight", "weights",
    "ScheduleValues", "ThresholdSchedule", "schedule_at", "validate_schedule",
    "NoiseSpec", "SampledSignal", "SignalModel", "derive_seed", "draw_noise",
    "read_signal_csv", "rescale_decaying", "synthesize", "write_signal_csv",
    "__version__",
]
