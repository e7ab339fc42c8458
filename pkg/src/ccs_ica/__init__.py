"""Non-parametric ICA with the convex Cauchy-Schwarz divergence."""
from .bench import RunConfig, TrialRecord, emit_figure, emit_table, run_benchmark
from .density import ParzenModel, default_bandwidth, pdf_multi, pdf_uni, pdf_uni_deriv
from .divergence import ccs_div, ccs_div_integral_2d, convex_f, convex_f_prime
from .errors import (
    DegenerateContrastError,
    DomainError,
    RankDeficiencyError,
    SingularMatrixError,
)
from .ica_core import (
    CCSContrast,
    ContrastConfig,
    DemixingState,
    OptimizerConfig,
    eval_contrast,
    eval_gradient,
    run_gradient_ica,
)
from .metrics import AmariScore, amari_error, kurtosis
from .pairwise import (
    RotationGrid,
    SweepState,
    jacobi_sweep,
    pairwise_contrast,
    rotation2,
    run_jacobi_ica,
    run_pairwise_gradient_ica,
)
from .preprocess import Whitener, apply_whitener, fit_whitener, whiten
from .signals import MixingModel, SourceSpec, gen_mixing, gen_source, gen_sources, mix

__version__ = "0.1.0"
