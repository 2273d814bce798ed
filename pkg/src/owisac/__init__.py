"""Capacity bounds, envelope design and FMCW sensing simulation for optical
wireless integrated sensing and communication."""

from .capacity import (
    CapacityCurve,
    HighSnrHyperParams,
    MaxVarianceResult,
    asymptotic_gap,
    build_capacity_curve,
    high_snr_asymptote,
    high_snr_hyperparams,
    high_snr_upper_bound,
    low_snr_asymptote,
    low_snr_upper_bound,
    max_variance,
    nsp_from_sigma,
    sigma_from_nsp,
    snr_db_to_sigma,
)
from .envelope import (
    PamConstellation,
    design_high_snr,
    design_low_snr,
    mutual_information_discrete,
    pam_cdf,
    pam_levels_uniform,
)
from .errors import (
    AliasError,
    ConfigError,
    DomainError,
    InfeasibleConstraint,
    NonConvergence,
    WindowError,
)
from .fmcwsim import (
    DEFAULT_FMCW,
    FmcwConfig,
    NoiseSpec,
    SensingRunResult,
    TargetScenario,
    monte_carlo_sensing,
)
from .maxent import (
    CaseClassification,
    EnvelopeConstraints,
    MaxEntropyDistribution,
    capacity_lower_bound,
    classify_case,
    maxent_cdf,
    maxent_entropy,
    maxent_pdf,
    solve_max_entropy,
)
from .specialfn import exp_integral_ei, gaussian_q, gh_auxiliary, ih_integral

__version__ = "0.1.0"
