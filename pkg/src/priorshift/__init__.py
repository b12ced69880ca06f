"""Binary prevalence estimation under prior probability shift.

Maximum-likelihood prevalence estimation with known class-conditional
densities, the Fisher-information / Brier-score view of its asymptotic
variance, and the Sample-Mean-Matching estimator on a binormal benchmark.
"""

__version__ = "0.1.0"

from .densities import (
    BinormalModel,
    DensityPair,
    FunctionPair,
    MixtureModel,
    Sample,
    likelihood_ratio,
    mixture_density,
    sample_labelled,
    sample_mixture,
)
from .efficiency import (
    EfficiencyReport,
    QuadratureSettings,
    brier_score,
    efficiency_report,
    fisher_information,
    integrate,
    posterior,
    resolution,
)
from .errors import (
    ConvergenceError,
    DegeneracyError,
    DomainError,
    PriorShiftError,
    QuadratureError,
    SamplingError,
)
from .mle import (
    Case,
    PrevalenceEstimate,
    RatioSummary,
    classify_case,
    em_estimate,
    grid_oracle,
    log_likelihood,
    mle_estimate,
    score,
)
from .smm import SmmReport, auc, smm_estimate, smm_report, smm_variance
