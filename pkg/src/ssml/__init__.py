"""Simulator and analytics for one-bit feedback learning with run-length halting.

The package splits into five layers: qstate (dense complex linear algebra and
Haar sampling), noise (label-corruption channels), core (the closed-loop
single-trial engine), runstats (closed-form run statistics, certificates and
noise thresholds, plus the independent Markov-chain oracle), and montecarlo
(batch experiments with reproducible parallel seeding). cli wraps everything
for the command line.
"""

__version__ = "0.1.0"

from .core import (
    LearnerState,
    SsmlConfig,
    TrialResult,
    bestcase_certification_trial,
    born_measure,
    outcome_probabilities,
    run_trial,
    ssml_step,
    step_size,
)
from .errors import BudgetExceededError, NumericIntegrityError
from .montecarlo import (
    CellSummary,
    ExperimentSpec,
    ExponentialFit,
    NoiseCollapseRow,
    PowerLawFit,
    empirical_quantile,
    fit_exponential_cdf,
    loglog_slope,
    noise_collapse_table,
    run_experiment,
)
from .noise import NoiseModel, corrupt_label, effective_success
from .qstate import (
    basis_state,
    embed_su2_rotation,
    fidelity,
    haar_random_state,
    haar_random_unitary,
    unitary_with_fidelity,
)
from .runstats import (
    CertificateQuery,
    CertificateScale,
    RunQuery,
    RunStatsReport,
    RunWaitingDistribution,
    certificate_prob,
    decomposition_upper,
    eps_cert,
    geometric_run_mean,
    geometric_run_pmf,
    ms_proxy,
    noise_blowup_asymptote,
    noise_blowup_mean,
    noise_cert_eps,
    quantile_sufficient_shots,
    run_mean,
    run_stats_report,
    run_tail_bound,
    run_waiting_distribution,
)

__all__ = [
    "__version__",
    "BudgetExceededError",
    "CellSummary",
    "CertificateQuery",
    "CertificateScale",
    "ExperimentSpec",
    "ExponentialFit",
    "LearnerState",
    "NoiseCollapseRow",
    "NoiseModel",
    "NumericIntegrityError",
    "PowerLawFit",
    "RunQuery",
    "RunStatsReport",
    "RunWaitingDistribution",
    "SsmlConfig",
    "TrialResult",
    "basis_state",
    "bestcase_certification_trial",
    "born_measure",
    "certificate_prob",
    "corrupt_label",
    "decomposition_upper",
    "effective_success",
    "embed_su2_rotation",
    "empirical_quantile",
    "eps_cert",
    "fidelity",
    "fit_exponential_cdf",
    "geometric_run_mean",
    "geometric_run_pmf",
    "haar_random_state",
    "haar_random_unitary",
    "loglog_slope",
    "ms_proxy",
    "noise_blowup_asymptote",
    "noise_blowup_mean",
    "noise_cert_eps",
    "noise_collapse_table",
    "outcome_probabilities",
    "quantile_sufficient_shots",
    "run_experiment",
    "run_mean",
    "run_stats_report",
    "run_tail_bound",
    "run_trial",
    "run_waiting_distribution",
    "ssml_step",
    "step_size",
    "unitary_with_fidelity",
]
