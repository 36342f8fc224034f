"""Simulation and link-budget toolkit for atom-photon entanglement over fiber.

The core lives in plain modules (zeeman, raman, qstate, decoherence, link,
rate, seqsim, analysis); config loads TOML scenarios, service exposes them
over HTTP, and cli is a thin client for the service.
"""

from .analysis import (
    ErrorBudget,
    ExponentialFit,
    FitError,
    SinusoidFit,
    chsh_from_counts,
    chsh_from_fringe,
    compose_error_budget,
    fidelity_from_summary,
    fidelity_lower_bound,
    fit_exponential,
    fit_sinusoid,
    fringe_visibilities,
    three_basis_correlators,
)
from .decoherence import CoherenceModel
from .link import LinkParams, click_breakdown, signal_click_probability, snr, snr_sweep
from .qstate import (
    AtomPhotonState,
    MeasurementSetting,
    apply_dephasing,
    apply_larmor,
    chsh_s,
    correlator,
    entangled_state_fidelity,
    ideal_entangled_state,
    mix_uncorrelated_noise,
    outcome_probabilities,
)
from .raman import RamanConfig, selectivity_contrast, transfer_probability
from .rate import TimingBudget, entanglement_rate, rate_sweep
from .seqsim import RunSummary, SequenceConfig, leave_one_out_budget, run_campaign
from .zeeman import (
    AtomicConstants,
    basis_sensitivity,
    breit_rabi_energy,
    suppression_factor,
    transition_frequency,
)

__version__ = "0.1.0"

__all__ = [
    "AtomPhotonState",
    "AtomicConstants",
    "CoherenceModel",
    "ErrorBudget",
    "ExponentialFit",
    "FitError",
    "LinkParams",
    "MeasurementSetting",
    "RamanConfig",
    "RunSummary",
    "SequenceConfig",
    "SinusoidFit",
    "TimingBudget",
    "apply_dephasing",
    "apply_larmor",
    "basis_sensitivity",
    "breit_rabi_energy",
    "chsh_from_counts",
    "chsh_from_fringe",
    "chsh_s",
    "click_breakdown",
    "compose_error_budget",
    "correlator",
    "entangled_state_fidelity",
    "entanglement_rate",
    "fidelity_from_summary",
    "fidelity_lower_bound",
    "fit_exponential",
    "fit_sinusoid",
    "fringe_visibilities",
    "ideal_entangled_state",
    "leave_one_out_budget",
    "mix_uncorrelated_noise",
    "outcome_probabilities",
    "rate_sweep",
    "run_campaign",
    "selectivity_contrast",
    "signal_click_probability",
    "snr",
    "snr_sweep",
    "suppression_factor",
    "three_basis_correlators",
    "transfer_probability",
    "transition_frequency",
    "__version__",
]
