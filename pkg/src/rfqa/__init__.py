"""Simulator and analytics for quantum annealing with locally oscillating
transverse fields.

Modules:

- ``core``        state-vector evolution, step control, RNG plumbing
- ``lz``          driven two-level Landau-Zener sweeps and rate laws
- ``grover``      projector ("needle in a haystack") problem: gaps,
                  multi-photon Rabi spectroscopy, jump-and-wait protocol
- ``bitstring``   N-spin tunneling between bit-string minima under
                  transverse-field magnitude modulation (AAFM testbed)
- ``fits``        rate and scaling-exponent fits
- ``experiments`` reproducible experiment orchestration and emission
- ``cli``         command-line runner (``rfqa`` entry point)
"""

from .core import (
    DENSE_CAP,
    DenseCapError,
    QuantumState,
    StepControl,
    TimeDependentHamiltonian,
    evolve,
)
from .rng import rng_stream
from .lz import (
    HeatingParams,
    LzEstimate,
    LzSweep,
    ToneSet,
    draw_tone_set,
    gamma_total,
    heating_bounds,
    lz_static_probability,
    multi_tone_p1,
    noise_broadened_rate,
    simulate_lz,
)
from .grover import (
    DriveSpec,
    GroverProblem,
    JumpResult,
    RabiResult,
    analytic_delta_min,
    effective_amplitude,
    find_sc,
    jump_experiment,
    omega_m,
    optimal_bare_amplitude,
    predict_grover_rate,
    rabi_experiment,
    symmetric_gap,
)
from .grover_basis import ReducedGroverBasis, SymmetricReducedBasis
from .bitstring import (
    AnnealCurve,
    RfqamDrive,
    SpinGlassSpec,
    TunnelingModel,
    aafm_dense_h,
    aafm_min_gap,
    aafm_spec,
    aafm_symmetric_h,
    delta_min_perturbative,
    effective_params,
    phase_lock_asymptotic,
    phase_lock_spectrum,
    predict_rfqam_rate,
    run_rfqam_anneal,
    tunneling_model,
    tunneling_rate,
)
from .fits import ExponentFit, RateFit, extract_rate, fit_exponent
from .experiments import (
    ExperimentConfig,
    ResultBundle,
    TrialRecord,
    emit,
    parse_table,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "DENSE_CAP", "DenseCapError", "QuantumState", "StepControl",
    "TimeDependentHamiltonian", "evolve", "rng_stream",
    "HeatingParams", "LzEstimate", "LzSweep", "ToneSet", "draw_tone_set",
    "gamma_total", "heating_bounds", "lz_static_probability",
    "multi_tone_p1", "noise_broadened_rate", "simulate_lz",
    "DriveSpec", "GroverProblem", "JumpResult", "RabiResult",
    "analytic_delta_min", "effective_amplitude", "find_sc",
    "jump_experiment", "omega_m", "optimal_bare_amplitude",
    "predict_grover_rate", "rabi_experiment", "symmetric_gap",
    "ReducedGroverBasis", "SymmetricReducedBasis",
    "AnnealCurve", "RfqamDrive", "SpinGlassSpec", "TunnelingModel",
    "aafm_dense_h", "aafm_min_gap", "aafm_spec", "aafm_symmetric_h",
    "delta_min_perturbative", "effective_params", "phase_lock_asymptotic",
    "phase_lock_spectrum", "predict_rfqam_rate", "run_rfqam_anneal",
    "tunneling_model", "tunneling_rate",
    "ExponentFit", "RateFit", "extract_rate", "fit_exponent",
    "ExperimentConfig", "ResultBundle", "TrialRecord", "emit",
    "parse_table", "run",
]
