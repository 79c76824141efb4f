"""Quantum-magnetohydrodynamic plasma waves.

Closed-form quantum-corrected dispersion relations for Alfven and
magnetosonic branches, a linearized spectral simulator that validates them,
Madelung fluid machinery for the quantum potential, and the logarithmic
Schrodinger gausson with its classical delta-function limit.
"""

from .core import (FOUR_PI, DegenerateBranch, DissipationParams, FitFailed,
                   NegativeDiscriminant, NegativeSpeed, NonFinite,
                   NonPositiveAmplitude, NonPositiveDensity, NumericalError,
                   PerturbationAmplitudes, PlasmaBackground, QmhdError,
                   UnstableStep, VacuumRegion, ValidationError,
                   ZeroWaveVector, validate_background, validate_wavevector)
from .dispersion import (DispersionResult, ModeBranch, alfven_frequency,
                         alfven_group_velocity, alfven_speed,
                         canonical_frame, dispersion_result,
                         linearized_matrix, magnetosonic_speeds,
                         plane_wave_residual, polarization,
                         quantum_sound_speed)
from .linsim import (ModeMeasurement, ModeRun, PerturbationState, ScanRow,
                     SimGrid, dispersion_scan, energy, init_plane_wave,
                     max_eigenfrequency, measure_mode, rhs, simulate_mode,
                     stable_dt, step_rk4, zero_state)
from .madelung import (ComplexField1D, FluidFields1D, SolitonParams,
                       bohm_potential, classical_limit_width, delta_density,
                       hydrodynamic_residuals, lognls_evolve, lognls_step,
                       madelung_decompose, madelung_recompose,
                       normalize_soliton, soliton_density, soliton_field,
                       soliton_params, soliton_profile,
                       soliton_wavefunction)

__version__ = "0.1.0"

__all__ = [
    "FOUR_PI", "QmhdError", "ValidationError", "NumericalError",
    "NonPositiveDensity", "NegativeSpeed", "NonFinite", "ZeroWaveVector",
    "NonPositiveAmplitude", "DegenerateBranch", "NegativeDiscriminant",
    "VacuumRegion", "UnstableStep", "FitFailed",
    "PlasmaBackground", "DissipationParams", "PerturbationAmplitudes",
    "validate_background", "validate_wavevector",
    "ModeBranch", "DispersionResult", "canonical_frame", "alfven_speed",
    "quantum_sound_speed", "magnetosonic_speeds", "alfven_frequency",
    "alfven_group_velocity", "dispersion_result", "polarization",
    "linearized_matrix", "plane_wave_residual",
    "SimGrid", "PerturbationState", "ModeMeasurement", "ModeRun", "ScanRow",
    "zero_state", "rhs", "step_rk4", "init_plane_wave", "energy",
    "max_eigenfrequency", "stable_dt", "measure_mode", "simulate_mode",
    "dispersion_scan",
    "ComplexField1D", "FluidFields1D", "SolitonParams", "bohm_potential",
    "madelung_decompose", "madelung_recompose", "hydrodynamic_residuals",
    "soliton_params", "normalize_soliton", "soliton_profile",
    "soliton_wavefunction", "soliton_density", "soliton_field",
    "delta_density", "classical_limit_width", "lognls_step", "lognls_evolve",
    "__version__",
]
