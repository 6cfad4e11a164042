"""Open and closed quantized baker maps on the torus: non-unitary resonance
spectra, coherent-state phase-space fields, and the classical escape
structures they localize on."""

__version__ = "0.1.0"

from .classical import (ClassicalPoint, EscapeEstimate, PeriodicOrbit,
                        RepellerApprox, SymbolicSystem, box_dimension,
                        classical_step, count_allowed_words, escape_rate_mc,
                        finite_time_repeller, periodic_orbits, transition_matrix)
from .errors import (EXIT_CONFIG, EXIT_NEAR_DEFECTIVE, EXIT_NUMERICAL, EXIT_OK,
                     ConfigurationError, NearDefectiveResonanceError,
                     NumericalFailureError, OpenBakerError)
from .phasespace import (CoherentState, PhaseGrid, autocorrelation,
                         autocorrelation_at_points, coherent_state,
                         h_at_points, h_distribution, husimi, overlap_grid,
                         spectral_autocorrelation, spectral_sum_at_points)
from .quantization import (OpeningSpec, QuantumMap, TorusHilbert, baker_closed,
                           baker_open, fourier_kernel, open_map,
                           opening_projector, parity_operator,
                           time_reversal_apply)
from .spectral import (Resonance, ResonanceSet, WeylFit, decay_rate,
                       null_space_dim, resonance_set, resonances, tau_measure,
                       weyl_count, weyl_fit)

__all__ = [
    "__version__",
    # errors
    "OpenBakerError", "ConfigurationError", "NumericalFailureError",
    "NearDefectiveResonanceError", "EXIT_OK", "EXIT_CONFIG", "EXIT_NUMERICAL",
    "EXIT_NEAR_DEFECTIVE",
    # quantization
    "TorusHilbert", "OpeningSpec", "QuantumMap", "fourier_kernel",
    "baker_closed", "baker_open", "open_map", "opening_projector",
    "parity_operator", "time_reversal_apply",
    # spectral
    "Resonance", "ResonanceSet", "WeylFit", "resonances", "resonance_set",
    "decay_rate", "null_space_dim", "tau_measure", "weyl_count", "weyl_fit",
    # phasespace
    "CoherentState", "PhaseGrid", "coherent_state", "overlap_grid", "husimi",
    "h_distribution", "autocorrelation", "spectral_autocorrelation",
    "autocorrelation_at_points", "h_at_points", "spectral_sum_at_points",
    # classical
    "ClassicalPoint", "SymbolicSystem", "PeriodicOrbit", "RepellerApprox",
    "EscapeEstimate", "classical_step", "count_allowed_words",
    "transition_matrix", "periodic_orbits", "finite_time_repeller",
    "escape_rate_mc", "box_dimension",
]
