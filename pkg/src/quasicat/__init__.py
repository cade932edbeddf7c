"""Two-mode cavity field states reduced to a single quasi mode.

The package models one two-level atom coupled to two cavity modes, maps
the pair onto an orthogonal quasi-mode pair in which only one mode
couples, and provides exact block evolution, dispersive approximations,
and phase-space diagnostics on truncated number-state spaces.
"""

from .errors import (
    BadSubsystem,
    BasisMismatch,
    BothCouplingsZero,
    ConfigInvalid,
    DegenerateCat,
    DetuningRatioWarning,
    DetuningTooSmall,
    DimTooSmall,
    DimensionMismatch,
    GridTooSmall,
    InvalidVariantParams,
    NonFiniteInput,
    NonPositiveInput,
    NonUnitPhase,
    NormViolation,
    ParameterOutOfRange,
    QuasicatError,
    ZeroDetuning,
)
from .fock import (
    LEAK_TOL,
    SQUEEZE_CAP,
    FockVector,
    TruncationReport,
    basis_state,
    coherent_overlap,
    coherent_state,
    displacement_matrix,
    expm_antihermitian,
    ladder_matrix,
    squeeze_matrix,
    squeezed_vacuum,
    suggested_dim,
)
from .modes import (
    PHYSICAL,
    QUASI,
    AmplitudePair,
    DecoupleParams,
    ModeRotation,
    decouple_params,
    mode_rotation_unitary,
    quasi_phase_amplitudes,
    rotate_amplitudes,
    rotation_params,
    squeeze_composition,
    squeeze_identity_residual,
)
from .dynamics import (
    RATIO_MIN,
    VARIANTS,
    HamiltonianSpec,
    HermitianPropagator,
    MeasurementOutcome,
    SystemState,
    adiabatic_residual,
    build_hamiltonian,
    cat_target,
    dispersive_hamiltonian,
    elimination_operator_residuals,
    evolve_effective,
    evolve_exact_jc,
    evolve_oracle,
    excitation_number,
    half_revival_time,
    large_amplitude_state,
    measure_atom,
    product_state,
    protocol_time,
    two_mode_cat_target,
)
from .analysis import (
    DensityMatrix,
    PhaseSpaceGrid,
    atomic_inversion,
    entropy,
    fidelity,
    husimi_q,
    mean_photon,
    partial_trace,
    pure_overlap,
    purity,
    trace_distance,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "QuasicatError",
    "NonFiniteInput",
    "DimTooSmall",
    "ParameterOutOfRange",
    "NonPositiveInput",
    "BothCouplingsZero",
    "BasisMismatch",
    "DimensionMismatch",
    "NonUnitPhase",
    "ZeroDetuning",
    "DetuningTooSmall",
    "DetuningRatioWarning",
    "InvalidVariantParams",
    "NormViolation",
    "DegenerateCat",
    "BadSubsystem",
    "GridTooSmall",
    "ConfigInvalid",
    # fock
    "LEAK_TOL",
    "SQUEEZE_CAP",
    "TruncationReport",
    "FockVector",
    "suggested_dim",
    "basis_state",
    "coherent_state",
    "coherent_overlap",
    "squeezed_vacuum",
    "ladder_matrix",
    "expm_antihermitian",
    "displacement_matrix",
    "squeeze_matrix",
    # modes
    "PHYSICAL",
    "QUASI",
    "ModeRotation",
    "AmplitudePair",
    "DecoupleParams",
    "rotation_params",
    "rotate_amplitudes",
    "mode_rotation_unitary",
    "squeeze_composition",
    "squeeze_identity_residual",
    "quasi_phase_amplitudes",
    "decouple_params",
    # dynamics
    "RATIO_MIN",
    "VARIANTS",
    "SystemState",
    "MeasurementOutcome",
    "HamiltonianSpec",
    "HermitianPropagator",
    "product_state",
    "build_hamiltonian",
    "excitation_number",
    "evolve_oracle",
    "evolve_exact_jc",
    "evolve_effective",
    "half_revival_time",
    "protocol_time",
    "large_amplitude_state",
    "cat_target",
    "two_mode_cat_target",
    "measure_atom",
    "dispersive_hamiltonian",
    "adiabatic_residual",
    "elimination_operator_residuals",
    # analysis
    "DensityMatrix",
    "PhaseSpaceGrid",
    "partial_trace",
    "entropy",
    "purity",
    "fidelity",
    "pure_overlap",
    "trace_distance",
    "atomic_inversion",
    "mean_photon",
    "husimi_q",
]
