"""Exact ground states, quantum geometry, and topology of a rotated XY ring."""

from .errors import (
    ArtifactError,
    BadSize,
    BandMismatch,
    CriticalPoint,
    DegenerateGroundState,
    DegenerateRatio,
    FiniteDifferenceUnstable,
    GaplessMode,
    GaplessOnGrid,
    GridMismatch,
    NoJumpFound,
    QuadratureNotConverged,
    SizeLimit,
    StencilCrossesCritical,
    TooCloseToCritical,
    VortexOnPlaquette,
    ZeroOverlap,
)
from .model import (
    Band,
    Mode,
    ModelParams,
    bogoliubov_angle,
    dispersion,
    fermi_cutoff,
    gap,
    momentum_grid,
)
from .ground_state import (
    GroundState,
    ModeAmplitudes,
    build_ground_state,
    ground_energy,
    isotropic_ground_state,
    mode_amplitudes,
    overlap,
)
from .geometry import (
    CurvatureDensity,
    GeometricTensor,
    berry_curvature_density,
    berry_curvature_mode,
    metric_real,
    qgt_finite_diff,
    qgt_spectral,
)
from .topology import (
    ChernMethod,
    ChernResult,
    PhaseLabel,
    PhasePoint,
    QuadratureConfig,
    chern_discrete,
    chern_number,
    classify_phase,
    detect_transition,
)
from .oracle import (
    ParitySectorResult,
    SpectralTerm,
    SpinSpectrum,
    build_spin_hamiltonian,
    ed_ground,
    embed_ground_state,
    free_fermion_parity_spectrum,
    hamiltonian_derivatives,
    qgt_matrix_elements,
    quadratic_ring_hamiltonian,
    wilson_loop_berry_phase,
)

__version__ = "0.1.0"

__all__ = [
    "ArtifactError",
    "BadSize",
    "Band",
    "BandMismatch",
    "ChernMethod",
    "ChernResult",
    "CriticalPoint",
    "CurvatureDensity",
    "DegenerateGroundState",
    "DegenerateRatio",
    "FiniteDifferenceUnstable",
    "GaplessMode",
    "GaplessOnGrid",
    "GeometricTensor",
    "GridMismatch",
    "GroundState",
    "Mode",
    "ModeAmplitudes",
    "ModelParams",
    "NoJumpFound",
    "ParitySectorResult",
    "PhaseLabel",
    "PhasePoint",
    "QuadratureConfig",
    "QuadratureNotConverged",
    "SizeLimit",
    "SpectralTerm",
    "SpinSpectrum",
    "StencilCrossesCritical",
    "TooCloseToCritical",
    "VortexOnPlaquette",
    "ZeroOverlap",
    "berry_curvature_density",
    "berry_curvature_mode",
    "bogoliubov_angle",
    "build_ground_state",
    "build_spin_hamiltonian",
    "chern_discrete",
    "chern_number",
    "classify_phase",
    "detect_transition",
    "dispersion",
    "ed_ground",
    "embed_ground_state",
    "fermi_cutoff",
    "free_fermion_parity_spectrum",
    "gap",
    "ground_energy",
    "hamiltonian_derivatives",
    "isotropic_ground_state",
    "metric_real",
    "mode_amplitudes",
    "momentum_grid",
    "overlap",
    "qgt_finite_diff",
    "qgt_matrix_elements",
    "qgt_spectral",
    "quadratic_ring_hamiltonian",
    "wilson_loop_berry_phase",
]
