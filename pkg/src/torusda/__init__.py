"""Pseudospectral 2D vorticity solver with nudging-based data assimilation.

The library integrates the incompressible Navier-Stokes equations in
vorticity form on the periodic box, runs twin experiments in which an
assimilated copy is nudged toward a reference through local observations
(static or mobile subdomains, coarse strides, volume or nodal
interpolants), and provides empirical checks of the approximation and
spectral inequalities that control when such nudging synchronizes.
"""

from .assimilate import (
    AdvisedParameters,
    ErrorSample,
    ErrorSeries,
    NudgingParams,
    TwinExperiment,
    advise_parameters,
    error_metrics,
    fit_rate,
    nudged_step,
    run_twin,
)
from .config import Config
from .errors import (
    BlowUpError,
    ConfigError,
    DegenerateMaskError,
    DegenerateReferenceError,
    FormatError,
    GevreyOverflowError,
    HermitianSymmetryError,
    NonZeroMeanError,
    ParameterOverflowError,
    SaturatedSeriesError,
    StateMismatchError,
)
from .io import (
    ExperimentManifest,
    error_header,
    load_checkpoint,
    read_error_series_csv,
    read_nfld,
    read_pbm,
    save_checkpoint,
    sha256_file,
    write_diag_row,
    write_error_row,
    write_manifest,
    write_nfld,
    write_pbm,
)
from .inequalities import (
    ApproxRow,
    FitResult,
    fit_spectral_constant,
    sample_bandlimited,
    sobolev_norm,
    thickness_ratio,
    verify_approx_inequality,
)
from .observe import (
    CoarseLattice,
    Mask,
    ObservationConfig,
    SubdomainSpec,
    disk_mask,
    mask_at,
    mask_from_bits,
    nodal_interpolant,
    observe,
    smoother_kp,
    spectral_project,
    subsample,
    trajectory_quarter,
    trajectory_sixteenth,
    volume_average_interpolant,
)
from .solver import (
    DiagnosticsRecord,
    ForcingSpec,
    SolverConfig,
    SolverState,
    build_forcing,
    diagnostics,
    grashof,
    rhs_explicit,
    spinup,
    step,
    with_time,
    zero_state,
)
from .spectral import (
    BOX_LENGTH,
    LAMBDA1,
    Grid,
    PhysicalField,
    SpectralField,
    dealias,
    forward,
    hermitian_defect,
    inverse,
    l2_norm,
    linf_norm,
    masked_l2_norm,
    nonlinear_term,
    project_zero_mean,
    solve_poisson,
    spectral_l2_norm,
    velocity_from_vorticity,
)

__version__ = "0.1.0"

__all__ = [
    "AdvisedParameters",
    "ApproxRow",
    "BOX_LENGTH",
    "BlowUpError",
    "CoarseLattice",
    "Config",
    "ConfigError",
    "DegenerateMaskError",
    "DegenerateReferenceError",
    "DiagnosticsRecord",
    "ErrorSample",
    "ErrorSeries",
    "ExperimentManifest",
    "FitResult",
    "ForcingSpec",
    "FormatError",
    "GevreyOverflowError",
    "Grid",
    "HermitianSymmetryError",
    "LAMBDA1",
    "Mask",
    "NonZeroMeanError",
    "NudgingParams",
    "ObservationConfig",
    "ParameterOverflowError",
    "PhysicalField",
    "SaturatedSeriesError",
    "SolverConfig",
    "SolverState",
    "SpectralField",
    "StateMismatchError",
    "SubdomainSpec",
    "TwinExperiment",
    "advise_parameters",
    "build_forcing",
    "dealias",
    "diagnostics",
    "disk_mask",
    "error_header",
    "error_metrics",
    "fit_rate",
    "fit_spectral_constant",
    "forward",
    "grashof",
    "hermitian_defect",
    "inverse",
    "l2_norm",
    "linf_norm",
    "load_checkpoint",
    "mask_at",
    "mask_from_bits",
    "masked_l2_norm",
    "nodal_interpolant",
    "nonlinear_term",
    "nudged_step",
    "observe",
    "project_zero_mean",
    "read_error_series_csv",
    "read_nfld",
    "read_pbm",
    "rhs_explicit",
    "run_twin",
    "sample_bandlimited",
    "save_checkpoint",
    "sha256_file",
    "smoother_kp",
    "sobolev_norm",
    "solve_poisson",
    "spectral_l2_norm",
    "spectral_project",
    "spinup",
    "step",
    "subsample",
    "thickness_ratio",
    "trajectory_quarter",
    "trajectory_sixteenth",
    "velocity_from_vorticity",
    "verify_approx_inequality",
    "with_time",
    "write_diag_row",
    "write_error_row",
    "write_manifest",
    "write_nfld",
    "write_pbm",
    "zero_state",
]
