"""Fit time-dependent Markovian models to tomographic channel snapshots.

The package splits into small numpy-based layers: ``channels`` holds the
superoperator representations and fixed operators, ``spectral`` the
eigensystem and matrix-log branch machinery, ``lindblad`` the GKLS form
and generator conditions, ``projections`` the constrained-projection
solver, ``fitter`` the end-to-end estimation algorithm, ``simulator``
ground-truth dynamics, ``bounds`` the error-bound formulas, and
``fileio``/``cli`` the file formats and command-line front end.
"""

from ._version import __version__
from .bounds import (
    BoundInputs,
    beta_default,
    estimate_magnus_remainder,
    snapshot_error_bound,
    theta_error_bound,
)
from .channels import (
    flip_operator,
    gamma_involution,
    hermiticity_preserving_residual,
    omega_perp,
    omega_vector,
    partial_trace_first,
    sandwich_transfer,
    unvec,
    vec,
)
from .fitter import (
    VERDICT_CANNOT_ASSESS,
    VERDICT_MARKOVIAN,
    VERDICT_NON_MARKOVIAN,
    BranchRecoveryReport,
    FitConfig,
    FitResult,
    SnapshotSeries,
    branch_recovery_selfcheck,
    compute_thetas,
    fit,
    fit_beta_sweep,
    reconstruct,
)
from .lindblad import (
    ConditionReport,
    GKLSParams,
    check_lindblad_conditions,
    gkls_to_transfer,
    random_gkls,
)
from .projections import (
    ConstraintSpec,
    ProjectionResult,
    dykstra_nearest,
    project_ball,
    project_ccp,
    project_hermitian,
    project_tracefree,
)
from .simulator import (
    GeneratorTrajectory,
    NoiseSpec,
    NonLipschitzWarning,
    emit_snapshots,
    measure_lipschitz,
    propagate,
)
from .spectral import (
    BranchCutWarning,
    BranchVector,
    NonDiagonalizableError,
    SingularChannelError,
    SpectralDecomposition,
    branch_log,
    decompose,
    enumerate_branches,
    principal_log,
)

__all__ = [
    "__version__",
    # channels
    "vec",
    "unvec",
    "sandwich_transfer",
    "gamma_involution",
    "omega_vector",
    "omega_perp",
    "flip_operator",
    "partial_trace_first",
    "hermiticity_preserving_residual",
    # spectral
    "SpectralDecomposition",
    "BranchVector",
    "NonDiagonalizableError",
    "SingularChannelError",
    "BranchCutWarning",
    "decompose",
    "principal_log",
    "branch_log",
    "enumerate_branches",
    # lindblad
    "GKLSParams",
    "ConditionReport",
    "gkls_to_transfer",
    "check_lindblad_conditions",
    "random_gkls",
    # projections
    "ConstraintSpec",
    "ProjectionResult",
    "project_hermitian",
    "project_ccp",
    "project_tracefree",
    "project_ball",
    "dykstra_nearest",
    # fitter
    "SnapshotSeries",
    "FitConfig",
    "FitResult",
    "BranchRecoveryReport",
    "VERDICT_MARKOVIAN",
    "VERDICT_NON_MARKOVIAN",
    "VERDICT_CANNOT_ASSESS",
    "compute_thetas",
    "fit",
    "fit_beta_sweep",
    "reconstruct",
    "branch_recovery_selfcheck",
    # simulator
    "GeneratorTrajectory",
    "NoiseSpec",
    "NonLipschitzWarning",
    "propagate",
    "emit_snapshots",
    "measure_lipschitz",
    # bounds
    "BoundInputs",
    "theta_error_bound",
    "snapshot_error_bound",
    "beta_default",
    "estimate_magnus_remainder",
]
