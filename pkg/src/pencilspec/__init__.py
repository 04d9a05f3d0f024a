"""Spectra, characteristic determinants and uniqueness of boundary problems for
y'' + b*lam*y' + c*lam**2*y = 0 on [0, L] with two-point boundary forms."""

from .chardet import (
    DeltaEvaluator,
    basis_functions,
    check_exponent_guard,
    delta_derivative,
    delta_direct,
    delta_minor,
    fundamental_values,
)
from .core import (
    BoundaryMatrix,
    CharacteristicRoots,
    ConditionReport,
    Pencil,
    PlueckerVector,
    Problem,
    RootKind,
    SearchRegion,
    Spectrum,
    char_roots,
    theorem_conditions,
    validate_bc,
)
from .errors import *  # noqa: F401,F403
from .harness import ExampleReport, TrialConfig, random_trial, run_example
from .inverse import (
    RecoveryConfig,
    RecoveryOutcome,
    RecoveryStatus,
    Witness,
    compare_spectra,
    constraint_matrix,
    distinguishing_eigenvalue,
    fit_from_delta_samples,
    recover_from_spectrum,
)
from .pluecker import equivalent, minors, proportional, reconstruct_bc, relation_residual
from .roots import RootFinderConfig, count_zeros, find_eigenvalues, find_zeros, refine_root

__version__ = "0.1.0"
