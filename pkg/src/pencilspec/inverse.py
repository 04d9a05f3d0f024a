"""Recovering the boundary conditions from one spectrum.

Each nonzero eigenvalue lam of multiplicity m gives m linear equations
sum_jk p_jk phi_jk^(r)(lam) = 0 (r < m) on the six minors. With the pencil
non-degenerate (b**2 != 4c, b != 0, c != 0) the six phi_jk are linearly
independent, and a handful of eigenvalues pins the minor vector down to scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from .chardet import basis_derivatives
from .core import (
    BoundaryMatrix,
    ConditionReport,
    Pencil,
    PlueckerVector,
    Problem,
    SearchRegion,
    char_roots,
    theorem_conditions,
)
from .errors import (
    DoubleRootRegime,
    NotDecomposable,
    RankDeficientSystem,
    ValidationError,
    ZeroEigenvalueSupplied,
)
from .pluecker import DECOMPOSABLE_TOL, reconstruct_bc, relation_residual
from .roots import RootFinderConfig, find_eigenvalues


@dataclass(frozen=True)
class RecoveryConfig:
    null_tol: float = 1e-8
    inconsistency_tol: float = 1e-4
    min_constraints: int = 5
    zero_exclusion_radius: float = 1e-8
    fit_residual_tol: float = 1e-6


class RecoveryStatus(str, Enum):
    UNIQUE = "Unique"
    NON_UNIQUE = "NonUnique"
    UNDERDETERMINED = "Underdetermined"
    INCONSISTENT = "Inconsistent"


@dataclass(frozen=True, eq=False)
class RecoveryOutcome:
    status: RecoveryStatus
    nullspace_dim: int
    singular_values: tuple[float, ...]
    conditions: ConditionReport
    rank: int
    ray: Optional[PlueckerVector] = None
    reconstructed: Optional[BoundaryMatrix] = None
    residual: Optional[float] = None
    nullspace: Optional[np.ndarray] = None


def _normalise_eigenvalues(eigenvalues) -> list[tuple[complex, int]]:
    out = []
    for item in eigenvalues:
        if isinstance(item, (tuple, list)):
            lam, m = item
        else:
            lam, m = item, 1
        m = int(m)
        if m < 1:
            raise ValidationError(f"multiplicity must be positive, got {m}")
        out.append((complex(lam), m))
    return out


def constraint_matrix(pencil: Pencil, eigenvalues, config: RecoveryConfig | None = None) -> np.ndarray:
    """Rows (phi_jk^(r)(lam))_jk, r < multiplicity, each scaled to unit max magnitude."""
    config = config or RecoveryConfig()
    if not char_roots(pencil).distinct:
        raise DoubleRootRegime("recovery uses the exponential basis, which needs distinct characteristic roots")
    rows = []
    for lam, m in _normalise_eigenvalues(eigenvalues):
        if abs(lam) <= config.zero_exclusion_radius:
            raise ZeroEigenvalueSupplied(f"eigenvalue {lam} is inside the zero-exclusion radius")
        for r in range(m):
            row = basis_derivatives(pencil, lam, r)
            big = np.max(np.abs(row))
            rows.append(row / big if big > 0 else row)
    if not rows:
        return np.zeros((0, 6), dtype=complex)
    return np.array(rows)


def _singular_values(M: np.ndarray):
    if M.shape[0] == 0:
        return np.zeros(6), np.eye(6, dtype=complex)
    _, sv, vh = np.linalg.svd(M, full_matrices=True)
    sv = np.concatenate([sv, np.zeros(6 - sv.size)])
    return sv, vh


def _unit_ray(x: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(x)))
    return x / x[k]


def recover_from_spectrum(pencil: Pencil, eigenvalues, config: RecoveryConfig | None = None) -> RecoveryOutcome:
    """Minor ray of the boundary conditions consistent with the given nonzero eigenvalues.

    Status precedence: a pencil violating the non-degeneracy conditions has
    linearly dependent basis functions, so its ray can never be pinned down
    (NonUnique); otherwise fewer than ``min_constraints`` independent rows is
    Underdetermined; then the nullspace dimension decides.
    """
    config = config or RecoveryConfig()
    conds = theorem_conditions(pencil)
    M = constraint_matrix(pencil, eigenvalues, config)
    sv, vh = _singular_values(M)
    smax = sv[0]
    null_mask = sv <= config.null_tol * smax if smax > 0 else np.ones(6, dtype=bool)
    null_dim = int(null_mask.sum())
    rank = 6 - null_dim
    null_basis = vh[null_mask].conj()
    common = dict(singular_values=tuple(float(s) for s in sv), conditions=conds, rank=rank, nullspace=null_basis)

    if not conds.satisfied:
        status = RecoveryStatus.NON_UNIQUE if null_dim >= 2 else RecoveryStatus.INCONSISTENT
        return RecoveryOutcome(status, null_dim, **common)
    if rank < config.min_constraints:
        return RecoveryOutcome(RecoveryStatus.UNDERDETERMINED, null_dim, **common)
    if null_dim == 0:
        if sv[-1] > config.inconsistency_tol * smax:
            return RecoveryOutcome(RecoveryStatus.INCONSISTENT, 0, **common)
        # slightly perturbed data: the weakest direction is the numerical nullspace
        null_basis = vh[-1:].conj()
        null_dim = 1
        common["nullspace"] = null_basis
    x = _unit_ray(null_basis[0])
    ray = PlueckerVector.from_array(x)
    try:
        rec = reconstruct_bc(ray)
    except NotDecomposable:
        return RecoveryOutcome(RecoveryStatus.INCONSISTENT, null_dim, ray=ray, **common)
    residual = float(np.linalg.norm(M @ x)) if M.size else 0.0
    return RecoveryOutcome(RecoveryStatus.UNIQUE, null_dim, ray=ray, reconstructed=rec, residual=residual, **common)


def fit_from_delta_samples(pencil: Pencil, samples, config: RecoveryConfig | None = None) -> RecoveryOutcome:
    """Least-squares fit of the actual minors from observed (lam, Delta(lam)) pairs."""
    config = config or RecoveryConfig()
    if not char_roots(pencil).distinct:
        raise DoubleRootRegime("the linear model in the minors needs distinct characteristic roots")
    pairs = [(complex(lam), complex(val)) for lam, val in samples]
    if len(pairs) < 6:
        raise RankDeficientSystem(f"need at least 6 samples for 6 unknown minors, got {len(pairs)}")
    lams = np.array([p[0] for p in pairs])
    rhs = np.array([p[1] for p in pairs])
    A = basis_derivatives(pencil, lams, 0)
    w = 1.0 / np.maximum(np.max(np.abs(A), axis=1), np.finfo(float).tiny)
    A, rhs = A * w[:, None], rhs * w
    conds = theorem_conditions(pencil)
    sv, vh = _singular_values(A)
    smax = sv[0]
    null_mask = sv <= config.null_tol * smax if smax > 0 else np.ones(6, dtype=bool)
    null_dim = int(null_mask.sum())
    rank = 6 - null_dim
    if null_dim and conds.satisfied:
        raise RankDeficientSystem(f"sample design has rank {rank} < 6 although the basis is independent")
    p, *_ = np.linalg.lstsq(A, rhs, rcond=config.null_tol)
    rnorm = float(np.linalg.norm(A @ p - rhs))
    scale = float(np.linalg.norm(rhs))
    residual = rnorm / scale if scale > 0 else rnorm
    common = dict(singular_values=tuple(float(s) for s in sv), conditions=conds, rank=rank,
                  nullspace=vh[null_mask].conj(), residual=residual)
    ray = PlueckerVector.from_array(p)
    if null_dim:
        return RecoveryOutcome(RecoveryStatus.NON_UNIQUE, null_dim, ray=ray, **common)
    big = float(np.max(np.abs(p)))
    if big == 0 or residual > config.fit_residual_tol or abs(relation_residual(PlueckerVector.from_array(p / big))) > DECOMPOSABLE_TOL:
        return RecoveryOutcome(RecoveryStatus.INCONSISTENT, 0, ray=ray, **common)
    return RecoveryOutcome(RecoveryStatus.UNIQUE, 0, ray=ray, reconstructed=reconstruct_bc(ray), **common)


class Witness(NamedTuple):
    value: complex
    side: str  # "A-only", "B-only" or "multiplicity"


def common_spectra(problem_a: Problem, problem_b: Problem, region: SearchRegion,
                   config: RootFinderConfig | None = None):
    """Spectra of both problems computed on one shared (possibly jittered) region."""
    sa = find_eigenvalues(problem_a, region, config)
    sb = find_eigenvalues(problem_b, sa.region, config)
    for _ in range(3):
        if sb.region == sa.region:
            break
        sa = find_eigenvalues(problem_a, sb.region, config)
        if sa.region != sb.region:
            sb = find_eigenvalues(problem_b, sa.region, config)
    return sa, sb


def _unmatched(first, second, radius):
    for lam, m in first.eigenvalues:
        match = [mm for mu, mm in second.eigenvalues if abs(mu - lam) <= radius]
        if not match:
            return lam, None
        if sum(match) != m:
            return lam, "multiplicity"
    return None


def compare_spectra(sa, sb, radius: float) -> Optional[Witness]:
    hit = _unmatched(sa, sb, radius)
    if hit is not None:
        return Witness(hit[0], hit[1] or "A-only")
    hit = _unmatched(sb, sa, radius)
    if hit is not None:
        return Witness(hit[0], hit[1] or "B-only")
    return None


def distinguishing_eigenvalue(problem_a: Problem, problem_b: Problem, region: SearchRegion,
                              config: RootFinderConfig | None = None) -> Optional[Witness]:
    """First eigenvalue of A (then of B) missing from the other spectrum or with a different multiplicity."""
    config = config or RootFinderConfig()
    sa, sb = common_spectra(problem_a, problem_b, region, config)
    return compare_spectra(sa, sb, config.dedup_radius)
