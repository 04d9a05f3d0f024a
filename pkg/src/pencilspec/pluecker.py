"""Plücker coordinates of 2x4 boundary matrices (points of Gr(2, 4)).

Two boundary matrices define the same problem exactly when their row spaces
coincide, i.e. when their minor vectors are proportional.
"""

from __future__ import annotations

import numpy as np

from .core import PAIR_INDEX, RANK_TOL, BoundaryMatrix, PlueckerVector, validate_bc
from .errors import InternalConsistencyError, NotDecomposable, ZeroVector

DECOMPOSABLE_TOL = 1e-8
PROPORTIONAL_TOL = 1e-9


def minors(bc: BoundaryMatrix) -> PlueckerVector:
    a = bc.a if isinstance(bc, BoundaryMatrix) else np.asarray(bc, dtype=complex)
    return PlueckerVector(*(complex(a[0, j] * a[1, k] - a[0, k] * a[1, j]) for j, k in PAIR_INDEX))


def relation_residual(p: PlueckerVector) -> complex:
    """p12 p34 - p13 p24 + p14 p23; zero exactly for decomposable vectors."""
    return p.p12 * p.p34 - p.p13 * p.p24 + p.p14 * p.p23


def proportional(p: PlueckerVector, q: PlueckerVector, tol: float = PROPORTIONAL_TOL) -> bool:
    pa, qa = p.as_array(), q.as_array()
    pmax, qmax = np.max(np.abs(pa)), np.max(np.abs(qa))
    if qmax == 0:
        raise ZeroVector("cannot compare against the zero Plücker vector")
    if pmax == 0:
        return False
    # rescale first so the norms cannot underflow for tiny minors
    pa, qa = pa / pmax, qa / qmax
    pn = np.linalg.norm(pa)
    k = int(np.argmax(np.abs(qa)))
    s = pa[k] / qa[k]
    if s == 0:
        return False
    return bool(np.linalg.norm(pa - s * qa) <= tol * pn)


def _row_basis(a: np.ndarray) -> np.ndarray:
    # orthonormal basis of the row space, so both matrices enter the stack at equal weight
    _, _, vh = np.linalg.svd(a, full_matrices=False)
    return vh[:2]


def subspace_gap(A: BoundaryMatrix, B: BoundaryMatrix) -> float:
    """sigma_3 / sigma_1 of the stacked orthonormal row bases; zero iff the row spaces coincide."""
    stack = np.vstack([_row_basis(A.a), _row_basis(B.a)])
    sv = np.linalg.svd(stack, compute_uv=False)
    return float(sv[2] / sv[0])


def _minor_gap(p: PlueckerVector, q: PlueckerVector) -> float:
    pa, qa = p.as_array(), q.as_array()
    pa, qa = pa / np.max(np.abs(pa)), qa / np.max(np.abs(qa))
    k = int(np.argmax(np.abs(qa)))
    s = pa[k] / qa[k]
    return float(np.linalg.norm(pa - s * qa) / np.linalg.norm(pa))


def equivalent(A: BoundaryMatrix, B: BoundaryMatrix) -> bool:
    """True iff the rows of B are invertible combinations of the rows of A.

    Decided by the rank of the 4x4 stack and cross-checked against proportionality
    of the minor vectors; a disagreement that is not borderline for both tests is
    reported as an internal error.
    """
    gap = subspace_gap(A, B)
    by_rank = gap <= RANK_TOL
    pA, pB = minors(_row_basis(A.a)), minors(_row_basis(B.a))
    by_minors = proportional(pA, pB, PROPORTIONAL_TOL)
    if by_rank != by_minors:
        mgap = _minor_gap(pA, pB)
        borderline = 1e-3 * RANK_TOL < gap < 1e3 * RANK_TOL or 1e-3 * PROPORTIONAL_TOL < mgap < 1e3 * PROPORTIONAL_TOL
        if not borderline:
            raise InternalConsistencyError(f"rank test ({gap:.3g}) and minor test ({mgap:.3g}) disagree")
    return by_rank


def reconstruct_bc(p: PlueckerVector) -> BoundaryMatrix:
    """A boundary matrix whose minor vector is proportional to ``p``.

    Works in the affine chart of the largest coordinate p_jk: the result has the
    identity in columns (j, k).
    """
    arr = p.as_array()
    big = float(np.max(np.abs(arr)))
    if big == 0:
        raise ZeroVector("zero Plücker vector has no row space")
    res = abs(relation_residual(PlueckerVector.from_array(arr / big)))
    if res > DECOMPOSABLE_TOL:
        raise NotDecomposable(f"relative Plücker relation residual {res:.3g} exceeds {DECOMPOSABLE_TOL:g}")
    j, k = PAIR_INDEX[int(np.argmax(np.abs(arr)))]
    pjk = p.entry(j, k)
    a = np.zeros((2, 4), dtype=complex)
    for col in range(4):
        a[0, col] = p.entry(col, k) / pjk
        a[1, col] = p.entry(j, col) / pjk
    return validate_bc(a)
