import math

import numpy as np
import pytest
from conftest import DIRICHLET, EX2_A, EX2_B, make

from pencilspec import (
    Pencil,
    RecoveryStatus,
    SearchRegion,
    constraint_matrix,
    delta_direct,
    distinguishing_eigenvalue,
    find_eigenvalues,
    fit_from_delta_samples,
    minors,
    proportional,
    relation_residual,
    recover_from_spectrum,
)
from pencilspec.errors import DoubleRootRegime, RankDeficientSystem, ZeroEigenvalueSupplied
from pencilspec.harness import recovery_spectrum


def test_constraint_rows_annihilate_true_minors(random_problem):
    p = random_problem()
    spec = find_eigenvalues(p, SearchRegion(-5, 5, -20, 20))
    M = constraint_matrix(p.pencil, spec.eigenvalues)
    assert np.max(np.abs(M @ minors(p.bc).as_array())) < 1e-9


def test_recovery_of_random_problems(random_problem):
    for _ in range(5):
        p = random_problem()
        _, eigs = recovery_spectrum(p, 8)
        out = recover_from_spectrum(p.pencil, eigs)
        assert out.status is RecoveryStatus.UNIQUE
        assert out.nullspace_dim == 1 and out.rank == 5
        assert proportional(out.ray, minors(p.bc), 1e-6)
        assert proportional(minors(out.reconstructed), minors(p.bc), 1e-6)


def test_dirichlet_spectrum_does_not_determine_the_ray():
    # every Dirichlet eigenvalue 2 pi i k gives the same constraint row (0, 1, 1, 1, 1, 0) up to scale
    eigs = [2j * math.pi * k for k in (-3, -2, -1, 1, 2, 3)]
    M = constraint_matrix(Pencil(-3, 2), eigs)
    assert np.linalg.matrix_rank(M, tol=1e-10) == 1
    out = recover_from_spectrum(Pencil(-3, 2), eigs)
    assert out.status is RecoveryStatus.UNDERDETERMINED
    assert out.rank == 1 and out.nullspace_dim == 5
    truth = np.array([1, 0, 0, 0, 0, 0])
    proj = out.nullspace.conj() @ truth
    assert np.linalg.norm(out.nullspace.T @ proj - truth) < 1e-10


def test_example2_recovery_is_non_unique():
    p = make(0, -1, EX2_A)
    spec = find_eigenvalues(p, SearchRegion(-1, 1, -30, 30))
    out = recover_from_spectrum(p.pencil, spec.eigenvalues)
    assert out.status is RecoveryStatus.NON_UNIQUE
    assert out.nullspace_dim >= 2
    assert not out.conditions.cond2_b_nonzero


def test_too_few_eigenvalues():
    p = make(1 + 1j, 2, [[1, 0, 1, 0], [0, 1, 0, 1j]])
    spec = find_eigenvalues(p, SearchRegion(-5, 5, -10, 10))
    out = recover_from_spectrum(p.pencil, spec.eigenvalues[:3])
    assert out.status is RecoveryStatus.UNDERDETERMINED


def test_inconsistent_spectrum():
    out = recover_from_spectrum(Pencil(1 + 1j, 2), [0.3 + 1j * k for k in range(1, 10)])
    assert out.status is RecoveryStatus.INCONSISTENT
    assert out.reconstructed is None
    # the best-fitting direction is not the minor vector of any 2x4 matrix
    if out.ray is not None:
        assert abs(relation_residual(out.ray)) > 1e-8 * np.max(np.abs(out.ray.as_array())) ** 2


def test_multiplicity_adds_derivative_rows():
    M = constraint_matrix(Pencil(1, 2), [(1 + 1j, 3), (2j, 1)])
    assert M.shape == (4, 6)
    assert np.allclose(np.max(np.abs(M), axis=1), 1)


def test_recovery_preconditions():
    with pytest.raises(DoubleRootRegime):
        recover_from_spectrum(Pencil(-2, 1), [1.0])
    with pytest.raises(ZeroEigenvalueSupplied):
        recover_from_spectrum(Pencil(1, 2), [0.0, 1j])


def test_fit_from_samples():
    p = make(-3, 2, DIRICHLET)
    lams = np.linspace(-1, 1, 8) + 0.5j
    out = fit_from_delta_samples(p.pencil, zip(lams, delta_direct(p, lams)))
    assert out.status is RecoveryStatus.UNIQUE
    assert np.allclose(out.ray.as_array(), [1, 0, 0, 0, 0, 0], atol=1e-9)

    q = make(0, -1, EX2_A)
    out = fit_from_delta_samples(q.pencil, zip(lams, delta_direct(q, lams)))
    assert out.status is RecoveryStatus.NON_UNIQUE and out.nullspace_dim == 2

    out = fit_from_delta_samples(p.pencil, zip(lams, np.zeros(8)))
    assert out.status is RecoveryStatus.INCONSISTENT
    with pytest.raises(RankDeficientSystem):
        fit_from_delta_samples(p.pencil, zip(lams[:5], np.zeros(5)))


def test_witness_example1_first_problem_side():
    a, b = make(-2, 1, [[1, 0, 0, 0], [0, 0, 0, 1]]), make(-2, 1, [[1, 0, 0, 0], [0, 1, 0, 2]])
    w = distinguishing_eigenvalue(a, b, SearchRegion(-3, 3, -3, 3))
    assert w.side == "A-only" and w.value == pytest.approx(-1)


def test_example2_pair_separated_once_b_nonzero():
    a, b = make(-3, 2, EX2_A), make(-3, 2, EX2_B)
    assert distinguishing_eigenvalue(a, b, SearchRegion(-10, 10, -40, 40)) is not None


def test_equal_problems_have_no_witness():
    a = make(1 + 1j, 2, [[1, 0, 1, 0], [0, 1, 0, 1j]])
    assert distinguishing_eigenvalue(a, a, SearchRegion(-5, 5, -10, 10)) is None
