import cmath

import numpy as np
import pytest

from pencilspec import (
    BoundaryMatrix,
    Pencil,
    PlueckerVector,
    Problem,
    RootKind,
    SearchRegion,
    char_roots,
    theorem_conditions,
    validate_bc,
)
from pencilspec.errors import RankDeficient, ValidationError


@pytest.mark.parametrize(
    "b, c, expected",
    [
        (-3, 2, (1, 2)),
        (0, -1, (-1, 1)),
        (2, 2, (-1 - 1j, -1 + 1j)),
        (4, 5, (-2 - 1j, -2 + 1j)),
        (-1, 0, (0, 1)),
    ],
)
def test_char_roots_canonical_order(b, c, expected):
    r = char_roots(Pencil(b, c))
    assert r.kind is RootKind.DISTINCT
    assert r.omega1 == pytest.approx(expected[0], abs=1e-14)
    assert r.omega2 == pytest.approx(expected[1], abs=1e-14)


def test_char_roots_double():
    r = char_roots(Pencil(-2, 1))
    assert r.kind is RootKind.DOUBLE
    assert r.omega1 == r.omega2 == 1


def test_char_roots_no_cancellation():
    # tiny root of w^2 + 1e8 w + 1 is about -1e-8; the naive formula loses all digits
    r = char_roots(Pencil(1e8, 1))
    assert r.omega2 == pytest.approx(-1e-8, rel=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_char_roots_satisfy_quadratic(seed):
    rng = np.random.default_rng(seed)
    b, c = rng.normal(size=2) + 1j * rng.normal(size=2)
    r = char_roots(Pencil(b, c))
    for w in (r.omega1, r.omega2):
        assert abs(w * w + b * w + c) < 1e-12 * (1 + abs(b) ** 2 + abs(c))
    assert (r.omega1.real, r.omega1.imag) <= (r.omega2.real, r.omega2.imag)


@pytest.mark.parametrize(
    "b, c, flags",
    [
        (-2, 1, (False, True, True)),
        (0, -1, (True, False, True)),
        (-1, 0, (True, True, False)),
        (-3, 2, (True, True, True)),
        (0, 0, (False, False, False)),
    ],
)
def test_theorem_conditions(b, c, flags):
    rep = theorem_conditions(Pencil(b, c))
    assert (rep.cond1_discriminant_nonzero, rep.cond2_b_nonzero, rep.cond3_c_nonzero) == flags
    assert rep.satisfied == all(flags)
    assert rep.as_dict()["satisfied"] == all(flags)


def test_conditions_tolerance_is_relative():
    assert not theorem_conditions(Pencil(1e-12, 1)).cond2_b_nonzero
    assert theorem_conditions(Pencil(1e-6, 1)).cond2_b_nonzero


def test_pencil_validation():
    with pytest.raises(ValidationError):
        Pencil(float("nan"), 1)
    with pytest.raises(ValidationError):
        Pencil(1, 1, L=0)
    with pytest.raises(ValidationError):
        Pencil("x", 1)
    assert Pencil(1, 2, 3).L == 3.0


def test_validate_bc():
    bc = validate_bc([[1, 0, 0, 0], [0, 1, 0, 0]])
    assert isinstance(bc, BoundaryMatrix)
    assert bc.a.dtype == complex
    with pytest.raises(ValueError):
        bc.a[0, 0] = 5
    with pytest.raises(RankDeficient):
        validate_bc([[1, 2, 3, 4], [2, 4, 6, 8]])
    with pytest.raises(ValidationError):
        validate_bc([[1, 0, 0], [0, 1, 0]])
    with pytest.raises(ValidationError):
        validate_bc([[1, 0, 0, np.inf], [0, 1, 0, 0]])


def test_boundary_matrix_transform_and_equality():
    bc = validate_bc([[1, 0, 2, 0], [0, 1, 0, 0]])
    t = bc.transformed([[2, 1], [0, 1]])
    assert np.allclose(t.a, [[2, 1, 4, 0], [0, 1, 0, 0]])
    assert bc == validate_bc([[1, 0, 2, 0], [0, 1, 0, 0]])
    assert hash(bc) == hash(validate_bc([[1, 0, 2, 0], [0, 1, 0, 0]]))


def test_problem_rejects_trivial_pencil():
    with pytest.raises(ValidationError):
        Problem(Pencil(0, 0), [[1, 0, 0, 0], [0, 1, 0, 0]])
    p = Problem(Pencil(-3, 2), [[1, 0, 0, 0], [0, 1, 0, 0]])
    assert isinstance(p.bc, BoundaryMatrix)


def test_pluecker_entry_is_antisymmetric():
    p = PlueckerVector(1, 2, 3, 4, 5, 6)
    assert p.entry(0, 1) == 1 and p.entry(1, 0) == -1
    assert p.entry(2, 3) == 6 and p.entry(3, 2) == -6
    assert p.entry(2, 2) == 0
    assert np.array_equal(PlueckerVector.from_array(p.as_array()).as_array(), p.as_array())
    with pytest.raises(ValidationError):
        PlueckerVector.from_array([1, 2, 3])


def test_search_region():
    r = SearchRegion(-1, 1, -2, 2)
    assert r.center == 0
    assert r.diameter == pytest.approx(cmath.sqrt(20).real)
    assert r.contains(0.5 + 1j) and not r.contains(1 + 0j)
    assert r.grown(1) == SearchRegion(-2, 2, -3, 3)
    assert r.scaled(2) == SearchRegion(-2, 2, -4, 4)
    with pytest.raises(ValidationError):
        SearchRegion(1, 1, 0, 1)
