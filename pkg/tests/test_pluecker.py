import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pencilspec import PlueckerVector, equivalent, minors, proportional, reconstruct_bc, relation_residual, validate_bc
from pencilspec.errors import NotDecomposable, RankDeficient, ZeroVector
from pencilspec.pluecker import subspace_gap

entries = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
real_blocks = arrays(np.float64, (2, 2, 4), elements=entries)


def _matrix(block):
    return block[0] + 1j * block[1]


def _well_conditioned(bc, limit=1e4):
    # equivalence is decided at 1e-10; row bases of worse-conditioned matrices carry larger rounding
    sv = np.linalg.svd(bc.a, compute_uv=False)
    return sv[0] <= limit * sv[1]


def test_minors_by_hand():
    assert np.array_equal(minors(validate_bc([[1, 0, 2, 0], [0, 1, 0, 0]])).as_array(), [1, 0, 0, -2, 0, 0])
    assert np.array_equal(minors(validate_bc([[1, 0, 0, 0], [0, 1, 0, -2]])).as_array(), [1, 0, -2, 0, 0, 0])
    assert np.array_equal(minors(validate_bc([[1, 0, 0, 0], [0, 1, 0, 0]])).as_array(), [1, 0, 0, 0, 0, 0])


def test_minors_scale_with_determinant():
    a = validate_bc([[1, 2, 3, 4], [0, 1, -1, 2j]])
    t = np.array([[2, 1], [1j, 3]])
    assert np.allclose(minors(a.transformed(t)).as_array(), np.linalg.det(t) * minors(a).as_array())


@settings(max_examples=200, deadline=None)
@given(real_blocks)
def test_relation_holds_for_any_matrix(block):
    a = _matrix(block)
    try:
        bc = validate_bc(a)
    except RankDeficient:
        return
    p = minors(bc)
    big = np.max(np.abs(p.as_array()))
    assert abs(relation_residual(p)) <= 1e-12 * big**2 + 1e-300


@settings(max_examples=200, deadline=None)
@given(real_blocks)
def test_reconstruction_round_trip(block):
    try:
        bc = validate_bc(_matrix(block))
    except RankDeficient:
        return
    p = minors(bc)
    rec = reconstruct_bc(p)
    assert proportional(minors(rec), p, 1e-8)
    if subspace_gap(bc, rec) < 1e-12:
        assert equivalent(bc, rec)


@settings(max_examples=100, deadline=None)
@given(real_blocks, arrays(np.float64, (2, 2, 2), elements=st.floats(-3, 3, allow_nan=False)))
def test_row_transform_is_equivalent(block, tblock):
    t = tblock[0] + 1j * tblock[1]
    try:
        bc = validate_bc(_matrix(block))
    except RankDeficient:
        return
    sv = np.linalg.svd(t, compute_uv=False)
    if sv[1] < 1e-2 * max(sv[0], 1.0) or not _well_conditioned(bc):
        return
    assert equivalent(bc, bc.transformed(t))


def test_inequivalent_pairs():
    a = validate_bc([[1, 0, 2, 0], [0, 1, 0, 0]])
    b = validate_bc([[1, 0, 0, 0], [0, 1, 0, -2]])
    assert not equivalent(a, b)
    assert not proportional(minors(a), minors(b))


def test_proportional():
    p = PlueckerVector(1, 2j, 0, 0, 0, 0)
    assert proportional(PlueckerVector(3j, -6, 0, 0, 0, 0), p)
    assert not proportional(PlueckerVector(0, 0, 0, 0, 0, 0), p)
    with pytest.raises(ZeroVector):
        proportional(p, PlueckerVector(0, 0, 0, 0, 0, 0))


def test_reconstruct_errors():
    with pytest.raises(ZeroVector):
        reconstruct_bc(PlueckerVector(0, 0, 0, 0, 0, 0))
    with pytest.raises(NotDecomposable):
        reconstruct_bc(PlueckerVector(1, 0, 0, 0, 0, 1))


def test_reconstruct_uses_largest_pivot():
    rec = reconstruct_bc(PlueckerVector(0.1, 0, 0, -2, 0, 0))
    # pivot p23: identity in columns 2 and 3 (1-based)
    assert np.allclose(rec.a[:, 1:3], np.eye(2))
    assert proportional(minors(rec), PlueckerVector(0.1, 0, 0, -2, 0, 0))


@pytest.mark.parametrize("scale", [1e-140, 1e140])
def test_extreme_scales(scale):
    bc = validate_bc(scale * np.array([[0, 1, 1, 1], [1, 1, 1, 1j]]))
    p = minors(bc)
    rec = reconstruct_bc(p)
    assert proportional(minors(rec), p)
    assert equivalent(bc, rec)
