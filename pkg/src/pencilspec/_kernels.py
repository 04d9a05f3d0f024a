"""Hot loops: batch evaluation of the characteristic determinant and adaptive
phase tracking along a contour segment.

Each kernel exists twice: a scalar-loop version compiled with numba and a
vectorised numpy version. ``PENCILSPEC_DISABLE_NUMBA=1`` (or numba missing)
selects the numpy path. Both are importable for cross-checking.
"""

import cmath
import math
import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

NUMBA_ENABLED = _HAVE_NUMBA and os.environ.get("PENCILSPEC_DISABLE_NUMBA", "") not in ("1", "true", "yes")

HALF_PI = 0.5 * math.pi


def _identity(f):
    return f


jit = njit(cache=True) if _HAVE_NUMBA else _identity


# -- numba path ------------------------------------------------------------


def _delta_point(lam, w1, w2, L, double, a, want_deriv):
    """Delta, its scale and (optionally) d/dlam at one point."""
    if double:
        w = w1
        e = cmath.exp(w * lam * L)
        v10, v11, v12, v13 = 1.0 + 0j, e, w * lam, w * lam * e
        v20, v21, v22, v23 = 0j, L * e, 1.0 + 0j, e * (1.0 + w * lam * L)
    else:
        e1 = cmath.exp(w1 * lam * L)
        e2 = cmath.exp(w2 * lam * L)
        v10, v11, v12, v13 = 1.0 + 0j, e1, w1 * lam, w1 * lam * e1
        v20, v21, v22, v23 = 1.0 + 0j, e2, w2 * lam, w2 * lam * e2

    u11 = a[0, 0] * v10 + a[0, 1] * v11 + a[0, 2] * v12 + a[0, 3] * v13
    u12 = a[0, 0] * v20 + a[0, 1] * v21 + a[0, 2] * v22 + a[0, 3] * v23
    u21 = a[1, 0] * v10 + a[1, 1] * v11 + a[1, 2] * v12 + a[1, 3] * v13
    u22 = a[1, 0] * v20 + a[1, 1] * v21 + a[1, 2] * v22 + a[1, 3] * v23
    val = u11 * u22 - u12 * u21

    m11 = abs(a[0, 0]) * abs(v10) + abs(a[0, 1]) * abs(v11) + abs(a[0, 2]) * abs(v12) + abs(a[0, 3]) * abs(v13)
    m12 = abs(a[0, 0]) * abs(v20) + abs(a[0, 1]) * abs(v21) + abs(a[0, 2]) * abs(v22) + abs(a[0, 3]) * abs(v23)
    m21 = abs(a[1, 0]) * abs(v10) + abs(a[1, 1]) * abs(v11) + abs(a[1, 2]) * abs(v12) + abs(a[1, 3]) * abs(v13)
    m22 = abs(a[1, 0]) * abs(v20) + abs(a[1, 1]) * abs(v21) + abs(a[1, 2]) * abs(v22) + abs(a[1, 3]) * abs(v23)
    scale = m11 * m22 + m12 * m21

    der = 0j
    if want_deriv:
        if double:
            d10, d11, d12, d13 = 0j, w * L * e, w + 0j, w * e * (1.0 + w * lam * L)
            d20, d21, d22, d23 = 0j, L * w * L * e, 0j, w * L * e * (2.0 + w * lam * L)
        else:
            d10, d11, d12, d13 = 0j, w1 * L * e1, w1 + 0j, w1 * e1 * (1.0 + w1 * lam * L)
            d20, d21, d22, d23 = 0j, w2 * L * e2, w2 + 0j, w2 * e2 * (1.0 + w2 * lam * L)
        du11 = a[0, 0] * d10 + a[0, 1] * d11 + a[0, 2] * d12 + a[0, 3] * d13
        du12 = a[0, 0] * d20 + a[0, 1] * d21 + a[0, 2] * d22 + a[0, 3] * d23
        du21 = a[1, 0] * d10 + a[1, 1] * d11 + a[1, 2] * d12 + a[1, 3] * d13
        du22 = a[1, 0] * d20 + a[1, 1] * d21 + a[1, 2] * d22 + a[1, 3] * d23
        der = du11 * u22 + u11 * du22 - du12 * u21 - u12 * du21
    return val, scale, der


_delta_point_jit = jit(_delta_point)


def _delta_batch_loop(lams, w1, w2, L, double, a, want_deriv):
    n = lams.shape[0]
    vals = np.empty(n, dtype=np.complex128)
    scales = np.empty(n, dtype=np.float64)
    ders = np.zeros(n, dtype=np.complex128)
    for i in range(n):
        v, s, d = _delta_point_jit(lams[i], w1, w2, L, double, a, want_deriv)
        vals[i] = v
        scales[i] = s
        ders[i] = d
    return vals, scales, ders


@jit
def _wrap(x):
    while x > math.pi:
        x -= 2.0 * math.pi
    while x <= -math.pi:
        x += 2.0 * math.pi
    return x


def _segment_phase_loop(z0, z1, n0, max_points, w1, w2, L, double, a):
    """Accumulated arg change of Delta from z0 to z1, bisecting until every step < pi/2.

    Returns (phase, min_rel, npoints); npoints < 0 signals the budget ran out.
    """
    cap = n0 + 256
    st_ta = np.empty(cap)
    st_tb = np.empty(cap)
    st_fa = np.empty(cap, dtype=np.complex128)
    st_fb = np.empty(cap, dtype=np.complex128)
    dz = z1 - z0

    f_prev, s_prev, _ = _delta_point_jit(z0, w1, w2, L, double, a, False)
    min_rel = abs(f_prev) / s_prev if s_prev > 0 else 0.0
    # push the initial partition in reverse so it pops in order (order is irrelevant to the sum)
    fs = np.empty(n0 + 1, dtype=np.complex128)
    fs[0] = f_prev
    for i in range(1, n0 + 1):
        f, s, _ = _delta_point_jit(z0 + dz * (i / n0), w1, w2, L, double, a, False)
        fs[i] = f
        r = abs(f) / s if s > 0 else 0.0
        if r < min_rel:
            min_rel = r
    top = 0
    for i in range(n0 - 1, -1, -1):
        st_ta[top] = i / n0
        st_tb[top] = (i + 1) / n0
        st_fa[top] = fs[i]
        st_fb[top] = fs[i + 1]
        top += 1

    npoints = n0 + 1
    total = 0.0
    while top > 0:
        top -= 1
        ta, tb, fa, fb = st_ta[top], st_tb[top], st_fa[top], st_fb[top]
        if fa == 0 or fb == 0:
            return total, 0.0, npoints
        d = _wrap(cmath.phase(fb) - cmath.phase(fa))
        if abs(d) < HALF_PI:
            total += d
            continue
        if npoints >= max_points or top + 2 > cap or tb - ta < 1e-15:
            return total, min_rel, -1
        tm = 0.5 * (ta + tb)
        fm, sm, _ = _delta_point_jit(z0 + dz * tm, w1, w2, L, double, a, False)
        npoints += 1
        r = abs(fm) / sm if sm > 0 else 0.0
        if r < min_rel:
            min_rel = r
        st_ta[top], st_tb[top], st_fa[top], st_fb[top] = tm, tb, fm, fb
        top += 1
        st_ta[top], st_tb[top], st_fa[top], st_fb[top] = ta, tm, fa, fm
        top += 1
    return total, min_rel, npoints


_delta_batch_jit = jit(_delta_batch_loop)
_segment_phase_jit = jit(_segment_phase_loop)


# -- numpy path ------------------------------------------------------------


def delta_batch_numpy(lams, w1, w2, L, double, a, want_deriv):
    lams = np.asarray(lams, dtype=complex)
    one = np.ones_like(lams)
    zero = np.zeros_like(lams)
    absa = np.abs(a)
    if double:
        w = w1
        e = np.exp(w * lams * L)
        V1 = np.stack([one, e, w * lams, w * lams * e])
        V2 = np.stack([zero, L * e, one, e * (1.0 + w * lams * L)])
    else:
        e1 = np.exp(w1 * lams * L)
        e2 = np.exp(w2 * lams * L)
        V1 = np.stack([one, e1, w1 * lams, w1 * lams * e1])
        V2 = np.stack([one, e2, w2 * lams, w2 * lams * e2])
    U1 = a @ V1
    U2 = a @ V2
    vals = U1[0] * U2[1] - U2[0] * U1[1]
    M1 = absa @ np.abs(V1)
    M2 = absa @ np.abs(V2)
    scales = M1[0] * M2[1] + M2[0] * M1[1]
    ders = np.zeros_like(vals)
    if want_deriv:
        if double:
            D1 = np.stack([zero, w * L * e, w * one, w * e * (1.0 + w * lams * L)])
            D2 = np.stack([zero, L * w * L * e, zero, w * L * e * (2.0 + w * lams * L)])
        else:
            D1 = np.stack([zero, w1 * L * e1, w1 * one, w1 * e1 * (1.0 + w1 * lams * L)])
            D2 = np.stack([zero, w2 * L * e2, w2 * one, w2 * e2 * (1.0 + w2 * lams * L)])
        dU1 = a @ D1
        dU2 = a @ D2
        ders = dU1[0] * U2[1] + U1[0] * dU2[1] - dU2[0] * U1[1] - U2[0] * dU1[1]
    return vals, scales, ders


def segment_phase_numpy(evaluate, z0, z1, n0, max_points):
    """Numpy twin of the compiled segment tracker for any vectorised ``evaluate(z) -> (f, scale)``."""
    t = np.linspace(0.0, 1.0, n0 + 1)
    f, s = evaluate(z0 + (z1 - z0) * t)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(s > 0, np.abs(f) / s, 0.0)
    min_rel = float(rel.min())
    while True:
        if np.any(f == 0):
            return 0.0, 0.0, t.size
        ang = np.angle(f)
        d = np.diff(ang)
        d = (d + np.pi) % (2 * np.pi) - np.pi
        bad = np.abs(d) >= HALF_PI
        if not bad.any():
            return float(d.sum()), min_rel, t.size
        if t.size + bad.sum() > max_points or np.min(np.diff(t)[bad]) < 1e-15:
            return float(d.sum()), min_rel, -1
        tm = 0.5 * (t[:-1] + t[1:])[bad]
        fm, sm = evaluate(z0 + (z1 - z0) * tm)
        with np.errstate(divide="ignore", invalid="ignore"):
            relm = np.where(sm > 0, np.abs(fm) / sm, 0.0)
        min_rel = min(min_rel, float(relm.min()))
        idx = np.nonzero(bad)[0] + 1
        t = np.insert(t, idx, tm)
        f = np.insert(f, idx, fm)


# -- dispatch --------------------------------------------------------------


def delta_batch_jit(lams, w1, w2, L, double, a, want_deriv):
    lams = np.ascontiguousarray(np.asarray(lams, dtype=np.complex128).ravel())
    return _delta_batch_jit(lams, complex(w1), complex(w2), float(L), bool(double),
                            np.ascontiguousarray(a, dtype=np.complex128), bool(want_deriv))


def segment_phase_jit(z0, z1, n0, max_points, w1, w2, L, double, a):
    return _segment_phase_jit(complex(z0), complex(z1), int(n0), int(max_points), complex(w1), complex(w2),
                              float(L), bool(double), np.ascontiguousarray(a, dtype=np.complex128))


def segment_phase_problem_numpy(z0, z1, n0, max_points, w1, w2, L, double, a):
    def evaluate(z):
        v, s, _ = delta_batch_numpy(z, w1, w2, L, double, a, False)
        return v, s

    return segment_phase_numpy(evaluate, complex(z0), complex(z1), int(n0), int(max_points))


def delta_batch(lams, w1, w2, L, double, a, want_deriv=False):
    """(values, scales, derivatives) of Delta at the points ``lams`` (1-D)."""
    if NUMBA_ENABLED:
        return delta_batch_jit(lams, w1, w2, L, double, a, want_deriv)
    return delta_batch_numpy(np.asarray(lams, dtype=complex).ravel(), w1, w2, L, double,
                             np.asarray(a, dtype=complex), want_deriv)


def segment_phase(z0, z1, n0, max_points, w1, w2, L, double, a):
    if NUMBA_ENABLED:
        return segment_phase_jit(z0, z1, n0, max_points, w1, w2, L, double, a)
    return segment_phase_problem_numpy(z0, z1, n0, max_points, w1, w2, L, double, np.asarray(a, dtype=complex))


def warmup():
    """Trigger compilation so that timing-sensitive callers do not pay for it."""
    if NUMBA_ENABLED:
        a = np.eye(2, 4, dtype=np.complex128)
        delta_batch_jit(np.array([0.5 + 0.5j]), 1.0, 2.0, 1.0, False, a, True)
        segment_phase_jit(0.1 + 0.1j, 0.2 + 0.3j, 8, 1000, 1.0, 2.0, 1.0, False, a)
