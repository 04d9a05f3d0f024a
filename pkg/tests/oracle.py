"""High-precision reference for the characteristic determinant, independent of the package."""

import mpmath as mp

mp.mp.dps = 50


def roots(b, c):
    """Roots of w^2 + b w + c, ordered by (Re, Im)."""
    r = mp.polyroots([1, mp.mpmathify(b), mp.mpmathify(c)], maxsteps=200, extraprec=200)
    return sorted(r, key=lambda z: (mp.nint(mp.re(z) * 10**30), mp.im(z)))


def delta(b, c, rows, lam, L=1):
    lam, L = mp.mpmathify(lam), mp.mpmathify(L)
    w1, w2 = roots(b, c)
    if abs(w1 - w2) < mp.mpf(10) ** -20:
        w = -mp.mpmathify(b) / 2
        e = mp.exp(w * lam * L)
        v1 = [1, e, w * lam, w * lam * e]
        v2 = [0, L * e, 1, e * (1 + w * lam * L)]
    else:
        e1, e2 = mp.exp(w1 * lam * L), mp.exp(w2 * lam * L)
        v1 = [1, e1, w1 * lam, w1 * lam * e1]
        v2 = [1, e2, w2 * lam, w2 * lam * e2]
    u = [[sum(mp.mpmathify(a) * v for a, v in zip(row, vec)) for vec in (v1, v2)] for row in rows]
    return u[0][0] * u[1][1] - u[0][1] * u[1][0]


def delta_derivative(b, c, rows, lam, order, L=1):
    return mp.diff(lambda z: delta(b, c, rows, z, L), mp.mpmathify(lam), order)
