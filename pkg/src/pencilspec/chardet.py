"""Characteristic determinant Delta(lam) of a two-point pencil problem.

Two independent evaluation routes are provided: ``delta_direct`` applies the
boundary forms to the fundamental system and takes the 2x2 determinant;
``delta_minor`` contracts the six 2x2 minors of the boundary matrix against the
six basis functions phi_jk(lam). They must agree wherever both apply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import Pencil, Problem, char_roots
from .errors import DoubleRootRegime, OrderUnsupported, Overflow
from .pluecker import minors

EXP_GUARD = 700.0
CAUCHY_NODES = 64
MAX_DERIVATIVE_ORDER = 4


def _rates(pencil: Pencil) -> tuple[complex, ...]:
    r = char_roots(pencil)
    return (r.omega1 * pencil.L, r.omega2 * pencil.L, (r.omega1 + r.omega2) * pencil.L)


def check_exponent_guard(pencil: Pencil, lam) -> None:
    """Raise Overflow when any exponent w*lam*L of the fundamental system exceeds the guard.

    The sum w1 + w2 is included: products y1(L) y2(L) carry exp((w1 + w2) lam L).
    """
    lam = np.asarray(lam, dtype=complex)
    if lam.size == 0:
        return
    worst = max(float(np.max(np.abs((rate * lam).real))) for rate in _rates(pencil))
    if not worst <= EXP_GUARD:
        raise Overflow(f"|Re(w*lam*L)| reaches {worst:.4g} > {EXP_GUARD}; shrink the search region")


@dataclass(frozen=True)
class FundamentalValues:
    y1_0: complex
    y2_0: complex
    y1_L: complex
    y2_L: complex
    dy1_0: complex
    dy2_0: complex
    dy1_L: complex
    dy2_L: complex

    def vectors(self) -> tuple[np.ndarray, np.ndarray]:
        """Column vectors (y(0), y(L), y'(0), y'(L)) for y1 and y2."""
        v1 = np.array([self.y1_0, self.y1_L, self.dy1_0, self.dy1_L], dtype=complex)
        v2 = np.array([self.y2_0, self.y2_L, self.dy2_0, self.dy2_L], dtype=complex)
        return v1, v2


def fundamental_values(pencil: Pencil, lam: complex) -> FundamentalValues:
    lam = complex(lam)
    check_exponent_guard(pencil, lam)
    roots = char_roots(pencil)
    L = pencil.L
    if roots.distinct:
        w1, w2 = roots.omega1, roots.omega2
        e1, e2 = np.exp(w1 * lam * L), np.exp(w2 * lam * L)
        return FundamentalValues(1 + 0j, 1 + 0j, complex(e1), complex(e2),
                                 w1 * lam, w2 * lam, complex(w1 * lam * e1), complex(w2 * lam * e2))
    w = roots.omega1
    e = complex(np.exp(w * lam * L))
    # y2 = x exp(w lam x)
    return FundamentalValues(1 + 0j, 0j, e, L * e, w * lam, 1 + 0j, w * lam * e, e * (1 + w * lam * L))


def fundamental_vectors(pencil: Pencil, lam) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised (y(0), y(L), y'(0), y'(L)) for y1 and y2; shapes (4,) + lam.shape."""
    lam = np.asarray(lam, dtype=complex)
    check_exponent_guard(pencil, lam)
    roots = char_roots(pencil)
    L = pencil.L
    one, zero = np.ones_like(lam), np.zeros_like(lam)
    if roots.distinct:
        w1, w2 = roots.omega1, roots.omega2
        e1, e2 = np.exp(w1 * lam * L), np.exp(w2 * lam * L)
        return (np.stack([one, e1, w1 * lam, w1 * lam * e1]),
                np.stack([one, e2, w2 * lam, w2 * lam * e2]))
    w = roots.omega1
    e = np.exp(w * lam * L)
    return np.stack([one, e, w * lam, w * lam * e]), np.stack([zero, L * e, one, e * (1 + w * lam * L)])


@dataclass(frozen=True)
class BasisValues:
    phi12: complex
    phi13: complex
    phi14: complex
    phi23: complex
    phi24: complex
    phi34: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.phi12, self.phi13, self.phi14, self.phi23, self.phi24, self.phi34], dtype=complex)


def _basis_terms(pencil: Pencil) -> list[list[tuple[complex, int, complex]]]:
    """phi_jk as sums of coef * lam**power * exp(rate * lam), one list per pair."""
    r = char_roots(pencil)
    if not r.distinct:
        raise DoubleRootRegime("the six-function basis expansion needs distinct characteristic roots")
    w1, w2, L = r.omega1, r.omega2, pencil.L
    return [
        [(1.0, 0, w2 * L), (-1.0, 0, w1 * L)],
        [(w2 - w1, 1, 0j)],
        [(w2, 1, w2 * L), (-w1, 1, w1 * L)],
        [(w2, 1, w1 * L), (-w1, 1, w2 * L)],
        [(w2 - w1, 1, (w1 + w2) * L)],
        [(w1 * w2, 2, w2 * L), (-w1 * w2, 2, w1 * L)],
    ]


def _term_derivative(coef, power, rate, lam, order):
    # d^r/dlam^r [lam^n exp(a lam)] = exp(a lam) sum_i C(r,i) n!/(n-i)! lam^(n-i) a^(r-i)
    acc = 0
    for i in range(min(order, power) + 1):
        acc = acc + math.comb(order, i) * (math.factorial(power) // math.factorial(power - i)) \
            * lam ** (power - i) * rate ** (order - i)
    return coef * np.exp(rate * lam) * acc


def basis_derivatives(pencil: Pencil, lam, order: int = 0) -> np.ndarray:
    """order-th lam-derivative of the six basis functions; shape lam.shape + (6,)."""
    terms = _basis_terms(pencil)
    lam_arr = np.asarray(lam, dtype=complex)
    check_exponent_guard(pencil, lam_arr)
    out = np.zeros(lam_arr.shape + (6,), dtype=complex)
    for k, pair_terms in enumerate(terms):
        for coef, power, rate in pair_terms:
            out[..., k] += _term_derivative(coef, power, rate, lam_arr, order)
    return out


def basis_functions(pencil: Pencil, lam: complex) -> BasisValues:
    return BasisValues(*(complex(v) for v in basis_derivatives(pencil, complex(lam), 0)))


def _kernel_args(problem: Problem):
    r = char_roots(problem.pencil)
    return r.omega1, r.omega2, problem.pencil.L, not r.distinct, np.ascontiguousarray(problem.bc.a)


def delta_with_scale(problem: Problem, lam):
    """(Delta, scale) where scale bounds the magnitudes that cancel in the determinant."""
    lam_arr = np.asarray(lam, dtype=complex)
    check_exponent_guard(problem.pencil, lam_arr)
    vals, scales, _ = _kernels.delta_batch(lam_arr.ravel(), *_kernel_args(problem))
    if lam_arr.ndim == 0:
        return complex(vals[0]), float(scales[0])
    return vals.reshape(lam_arr.shape), scales.reshape(lam_arr.shape)


def delta_direct(problem: Problem, lam):
    """det [[U1(y1), U1(y2)], [U2(y1), U2(y2)]] at scalar or array ``lam``."""
    return delta_with_scale(problem, lam)[0]


def delta_minor(problem: Problem, lam):
    """sum_jk p_jk phi_jk(lam); distinct regime only."""
    p = minors(problem.bc).as_array()
    phi = basis_derivatives(problem.pencil, lam, 0)
    out = phi @ p
    return complex(out) if np.ndim(out) == 0 else out


def _cauchy_derivative(f, lam: complex, order: int) -> complex:
    rho = 1e-2 * (1.0 + abs(lam))
    theta = 2.0 * np.pi * np.arange(CAUCHY_NODES) / CAUCHY_NODES
    vals = f(lam + rho * np.exp(1j * theta))
    return complex(math.factorial(order) / rho**order * np.mean(vals * np.exp(-1j * order * theta)))


def delta_derivative(problem: Problem, lam: complex, order: int = 1) -> complex:
    """d^order Delta / dlam^order for order 1..4.

    Distinct roots: exact differentiation of the basis expansion. Double root:
    trapezoid Cauchy integral on a circle of radius 1e-2 (1 + |lam|).
    """
    if not (isinstance(order, (int, np.integer)) and 1 <= order <= MAX_DERIVATIVE_ORDER):
        raise OrderUnsupported(f"derivative order must be 1..{MAX_DERIVATIVE_ORDER}, got {order!r}")
    lam = complex(lam)
    if char_roots(problem.pencil).distinct:
        p = minors(problem.bc).as_array()
        return complex(basis_derivatives(problem.pencil, lam, int(order)) @ p)
    rho = 1e-2 * (1.0 + abs(lam))
    check_exponent_guard(problem.pencil, [lam + rho, lam - rho, lam + 1j * rho, lam - 1j * rho])
    return _cauchy_derivative(lambda z: delta_direct(problem, z), lam, int(order))


class DeltaEvaluator:
    """Delta of a fixed problem, packaged for the contour root finder."""

    def __init__(self, problem: Problem):
        self.problem = problem
        self._args = _kernel_args(problem)
        w1, w2, L = self._args[0], self._args[1], self._args[2]
        # phase of Delta rotates at most this fast per unit length along a contour
        self.rate = max(abs(w1), abs(w2), abs(w1 + w2)) * L

    def __call__(self, z):
        return delta_direct(self.problem, z)

    def evaluate(self, z):
        return delta_with_scale(self.problem, z)

    def value_and_derivative(self, z: complex) -> tuple[complex, float, complex]:
        check_exponent_guard(self.problem.pencil, z)
        v, s, d = _kernels.delta_batch(np.array([complex(z)]), *self._args, want_deriv=True)
        return complex(v[0]), float(s[0]), complex(d[0])

    def check_region(self, points) -> None:
        check_exponent_guard(self.problem.pencil, points)

    def segment_phase(self, z0: complex, z1: complex, n0: int, max_points: int):
        return _kernels.segment_phase(z0, z1, n0, max_points, *self._args)
