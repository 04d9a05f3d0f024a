"""Domain types for the pencil y'' + b*lam*y' + c*lam**2*y = 0 on [0, L].

Boundary forms are U_i(y) = a_i1 y(0) + a_i2 y(L) + a_i3 y'(0) + a_i4 y'(L).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InternalConsistencyError, RankDeficient, ValidationError

ZERO_RTOL = 1e-10
RANK_TOL = 1e-10
PAIR_INDEX = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
PAIR_LABELS = ("p12", "p13", "p14", "p23", "p24", "p34")


def _finite_complex(x, name: str) -> complex:
    try:
        z = complex(x)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} must be a complex number, got {x!r}") from exc
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValidationError(f"{name} must be finite, got {z!r}")
    return z


@dataclass(frozen=True)
class Pencil:
    b: complex
    c: complex
    L: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "b", _finite_complex(self.b, "b"))
        object.__setattr__(self, "c", _finite_complex(self.c, "c"))
        L = float(self.L)
        if not (math.isfinite(L) and L > 0):
            raise ValidationError(f"interval endpoint L must be positive and finite, got {self.L!r}")
        object.__setattr__(self, "L", L)

    @property
    def zero_tol(self) -> float:
        """Absolute threshold under which a coefficient-derived quantity counts as zero."""
        return ZERO_RTOL * (1.0 + abs(self.b) ** 2 + abs(self.c))

    def is_zero(self, q: complex) -> bool:
        return abs(q) <= self.zero_tol


class RootKind(str, Enum):
    DISTINCT = "Distinct"
    DOUBLE = "Double"


@dataclass(frozen=True)
class CharacteristicRoots:
    omega1: complex
    omega2: complex
    kind: RootKind

    @property
    def distinct(self) -> bool:
        return self.kind is RootKind.DISTINCT


def _canonical_pair(u: complex, v: complex) -> tuple[complex, complex]:
    # real parts equal up to rounding are compared by imaginary part
    tol = 1e-14 * (1.0 + abs(u) + abs(v))
    if abs(u.real - v.real) <= tol:
        return (u, v) if u.imag <= v.imag else (v, u)
    return (u, v) if u.real < v.real else (v, u)


def char_roots(pencil: Pencil) -> CharacteristicRoots:
    """Roots of w**2 + b*w + c = 0, ordered by (real, imag)."""
    b, c = pencil.b, pencil.c
    disc = b * b - 4.0 * c
    if pencil.is_zero(disc):
        w = -b / 2.0
        return CharacteristicRoots(w, w, RootKind.DOUBLE)
    s = cmath.sqrt(disc)
    # pick the sign that avoids cancellation, then use Vieta for the other root
    q = -(b + s) / 2.0 if abs(b + s) >= abs(b - s) else -(b - s) / 2.0
    if q == 0:
        w1, w2 = s / 2.0, -s / 2.0
    else:
        w1, w2 = q, c / q
    w1, w2 = _canonical_pair(w1, w2)
    return CharacteristicRoots(w1, w2, RootKind.DISTINCT)


@dataclass(frozen=True)
class ConditionReport:
    cond1_discriminant_nonzero: bool
    cond2_b_nonzero: bool
    cond3_c_nonzero: bool

    @property
    def satisfied(self) -> bool:
        return self.cond1_discriminant_nonzero and self.cond2_b_nonzero and self.cond3_c_nonzero

    def as_dict(self) -> dict:
        return {
            "cond1_discriminant_nonzero": self.cond1_discriminant_nonzero,
            "cond2_b_nonzero": self.cond2_b_nonzero,
            "cond3_c_nonzero": self.cond3_c_nonzero,
            "satisfied": self.satisfied,
        }


def theorem_conditions(pencil: Pencil) -> ConditionReport:
    """Check b**2 - 4c != 0, b != 0, c != 0, cross-checked against the root form.

    The root form tests (w1 - w2)**2, w1 + w2 and w1*w2 against the same tolerance,
    so it is algebraically the same test; a disagreement away from the threshold
    means the root computation is broken.
    """
    b, c = pencil.b, pencil.c
    tol = pencil.zero_tol
    coeff = (b * b - 4.0 * c, b, c)
    report = ConditionReport(*(abs(q) > tol for q in coeff))

    roots = char_roots(pencil)
    w1, w2 = roots.omega1, roots.omega2
    root_form = ((w1 - w2) ** 2, -(w1 + w2), w1 * w2)
    for qc, qr in zip(coeff, root_form):
        a_c, a_r = abs(qc) > tol, abs(qr) > tol
        if a_c != a_r and abs(abs(qr) - tol) > 1e-6 * tol + 1e-12 * (abs(qc) + abs(qr)):
            raise InternalConsistencyError(
                f"coefficient test and root test disagree: |{qc}| vs |{qr}| at tol {tol}"
            )
    return report


@dataclass(frozen=True, eq=False)
class BoundaryMatrix:
    """2x4 complex coefficient matrix; columns multiply (y(0), y(L), y'(0), y'(L))."""

    a: np.ndarray

    def __post_init__(self):
        arr = np.array(self.a, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "a", arr)

    @property
    def rows(self) -> np.ndarray:
        return self.a

    def transformed(self, T) -> "BoundaryMatrix":
        """Row transform T @ a (T is 2x2)."""
        return validate_bc(np.asarray(T, dtype=complex) @ self.a)

    def tolist(self) -> list:
        return [[complex(x) for x in row] for row in self.a]

    def __eq__(self, other):
        return isinstance(other, BoundaryMatrix) and np.array_equal(self.a, other.a)

    def __hash__(self):
        return hash(self.a.tobytes())

    def __repr__(self):
        return f"BoundaryMatrix({self.a.tolist()!r})"


def validate_bc(a) -> BoundaryMatrix:
    """Return a BoundaryMatrix if ``a`` is a finite 2x4 matrix of numerical rank two."""
    try:
        arr = np.array(a, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"boundary matrix must be numeric: {exc}") from exc
    if arr.shape != (2, 4):
        raise ValidationError(f"boundary matrix must be 2x4, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("boundary matrix entries must be finite")
    sv = np.linalg.svd(arr, compute_uv=False)
    if sv[0] == 0 or sv[1] / sv[0] <= RANK_TOL:
        raise RankDeficient(f"boundary matrix has numerical rank < 2 (singular values {sv})")
    return BoundaryMatrix(arr)


@dataclass(frozen=True)
class Problem:
    pencil: Pencil
    bc: BoundaryMatrix

    def __post_init__(self):
        if not isinstance(self.bc, BoundaryMatrix):
            object.__setattr__(self, "bc", validate_bc(self.bc))
        if self.pencil.b == 0 and self.pencil.c == 0:
            raise ValidationError("pencil with b = c = 0 has a degenerate characteristic determinant")

    @property
    def roots(self) -> CharacteristicRoots:
        return char_roots(self.pencil)


@dataclass(frozen=True)
class PlueckerVector:
    p12: complex
    p13: complex
    p14: complex
    p23: complex
    p24: complex
    p34: complex

    @classmethod
    def from_array(cls, arr) -> "PlueckerVector":
        arr = np.asarray(arr, dtype=complex).ravel()
        if arr.shape != (6,):
            raise ValidationError(f"Plücker vector needs 6 entries, got {arr.shape}")
        return cls(*(complex(x) for x in arr))

    def as_array(self) -> np.ndarray:
        return np.array([self.p12, self.p13, self.p14, self.p23, self.p24, self.p34], dtype=complex)

    def entry(self, j: int, k: int) -> complex:
        """Signed minor for 0-based columns j, k (antisymmetric, zero on the diagonal)."""
        if j == k:
            return 0j
        sign = 1
        if j > k:
            j, k, sign = k, j, -1
        return sign * self.as_array()[PAIR_INDEX.index((j, k))]


@dataclass(frozen=True)
class SearchRegion:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        vals = [float(v) for v in (self.re_min, self.re_max, self.im_min, self.im_max)]
        if not all(math.isfinite(v) for v in vals):
            raise ValidationError("search region bounds must be finite")
        if not (vals[0] < vals[1] and vals[2] < vals[3]):
            raise ValidationError(f"degenerate search region {vals}")
        for name, v in zip(("re_min", "re_max", "im_min", "im_max"), vals):
            object.__setattr__(self, name, v)

    @property
    def diameter(self) -> float:
        return math.hypot(self.re_max - self.re_min, self.im_max - self.im_min)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    @property
    def corners(self) -> tuple[complex, complex, complex, complex]:
        return (
            complex(self.re_min, self.im_min),
            complex(self.re_max, self.im_min),
            complex(self.re_max, self.im_max),
            complex(self.re_min, self.im_max),
        )

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (
            self.re_min + margin < z.real < self.re_max - margin
            and self.im_min + margin < z.imag < self.im_max - margin
        )

    def grown(self, delta: float) -> "SearchRegion":
        return SearchRegion(self.re_min - delta, self.re_max + delta, self.im_min - delta, self.im_max + delta)

    def scaled(self, factor: float) -> "SearchRegion":
        c = self.center
        hw = 0.5 * factor * (self.re_max - self.re_min)
        hh = 0.5 * factor * (self.im_max - self.im_min)
        return SearchRegion(c.real - hw, c.real + hw, c.imag - hh, c.imag + hh)


@dataclass(frozen=True)
class Spectrum:
    """Nonzero zeros of the characteristic determinant inside ``region``.

    ``eigenvalues`` holds (lambda, multiplicity) pairs sorted by (Re, Im); ``residuals``
    holds the matching scaled residuals |Delta|/scale.
    """

    eigenvalues: tuple[tuple[complex, int], ...]
    region: SearchRegion
    zero_order: int = 0
    residuals: tuple[float, ...] = field(default=())

    @property
    def values(self) -> list[complex]:
        return [lam for lam, _ in self.eigenvalues]

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.eigenvalues)

    def __len__(self):
        return len(self.eigenvalues)
