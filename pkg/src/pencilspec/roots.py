"""Zeros of entire functions in a rectangle: argument principle + subdivision + Newton.

The winding number of a function along a rectangle is accumulated segment by
segment, bisecting until consecutive samples differ in phase by less than pi/2.
Cells are split until each holds a single (possibly multiple) zero, which is then
refined by Newton's method and certified by a local winding count.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, fields

import numpy as np

from ._kernels import segment_phase_numpy
from .chardet import DeltaEvaluator, _cauchy_derivative
from .core import Problem, SearchRegion, Spectrum
from .errors import (
    BoundaryZero,
    MultiplicityCapExceeded,
    NewtonDiverged,
    NonConvergent,
    Overflow,
    ValidationError,
)

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
# split positions are nudged off the midpoint so that symmetric spectra do not land on cut lines
_SPLIT_FRACTIONS = (0.5 - 0.0173, 0.5 + 0.0291, 0.5 - 0.0412, 0.5 + 0.0537, 0.5 - 0.0659, 0.5 + 0.0783)
_JITTER_RETRIES = 5
_DENSITY_RETRIES = 3


@dataclass(frozen=True)
class RootFinderConfig:
    zero_exclusion_radius: float = 1e-8
    dedup_radius: float = 1e-7
    residual_tol: float = 1e-11
    max_multiplicity: int = 8
    max_depth: int = 40
    min_box_diameter: float = 1e-9
    edge_jitter: float = 1e-6
    max_contour_points: int = 200_000

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValidationError(f"{f.name} must be positive, got {v!r}")
        if not self.min_box_diameter < self.dedup_radius:
            raise ValidationError("min_box_diameter must be smaller than dedup_radius")

    @property
    def certify_radius(self) -> float:
        return 10.0 * self.dedup_radius


class FunctionEvaluator:
    """Adapter for a plain vectorised callable (scale taken as 1)."""

    def __init__(self, f, derivative=None, rate: float = 1.0):
        self.f = f
        self.derivative = derivative
        self.rate = float(rate)

    def __call__(self, z):
        return self.f(z)

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        v = np.asarray(self.f(z), dtype=complex)
        return v, np.ones(v.shape)

    def value_and_derivative(self, z: complex):
        v = complex(np.asarray(self.f(np.array([z])))[0])
        if self.derivative is not None:
            d = complex(np.asarray(self.derivative(np.array([z])))[0])
        else:
            d = _cauchy_derivative(self.f, z, 1)
        return v, 1.0, d

    def check_region(self, points) -> None:
        pass

    def segment_phase(self, z0, z1, n0, max_points):
        return segment_phase_numpy(self.evaluate, complex(z0), complex(z1), n0, max_points)


def as_evaluator(obj):
    if isinstance(obj, Problem):
        return DeltaEvaluator(obj)
    if hasattr(obj, "segment_phase") and hasattr(obj, "evaluate"):
        return obj
    if callable(obj):
        return FunctionEvaluator(obj)
    raise ValidationError(f"cannot evaluate zeros of {obj!r}")


class _Tracker:
    """Memoised segment phases for one evaluator; shared edges are computed once."""

    def __init__(self, ev, config: RootFinderConfig):
        self.ev = ev
        self.config = config
        self.cache: dict = {}

    def segment(self, z0: complex, z1: complex, density: float = 1.0):
        key = (z0, z1, density)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        rev = self.cache.get((z1, z0, density))
        if rev is not None:
            return -rev[0], rev[1]
        n0 = 8 + int(math.ceil(density * 4.0 * self.ev.rate * abs(z1 - z0) / math.pi))
        phase, min_rel, npts = self.ev.segment_phase(z0, z1, n0, self.config.max_contour_points)
        if npts < 0:
            raise NonConvergent(f"phase tracking on [{z0}, {z1}] exceeded {self.config.max_contour_points} points")
        self.cache[key] = (phase, min_rel)
        return phase, min_rel

    def loop(self, points, density: float = 1.0) -> tuple[int, float]:
        total, min_rel = 0.0, math.inf
        for z0, z1 in zip(points, points[1:] + points[:1]):
            ph, mr = self.segment(z0, z1, density)
            total += ph
            min_rel = min(min_rel, mr)
        w = total / TWO_PI
        n = int(round(w))
        # a zero on the contour is reported through min_rel so the caller can move the contour
        if abs(w - n) > 1e-3 and min_rel >= self.config.residual_tol:
            raise NonConvergent(f"winding {w} is not an integer")
        return n, min_rel

    def rectangle(self, region: SearchRegion, density: float = 1.0) -> tuple[int, float]:
        return self.loop(list(region.corners), density)

    def circle(self, center: complex, radius: float, sides: int = 8) -> int:
        pts = [center + radius * complex(math.cos(TWO_PI * k / sides), math.sin(TWO_PI * k / sides))
               for k in range(sides)]
        total = 0.0
        for z0, z1 in zip(pts, pts[1:] + pts[:1]):
            phase, _, npts = self.ev.segment_phase(z0, z1, 2, self.config.max_contour_points)
            if npts < 0:
                return -1
            total += phase
        return int(round(total / TWO_PI))


def _jittered_count(tracker: _Tracker, region: SearchRegion) -> tuple[SearchRegion, int]:
    cfg = tracker.config
    tracker.ev.check_region(list(region.corners))
    for attempt in range(_JITTER_RETRIES + 1):
        count, min_rel = tracker.rectangle(region)
        if min_rel >= cfg.residual_tol:
            return region, count
        if attempt == _JITTER_RETRIES:
            break
        log.debug("near-zero on contour (%.3g); growing region", min_rel)
        region = region.grown(cfg.edge_jitter * (1.0 + region.diameter))
        tracker.ev.check_region(list(region.corners))
    raise BoundaryZero(f"|f|/scale on the contour stays below {cfg.residual_tol:g} after {_JITTER_RETRIES} retries")


def count_zeros(evaluator, region: SearchRegion, config: RootFinderConfig | None = None) -> int:
    """Number of zeros (with multiplicity) inside ``region``."""
    config = config or RootFinderConfig()
    tracker = _Tracker(as_evaluator(evaluator), config)
    return _jittered_count(tracker, region)[1]


def _newton(ev, seed: complex, multiplicity: int, max_iter: int = 50, bound: tuple | None = None):
    """Modified Newton z -= m f/f'. Returns (z, rel_residual) or None on failure."""
    try:
        return _newton_unguarded(ev, seed, multiplicity, max_iter, bound)
    except Overflow:
        return None


def _newton_unguarded(ev, seed, multiplicity, max_iter, bound):
    z = complex(seed)
    prev = math.inf
    for it in range(max_iter):
        f, s, d = ev.value_and_derivative(z)
        if f == 0:
            return z, 0.0
        if d == 0 or not np.isfinite(d):
            return None
        step = multiplicity * f / d
        z = z - step
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return None
        if bound is not None:
            c, r = bound
            if abs(z - c) > r:
                return None
        a = abs(step)
        if a <= 1e-14 * (1.0 + abs(z)):
            break
        # stagnation at rounding level
        if it > 3 and a >= 0.5 * prev and a < 1e-8 * (1.0 + abs(z)):
            break
        prev = a
    f, s, _ = ev.value_and_derivative(z)
    return z, (abs(f) / s if s > 0 else abs(f))


def refine_root(evaluator, derivative, seed: complex, config: RootFinderConfig | None = None) -> complex:
    """Newton iteration from ``seed``; raises NewtonDiverged unless the residual is small."""
    config = config or RootFinderConfig()
    if derivative is None:
        ev = as_evaluator(evaluator)
    else:
        ev = FunctionEvaluator(lambda z: np.asarray(evaluator(z), dtype=complex),
                               lambda z: np.asarray(derivative(z), dtype=complex))
    out = _newton(ev, seed, 1)
    if out is None or not out[1] <= config.residual_tol:
        raise NewtonDiverged(f"Newton from {seed} did not reach residual {config.residual_tol:g}")
    return out[0]


def _split(region: SearchRegion, k: int) -> list[SearchRegion]:
    fx = _SPLIT_FRACTIONS[k % len(_SPLIT_FRACTIONS)]
    fy = _SPLIT_FRACTIONS[(k + 1) % len(_SPLIT_FRACTIONS)]
    w = region.re_max - region.re_min
    h = region.im_max - region.im_min
    xs = [region.re_min, region.re_min + fx * w, region.re_max]
    ys = [region.im_min, region.im_min + fy * h, region.im_max]
    # elongated cells are halved across the long side only
    if w >= 2.0 * h:
        ys = [region.im_min, region.im_max]
    elif h >= 2.0 * w:
        xs = [region.re_min, region.re_max]
    return [SearchRegion(xs[i], xs[i + 1], ys[j], ys[j + 1]) for i in range(len(xs) - 1) for j in range(len(ys) - 1)]


def _cut_lines(parent: SearchRegion, children: list[SearchRegion]) -> list[tuple[complex, complex]]:
    segs = []
    for ch in children:
        for z0, z1 in zip(ch.corners, ch.corners[1:] + ch.corners[:1]):
            on_parent = (
                (z0.real == z1.real and z0.real in (parent.re_min, parent.re_max))
                or (z0.imag == z1.imag and z0.imag in (parent.im_min, parent.im_max))
            )
            if not on_parent:
                segs.append((z0, z1))
    return segs


def _subdivide(tracker: _Tracker, cell: SearchRegion, count: int):
    cfg = tracker.config
    for density in (1.0, 2.0, 4.0, 8.0)[: _DENSITY_RETRIES + 1]:
        chosen = None
        for k in range(len(_SPLIT_FRACTIONS)):
            children = _split(cell, k)
            if all(tracker.segment(z0, z1, density)[1] >= cfg.residual_tol for z0, z1 in _cut_lines(cell, children)):
                chosen = children
                break
        if chosen is None:
            raise BoundaryZero(f"no zero-free cut line found for cell {cell}")
        counts = [tracker.rectangle(ch, density)[0] for ch in chosen]
        if density > 1.0:
            count = tracker.rectangle(cell, density)[0]
        if sum(counts) == count and min(counts) >= 0:
            return list(zip(chosen, counts))
        log.debug("count mismatch in %s: %d vs %s; densifying", cell, count, counts)
    raise NonConvergent(f"child counts never matched the parent count in {cell}")


def _try_isolated(tracker: _Tracker, cell: SearchRegion, count: int):
    cfg = tracker.config
    diam = cell.diameter
    out = _newton(tracker.ev, cell.center, count, bound=(cell.center, 2.0 * diam))
    if out is None:
        return None
    z, rel = out
    if not cell.contains(z) or not rel <= cfg.residual_tol:
        return None
    if tracker.circle(z, cfg.certify_radius) != count:
        return None
    return z, count, rel


def spectral_order(z: complex, resolution: float = 1e-7) -> tuple[float, float]:
    """Sort key (Re, Im) with real parts quantised, so rounding noise cannot reorder conjugates."""
    return (round(z.real / resolution) * resolution, z.imag)


def find_zeros(evaluator, region: SearchRegion, config: RootFinderConfig | None = None) -> Spectrum:
    """All zeros in ``region``; zeros within the exclusion radius of 0 are folded into ``zero_order``."""
    config = config or RootFinderConfig()
    ev = as_evaluator(evaluator)
    tracker = _Tracker(ev, config)
    region, total = _jittered_count(tracker, region)

    found = []
    stack = [(region, total, 0)]
    while stack:
        cell, count, depth = stack.pop()
        if count == 0:
            continue
        # every point of this cell lies within the exclusion radius of the origin
        if max(abs(z) for z in cell.corners) < config.zero_exclusion_radius:
            found.append((0j, count, 0.0))
            continue
        hit = _try_isolated(tracker, cell, count)
        if hit is not None:
            found.append(hit)
            continue
        if cell.diameter < config.min_box_diameter or depth >= config.max_depth:
            if count > config.max_multiplicity:
                raise MultiplicityCapExceeded(f"{count} zeros clustered in {cell}")
            z = cell.center
            f, s, _ = ev.value_and_derivative(z)
            found.append((z, count, abs(f) / s if s > 0 else abs(f)))
            continue
        children = _subdivide(tracker, cell, count)
        for child, n in reversed(children):
            stack.append((child, n, depth + 1))

    zero_order = 0
    eigs = []
    for z, m, rel in found:
        if abs(z) < config.zero_exclusion_radius:
            zero_order += m
        else:
            eigs.append((z, m, rel))
    eigs.sort(key=lambda t: spectral_order(t[0], config.dedup_radius))
    merged: list[list] = []
    for z, m, rel in eigs:
        for item in merged:
            if abs(item[0] - z) <= config.dedup_radius:
                item[1] += m
                break
        else:
            merged.append([z, m, rel])
    if sum(m for _, m, _ in merged) + zero_order != total:
        raise NonConvergent("isolated zeros do not account for the contour count")
    return Spectrum(
        eigenvalues=tuple((z, m) for z, m, _ in merged),
        region=region,
        zero_order=zero_order,
        residuals=tuple(float(r) for _, _, r in merged),
    )


def find_eigenvalues(problem: Problem, region: SearchRegion, config: RootFinderConfig | None = None) -> Spectrum:
    """Nonzero eigenvalues of ``problem`` in ``region`` with multiplicities."""
    return find_zeros(DeltaEvaluator(problem), region, config)
