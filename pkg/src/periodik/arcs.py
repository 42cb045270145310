"""Discrete superlevel arcs, the two-threshold family, and set distances.

A discrete (h, J)-arc is a closed arc whose grid points exp(2i*pi*j/J)
all carry magnitude >= h.  Maximal arcs are cyclic runs of qualifying
indices; the two-threshold family keeps the maximal h-arcs that contain
at least one grid point at the higher level h'.  Arc index pairs are
canonical: 0 <= j1 < J and j1 <= j2 < j1 + J, so an arc crossing theta=0
stays a single arc.

The Pompeiu-Hausdorff distance between closed subsets of the unit circle
(unions of arcs and points) uses the planar chordal metric and is
computed exactly from endpoint/gap-midpoint candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .kernels import GridEvaluation

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DiscreteArc:
    """Arc[2*pi*j1/J, 2*pi*j2/J] on the J-point grid."""

    j1: int
    j2: int
    J: int
    full_circle: bool = False

    def __post_init__(self):
        if self.J < 1:
            raise ParameterError("grid order J must be >= 1")
        if self.full_circle:
            object.__setattr__(self, "j1", 0)
            object.__setattr__(self, "j2", self.J - 1)
            return
        j1 = self.j1 % self.J
        j2 = self.j2 + (j1 - self.j1)  # shift j2 by the same multiple of J
        if not (j1 <= j2 < j1 + self.J):
            raise ParameterError("arc indices must satisfy j1 <= j2 < j1 + J")
        object.__setattr__(self, "j1", j1)
        object.__setattr__(self, "j2", j2)

    @property
    def theta1(self) -> float:
        return TWO_PI * self.j1 / self.J

    @property
    def theta2(self) -> float:
        return TWO_PI * self.j2 / self.J

    @property
    def n_points(self) -> int:
        return self.J if self.full_circle else self.j2 - self.j1 + 1

    def indices(self) -> np.ndarray:
        """Grid indices covered by the arc, reduced mod J."""
        if self.full_circle:
            return np.arange(self.J)
        return np.arange(self.j1, self.j2 + 1) % self.J

    def contains_index(self, j: int) -> bool:
        if self.full_circle:
            return True
        return (j - self.j1) % self.J <= self.j2 - self.j1

    def contains_angle(self, theta: float) -> bool:
        if self.full_circle:
            return True
        return (theta - self.theta1) % TWO_PI <= (self.theta2 - self.theta1) + 1e-15

    def midpoint(self) -> complex:
        """exp(2i*pi*(j1+j2)/(2J)), the canonical arc-center estimate."""
        return complex(np.exp(2j * np.pi * (self.j1 + self.j2) / (2.0 * self.J)))

    def to_dict(self) -> dict:
        return {
            "j1": int(self.j1), "j2": int(self.j2), "J": int(self.J),
            "theta1": self.theta1, "theta2": self.theta2,
            "full_circle": bool(self.full_circle),
        }


@dataclass(frozen=True)
class ArcFamily:
    """Disjoint maximal arcs at a common level on a common grid."""

    arcs: tuple
    level: float
    J: int

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(self.arcs))

    def __len__(self) -> int:
        return len(self.arcs)

    def __iter__(self):
        return iter(self.arcs)

    @property
    def is_empty(self) -> bool:
        return len(self.arcs) == 0

    @property
    def is_full_circle(self) -> bool:
        return any(a.full_circle for a in self.arcs)

    def to_dict(self) -> dict:
        return {"level": float(self.level), "J": int(self.J),
                "arcs": [a.to_dict() for a in self.arcs]}


def _magnitudes(values) -> np.ndarray:
    if isinstance(values, GridEvaluation):
        return values.magnitudes
    return np.abs(np.asarray(values))


def superlevel_arcs(magnitudes, h: float) -> ArcFamily:
    """All maximal cyclic runs of grid indices with magnitude >= h."""
    mags = _magnitudes(magnitudes)
    J = mags.size
    if J < 1:
        raise ParameterError("need at least one grid point")
    mask = mags >= h
    if mask.all():
        return ArcFamily((DiscreteArc(0, J - 1, J, full_circle=True),), h, J)
    if not mask.any():
        return ArcFamily((), h, J)
    idx = np.flatnonzero(mask)
    breaks = np.flatnonzero(np.diff(idx) > 1)
    runs = np.split(idx, breaks + 1)
    arcs = [DiscreteArc(int(r[0]), int(r[-1]), J) for r in runs]
    if mask[0] and mask[-1] and len(arcs) > 1:
        # wrap-around: the first and last runs form one arc through theta=0
        first, last = arcs[0], arcs[-1]
        arcs = arcs[1:-1]
        arcs.append(DiscreteArc(last.j1, first.j2 + J, J))
    arcs.sort(key=lambda a: a.j1)
    return ArcFamily(tuple(arcs), h, J)


def two_threshold_family(magnitudes, h: float, h_prime: float):
    """Maximal h-arcs containing a grid point at level h', and their count.

    Returns (family, N_hat).  When every grid point clears h the family is
    the single full-circle arc and N_hat is None: the degenerate state has
    no endpoints to count, so it is surfaced rather than counted as one.
    """
    if h > h_prime:
        raise ParameterError("levels must satisfy h <= h_prime")
    mags = _magnitudes(magnitudes)
    base = superlevel_arcs(mags, h)
    if base.is_full_circle:
        return ArcFamily(base.arcs, h, base.J), None
    kept = [a for a in base if float(np.max(mags[a.indices()])) >= h_prime]
    return ArcFamily(tuple(kept), h, base.J), len(kept)


def localization_set(grid, h: float) -> ArcFamily:
    """L-hat: the union of all maximal (h, J)-arcs of |values|."""
    return superlevel_arcs(grid, h)


def refined_family(magnitudes, kept: ArcFamily, h_prime: float) -> ArcFamily:
    """Arcs of the h'-superlevel set lying inside the kept h-arcs.

    This realizes the refined localization (the h'-level set intersected
    with the detected arcs): since h <= h', every h'-arc sits inside some
    maximal h-arc, so membership reduces to containment of the start index.
    """
    prime = superlevel_arcs(magnitudes, h_prime)
    if prime.is_full_circle or kept.is_full_circle:
        return prime
    inside = [a for a in prime if any(k.contains_index(a.j1) for k in kept)]
    return ArcFamily(tuple(inside), h_prime, prime.J)


# ---------------------------------------------------------------------------
# circle-set geometry

def _intervals(obj) -> list[tuple[float, float]]:
    """Normalize a set (ArcFamily, arcs, or points) to (start, width) pairs.

    Widths are in [0, 2*pi]; width 2*pi marks the full circle; points get
    width 0.  Overlapping intervals are merged so gap midpoints are valid.
    """
    items: list[tuple[float, float]] = []
    if isinstance(obj, ArcFamily):
        obj = obj.arcs
    elif isinstance(obj, (DiscreteArc, complex, float, int, np.complexfloating)):
        obj = [obj]
    for el in obj:
        if isinstance(el, DiscreteArc):
            if el.full_circle:
                return [(0.0, TWO_PI)]
            items.append((el.theta1 % TWO_PI, el.theta2 - el.theta1))
        else:
            z = complex(el)
            items.append((math.atan2(z.imag, z.real) % TWO_PI, 0.0))
    if not items:
        return []
    if any(w >= TWO_PI for _, w in items):
        return [(0.0, TWO_PI)]
    items.sort()
    merged = [items[0]]
    for s, w in items[1:]:
        ps, pw = merged[-1]
        if s <= ps + pw + 1e-15:
            merged[-1] = (ps, max(pw, s + w - ps))
        else:
            merged.append((s, w))
    # wrap merge: last interval reaching past 2*pi may absorb the first
    if len(merged) > 1:
        ps, pw = merged[-1]
        fs, fw = merged[0]
        if ps + pw >= fs + TWO_PI - 1e-15:
            merged[-1] = (ps, max(pw, fs + fw + TWO_PI - ps))
            merged.pop(0)
            if merged[0][1] >= TWO_PI:
                return [(0.0, TWO_PI)]
    return merged


def _angular_distance(phi: float, intervals: list[tuple[float, float]]) -> float:
    """Circular distance from angle phi to the union of intervals."""
    best = math.inf
    for s, w in intervals:
        if w >= TWO_PI:
            return 0.0
        d = (phi - s) % TWO_PI
        if d <= w:
            return 0.0
        best = min(best, d - w, TWO_PI - d)
    return best


def _gap_midpoints(intervals: list[tuple[float, float]]) -> list[float]:
    """Midpoints of the gaps between consecutive components (local maxima
    of the distance-to-set function)."""
    if not intervals or intervals[0][1] >= TWO_PI:
        return []
    n = len(intervals)
    mids = []
    for i in range(n):
        s, w = intervals[i]
        ns = intervals[(i + 1) % n][0] + (TWO_PI if i == n - 1 else 0.0)
        end = s + w
        gap = ns - end
        if gap > 0:
            mids.append((end + gap / 2.0) % TWO_PI)
    return mids


def _directed_angular_sup(from_iv, to_iv) -> float:
    """sup over the first set of the angular distance to the second."""
    if not from_iv:
        return 0.0
    candidates = list(_gap_midpoints(to_iv))
    sup = 0.0
    for s, w in from_iv:
        if w >= TWO_PI:
            pts = candidates or [0.0]
        else:
            pts = [s, (s + w) % TWO_PI]
            pts += [g for g in candidates if (g - s) % TWO_PI <= w]
        for phi in pts:
            sup = max(sup, _angular_distance(phi, to_iv))
    return sup


def directed_angular_sup(from_set, to_set) -> float:
    """sup_{z in A} of the circular (angular) distance to B; inf if B empty."""
    to_iv = _intervals(to_set)
    from_iv = _intervals(from_set)
    if not from_iv:
        return 0.0
    if not to_iv:
        return math.inf
    return _directed_angular_sup(from_iv, to_iv)


def hausdorff_distance(set_a, set_b) -> float:
    """Pompeiu-Hausdorff distance in the plane between two closed subsets
    of the unit circle given as ArcFamily / arcs / complex points.

    Both empty gives 0; exactly one empty gives the +inf sentinel, matching
    dist(z, empty) = +inf.  For nonempty sets the chordal metric is exact:
    chord = 2*sin(delta/2) is increasing in the angular gap delta <= pi.
    """
    a = _intervals(set_a)
    b = _intervals(set_b)
    if not a and not b:
        return 0.0
    if not a or not b:
        return math.inf
    delta = max(_directed_angular_sup(a, b), _directed_angular_sup(b, a))
    return 2.0 * math.sin(min(delta, math.pi) / 2.0)
