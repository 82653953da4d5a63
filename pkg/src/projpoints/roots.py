"""Zeros of sampled periodic functions.

Two kinds of zero are distinguished: *transversal* ones, where the function
changes sign and bisection on the trigonometric interpolant pins them down, and
*tangential* ones, where a nonnegative function (a square, typically) touches
zero.  Counting is always of distinct points on the circle, after merging
clusters closer than ``merge_radius``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import AllZeroError, NegativeInputError
from .periodic import SampledPeriodic

TRANSVERSAL = "transversal"
TANGENTIAL = "tangential"

DEFAULT_TOL = 1e-10
DEFAULT_MERGE_RADIUS = 1e-4
DEFAULT_FLOOR_RATIO = 1e-8


@dataclass(frozen=True)
class Zero:
    location: float
    kind: str


@dataclass(frozen=True)
class ZeroSet:
    zeros: tuple = ()
    merge_radius: float = DEFAULT_MERGE_RADIUS
    period: float = np.pi

    def __len__(self):
        return len(self.zeros)

    def __iter__(self):
        return iter(self.zeros)

    @property
    def locations(self) -> np.ndarray:
        return np.array([z.location for z in self.zeros], dtype=float)

    @property
    def kinds(self) -> list:
        return [z.kind for z in self.zeros]

    def merged(self) -> "ZeroSet":
        return _merge(self.zeros, self.merge_radius, self.period)

    def union(self, other: "ZeroSet") -> "ZeroSet":
        """Merged union; where kinds collide the transversal label wins."""
        return _merge(self.zeros + other.zeros, self.merge_radius, self.period)


def circular_distance(a, b, period: float = np.pi):
    d = np.mod(np.asarray(a) - np.asarray(b), period)
    return np.minimum(d, period - d)


def _merge(zeros, radius: float, period: float) -> ZeroSet:
    if not zeros:
        return ZeroSet((), radius, period)
    # transversal first so it survives as the cluster representative's kind
    order = sorted(zeros, key=lambda z: (np.mod(z.location, period), z.kind != TRANSVERSAL))
    locs = np.array([np.mod(z.location, period) for z in order])
    gaps = np.diff(locs)
    starts = [0] + [i + 1 for i in np.flatnonzero(gaps > radius)]
    clusters = [list(range(s, e)) for s, e in zip(starts, starts[1:] + [len(order)])]
    # seam: last cluster joins the first across period -> 0
    if len(clusters) > 1 and (locs[0] + period - locs[-1]) <= radius:
        clusters[0] = clusters[-1] + clusters[0]
        clusters.pop()
    out = []
    for members in clusters:
        # circular mean relative to the first member
        ref = locs[members[0]]
        offs = (locs[members] - ref + period / 2) % period - period / 2
        loc = float(np.mod(ref + offs.mean(), period))
        kind = TRANSVERSAL if any(order[i].kind == TRANSVERSAL for i in members) else TANGENTIAL
        out.append(Zero(loc, kind))
    out.sort(key=lambda z: z.location)
    return ZeroSet(tuple(out), radius, period)


def refine_transversal_zeros(samples: SampledPeriodic, tol: float = DEFAULT_TOL,
                             merge_radius: float = DEFAULT_MERGE_RADIUS) -> ZeroSet:
    """Sign changes of the samples, refined by bisection on the interpolant.

    Raises
    ------
    AllZeroError
        If ``max |samples| < tol``.
    """
    if samples.n < 16:
        raise ValueError("need at least 16 samples")
    if tol <= 0:
        raise ValueError("tol must be positive")
    v = samples.values
    if np.abs(v).max() < tol:
        raise AllZeroError(f"sup|samples| = {np.abs(v).max():.3g} < tol")
    h = samples.spacing
    n = samples.n
    s = np.sign(v)
    found = []

    # samples that are exactly zero with a sign flip across them
    for j in np.flatnonzero(s == 0):
        left, right = s[(j - 1) % n], s[(j + 1) % n]
        if left * right < 0:
            found.append(j * h)

    nxt = np.roll(s, -1)
    lo_idx = np.flatnonzero(s * nxt < 0)
    if lo_idx.size:
        lo = lo_idx * h
        hi = lo + h
        f_lo = v[lo_idx]
        steps = int(np.ceil(np.log2(h / tol))) + 1
        for _ in range(max(steps, 1)):
            mid = 0.5 * (lo + hi)
            f_mid = samples(mid)
            same = np.sign(f_mid) == np.sign(f_lo)
            lo = np.where(same, mid, lo)
            f_lo = np.where(same, f_mid, f_lo)
            hi = np.where(same, hi, mid)
            exact = f_mid == 0
            lo = np.where(exact, mid, lo)
            hi = np.where(exact, mid, hi)
        found.extend(0.5 * (lo + hi))

    zs = tuple(Zero(float(np.mod(x, samples.period)), TRANSVERSAL) for x in found)
    return _merge(zs, merge_radius, samples.period)


def _window_max(v: np.ndarray, j: int, w: int) -> float:
    idx = np.arange(j - w, j + w + 1) % v.size
    return float(v[idx].max())


def _touching_minima(samples: SampledPeriodic, floor: float, width: float,
                     prefilter: float = 0.25) -> list:
    """Local minima of the interpolant whose refined value lies in [-floor, floor].

    Only grid minima that sit well below their surroundings (within ``width``)
    are refined, so flat stretches cost nothing.
    """
    v = samples.values
    n = samples.n
    h = samples.spacing
    w = max(1, int(round(width / h)))
    prev, nxt = np.roll(v, 1), np.roll(v, -1)
    cand = np.flatnonzero((v <= prev) & (v <= nxt) & (v > -floor))
    out = []
    for j in cand:
        around = _window_max(v, j, w)
        if v[j] > prefilter * around and v[j] > floor:
            continue
        a0 = j * h
        res = minimize_scalar(lambda x: float(samples(x)), bounds=(a0 - h, a0 + h),
                              method="bounded", options={"xatol": 1e-12})
        val = float(res.fun)
        if abs(val) <= floor:
            out.append(float(np.mod(res.x, samples.period)))
    return out


def default_floor(samples: SampledPeriodic) -> float:
    return DEFAULT_FLOOR_RATIO * samples.scale


def detect_tangential_zeros(samples: SampledPeriodic, floor: float | None = None,
                            width: float | None = None,
                            merge_radius: float = DEFAULT_MERGE_RADIUS) -> ZeroSet:
    """Zeros of a nonnegative function that do not change sign.

    Parameters
    ----------
    floor : float, optional
        A refined local minimum below this counts as a zero.  Defaults to
        ``1e-8 * max(samples)``.
    width : float, optional
        Neighbourhood used to decide that a grid minimum stands out from its
        surroundings.  Defaults to four grid cells.
    """
    if floor is None:
        floor = default_floor(samples)
    if width is None:
        width = 4 * samples.spacing
    v = samples.values
    if floor <= 0:
        raise AllZeroError("samples vanish identically")
    if v.min() < -floor:
        raise NegativeInputError(f"min(samples) = {v.min():.3g} < -floor = {-floor:.3g}")
    locs = _touching_minima(samples, floor, width)
    return _merge(tuple(Zero(x, TANGENTIAL) for x in locs), merge_radius, samples.period)


def find_zeros(samples: SampledPeriodic, tol: float = DEFAULT_TOL, floor: float | None = None,
               merge_radius: float = DEFAULT_MERGE_RADIUS) -> ZeroSet:
    """All zeros of a possibly sign-changing function: crossings plus touchings.

    Touching zeros are local extrema of the samples whose refined value is
    within ``floor`` of zero (both from above and from below).
    """
    trans = refine_transversal_zeros(samples, tol, merge_radius)
    if floor is None:
        floor = default_floor(samples)
    width = 4 * samples.spacing
    touch = _touching_minima(samples, floor, width) + _touching_minima(-samples, floor, width)
    tang = ZeroSet(tuple(Zero(x, TANGENTIAL) for x in touch), merge_radius, samples.period)
    return trans.union(tang)


def count_distinct_circular(zs: ZeroSet) -> int:
    """Number of distinct zeros after merging clusters, seam included."""
    return len(zs.merged())
