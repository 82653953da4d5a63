"""Schwarzian derivative in the angular parameter and related probes."""

from __future__ import annotations

import numpy as np

from .diffeo import DiffeoSpec, SampledLift
from .errors import DegenerateError, IdenticallyZeroError
from .periodic import SampledPeriodic
from .roots import ZeroSet, find_zeros


def schwarzian_angular(lift: SampledLift) -> SampledPeriodic:
    """``f'''/f' - 3/2 (f''/f')^2 + 2 (f'^2 - 1)`` on the lift's grid."""
    r = lift.fddot / lift.fdot
    return SampledPeriodic(lift.fdddot / lift.fdot - 1.5 * r * r + 2.0 * (lift.fdot**2 - 1.0))


def potential_from_schwarzian(S: SampledPeriodic) -> SampledPeriodic:
    """Sturm-Liouville potential ``k = S/2 + 1``."""
    return S * 0.5 + 1.0


def identically_zero_tol(lift: SampledLift) -> float:
    return 1e-8 * (1.0 + float(np.max(lift.fdot)) ** 2)


def cross_ratio(a, b, c, d) -> float:
    """``(a - c)(b - d) / ((b - c)(a - d))``.

    Raises
    ------
    DegenerateError
        If ``b ~ c`` or ``a ~ d`` relative to the spread of the points.
    """
    scale = max(abs(a), abs(b), abs(c), abs(d), abs(a - d), abs(b - c))
    if abs(b - c) < 1e-14 * scale or abs(a - d) < 1e-14 * scale or scale == 0:
        raise DegenerateError("coincident points in cross-ratio")
    return (a - c) * (b - d) / ((b - c) * (a - d))


def _line_cross_ratio(d02, d13, d12, d03) -> float:
    """Cross-ratio of four lines from their pairwise angle differences.

    Equals :func:`cross_ratio` of the slopes ``tan`` of the four angles.
    """
    den = np.sin(d12) * np.sin(d03)
    if abs(np.sin(d12)) < 1e-14 or abs(np.sin(d03)) < 1e-14:
        raise DegenerateError("coincident lines in cross-ratio")
    return float(np.sin(d02) * np.sin(d13) / den)


def schwarzian_crossratio_probe(spec: DiffeoSpec, alpha: float, eps: float) -> float:
    """Finite-``eps`` estimate of the cross-ratio distortion at ``alpha``.

    Returns ``([f(a), f(a+e), f(a+2e), f(a+3e)] - [a, a+e, a+2e, a+3e]) / e^2`` for
    the cross-ratio of the corresponding lines.  The limit ``eps -> 0`` is a
    fixed multiple of the Schwarzian; see :func:`richardson_probe`.
    """
    if not 0 < eps < 0.1:
        raise ValueError("eps must lie in (0, 0.1)")
    pts = alpha + eps * np.arange(4)
    pairs = [(0, 2), (1, 3), (1, 2), (0, 3)]
    da = [pts[j] - pts[i] for i, j in pairs]
    df = [float(spec.increment(pts[i], pts[j])) for i, j in pairs]
    return (_line_cross_ratio(*df) - _line_cross_ratio(*da)) / eps**2


def richardson_probe(spec: DiffeoSpec, alpha: float, eps=(1e-2, 5e-3, 2.5e-3)) -> float:
    """Probe extrapolated to ``eps -> 0`` from three halving steps.

    The probe's error expands in powers ``eps, eps^2``; both are eliminated.
    """
    e0, e1, e2 = eps
    if not (np.isclose(e1, e0 / 2) and np.isclose(e2, e1 / 2)):
        raise ValueError("eps must halve at each step")
    p0, p1, p2 = (schwarzian_crossratio_probe(spec, alpha, e) for e in eps)
    r0, r1 = 2 * p1 - p0, 2 * p2 - p1
    return (4 * r1 - r0) / 3


def infinitesimal_operator(a: SampledPeriodic):
    """``a''' + 4 a'`` computed spectrally, plus the size of its lowest harmonics.

    Returns
    -------
    out : SampledPeriodic
    report : dict
        ``harmonic0`` and ``harmonic1`` magnitudes of ``out`` (re-transformed
        from its samples), and ``scale`` of the input.
    """
    out = a.derivative(3) + 4.0 * a.derivative(1)
    report = {
        "harmonic0": out.harmonic(0),
        "harmonic1": out.harmonic(1),
        "scale": a.scale,
    }
    return out, report


def projective_points(S: SampledPeriodic, tol: float = 1e-8) -> ZeroSet:
    """Zeros of the Schwarzian, crossings and touchings alike.

    Raises
    ------
    IdenticallyZeroError
        If ``sup |S| < tol``: the map is projective and every point qualifies.
    """
    if S.scale < tol:
        raise IdenticallyZeroError(f"sup|S| = {S.scale:.3g} < {tol:.3g}")
    return find_zeros(S)
