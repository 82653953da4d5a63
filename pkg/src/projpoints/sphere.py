"""Characteristic curve on S^2 and its spherical geometry.

With ``z1 = c1 + i c2`` and ``z2 = c3 + i c4`` the map

    r = (2 Re(z1 z2), 2 Im(z1 z2), |z1|^2 - |z2|^2) / (|z1|^2 + |z2|^2)

is constant along the characteristic flow ``(e^{it} z1, e^{-it} z2)`` of the
contact structure, sends ``R^2_1`` to the north pole and ``R^2_2`` to the south
pole.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (IdenticallyZeroError, NotImmersedError, OriginHitError, PoleHitError,
                     SelfIntersectingError)
from .legendrian import LegendrianCurve
from .periodic import SampledPeriodic, spectral_derivative
from .roots import ZeroSet, find_zeros

EMBED_CUTOFF = 1e-7


def hopf_map(z1, z2) -> np.ndarray:
    """Unit vectors ``r`` for complex arrays ``z1, z2`` (shape ``(3, ...)``)."""
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    a, b = np.abs(z1) ** 2, np.abs(z2) ** 2
    norm = a + b
    if np.any(norm < 1e-12):
        raise OriginHitError("curve passes through the origin")
    w = z1 * z2
    return np.stack([2 * w.real, 2 * w.imag, a - b]) / norm


@dataclass(frozen=True)
class SphereCurve:
    """Closed curve on the unit sphere sampled on the pi grid (period pi)."""

    n: int
    r: np.ndarray    # (3, n)
    dr: np.ndarray
    ddr: np.ndarray
    closure_residual: float = 0.0

    @classmethod
    def from_samples(cls, r, closure_residual: float = 0.0) -> "SphereCurve":
        r = np.asarray(r, dtype=float)
        return cls(r.shape[1], r, spectral_derivative(r, np.pi, 1),
                   spectral_derivative(r, np.pi, 2), closure_residual)

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.n) * (np.pi / self.n)

    def norm_residual(self) -> float:
        return float(np.abs(np.linalg.norm(self.r, axis=0) - 1).max())

    def speed(self) -> np.ndarray:
        return np.linalg.norm(self.dr, axis=0)


def equator(n: int = 512) -> SphereCurve:
    a = np.arange(n) * (np.pi / n)
    return SphereCurve.from_samples(np.stack([np.cos(2 * a), np.sin(2 * a), np.zeros(n)]))


def small_circle(latitude: float, n: int = 512) -> SphereCurve:
    a = np.arange(n) * (np.pi / n)
    c = np.cos(latitude)
    return SphereCurve.from_samples(
        np.stack([c * np.cos(2 * a), c * np.sin(2 * a), np.full(n, np.sin(latitude))]))


def characteristic_projection(curve: LegendrianCurve) -> SphereCurve:
    """Project the lifted Legendrian curve to S^2 along characteristic circles.

    Raises
    ------
    OriginHitError
        Defensive; cannot happen for star-shaped projections.
    """
    if not curve.legendrian:
        raise ValueError("characteristic projection expects a Legendrian curve")
    z1 = curve.c[0] + 1j * curve.c[1]
    z2 = curve.c[2] + 1j * curve.c[3]
    r = hopf_map(z1, z2)
    n = curve.n
    closure = float(np.abs(r[:, n:] - r[:, :n]).max())
    return SphereCurve.from_samples(r[:, :n], closure)


def inflection_numerator(curve: SphereCurve) -> SampledPeriodic:
    """``det(r, r', r'')``, the numerator of the geodesic curvature.

    Raises
    ------
    NotImmersedError
        If ``min |r'| < 1e-8``.
    """
    if curve.speed().min() < 1e-8:
        raise NotImmersedError(f"min |r'| = {curve.speed().min():.3g}")
    num = np.einsum("ij,ij->j", curve.r, np.cross(curve.dr, curve.ddr, axis=0))
    return SampledPeriodic(num)


def inflection_points(curve: SphereCurve, tol: float = 1e-9) -> ZeroSet:
    """Zeros of the geodesic curvature; raises if the curve is a great circle."""
    num = inflection_numerator(curve)
    if num.scale < tol:
        raise IdenticallyZeroError("great circle: every point is an inflection")
    return find_zeros(num)


def _segment_distances(p0, p1, q0, q1):
    """Minimum distances between segments ``[p0, p1]`` and ``[q0, q1]`` (rows)."""
    d1, d2, r = p1 - p0, q1 - q0, p0 - q0
    a = (d1 * d1).sum(-1)
    e = (d2 * d2).sum(-1)
    b = (d1 * d2).sum(-1)
    c = (d1 * r).sum(-1)
    f = (d2 * r).sum(-1)
    den = a * e - b * b
    safe = np.where(den > 1e-300, den, 1.0)
    s = np.where(den > 1e-300, np.clip((b * f - c * e) / safe, 0, 1), 0.0)
    t = (b * s + f) / e
    # clamp t and recompute s where needed
    t_cl = np.clip(t, 0, 1)
    s = np.where(t != t_cl, np.clip((b * t_cl - c) / a, 0, 1), s)
    t = t_cl
    diff = p0 + s[..., None] * d1 - q0 - t[..., None] * d2
    return np.sqrt((diff * diff).sum(-1))


def embedding_gap(curve: SphereCurve) -> float:
    """Smallest distance between non-adjacent chords of the closed polygon.

    Only chord pairs whose start points lie within two chord lengths plus the
    cutoff of each other can come closer than the cutoff, so those are the
    only pairs measured exactly; the rest report their endpoint distance.
    """
    pts = curve.r.T
    nxt = np.roll(pts, -1, axis=0)
    n = len(pts)
    chord = float(np.linalg.norm(nxt - pts, axis=1).max())
    dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
    i, j = np.triu_indices(n, 2)
    keep = (j - i) < n - 1                  # chord n-1 is adjacent to chord 0
    i, j = i[keep], j[keep]
    coarse = dist[i, j]
    near = coarse < 2 * chord + EMBED_CUTOFF
    best = float(coarse[~near].min(initial=np.inf)) - 2 * chord
    if near.any():
        d = _segment_distances(pts[i[near]], nxt[i[near]], pts[j[near]], nxt[j[near]])
        best = min(best, float(d.min()))
    return max(best, 0.0)


def enclosed_area(curve: SphereCurve, check_embedding: bool = True) -> float:
    """Area on the left of the curve (north-pole side for eastward curves).

    Gauss-Bonnet: ``2 pi - int kappa_g ds``, with
    ``kappa_g ds = det(r, r', r'') / |r'|^2 d alpha``.  The result is reduced
    modulo 4 pi to the representative nearest 2 pi.

    Raises
    ------
    SelfIntersectingError
        If two non-adjacent chords come within ``1e-7``.
    """
    if check_embedding:
        gap = embedding_gap(curve)
        if gap < EMBED_CUTOFF:
            raise SelfIntersectingError(f"chords {gap:.3g} apart")
    num = inflection_numerator(curve).values
    turning = float((num / curve.speed() ** 2).sum() * (np.pi / curve.n))
    area = 2 * np.pi - turning
    # representatives differ by 4 pi; the one in [0, 4 pi) is nearest 2 pi
    return float(area % (4 * np.pi))


@dataclass(frozen=True)
class MeridianCheck:
    margin: float   # min |azimuthal part of r'| / |r'|
    winding: int    # turns of the longitude over one period

    @property
    def transverse(self) -> bool:
        return self.margin > 0


def meridian_margin(curve: SphereCurve) -> MeridianCheck:
    """Transversality to meridians and the longitude winding number.

    Raises
    ------
    PoleHitError
        If ``max |r_z| > 1 - 1e-9``.
    """
    r, dr = curve.r, curve.dr
    if np.abs(r[2]).max() > 1 - 1e-9:
        raise PoleHitError(f"max |r_z| = {np.abs(r[2]).max():.12f}")
    lon = np.arctan2(r[1], r[0])
    east = np.stack([-np.sin(lon), np.cos(lon), np.zeros_like(lon)])
    azimuthal = (dr * east).sum(axis=0)
    margin = float((np.abs(azimuthal) / curve.speed()).min())
    steps = np.diff(np.concatenate([lon, lon[:1]]))
    steps = (steps + np.pi) % (2 * np.pi) - np.pi
    winding = int(np.round(steps.sum() / (2 * np.pi)))
    return MeridianCheck(margin, winding)
