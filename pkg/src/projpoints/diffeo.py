"""Orientation-preserving diffeomorphisms of RP^1 and their sampled lifts.

A diffeomorphism is handled through its lift ``f: R -> R`` with
``f(alpha + pi) = f(alpha) + pi``, where ``alpha`` is the angle of a line
through the origin.  Two families are supported:

* ``fourier``: ``f(alpha) = alpha + sum_k a_k sin(2 k alpha) + b_k cos(2 k alpha)``
* ``mobius``: the projective map ``x -> (a x + b) / (c x + d)`` of the chart
  ``x = tan(alpha)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InputParseError, NotADiffeoError, SingularError, UnderResolvedError
from .periodic import SampledPeriodic, spectral_derivative

ORIENTATION_MARGIN = 1e-6
VALIDATION_GRID = 4096
TAIL_RATIO = 1e-10


@dataclass(frozen=True)
class Harmonic:
    k: int
    a: float = 0.0
    b: float = 0.0


def _wrap(x):
    """Reduce to (-pi, pi]."""
    return np.pi - np.mod(np.pi - x, 2 * np.pi)


@dataclass(frozen=True)
class DiffeoSpec:
    """Symbolic lift of a diffeomorphism; build through the ``build_*`` helpers."""

    variant: str
    harmonics: tuple = ()
    matrix: tuple | None = None
    # mobius internals: rotation angle and upper-triangular factor of the
    # matrix acting on line vectors (cos, sin)
    _theta: float = field(default=0.0, repr=False, compare=False)
    _upper: tuple = field(default=(1.0, 0.0, 1.0), repr=False, compare=False)
    _offset: float = field(default=0.0, repr=False, compare=False)

    # evaluation -------------------------------------------------------------
    def __call__(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        if self.variant == "fourier":
            return alpha + self.periodic_part(alpha)
        r11, r12, r22 = self._upper
        s, c = np.sin(alpha), np.cos(alpha)
        # the upper-triangular factor keeps each vector in its own half plane,
        # so its angular displacement stays inside (-pi, pi)
        moved = alpha + _wrap(np.arctan2(r22 * s, r11 * c + r12 * s) - alpha)
        return moved + self._theta + self._offset

    def periodic_part(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        if self.variant == "mobius":
            return self(alpha) - alpha
        p = np.zeros_like(alpha)
        for h in self.harmonics:
            p = p + h.a * np.sin(2 * h.k * alpha) + h.b * np.cos(2 * h.k * alpha)
        return p

    def increment(self, alpha, beta):
        """``f(beta) - f(alpha)`` without cancellation for nearby arguments."""
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        d = beta - alpha
        if self.variant == "fourier":
            s = alpha + beta
            out = d.copy() if d.ndim else d + 0.0
            for h in self.harmonics:
                out = out + 2 * np.sin(h.k * d) * (h.a * np.cos(h.k * s) - h.b * np.sin(h.k * s))
            return out
        m = self._line_matrix()
        ua = m @ np.stack([np.cos(alpha), np.sin(alpha)])
        ub = m @ np.stack([np.cos(beta), np.sin(beta)])
        cross = np.linalg.det(m) * np.sin(d)
        dot = (ua * ub).sum(axis=0)
        principal = np.arctan2(cross, dot)
        coarse = self(beta) - self(alpha)
        return principal + 2 * np.pi * np.round((coarse - principal) / (2 * np.pi))

    def _line_matrix(self) -> np.ndarray:
        (a, b), (c, d) = self.matrix
        # x = tan(alpha) = v2 / v1, so x -> (a x + b)/(c x + d) sends
        # (v1, v2) to (c v2 + d v1, a v2 + b v1)
        return np.array([[d, c], [b, a]], dtype=float)

    def mobius_derivatives(self, alpha):
        """Closed-form ``(fdot, fddot, fdddot)`` of a projective lift."""
        m = self._line_matrix()
        det = np.linalg.det(m)
        g = m.T @ m
        alpha = np.asarray(alpha, dtype=float)
        c2, s2 = np.cos(2 * alpha), np.sin(2 * alpha)
        q = 0.5 * (g[0, 0] + g[1, 1]) + 0.5 * (g[0, 0] - g[1, 1]) * c2 + g[0, 1] * s2
        q1 = -(g[0, 0] - g[1, 1]) * s2 + 2 * g[0, 1] * c2
        q2 = -2 * (g[0, 0] - g[1, 1]) * c2 - 4 * g[0, 1] * s2
        fdot = det / q
        fddot = -det * q1 / q**2
        fdddot = det * (2 * q1**2 / q**3 - q2 / q**2)
        return fdot, fddot, fdddot

    # serialisation ---------------------------------------------------------
    def to_dict(self) -> dict:
        if self.variant == "fourier":
            return {"type": "fourier",
                    "harmonics": [{"k": h.k, "a": h.a, "b": h.b} for h in self.harmonics]}
        return {"type": "mobius", "matrix": [list(r) for r in self.matrix]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def build_fourier_lift(harmonics=()) -> DiffeoSpec:
    """Validated Fourier lift.  ``harmonics`` holds ``Harmonic`` or ``(k, a, b)``.

    Raises
    ------
    NotADiffeoError
        If ``1 + p'`` drops to ``ORIENTATION_MARGIN`` or below on a fine grid.
    """
    hs = []
    for h in harmonics:
        if not isinstance(h, Harmonic):
            k, a, b = h
            h = Harmonic(int(k), float(a), float(b))
        if h.k < 1:
            raise NotADiffeoError(f"harmonic index must be >= 1, got {h.k}")
        if not (np.isfinite(h.a) and np.isfinite(h.b)):
            raise NotADiffeoError("non-finite coefficient")
        hs.append(h)
    spec = DiffeoSpec("fourier", tuple(hs))
    alpha = np.arange(VALIDATION_GRID) * (np.pi / VALIDATION_GRID)
    fdot = np.ones_like(alpha)
    for h in hs:
        fdot += 2 * h.k * (h.a * np.cos(2 * h.k * alpha) - h.b * np.sin(2 * h.k * alpha))
    if fdot.min() <= ORIENTATION_MARGIN:
        raise NotADiffeoError(f"min f' = {fdot.min():.4g} <= {ORIENTATION_MARGIN}")
    return spec


def identity() -> DiffeoSpec:
    return build_fourier_lift(())


def build_mobius_lift(matrix) -> DiffeoSpec:
    """Lift of ``x -> (a x + b)/(c x + d)`` with ``f(0)`` in ``[0, pi)``.

    Raises
    ------
    SingularError
        If ``|ad - bc| < 1e-12``.
    NotADiffeoError
        If the determinant is negative (orientation reversing).
    """
    m = np.array(matrix, dtype=float)
    if m.shape != (2, 2) or not np.all(np.isfinite(m)):
        raise InputParseError("mobius matrix must be a finite 2x2 array")
    det = float(np.linalg.det(m))
    if abs(det) < 1e-12:
        raise SingularError(f"det = {det:.3g}")
    if det < 0:
        raise NotADiffeoError("orientation-reversing matrix (det < 0)")
    mat = tuple(tuple(float(x) for x in row) for row in m)
    spec = DiffeoSpec("mobius", matrix=mat)
    q, r = np.linalg.qr(spec._line_matrix())
    signs = np.sign(np.diag(r))
    q = q * signs
    r = signs[:, None] * r
    theta = float(np.arctan2(q[1, 0], q[0, 0]))
    offset = -np.pi * np.floor(theta / np.pi)
    if theta + offset >= np.pi:
        # theta a hair below a multiple of pi: stay on the branch through 0
        offset -= np.pi
    return DiffeoSpec("mobius", matrix=mat, _theta=theta,
                      _upper=(float(r[0, 0]), float(r[0, 1]), float(r[1, 1])),
                      _offset=float(offset))


def spec_from_dict(d: dict) -> DiffeoSpec:
    try:
        kind = d["type"]
        if kind == "fourier":
            return build_fourier_lift(
                [Harmonic(int(h["k"]), float(h.get("a", 0.0)), float(h.get("b", 0.0)))
                 for h in d.get("harmonics", [])])
        if kind == "mobius":
            return build_mobius_lift(d["matrix"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (NotADiffeoError, SingularError)):
            raise
        raise InputParseError(f"bad diffeo spec: {exc}") from exc
    raise InputParseError(f"unknown diffeo type {kind!r}")


def spec_from_json(text: str) -> DiffeoSpec:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise InputParseError("diffeo spec must be a JSON object")
    return spec_from_dict(d)


@dataclass(frozen=True)
class SampledLift:
    """Lift and its first three derivatives on ``alpha_j = j pi / n``."""

    n: int
    f: np.ndarray
    fdot: np.ndarray
    fddot: np.ndarray
    fdddot: np.ndarray

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.n) * (np.pi / self.n)

    def periodic_part(self) -> SampledPeriodic:
        return SampledPeriodic(self.f - self.grid)

    def doubled(self):
        """``(alpha, f, fdot)`` on the 2n-point grid over ``[0, 2 pi)``."""
        alpha = np.arange(2 * self.n) * (np.pi / self.n)
        f = np.concatenate([self.f, self.f + np.pi])
        fdot = np.concatenate([self.fdot, self.fdot])
        return alpha, f, fdot


def _check_n(n: int):
    if n < 64 or n & (n - 1):
        raise ValueError(f"grid size must be a power of two >= 64, got {n}")


def _tail_check(p: np.ndarray):
    n = p.size
    coef = np.abs(np.fft.rfft(p)) / n
    scale = max(1.0, float(np.abs(p).max()))
    tail = coef[n // 4 + 1:].max(initial=0.0)
    if tail > TAIL_RATIO * scale:
        raise UnderResolvedError(
            f"spectral tail {tail:.3g} above harmonic {n // 4} exceeds {TAIL_RATIO:g} x scale")


def lift_from_samples(f: np.ndarray, p: np.ndarray | None = None) -> SampledLift:
    """Spectrally differentiated lift from samples of ``f`` on the pi grid.

    ``p`` are samples of the periodic part ``f - alpha`` when they are known
    without the cancellation in that subtraction.
    """
    f = np.asarray(f, dtype=float)
    n = f.size
    _check_n(n)
    alpha = np.arange(n) * (np.pi / n)
    p = f - alpha if p is None else np.asarray(p, dtype=float)
    _tail_check(p)
    d1, d2, d3 = (spectral_derivative(p, np.pi, k) for k in (1, 2, 3))
    fdot = 1.0 + d1
    if fdot.min() <= 0:
        raise NotADiffeoError(f"sampled f' reaches {fdot.min():.3g}")
    return SampledLift(n, f, fdot, d2, d3)


def sample_with_derivatives(spec: DiffeoSpec, n: int = 512, method: str | None = None) -> SampledLift:
    """Sample ``f`` and its derivatives on the pi grid.

    ``method`` is ``"spectral"`` (DFT differentiation of the periodic part) or
    ``"exact"`` (closed form, projective lifts only).  Fourier lifts default to
    spectral, projective lifts to exact: their derivative ``det / |M v|^2`` is
    sharply peaked for ill-conditioned matrices and a 512-point grid cannot
    resolve it spectrally.
    """
    _check_n(n)
    if method is None:
        method = "exact" if spec.variant == "mobius" else "spectral"
    alpha = np.arange(n) * (np.pi / n)
    f = spec(alpha)
    if method == "spectral":
        return lift_from_samples(f, spec.periodic_part(alpha) if spec.variant == "fourier" else None)
    if method != "exact" or spec.variant != "mobius":
        raise ValueError(f"method {method!r} not available for {spec.variant} lifts")
    fdot, fddot, fdddot = spec.mobius_derivatives(alpha)
    return SampledLift(n, f, fdot, fddot, fdddot)
