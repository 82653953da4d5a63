"""Legendrian curves in RP^3 computed on their lift to R^4 = R^2_1 x R^2_2.

Coordinates are ``(x1, y1, x2, y2)`` and the symplectic form is
``omega = (x1 y1' - y1 x1') - (x2 y2' - y2 x2')``.  The graph of the area
preserving lift ``F`` of a circle diffeomorphism, projectivized, is Legendrian;
its lift is ``(cos a, sin a, gamma(a))`` with ``gamma`` the central curve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .central_curve import bracket, fold_half_periods
from .diffeo import SampledLift, lift_from_samples
from .errors import (EpsilonTooLargeError, IdenticallyZeroError, LegendrianViolationError,
                     NegativeDeterminantError, NotStarShapedError, WrongFirstProjectionError)
from .periodic import SampledPeriodic, spectral_derivative
from .roots import ZeroSet, detect_tangential_zeros

TWO_PI = 2 * np.pi
LEGENDRIAN_TOL = 1e-8
STAR_MARGIN = 1e-6


def omega(u, v):
    """The split symplectic form on R^2 x R^2, vectorised over trailing axes."""
    return bracket(u[:2], v[:2]) - bracket(u[2:], v[2:])


def omega_wedge_omega(a, b, c, d):
    """``omega ^ omega`` normalised as ``w(a,b)w(c,d) - w(a,c)w(b,d) + w(a,d)w(b,c)``."""
    return omega(a, b) * omega(c, d) - omega(a, c) * omega(b, d) + omega(a, d) * omega(b, c)


def _basis_ratio() -> float:
    e = np.eye(4)
    return float(np.linalg.det(e) / omega_wedge_omega(e[0], e[1], e[2], e[3]))


# det4 / (omega ^ omega) in the normalisation above; both are top-degree forms,
# so the ratio is the same for every quadruple of vectors.
NU = _basis_ratio()


@dataclass(frozen=True)
class LegendrianCurve:
    """Samples over ``[0, 2 pi)`` (2n points); rows are ``(c1, c2, c3, c4)``."""

    n: int
    c: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray
    legendrian: bool = True

    @classmethod
    def from_samples(cls, c, legendrian: bool = True) -> "LegendrianCurve":
        c = np.asarray(c, dtype=float)
        d = [spectral_derivative(c, TWO_PI, k) for k in (1, 2, 3)]
        return cls(c.shape[1] // 2, c, *d, legendrian=legendrian)

    @property
    def grid(self) -> np.ndarray:
        return np.arange(2 * self.n) * (np.pi / self.n)

    def legendrian_form(self) -> np.ndarray:
        """``omega(C, C')`` per sample (zero for Legendrian curves)."""
        return omega(self.c, self.d1)

    def legendrian_residual(self) -> float:
        return float(np.abs(self.legendrian_form()).max())

    def acceleration_residual(self) -> float:
        """``sup |omega(C, C'')|``: acceleration inside the contact plane."""
        return float(np.abs(omega(self.c, self.d2)).max())

    def scale(self) -> float:
        return float((self.c**2).sum(axis=0).max())

    def projection_speeds(self):
        """Polar-angle derivatives of the two plane projections."""
        out = []
        for rows in (slice(0, 2), slice(2, 4)):
            p, dp = self.c[rows], self.d1[rows]
            out.append(bracket(p, dp) / (p**2).sum(axis=0))
        return tuple(out)

    def wronskian(self) -> np.ndarray:
        """``phi1 phi2' - phi2 phi1'`` of the second projection."""
        return bracket(self.c[2:], self.d1[2:])


def _gamma_derivatives(lift: SampledLift):
    """``gamma`` and three derivatives by the chain rule, as complex arrays.

    With ``gamma = rho e^{if}`` and ``rho = f'^(-1/2)`` every derivative is
    ``(...) e^{if}``.  Spectral differentiation of ``gamma`` itself loses about
    ``m^3 x 1e-16`` to coefficient roundoff at its top harmonic ``m``; here only
    the lift is differentiated once more, and its spectrum is short.
    """
    d1, d2, d3 = (np.tile(v, 2) for v in (lift.fdot, lift.fddot, lift.fdddot))
    d4 = np.tile(spectral_derivative(lift.fdddot, np.pi, 1), 2)
    _, f, _ = lift.doubled()
    r0 = d1 ** -0.5
    r1 = -0.5 * d1 ** -1.5 * d2
    r2 = 0.75 * d1 ** -2.5 * d2**2 - 0.5 * d1 ** -1.5 * d3
    r3 = -1.875 * d1 ** -3.5 * d2**3 + 2.25 * d1 ** -2.5 * d2 * d3 - 0.5 * d1 ** -1.5 * d4
    a0 = r1 + 1j * r0 * d1
    a1 = r2 + 1j * (r1 * d1 + r0 * d2)
    a2 = r3 + 1j * (r2 * d1 + 2 * r1 * d2 + r0 * d3)
    b0 = a1 + 1j * d1 * a0
    b1 = a2 + 1j * d2 * a0 + 1j * d1 * a1
    c0 = b1 + 1j * d1 * b0
    e = np.exp(1j * f)
    return r0 * e, a0 * e, b0 * e, c0 * e


def legendrian_from_diffeo(lift: SampledLift) -> LegendrianCurve:
    """``(cos a, sin a, f'^(-1/2) cos f, f'^(-1/2) sin f)``.

    Derivatives of the second projection follow from those of the lift by the
    chain rule rather than by differentiating the samples.

    Raises
    ------
    LegendrianViolationError
        If ``omega(C, C')`` is not zero to ``1e-8 x scale``; that is a numerics
        failure (under-resolved lift), not a user error.
    """
    alpha = np.arange(2 * lift.n) * (np.pi / lift.n)
    cos, sin = np.cos(alpha), np.sin(alpha)
    circle = ((cos, sin), (-sin, cos), (-cos, -sin), (sin, -cos))
    rows = [np.vstack([u, v, g.real, g.imag])
            for (u, v), g in zip(circle, _gamma_derivatives(lift))]
    curve = LegendrianCurve(lift.n, *rows, legendrian=True)
    res = curve.legendrian_residual()
    if res > LEGENDRIAN_TOL * curve.scale():
        raise LegendrianViolationError(f"sup|omega(C, C')| = {res:.3g}")
    return curve


def _star_check(curve: LegendrianCurve):
    for name, speed in zip(("first", "second"), curve.projection_speeds()):
        if not np.all(np.isfinite(speed)) or speed.min() < STAR_MARGIN:
            raise NotStarShapedError(name, f"min polar speed {np.nanmin(speed):.3g}")


def twisted_example_curve(eps: float, n: int = 512) -> LegendrianCurve:
    """Non-Legendrian curve ``(cos a, sin a, cos a + e cos 3a, sin a + e sin 3a)``.

    Its flattening determinant is the constant ``192 e^2``.

    Raises
    ------
    EpsilonTooLargeError
        If a projection stops being star-shaped or ``eps`` leaves ``[0, 0.1]``.
    """
    if not 0 <= eps <= 0.1:
        raise EpsilonTooLargeError(f"eps = {eps} outside [0, 0.1]")
    alpha = np.arange(2 * n) * (np.pi / n)
    c = np.vstack([np.cos(alpha), np.sin(alpha),
                   np.cos(alpha) + eps * np.cos(3 * alpha),
                   np.sin(alpha) + eps * np.sin(3 * alpha)])
    curve = LegendrianCurve.from_samples(c, legendrian=eps == 0)
    try:
        _star_check(curve)
    except NotStarShapedError as exc:
        raise EpsilonTooLargeError(str(exc)) from exc
    return curve


@dataclass(frozen=True)
class FlatteningDeterminants:
    det2: SampledPeriodic        # 2x2 determinant in the second projection, pi grid
    det4: SampledPeriodic        # det(C, C', C'', C''') on the pi grid
    identity_residual: float     # sup |det4 + NU omega(C', C'')^2|
    accel_form: np.ndarray       # omega(C', C'') over the full grid
    curve_scale: float           # sup |C|^2

    @property
    def identity_scale(self) -> float:
        """``max(sup omega(C', C'')^2, sup |C|^4)``; the first vanishes on projective curves."""
        return float(max((self.accel_form**2).max(), self.curve_scale**2))

    @property
    def relative_identity_residual(self) -> float:
        return self.identity_residual / self.identity_scale


def _first_projection_error(curve: LegendrianCurve) -> float:
    a = curve.grid
    return float(max(np.abs(curve.c[0] - np.cos(a)).max(), np.abs(curve.c[1] - np.sin(a)).max()))


def flattening_determinant(curve: LegendrianCurve) -> FlatteningDeterminants:
    """Flattening determinants of a lifted curve.

    ``det2`` is ``| phi1 + phi1''   phi2 + phi2''  |
                  | phi1' + phi1''' phi2' + phi2'''|`` for ``(phi1, phi2) = (c3, c4)``,
    which presumes the first projection is ``(cos a, sin a)``.

    Raises
    ------
    WrongFirstProjectionError
        If ``(c1, c2)`` differs from the unit circle by more than 1e-10.
    """
    if _first_projection_error(curve) > 1e-10:
        raise WrongFirstProjectionError(f"first projection off by {_first_projection_error(curve):.3g}")
    p, d1, d2, d3 = curve.c[2:], curve.d1[2:], curve.d2[2:], curve.d3[2:]
    top = p + d2
    bottom = d1 + d3
    det2_full = top[0] * bottom[1] - top[1] * bottom[0]
    frames = np.stack([curve.c, curve.d1, curve.d2, curve.d3], axis=-1)  # (4, 2n, 4)
    det4_full = np.linalg.det(np.moveaxis(frames, 1, 0))
    w = omega(curve.d1, curve.d2)
    resid = float(np.abs(det4_full + NU * w**2).max())
    return FlatteningDeterminants(SampledPeriodic(fold_half_periods(det2_full)),
                                  SampledPeriodic(fold_half_periods(det4_full)), resid, w,
                                  curve.scale())


def flattening_points(det2: SampledPeriodic, tol: float = 1e-9, legendrian: bool = True) -> ZeroSet:
    """Flattening points as touching zeros of the (nonnegative) determinant.

    Raises
    ------
    IdenticallyZeroError
        If ``sup |det2| < tol`` (projective case, every point flattens).
    NegativeDeterminantError
        If a Legendrian curve's determinant drops below ``-tol``.
    """
    if det2.scale < tol:
        raise IdenticallyZeroError(f"sup|det2| = {det2.scale:.3g} < {tol:.3g}")
    if legendrian and det2.values.min() < -tol:
        raise NegativeDeterminantError(f"min det2 = {det2.values.min():.3g}")
    floor = max(1e-8 * det2.scale, tol)
    return detect_tangential_zeros(det2, floor=floor)


def curve_to_diffeo(curve: LegendrianCurve) -> SampledLift:
    """Diffeomorphism ``second projection o first projection^-1`` as a sampled lift.

    The first projection's polar angle is used as parameter.  When it already
    equals the sampling angle (as for every curve built here) the lift is exact
    on the grid; otherwise the polar angles are matched by linear
    interpolation, which is only grid-accurate.

    Raises
    ------
    NotStarShapedError
        Naming the projection whose polar angle is not monotone.
    """
    _star_check(curve)
    n = curve.n
    theta1 = np.unwrap(np.arctan2(curve.c[1], curve.c[0]))
    theta2 = np.unwrap(np.arctan2(curve.c[3], curve.c[2]))
    theta1 -= 2 * np.pi * np.floor(theta1[0] / (2 * np.pi))
    alpha = curve.grid
    if np.abs(theta1 - alpha).max() <= 1e-10:
        f = theta2[:n]
    else:
        ext1 = np.concatenate([theta1 - 2 * np.pi, theta1, theta1 + 2 * np.pi])
        ext2 = np.concatenate([theta2 - 2 * np.pi, theta2, theta2 + 2 * np.pi])
        f = np.interp(alpha[:n], ext1, ext2)
    f = f - np.pi * np.floor(f[0] / np.pi)
    return lift_from_samples(f)
