"""The centrally symmetric curve swept by the area-preserving lift of ``f``.

``gamma(alpha) = f'(alpha)^(-1/2) (cos f(alpha), sin f(alpha))`` is the image of
the unit circle under the homogeneous symplectomorphism covering ``f``.  It
satisfies ``gamma'' = -k gamma`` with a pi-periodic potential ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffeo import SampledLift
from .errors import NotUnimodularError
from .periodic import SampledPeriodic, spectral_derivative

TWO_PI = 2 * np.pi


def bracket(u, v):
    """Oriented area ``[u, v] = u_x v_y - u_y v_x`` (row 0 = x, row 1 = y)."""
    return u[0] * v[1] - u[1] * v[0]


def fold_half_periods(values: np.ndarray) -> np.ndarray:
    """Average the two half-period copies of a pi-periodic function sampled over 2 pi."""
    n = values.size // 2
    return 0.5 * (values[:n] + values[n:])


@dataclass(frozen=True)
class PlaneCurve:
    """Curve sampled on ``alpha_j = j pi / n``, ``j < 2n``, with spectral derivatives."""

    n: int
    xy: np.ndarray     # shape (2, 2n)
    dxy: np.ndarray
    ddxy: np.ndarray

    @classmethod
    def from_samples(cls, xy) -> "PlaneCurve":
        xy = np.asarray(xy, dtype=float)
        return cls(xy.shape[1] // 2, xy,
                   spectral_derivative(xy, TWO_PI, 1), spectral_derivative(xy, TWO_PI, 2))

    @property
    def x(self):
        return self.xy[0]

    @property
    def y(self):
        return self.xy[1]

    @property
    def grid(self) -> np.ndarray:
        return np.arange(2 * self.n) * (np.pi / self.n)

    def antisymmetry_residual(self) -> float:
        n = self.n
        return float(np.abs(self.xy[:, n:] + self.xy[:, :n]).max())

    def wronskian(self) -> np.ndarray:
        return bracket(self.xy, self.dxy)

    def wronskian_residual(self) -> float:
        return float(np.abs(self.wronskian() - 1.0).max())

    def polar_speed(self) -> np.ndarray:
        """Derivative of the polar angle, ``[g, g'] / |g|^2``."""
        return self.wronskian() / (self.xy**2).sum(axis=0)

    def is_star_shaped(self, margin: float = 1e-6) -> bool:
        r = np.hypot(*self.xy)
        return bool(r.min() > 0 and self.polar_speed().min() >= margin)

    def area(self) -> float:
        """Enclosed area ``1/2 oint [g, g'] d alpha`` (periodic trapezoid rule)."""
        return float(0.5 * self.wronskian().sum() * (np.pi / self.n))


def curve_from_diffeo(lift: SampledLift) -> PlaneCurve:
    """``gamma = f'^(-1/2) (cos f, sin f)`` on the doubled grid over ``[0, 2 pi)``."""
    _, f, fdot = lift.doubled()
    rho = fdot ** -0.5
    return PlaneCurve.from_samples(np.stack([rho * np.cos(f), rho * np.sin(f)]))


@dataclass(frozen=True)
class CurveResiduals:
    sl_residual: float         # sup |gamma'' + k gamma|
    wronskian_residual: float  # sup |[gamma, gamma'] - 1|


def potential_from_curve(curve: PlaneCurve):
    """Potential ``k = [gamma', gamma'']`` folded onto the pi grid.

    Returns
    -------
    k : SampledPeriodic
    residuals : CurveResiduals

    Raises
    ------
    NotUnimodularError
        If ``sup |[gamma, gamma'] - 1| > 1e-6``.
    """
    wres = curve.wronskian_residual()
    if wres > 1e-6:
        raise NotUnimodularError(f"sup|[g, g'] - 1| = {wres:.3g}")
    k_full = bracket(curve.dxy, curve.ddxy)
    sl = float(np.abs(curve.ddxy + k_full * curve.xy).max())
    k = SampledPeriodic(fold_half_periods(k_full))
    return k, CurveResiduals(sl, wres)
