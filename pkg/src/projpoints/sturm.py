"""Hill equations ``phi'' = -k(alpha) phi`` with pi-periodic potential.

Integration is classical RK4 at a fixed step.  Because the equation is linear,
one RK4 step is a 2x2 matrix depending only on ``k`` at the step's start, middle
and end; all step matrices are built at once and chained by a parallel prefix
product, which gives the fundamental matrix at every grid point.  The step is
halved until the monodromy settles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateEqualError, NoConvergenceError, NotDisconjugateError
from .periodic import SampledPeriodic, resample, spectral_derivative
from .roots import ZeroSet, find_zeros

CONVERGENCE_TOL = 1e-9
MAX_HALVINGS = 4
DISCONJUGACY_TOL = 1e-6
N_STARTS = 32


@dataclass(frozen=True)
class SLProblem:
    """``phi'' = -k phi`` with ``k`` sampled on the pi grid."""

    k: SampledPeriodic

    def __post_init__(self):
        if not np.all(np.isfinite(self.k.values)):
            raise ValueError("potential must be finite")
        if not np.isclose(self.k.period, np.pi):
            raise ValueError("potential must be pi-periodic")

    @classmethod
    def constant(cls, value: float, n: int = 512) -> "SLProblem":
        return cls(SampledPeriodic(np.full(n, float(value))))

    @property
    def n(self) -> int:
        return self.k.n

    def potential_at(self, alpha):
        return self.k(np.mod(alpha, np.pi))


@dataclass(frozen=True)
class Monodromy:
    """Map ``(phi, phi')(0) -> (phi, phi')(pi)``."""

    m: np.ndarray
    steps: int
    changes: tuple = ()

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.m))

    def distance_to(self, target) -> float:
        """Infinity norm (max row sum) of ``m - target``."""
        return float(np.abs(self.m - np.asarray(target)).sum(axis=1).max())


def _step_matrices(k_fine: np.ndarray, h: float) -> np.ndarray:
    """RK4 propagators for ``y' = [[0, 1], [-k, 0]] y``.

    ``k_fine`` holds k at spacing h/2 around the period (length 2N).
    """
    k0 = k_fine[0::2]
    km = k_fine[1::2]
    k1 = np.roll(k0, -1)
    return _rk4_matrices(k0, km, k1, h)


def _rk4_matrices(k0, km, k1, h):
    n = np.size(k0)
    eye = np.broadcast_to(np.eye(2), (n, 2, 2))

    def a(k):
        out = np.zeros((n, 2, 2))
        out[:, 0, 1] = 1.0
        out[:, 1, 0] = -np.asarray(k)
        return out

    a0, am, a1 = a(k0), a(km), a(k1)
    s1 = a0
    s2 = am @ (eye + 0.5 * h * s1)
    s3 = am @ (eye + 0.5 * h * s2)
    s4 = a1 @ (eye + h * s3)
    return eye + (h / 6.0) * (s1 + 2 * s2 + 2 * s3 + s4)


def _prefix_products(steps: np.ndarray) -> np.ndarray:
    """``out[j] = steps[j-1] @ ... @ steps[0]``, ``out[0] = I``."""
    acc = steps.copy()
    offset = 1
    while offset < len(acc):
        acc[offset:] = acc[offset:] @ acc[:-offset]
        offset *= 2
    return np.concatenate([np.eye(2)[None], acc])


def _fundamental_over_period(p: SLProblem, steps: int) -> np.ndarray:
    h = np.pi / steps
    k_fine = resample(p.k.values, 2 * steps)
    return _prefix_products(_step_matrices(k_fine, h))


def _converge(p: SLProblem):
    steps = p.n
    with np.errstate(over="ignore", invalid="ignore"):
        phi = _fundamental_over_period(p, steps)
    changes = []
    for _ in range(MAX_HALVINGS):
        with np.errstate(over="ignore", invalid="ignore"):
            finer = _fundamental_over_period(p, 2 * steps)
            change = float(np.abs(finer[-1] - phi[-1]).max())
        if not np.isfinite(change):
            change = np.inf
        changes.append(change)
        steps *= 2
        phi = finer
        if change < CONVERGENCE_TOL:
            return phi, steps, tuple(changes)
    raise NoConvergenceError(
        f"monodromy still moving by {changes[-1]:.3g} after {MAX_HALVINGS} halvings")


def integrate_fundamental(p: SLProblem) -> Monodromy:
    """Monodromy over one period by RK4 at step ``pi/n`` with step halving.

    Raises
    ------
    NoConvergenceError
        If four halvings leave successive monodromies more than 1e-9 apart.
    """
    phi, steps, changes = _converge(p)
    return Monodromy(phi[-1].copy(), steps, changes)


class FundamentalSystem:
    """Fundamental matrix of an :class:`SLProblem`, reusable across start points."""

    def __init__(self, p: SLProblem):
        self.problem = p
        fine, self.steps, changes = _converge(p)
        self._fine = fine
        self.monodromy = Monodromy(fine[-1].copy(), self.steps, changes)
        stride = self.steps // p.n
        half = fine[:-1:stride]                      # [0, pi) on the shared grid
        self.grid_matrices = np.concatenate([half, half @ self.monodromy.m])  # [0, 2 pi)
        self._dk = spectral_derivative(p.k.values, np.pi, 1)

    @property
    def n(self) -> int:
        return self.problem.n

    @property
    def grid(self) -> np.ndarray:
        return np.arange(2 * self.n) * (np.pi / self.n)

    def matrix_at(self, alpha: float) -> np.ndarray:
        """Fundamental matrix at an arbitrary angle."""
        turns = int(np.floor(alpha / np.pi))
        r = alpha - turns * np.pi
        h = np.pi / self.steps
        j = int(np.floor(r / h))
        delta = r - j * h
        if delta < 1e-13 * h:
            base = self._fine[j]
        elif h - delta < 1e-13 * h:
            base = self._fine[j + 1]
        else:
            t = j * h
            ks = self.problem.potential_at(np.array([t, t + delta / 2, t + delta]))
            step = _rk4_matrices(ks[:1], ks[1:2], ks[2:], delta)[0]
            base = step @ self._fine[j]
        return base @ np.linalg.matrix_power(self.monodromy.m, turns)

    def solution(self, alpha0: float) -> "SLSolution":
        y0 = np.linalg.solve(self.matrix_at(alpha0), np.array([0.0, 1.0]))
        state = self.grid_matrices @ y0
        phi, dphi = state[:, 0], state[:, 1]
        k2 = np.tile(self.problem.k.values, 2)
        dk2 = np.tile(self._dk, 2)
        return SLSolution(float(alpha0), self.n, phi, dphi, -k2 * phi, -(dk2 * phi + k2 * dphi))


@dataclass(frozen=True)
class SLSolution:
    """Solution samples over ``[0, 2 pi)`` on the shared 2n-point grid."""

    alpha0: float
    n: int
    phi: np.ndarray
    dphi: np.ndarray
    ddphi: np.ndarray
    dddphi: np.ndarray

    @property
    def grid(self) -> np.ndarray:
        return np.arange(2 * self.n) * (np.pi / self.n)

    def antiperiodicity_residual(self) -> float:
        return float(np.abs(self.phi[self.n:] + self.phi[: self.n]).max())

    def sl_residual(self, k: SampledPeriodic) -> float:
        """``sup |phi'' + k phi|`` with ``phi''`` differentiated spectrally.

        Only meaningful when ``phi`` is 2 pi periodic (disconjugate case).
        """
        d2 = spectral_derivative(self.phi, 2 * np.pi, 2)
        return float(np.abs(d2 + np.tile(k.values, 2) * self.phi).max())

    def zeros_in_half_period(self, start: float | None = None) -> int:
        """Number of zeros on ``[start, start + pi)``, ``start`` defaulting to ``alpha0``.

        Assumes the solution vanishes at ``start`` with positive slope (true
        for ``start = alpha0``) and counts sign changes of the samples strictly
        inside the interval.
        """
        a0 = self.alpha0 if start is None else start
        if not 0 <= a0 < np.pi:
            raise ValueError("start must lie in [0, pi)")
        h = np.pi / self.n
        g = self.grid
        inside = (g > a0 + 1e-9 * h) & (g < a0 + np.pi - 1e-9 * h)
        signs = np.sign(self.phi[inside])
        signs = np.concatenate([[1.0], signs[signs != 0]])
        return 1 + int(np.count_nonzero(signs[1:] != signs[:-1]))


def solution_vanishing_at(p: SLProblem, alpha0: float, system: FundamentalSystem | None = None) -> SLSolution:
    """Solution with ``phi(alpha0) = 0``, ``phi'(alpha0) = 1``, sampled over ``[0, 2 pi)``.

    Built from the fundamental matrix, so it is the same function RK4 produces
    when started at ``alpha0``.  ``phi'''`` comes from ``-(k' phi + k phi')``.
    """
    if system is None:
        system = FundamentalSystem(p)
    return system.solution(alpha0)


@dataclass(frozen=True)
class DisconjugacyReport:
    disconjugate: bool
    monodromy_error: float
    zero_counts: tuple
    starts: tuple
    monodromy: Monodromy = field(repr=False)

    @property
    def single_zero(self) -> bool:
        return all(c == 1 for c in self.zero_counts)

    def __bool__(self):
        return self.disconjugate


def check_disconjugate(p: SLProblem, n_starts: int = N_STARTS,
                       system: FundamentalSystem | None = None) -> DisconjugacyReport:
    """Monodromy ``-I`` and exactly one zero per half period, from ``n_starts`` starts."""
    if system is None:
        system = FundamentalSystem(p)
    err = system.monodromy.distance_to(-np.eye(2))
    starts = tuple(float(x) for x in np.arange(n_starts) * (np.pi / n_starts))
    counts = tuple(system.solution(a).zeros_in_half_period() for a in starts)
    ok = err <= DISCONJUGACY_TOL and all(c == 1 for c in counts)
    return DisconjugacyReport(ok, err, counts, starts, system.monodromy)


@dataclass(frozen=True)
class Comparison:
    """Zeros of ``k1 - k2`` and the orthogonality integrals behind them."""

    zeros: ZeroSet
    orthogonality: float          # worst |integral| over the base points
    integrals: tuple
    scales: tuple                 # pi * sup |integrand| per base point
    base_points: tuple

    def __iter__(self):
        return iter((self.zeros, self.orthogonality))

    @property
    def relative_orthogonality(self) -> float:
        return max(abs(i) / s for i, s in zip(self.integrals, self.scales))


def comparison_zero_count(p1: SLProblem, p2: SLProblem, base_points=(0.0,),
                          systems=None) -> Comparison:
    """Zeros of ``k1 - k2`` on ``[0, pi)`` and ``int (k1 - k2) phi1 phi2``.

    For each base point both solutions vanish there; the integral over a period
    uses the periodic trapezoid rule.

    Raises
    ------
    NotDisconjugateError
        With ``which`` set to ``"first"`` or ``"second"``.
    DegenerateEqualError
        If the potentials agree to ``1e-10`` relative.
    """
    if p1.n != p2.n:
        raise ValueError("potentials must share a grid")
    diff = p1.k - p2.k
    scale = max(1.0, p1.k.scale, p2.k.scale)
    if diff.scale < 1e-10 * scale:
        raise DegenerateEqualError(f"sup|k1 - k2| = {diff.scale:.3g}")
    if systems is None:
        systems = (FundamentalSystem(p1), FundamentalSystem(p2))
    for name, prob, sys_ in zip(("first", "second"), (p1, p2), systems):
        rep = check_disconjugate(prob, system=sys_)
        if not rep:
            raise NotDisconjugateError(
                name, f"|m + I| = {rep.monodromy_error:.3g}, zero counts {set(rep.zero_counts)}")
    n = p1.n
    h = np.pi / n
    integrals, scales = [], []
    for a0 in base_points:
        phi1 = systems[0].solution(a0).phi[:n]
        phi2 = systems[1].solution(a0).phi[:n]
        g = diff.values * phi1 * phi2
        integrals.append(float(g.sum() * h))
        scales.append(float(np.pi * np.abs(g).max()))
    zeros = find_zeros(diff)
    worst = max(abs(i) for i in integrals)
    return Comparison(zeros, worst, tuple(integrals), tuple(scales), tuple(float(b) for b in base_points))
