"""Exception hierarchy.

Every failure mode that a caller might want to branch on has its own class;
they all derive from :class:`ProjPointsError` so a batch driver can catch the
lot in one clause.
"""

from __future__ import annotations


class ProjPointsError(Exception):
    """Base class for all package errors."""


# roots
class AllZeroError(ProjPointsError, ValueError):
    """Sampled function vanishes identically (below the tolerance)."""


class NegativeInputError(ProjPointsError, ValueError):
    """A nonnegative function was expected but the samples go below -floor."""


# diffeo
class NotADiffeoError(ProjPointsError, ValueError):
    """The lift derivative drops below the orientation margin."""


class SingularError(ProjPointsError, ValueError):
    """Projective matrix with (numerically) vanishing determinant."""


class UnderResolvedError(ProjPointsError, ValueError):
    """Spectral tail too heavy for the chosen grid size."""


# schwarzian
class DegenerateError(ProjPointsError, ValueError):
    """Cross-ratio of coincident points."""


class IdenticallyZeroError(ProjPointsError, ValueError):
    """Function vanishes everywhere: every point is a zero (projective case)."""


# central curve
class NotUnimodularError(ProjPointsError, ValueError):
    """The curve does not satisfy [gamma, gamma'] = 1."""


# sturm
class NoConvergenceError(ProjPointsError, RuntimeError):
    """Step halving did not stabilise the monodromy."""


class NotDisconjugateError(ProjPointsError, ValueError):
    """One of the compared equations is not disconjugate."""

    def __init__(self, which: str, detail: str = ""):
        self.which = which
        msg = f"{which} equation is not disconjugate"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class DegenerateEqualError(ProjPointsError, ValueError):
    """The two potentials coincide."""


# legendrian
class LegendrianViolationError(ProjPointsError, RuntimeError):
    """A curve built to be Legendrian fails the contact condition."""


class WrongFirstProjectionError(ProjPointsError, ValueError):
    """The first plane projection is not the unit circle (cos a, sin a)."""


class NegativeDeterminantError(ProjPointsError, RuntimeError):
    """Flattening determinant of a Legendrian curve went negative."""


class EpsilonTooLargeError(ProjPointsError, ValueError):
    """Twisted example parameter breaks star-shapedness."""


class NotStarShapedError(ProjPointsError, ValueError):
    """A plane projection fails the polar-angle monotonicity test."""

    def __init__(self, which: str, detail: str = ""):
        self.which = which
        msg = f"{which} projection is not star-shaped"
        super().__init__(f"{msg}: {detail}" if detail else msg)


# sphere
class OriginHitError(ProjPointsError, ValueError):
    """The lifted curve passes through the origin of R^4."""


class NotImmersedError(ProjPointsError, ValueError):
    """Sphere curve velocity vanishes."""


class SelfIntersectingError(ProjPointsError, ValueError):
    """Sphere curve fails the embedding scan."""


class PoleHitError(ProjPointsError, ValueError):
    """Sphere curve reaches a pole, longitude undefined."""


# batch / cli
class ConfigInvalidError(ProjPointsError, ValueError):
    """Invalid batch configuration."""


class InputParseError(ProjPointsError, ValueError):
    """Malformed diffeomorphism description."""


class IOFailureError(ProjPointsError, OSError):
    """Input or output file could not be read or written."""
