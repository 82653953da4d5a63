"""Projective points of f(a) = a + 0.1 sin 2a and the Hill equation behind them.

Run: python3 demos/projective_points.py
"""

import numpy as np

from projpoints import build_fourier_lift, build_mobius_lift, sample_with_derivatives
from projpoints.central_curve import curve_from_diffeo, potential_from_curve
from projpoints.errors import IdenticallyZeroError
from projpoints.schwarzian import potential_from_schwarzian, projective_points, schwarzian_angular
from projpoints.sturm import SLProblem, check_disconjugate

N = 512


def main():
    spec = build_fourier_lift([(1, 0.1, 0.0)])
    lift = sample_with_derivatives(spec, N)
    S = schwarzian_angular(lift)
    print(f"S(0) = {float(S(0.0)):.6f}, sup|S| = {S.scale:.4f}")

    zeros = projective_points(S)
    print("projective points (zeros of S):")
    for z in zeros.zeros:
        print(f"  a = {z.location:.12f}  ({z.kind})")

    # the same potential comes out of the central curve gamma'' = -k gamma
    k = potential_from_schwarzian(S)
    k_curve, res = potential_from_curve(curve_from_diffeo(lift))
    print(f"sup|k_curve - (S/2 + 1)| = {np.abs(k_curve.values - k.values).max():.2e}")
    print(f"sup|gamma'' + k gamma|   = {res.sl_residual:.2e}")

    disc = check_disconjugate(SLProblem(k))
    print(f"monodromy distance to -I = {disc.monodromy_error:.2e}, "
          f"one zero per half period: {disc.single_zero}")

    # a projective map has no isolated projective points: S vanishes identically
    mob = sample_with_derivatives(build_mobius_lift([[1.2, -0.7], [0.3, 1.0]]), N)
    try:
        projective_points(schwarzian_angular(mob))
    except IdenticallyZeroError as exc:
        print(f"Moebius map: {exc}")


if __name__ == "__main__":
    main()
