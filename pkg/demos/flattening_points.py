"""Flattening points of the Legendrian lift, and a non-Legendrian curve without any.

Run: python3 demos/flattening_points.py
"""

import numpy as np

from projpoints import build_fourier_lift, sample_with_derivatives
from projpoints.legendrian import (NU, flattening_determinant, flattening_points,
                                   legendrian_from_diffeo, twisted_example_curve)
from projpoints.roots import count_distinct_circular
from projpoints.schwarzian import potential_from_schwarzian, schwarzian_angular

N = 512


def main():
    lift = sample_with_derivatives(build_fourier_lift([(1, 0.06, 0.02), (2, 0.02, 0.0)]), N)
    k = potential_from_schwarzian(schwarzian_angular(lift))
    curve = legendrian_from_diffeo(lift)
    flat = flattening_determinant(curve)
    print(f"sup|omega(C, C')| = {curve.legendrian_residual():.1e}")

    # det2 is a constant multiple of (k - 1)^2
    km1 = ((k - 1.0) ** 2).values
    mask = km1 > 1e-6
    ratio = flat.det2.values[mask] / km1[mask]
    print(f"det2 / (k-1)^2 = {ratio.mean():.10f} (relative spread {ratio.std() / ratio.mean():.1e})")
    print(f"sup|det4 + nu omega(C', C'')^2| / scale = {flat.relative_identity_residual:.1e}"
          f" with nu = {NU:g}")

    fp = flattening_points(flat.det2)
    print(f"{count_distinct_circular(fp)} flattening points:",
          np.round(fp.merged().locations, 6).tolist())

    # dropping the Legendrian condition removes the lower bound entirely
    for eps in (1e-3, 1e-2, 5e-2):
        det2 = flattening_determinant(twisted_example_curve(eps, N)).det2
        print(f"eps = {eps:<6g} det2 in [{det2.values.min():.6g}, {det2.values.max():.6g}],"
              f" 192 eps^2 = {192 * eps**2:.6g}, flattenings: "
              f"{len(flattening_points(det2, legendrian=False))}")


if __name__ == "__main__":
    main()
