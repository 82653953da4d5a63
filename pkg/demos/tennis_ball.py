"""Characteristic curve on the sphere: it bisects the area and inflects at projective points.

Run: python3 demos/tennis_ball.py
"""

import numpy as np

from projpoints.batch import RandomDiffeoConfig, random_spec
from projpoints.diffeo import sample_with_derivatives
from projpoints.legendrian import legendrian_from_diffeo
from projpoints.roots import count_distinct_circular
from projpoints.schwarzian import projective_points, schwarzian_angular
from projpoints.sphere import (characteristic_projection, enclosed_area, inflection_points,
                               meridian_margin)

N = 512


def main():
    cfg = RandomDiffeoConfig(max_harmonic=4, amplitude=0.15)
    print(" case   area - 2 pi   winding   inflections   projective points")
    for case in range(8):
        lift = sample_with_derivatives(random_spec(7, case, cfg), N)
        r = characteristic_projection(legendrian_from_diffeo(lift))
        infl = count_distinct_circular(inflection_points(r))
        pp = count_distinct_circular(projective_points(schwarzian_angular(lift)))
        print(f"{case:5d}   {enclosed_area(r) - 2 * np.pi:11.2e}   {meridian_margin(r).winding:7d}"
              f"   {infl:11d}   {pp:17d}")


if __name__ == "__main__":
    main()
