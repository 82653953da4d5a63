"""Projective points of circle diffeomorphisms.

Numerical toolkit around the Schwarzian derivative of a diffeomorphism of the
real projective line: its zeros, the associated Hill equation, the central
curve, the Legendrian lift to RP^3 and the characteristic curve on S^2.
"""

from .batch import RandomDiffeoConfig, VerifyReport, analyze_spec, run_verify_batch
from .central_curve import PlaneCurve, curve_from_diffeo, potential_from_curve
from .diffeo import (DiffeoSpec, Harmonic, SampledLift, build_fourier_lift, build_mobius_lift,
                     identity, lift_from_samples, sample_with_derivatives, spec_from_dict,
                     spec_from_json)
from .errors import ProjPointsError
from .legendrian import (NU, LegendrianCurve, curve_to_diffeo, flattening_determinant,
                         flattening_points, legendrian_from_diffeo, twisted_example_curve)
from .periodic import SampledPeriodic
from .roots import (ZeroSet, count_distinct_circular, detect_tangential_zeros, find_zeros,
                    refine_transversal_zeros)
from .schwarzian import (cross_ratio, infinitesimal_operator, potential_from_schwarzian,
                         projective_points, richardson_probe, schwarzian_angular,
                         schwarzian_crossratio_probe)
from .sphere import (SphereCurve, characteristic_projection, enclosed_area, inflection_points,
                     meridian_margin)
from .sturm import (SLProblem, check_disconjugate, comparison_zero_count, integrate_fundamental,
                    solution_vanishing_at)

__version__ = "0.1.0"
