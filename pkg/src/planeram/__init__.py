"""Exceptional points of endomorphisms of the projective plane.

Exact polynomial arithmetic, ramification and branch divisors, fibres and
complete ramification, linear systems through point sets, the combinatorial
bounds on the number of completely ramified points, and a finite-field
search for maps with many of them.
"""

__version__ = "0.1.0"

from .errors import BudgetExceeded, TheoremViolation
from .polycore import HomogeneousForm, Poly, parse_form, parse_poly
from .projmap import (PlaneEndomorphism, ProjectivePoint, compose, linear_map,
                      map_from_json, map_to_json, perturbed_power_map, power_map,
                      validate)
from .ramify import (PlaneDivisor, check_prop1, fiber, pushforward_divisor,
                     pushforward_multiplicity, ramification_divisor)
from .pointconf import (PointConfiguration, configuration_constraints,
                        ellia_peskine_search, linear_system_dimension)
from .certify import (MultiplicityConfig, prop5_certify, theorem2_bound)
from .ffsearch import SearchJob, completely_ramified_points, run_search

__all__ = [
    "__version__",
    "BudgetExceeded", "TheoremViolation",
    "Poly", "HomogeneousForm", "parse_poly", "parse_form",
    "ProjectivePoint", "PlaneEndomorphism", "validate", "compose", "power_map",
    "perturbed_power_map", "linear_map", "map_from_json", "map_to_json",
    "PlaneDivisor", "ramification_divisor", "fiber", "pushforward_multiplicity",
    "pushforward_divisor", "check_prop1",
    "PointConfiguration", "linear_system_dimension", "configuration_constraints",
    "ellia_peskine_search",
    "MultiplicityConfig", "prop5_certify", "theorem2_bound",
    "SearchJob", "completely_ramified_points", "run_search",
]
