"""
Conditions imposed by points
============================

"""

import random

from planeram.pointconf import (PointConfiguration, configuration_constraints,
                                ellia_peskine_search, linear_system_dimension, random_points)
from planeram.projmap import ProjectivePoint

rng = random.Random(0)
pts = random_points(12, rng)
# 15 quartic monomials, 12 conditions
print(linear_system_dimension(pts, 4))

# a double point costs three conditions
print(linear_system_dimension(PointConfiguration(()), 4, [(ProjectivePoint(1, 2, 3), 2)]))

nine = random_points(9, rng, box=3)
rep = configuration_constraints(nine)
print("unique cubic:", rep.unique_cubic, rep.cubic)

# ten points on a line among twelve: the search finds the line
line = [ProjectivePoint(1, k, 0) for k in range(10)]
config = PointConfiguration(tuple(line + [ProjectivePoint(1, 2, 3), ProjectivePoint(-3, 1, 5)]))
w = ellia_peskine_search(config, tau=4, s=3)
print(w.t, w.curve, len(w.subset))
