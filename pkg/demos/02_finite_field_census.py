"""
Looking for singleton fibres mod p
==================================

"""

import numpy as np

from planeram.ffsearch import completely_ramified_points, ff_fiber_census, reduce_map
from planeram.projmap import perturbed_power_map, power_map

fmap = reduce_map(power_map(2), 5)
census = ff_fiber_census(fmap, extension_degree=1)
# 31 points of P^2(F_5); the histogram of preimage counts
print(np.bincount(census.counts))

# over F_25 only the coordinate vertices keep a single preimage
census = ff_fiber_census(fmap, extension_degree=2)
print(sorted(census.candidates()))

# candidates at two primes are lifted and then checked exactly
g = perturbed_power_map(3, "x + y + z")
rep = completely_ramified_points(g)
print(rep.census_candidates)
print([(str(P), d) for P, d in rep.points])
