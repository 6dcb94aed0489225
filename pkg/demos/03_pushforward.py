"""
Multiplicities of the branch curve
==================================

"""

from planeram.projmap import ProjectivePoint, perturbed_power_map
from planeram.ramify import check_prop1, pushforward_divisor, pushforward_multiplicity

f = perturbed_power_map(2, "1")
B = pushforward_divisor(f)
print("B =", B)

for P in (ProjectivePoint(1, 0, 0), ProjectivePoint(0, 1, 0), ProjectivePoint(0, 0, 1)):
    res = pushforward_multiplicity(f, None, P)
    c = check_prop1(f, P)
    # mult_y(f_*R) against m^2 - 1 at a completely ramified point
    print(P, res.value, res.method, "bound", c.rhs, "slack", c.slack)

# a point of B that is not completely ramified
y = f(ProjectivePoint(1, 0, 2))
print(y, B.multiplicity_at(y), check_prop1(f, y).holds)
