"""
The squaring map and its three special points
=============================================

"""

from planeram.projmap import ProjectivePoint, power_map
from planeram.ramify import fiber, pushforward_divisor, ramification_divisor

f = power_map(2)
print(f, "has topological degree", f.topological_degree)

# the Jacobian is 8xyz, so R is the coordinate triangle
R = ramification_divisor(f)
print("R =", R)

# over a coordinate vertex the whole fibre collapses to one point
for P in (ProjectivePoint(1, 0, 0), ProjectivePoint(1, 1, 1), ProjectivePoint(0, 1, 1)):
    rep = fiber(f, P)
    print(P, rep.status.value, [(str(Q), d) for Q, d in rep.rational_points])

# a target with no rational preimages still carries all of its mass
rep = fiber(f, ProjectivePoint(1, 2, 3))
print("irrational mass over 1:2:3 is", rep.irrational_mass)

B = pushforward_divisor(f, R)
print("f_*R =", B, "of degree", B.total_degree)
