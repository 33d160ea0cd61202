"""
Charney-Davis on joins of polygons
==================================

kappa is multiplicative under joins, so for the 3-sphere C_m * C_n it is
kappa(C_m) kappa(C_n) = (4-m)(4-n)/16 >= 0.
"""
from itertools import combinations_with_replacement

from davis_hierarchy.euler import charney_davis
from davis_hierarchy.simplicial import cross_polytope_boundary, cycle, join

for m, n in combinations_with_replacement([4, 5, 6], 2):
    rep = charney_davis(join(cycle(m, "a"), cycle(n, "b")))
    print(f"C{m} * C{n}: kappa = {rep.kappa}, sign ok = {rep.sign_ok}")

print("octahedral 3-sphere:", charney_davis(cross_polytope_boundary(4)).kappa)
