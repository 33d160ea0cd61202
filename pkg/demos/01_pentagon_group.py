"""
The right-angled pentagon group
===============================

Five reflections a..e, neighbours commute, everything else is free.
Its nerve is a 5-cycle, so the Davis complex is a surface (the
hyperbolic plane tiled by right-angled pentagons).
"""
from davis_hierarchy.coxeter import cayley_ball, right_angled
from davis_hierarchy.euler import euler_report
from davis_hierarchy.nerve import build_chamber, build_nerve, manifold_check

W = right_angled("abcde", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")])

# words of length <= 2: 1 + 5 + 15
ball = cayley_ball(W, 2)
print("ball of radius 2:", len(ball), "elements", ball.lengths)

# the word problem knows that ab = ba but ac != ca
print("ab == ba:", W.element([0, 1]) == W.element([1, 0]))
print("ac == ca:", W.element([0, 2]) == W.element([2, 0]))

N = build_nerve(W)
print("nerve f-vector:", N.complex.f_vector())
print("Davis complex:", manifold_check(N, 2).kind)

K = build_chamber(N)
print("chamber K has", len(K.complex.vertices), "vertices")

rep = euler_report(N)
print("chi_orb =", rep.chi_orb, " kappa =", rep.kappa)
