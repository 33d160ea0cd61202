"""
Cutting the pentagon tiling along walls
=======================================

Take the ball of radius 2 in the Davis complex (21 chambers) and group its
walls into orbits under the kernel of the reflection representation mod 3.
Each orbit is a family of disjoint lines; cutting along them one after the
other ends in single chambers.
"""
from davis_hierarchy.coxeter import right_angled
from davis_hierarchy.davis import davis_ball, walls_in_ball
from davis_hierarchy.hierarchy import check_tidy, run_hierarchy, wall_family
from davis_hierarchy.quotients import finite_quotient, trivial_intersection_check

W = right_angled("abcde", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")])
U = davis_ball(W, 2)
print(len(U.chambers), "chambers,", len(walls_in_ball(U)), "walls")

Q = finite_quotient(W, "mod-3")
print("trivial intersection:", trivial_intersection_check(U, Q).passed)

E = wall_family(U, Q)
print("tidy:", check_tidy(U, E).passed)

trace = run_hierarchy(U, E, quotient=Q)
for step in trace.steps[:5]:
    mv = step.mayer_vietoris
    print(f"cut {step.index}: chi {mv.chi_M} = {mv.chi_N} - {mv.chi_F}, exact={mv.exact}")
print("...")
print("terminal pieces:", trace.terminal.components, "all single chambers:", trace.terminal_single_chambers)
