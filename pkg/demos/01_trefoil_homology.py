"""Khovanov homology of the right-handed trefoil, three ways of looking at it."""

from khtoolkit import build_ckh, graded_euler, kauffman_jones, kh_homology, mirror, parse_pd
from khtoolkit.cube import enumerate_states
from khtoolkit.diagram import resolve

trefoil = parse_pd("X[4,2,5,1];X[6,4,1,3];X[2,6,3,5]")
print(trefoil, " crossings:", trefoil.n, " signs (+,-):", (trefoil.n_plus, trefoil.n_minus))

# the cube of resolutions: one vector space V^(r) per state
for v in enumerate_states(trefoil.n):
    r = resolve(trefoil, v).r
    print("  state", v, "circles", r, "rank", 2 ** r)

c = build_ckh(trefoil)
print("rank of CKh:", c.size, " d^2 = 0:", c.d_squared_is_zero())

for coeff in ("z", "q", "f2"):
    print("Kh over %-2s" % coeff, kh_homology(trefoil, coeff).poincare())

# the Z/2 at (3,7) is why F2 sees two extra classes: (3,7) and (2,7)
print("graded Euler:", graded_euler(trefoil))
print("state sum:   ", kauffman_jones(trefoil))

left = mirror(trefoil)
print("mirror:", kh_homology(left).poincare())
