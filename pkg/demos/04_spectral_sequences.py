"""Spectral sequences of the h- and q-filtrations of CKh."""

from khtoolkit import build_ckh, parse_pd
from khtoolkit.homalg.complexes import homology
from khtoolkit.homalg.filtered import (FilteredComplex, associated_graded_homology, ord_matrix,
                                       spectral_sequence)
from khtoolkit.khovanov import reversed_cube

knot = parse_pd("X[4,2,5,1];X[8,6,1,5];X[6,3,7,4];X[2,7,3,8]")  # figure eight
c = build_ckh(knot)
print("figure eight, rank", c.size, " F2 homology", homology(c, "f2").poincare())

# filtration by h: d raises h by exactly one, so everything happens on E_1
fh = FilteredComplex.by_grading(c, "h", 1)
for page in spectral_sequence(fh, "f2"):
    print("  h  E_%d total %3d  d nonzero: %s" % (page.r, page.total, not page.d_is_zero()))

# filtration by q: d preserves q, so E_1 is already the homology
fq = FilteredComplex.by_grading(c, "q", 0)
pages = spectral_sequence(fq, "f2")
for page in pages:
    print("  q  E_%d total %3d" % (page.r, page.total))
last = {k: v for k, v in pages[-1].dims.items() if v}
print("E_infinity = associated graded:", last == associated_graded_homology(fq, "f2"))

# the reversed cube has a differential that lowers the cube weight,
# and it still has order one in its own h-grading
rc, gamma = reversed_cube(knot)
h = [g[0] for g in rc.grades]
print("reversed cube: ord_h(d) =", ord_matrix(rc.d, h, h), " gamma is an iso:", gamma.is_isomorphism())
