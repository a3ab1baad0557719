"""Movies of surfaces and the maps they induce on Khovanov homology."""

from khtoolkit import parse_pd
from khtoolkit.cobordism import Movie, movie_map, parse_movie, sphere_movie, torus_movie
from khtoolkit.homalg.complexes import homology, induced_map

torus = torus_movie()
print(torus.to_text())
t = movie_map(torus)
print("torus: bidegree", t.declared, "matrix", t.matrix.to_dense())   # [[2]]

s = movie_map(sphere_movie())
print("sphere: bidegree", s.declared, "zero map:", s.matrix.is_zero())

# the same movies next to a trefoil act diagonally
trefoil = parse_pd("X[4,2,5,1];X[6,4,1,3];X[2,6,3,5]")
t3 = movie_map(torus_movie(trefoil))
print("torus beside trefoil is 2 * id:", all(v == 2 for _, _, v in t3.matrix.entries()))

# a saddle movie written by hand: split the circle, then merge it back
mv = parse_movie("""
D: U
M: saddle 1 1
D: U;U
M: saddle 1 2
D: U
""")
f = movie_map(mv)
f.check()
print("split then merge, Euler characteristic", mv.euler)
print("source homology:", homology(f.source).poincare())
for grade, block in sorted(induced_map(f.map).items()):
    print("  from H at", grade, "->", [[str(x) for x in row] for row in block])
# v+ -> v+ (x) v- + v- (x) v+ -> 2 v-, landing two q-degrees lower

# movies compose frame by frame
both = Movie.from_moves(parse_pd("U"), ["saddle 1 1", "saddle 1 2"]).then(
    Movie.from_moves(parse_pd("U"), ["saddle 1 1", "saddle 1 2"]))
print("two handles:", movie_map(both).matrix.to_dense())
