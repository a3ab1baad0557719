"""Reidemeister maps by Gaussian elimination, and a conjugated R3 map."""

import time

from khtoolkit.cobordism import (agree_up_to_sign, apply_move, r3_conjugate_map,
                                 reidemeister_map, r3)
from khtoolkit.corpus import load_corpus
from khtoolkit.homalg.complexes import ChainMap, is_chain_homotopic, induced_map

corpus = load_corpus()
trefoil = corpus["trefoil-right"]

# add a kink to the trefoil; the map is a homotopy equivalence
m = apply_move(trefoil, "r1+ 1 + u")
f = reidemeister_map(m)
f.check()
print(m.text, ":", f.source.size, "->", f.target.size, "generators")
one = ChainMap.identity(f.source)
back = f.inverse @ f.map
print("  inverse after map ~ id:", is_chain_homotopic(back, one, "q"),
      " ~ -id:", is_chain_homotopic(back, -one, "q"))

# R3 twice returns to the start
mi = corpus.moves["r3-braid-121"]
g = reidemeister_map(mi.move)
h = reidemeister_map(r3(mi.move.after, *mi.move.args))
comp = h.map @ g.map
one = ChainMap.identity(comp.source)
print("R3 then R3 ~ +-id:",
      is_chain_homotopic(comp, one, "q") or is_chain_homotopic(comp, -one, "q"))

# the same R3 seen through births, R2 moves, saddles and deaths
t0 = time.time()
conj = r3_conjugate_map(mi.move)
print("conjugated R3 built in %.1fs from %d elementary steps" % (time.time() - t0,
                                                                len(conj.provenance)))
print("agrees with the direct map up to sign:", agree_up_to_sign(conj.map, g.map))
for grade, block in sorted(induced_map(g.map).items()):
    if block and block[0]:
        print("  direct R3 on H", grade, [[str(x) for x in row] for row in block])
