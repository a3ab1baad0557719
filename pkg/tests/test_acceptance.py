"""Acceptance criteria 1-12, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
All comparisons are exact integer or rational arithmetic, so the only
tolerances are the wall-clock budgets pinned in ``BUDGET``.
"""

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from khtoolkit.cobordism import (MoveError, agree_up_to_sign, birth, death, elementary_map,
                                 faces, movie_map, r1_remove, r2_remove, r3, r3_conjugate_map,
                                 reidemeister_map, saddle, sphere_movie, torus_movie)
from khtoolkit.corpus import load_corpus
from khtoolkit.diagram import LinkDiagram, disjoint_union
from khtoolkit.homalg.complexes import ChainMap, homology, is_chain_homotopic
from khtoolkit.homalg.filtered import ord_matrix
from khtoolkit.khovanov import (LaurentPolynomial, build_ckh, disjoint_iso, graded_euler,
                                kauffman_jones, kh_homology, mirror_dual_iso, reversed_cube)
from khtoolkit.verify import Options, _claims, _random_diagrams, _spectral

from test_filtered import per_generator_ord, random_filtered_map

SEED = 0
# seconds; criteria without a stated budget get a generous pinned ceiling
BUDGET = {1: 60, 2: 5, 3: 5, 4: 30, 5: 120, 6: 60, 7: 120, 8: 120, 9: 300, 10: 120,
          11: 120, 12: 60}

TREFOIL_Z = {(0, 1): (1, ()), (0, 3): (1, ()), (2, 5): (1, ()), (3, 9): (1, ()),
             (3, 7): (0, (2,))}

RESULTS = {}
_corpus = None


def corpus():
    global _corpus
    if _corpus is None:
        _corpus = load_corpus()
    return _corpus


def c1():
    diagrams = corpus().all_diagrams()
    rand = _random_diagrams(Options(seed=SEED, random_count=200, max_crossings=8))
    assert len(rand) == 200 and all(d.n <= 8 for _, d in rand)
    bad = [n for n, d in diagrams + rand if not build_ckh(d).d_squared_is_zero()]
    return not bad, "%d corpus + 200 random diagrams, failures %s" % (len(diagrams), bad)


def c2():
    kh = kh_homology(corpus()["unknot-0"])
    return kh.data == {(0, 1): (1, ()), (0, -1): (1, ())}, kh.poincare()


def c3():
    d = corpus()["trefoil-right"]
    kh = kh_homology(d)
    ok = kh.data == TREFOIL_Z
    # Euler characteristic of the table against the bracket oracle
    chi = LaurentPolynomial()
    for (i, j), (r, _) in kh.data.items():
        chi = chi + LaurentPolynomial.q(j, (-1) ** i * r)
    ok &= chi == kauffman_jones(d) == LaurentPolynomial({1: 1, 3: 1, 5: 1, 9: -1})
    # universal coefficients over Q and F2
    ok &= kh_homology(d, "q").ranks() == {k: r for k, (r, _) in TREFOIL_Z.items() if r}
    f2 = kh_homology(d, "f2").ranks()
    want = {}
    for (i, j), (r, t) in TREFOIL_Z.items():
        want[(i, j)] = want.get((i, j), 0) + r + len(t)
        if t:
            want[(i - 1, j)] = want.get((i - 1, j), 0) + len(t)
    ok &= f2 == want
    return ok, kh.poincare()


def c4():
    names = corpus().all_diagrams()
    bad = [n for n, d in names if graded_euler(d) != kauffman_jones(d)]
    return not bad, "%d diagrams, mismatches %s" % (len(names), bad)


def c5():
    moves = corpus().moves
    bad = [n for n, mi in moves.items()
           if kh_homology(mi.move.before) != kh_homology(mi.move.after)]
    return not bad, "%d move pairs, mismatches %s" % (len(moves), bad)


def c6():
    c = corpus()
    pairs = [("trefoil-right", "unknot-0"), ("hopf-pos", "trefoil-right"),
             ("unknot-0", "unknot-0")]
    ok = True
    for a, b in pairs:
        d1, d2 = c[a], c[b]
        f = disjoint_iso(d1, d2)
        c1_, c2_ = build_ckh(d1), build_ckh(d2)
        ok &= f.commutes() and f.is_isomorphism() and not f.bidegree_violations()
        # additive bigradings, generator by generator
        for j, (x, y) in enumerate(f.source.basis):
            g = c1_.grades[c1_.index[x]], c2_.grades[c2_.index[y]]
            ok &= f.source.grades[j] == (g[0][0] + g[1][0], g[0][1] + g[1][1])
        h1, h2 = homology(c1_, "q").ranks(), homology(c2_, "q").ranks()
        prod = {}
        for (i, j), r in h1.items():
            for (k, l), s in h2.items():
                prod[(i + k, j + l)] = prod.get((i + k, j + l), 0) + r * s
        ok &= kh_homology(disjoint_union(d1, d2), "q").ranks() == prod
    return ok, "pairs %s" % ", ".join("%s+%s" % p for p in pairs)


def _keeps_grades(f):
    return all(f.target.grades[i] == f.source.grades[j]
               for j, col in f.matrix.cols.items() for i in col)


def c7():
    names = corpus().all_diagrams()
    bad = []
    for n, d in names:
        maps = [mirror_dual_iso(d), mirror_dual_iso(d, standard_target=True), reversed_cube(d)[1]]
        if not all(f.commutes() and f.is_isomorphism() and _keeps_grades(f) for f in maps):
            bad.append(n)
    return not bad, "%d diagrams, failures %s" % (len(names), bad)


def _movie_ok(mv):
    cm = movie_map(mv)
    cm.check()
    return cm.declared == (0, mv.euler)


def _some_saddle(d):
    """First saddle between two darts of a face that is coherently oriented."""
    for face in faces(d):
        for (a, _), (b, _) in itertools.combinations_with_replacement(face, 2):
            try:
                return saddle(d, a, b)
            except MoveError:
                continue
    raise MoveError("no saddle found")


def c8():
    c = corpus()
    ok = True
    count = 0
    for mi in c.moves.values():
        cm = elementary_map(mi.move)
        cm.check()
        ok &= cm.declared == (0, 0)
        count += 1
    for n in ("unknot-0", "hopf-pos", "trefoil-right", "figure-eight"):
        d = c[n]
        b = birth(d)
        moves = [b, death(b.after, len(b.after.loops) - 1)]
        moves.append(_some_saddle(d))
        for m in moves:
            cm = elementary_map(m)
            cm.check()
            ok &= cm.declared == (0, m.euler)
            count += 1
        ok &= _movie_ok(torus_movie(d)) and _movie_ok(sphere_movie(d))
    empty = LinkDiagram()
    t, s = movie_map(torus_movie(empty)), movie_map(sphere_movie(empty))
    ok &= homology(t.source).data == {(0, 0): (1, ())}
    ok &= t.matrix.to_dense() == [[2]] and s.matrix.is_zero()
    return ok, "%d elementary maps checked; torus x2, sphere 0 on Kh(empty) = Z" % count


def _pm_id(f):
    one = ChainMap.identity(f.source)
    return is_chain_homotopic(f, one, "q") or is_chain_homotopic(f, -one, "q")


def c9():
    c = corpus()
    ok, seen = True, []
    for n, mi in c.moves.items():
        m = mi.move
        f = reidemeister_map(m)
        undo = {"r3": lambda: r3(m.after, *m.args),
                "r1+": lambda: r1_remove(m.after, m.local[0]),
                "r2+": lambda: r2_remove(m.after, *m.local)}.get(m.kind)
        if undo:
            # the map of the inverse move itself, not the elimination inverse
            back = undo()
            ok &= back.after == m.before
            g = reidemeister_map(back)
            ok &= _pm_id(g.map @ f.map) and _pm_id(f.map @ g.map)
        else:
            ok &= _pm_id(f.inverse @ f.map) and _pm_id(f.map @ f.inverse)
        seen.append(m.kind)
    m = c.moves["r3-braid-121"].move
    conj = agree_up_to_sign(r3_conjugate_map(m).map, reidemeister_map(m).map)
    ok &= conj
    return ok, "%d composites (%s); R3 conjugate on r3-braid-121: %s" % (
        len(seen), ", ".join(sorted(set(seen))), "agrees" if conj else "differs")


def c10():
    names = corpus().all_diagrams()
    bad = []
    for n, d in names:
        passed, detail = _spectral(d)
        if not passed:
            bad.append("%s (%s)" % (n, detail))
    return not bad, "%d complexes, both filtrations over F2; failures %s" % (len(names), bad)


def c11():
    bad = []
    for l in range(1, 6):
        passed, detail = _claims(l, SEED)
        if not passed:
            bad.append("U_%d: %s" % (l, detail))
    return not bad, "l = 1..5; failures %s" % bad


def c12():
    rng = random.Random(SEED)
    bad = 0
    for _ in range(100):
        l1, l2, l3 = ([rng.randint(-4, 4) for _ in range(rng.randint(1, 6))] for _ in range(3))
        f = random_filtered_map(rng, len(l1), len(l2), l1, l2, rng.randint(-2, 2))
        g = random_filtered_map(rng, len(l2), len(l3), l2, l3, rng.randint(-2, 2))
        of, og = per_generator_ord(f, l1, l2), per_generator_ord(g, l2, l3)
        ogf = per_generator_ord(g @ f, l1, l3)
        consistent = (of == ord_matrix(f, l1, l2) and og == ord_matrix(g, l2, l3)
                      and ogf == ord_matrix(g @ f, l1, l3))
        if not consistent or ogf < of + og:
            bad += 1
    return bad == 0, "100 random filtered pairs, %d violations" % bad


CRITERIA = {1: c1, 2: c2, 3: c3, 4: c4, 5: c5, 6: c6, 7: c7, 8: c8, 9: c9, 10: c10,
            11: c11, 12: c12}
TITLES = {1: "d^2 = 0 on corpus and random diagrams", 2: "Kh(unknot)", 3: "right trefoil",
          4: "graded Euler = Kauffman-Jones", 5: "invariance under corpus R-moves",
          6: "disjoint union iso and Kunneth", 7: "mirror duality and reversed cube",
          8: "cobordism maps are chain maps", 9: "R-move composites ~ +-id, R3 conjugate",
          10: "spectral sequences", 11: "unlink extremal groups and signs",
          12: "ord superadditivity"}


def evaluate(k):
    t0 = time.perf_counter()
    try:
        passed, detail = CRITERIA[k]()
    except Exception as exc:  # a crash is a failed criterion, reported as such
        passed, detail = False, "%s: %s" % (type(exc).__name__, exc)
    elapsed = time.perf_counter() - t0
    in_time = elapsed <= BUDGET[k]
    line = "criterion %2d %s  %-40s %6.2fs / %ds  %s" % (
        k, "PASS" if passed and in_time else "FAIL", TITLES[k], elapsed, BUDGET[k],
        detail if in_time else detail + " (over budget)")
    RESULTS[k] = line
    return passed and in_time, line


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, line = evaluate(k)
    print(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for k in sorted(CRITERIA):
        ok, line = evaluate(k)
        print(line, flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
