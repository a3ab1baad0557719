"""Verification suites over the corpus.

Each suite is a list of named, independent checks.  A check returns
``(passed, detail)``; exceptions count as failures and their message
becomes the detail.  Reports list checks in a fixed order so that equal
inputs give byte-identical JSON.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .cobordism.maps import ckh, reidemeister_map
from .cobordism.movie import (Movie, agree_up_to_sign, extremal_ranks, graded_automorphism,
                              movie_map, r3_conjugate_map, sign_uniqueness_check,
                              sphere_movie, torus_movie)
from .cobordism.moves import r2_add, r2_remove
from .corpus import load_corpus
from .cube import SignAssignment, cochain_transform, verify_sign_assignment
from .diagram import LinkDiagram, disjoint_union, parse_pd, random_braid_diagram, unlink
from .homalg.complexes import ChainMap, homology, is_chain_homotopic
from .homalg.filtered import (FilteredComplex, associated_graded_homology, ord_matrix,
                              spectral_sequence)
from .homalg.matrix import SparseMatrix
from .khovanov import (disjoint_iso, graded_euler, induced_mirror_signs, kauffman_jones,
                       kh_homology, mirror_dual_iso, reversed_cube)

__all__ = ["SUITES", "Options", "CheckResult", "checks_for", "run_suite", "report",
           "UnknownSuite"]

SUITES = ("signs", "dsquared", "invariance", "kunneth", "mirror", "movies", "spectral", "claims")


class UnknownSuite(KeyError):
    pass


@dataclass(frozen=True)
class Options:
    seed: int = 0
    max_crossings: int = 8
    random_count: int = 200
    max_unlink: int = 3
    corpus: str | None = None


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


# ---------------------------------------------------------------------------
# individual checks


def _small(diagrams, limit):
    return [(n, d) for n, d in diagrams if d.n <= limit]


def _signs(d):
    n = d.n
    std = SignAssignment.standard(n)
    ok = verify_sign_assignment(std, n)
    star = induced_mirror_signs(std)
    ok = ok and verify_sign_assignment(star, n)
    cochain_transform(star, std)
    if n:
        flipped = std.flipped_at((0,) * n)
        ok = ok and verify_sign_assignment(flipped, n)
    return ok, ""


def _dsquared(d):
    c = ckh(d)
    return c.d_squared_is_zero() and c.preserves_q(), "rank %d" % c.size


def _jones(d):
    a, b = graded_euler(d), kauffman_jones(d)
    return a == b, str(a)


def _invariance(mi):
    a = kh_homology(mi.move.before).to_dict()
    b = kh_homology(mi.move.after).to_dict()
    return a == b, ""


def _kunneth(d1, d2):
    disjoint_iso(d1, d2)
    h1, h2 = homology(ckh(d1), "q"), homology(ckh(d2), "q")
    h12 = homology(ckh(disjoint_union(d1, d2)), "q")
    want = {}
    for (i, j), r in h1.ranks().items():
        for (k, l), s in h2.ranks().items():
            want[(i + k, j + l)] = want.get((i + k, j + l), 0) + r * s
    return h12.ranks() == {k: v for k, v in want.items() if v}, ""


def _mirror(d):
    f = mirror_dual_iso(d)
    g = mirror_dual_iso(d, standard_target=True)
    rc, gamma = reversed_cube(d)
    ok = all(x.commutes() and not x.bidegree_violations() for x in (f, g, gamma))
    return ok, ""


def _homotopic_to_pm_id(f):
    one = ChainMap.identity(f.source)
    return is_chain_homotopic(f, one, "q") or is_chain_homotopic(f, -one, "q")


def _r_move(mi):
    cm = reidemeister_map(mi.move)
    cm.check()
    inv = cm.inverse
    if not inv.commutes() or inv.bidegree_violations():
        return False, "inverse is not a chain map of bidegree (0, 0)"
    ok = _homotopic_to_pm_id(inv @ cm.map) and _homotopic_to_pm_id(cm.map @ inv)
    return ok, ""


def _torus_sphere(d):
    t = movie_map(torus_movie(d)).matrix
    s = movie_map(sphere_movie(d)).matrix
    c = ckh(d)
    return (t == SparseMatrix.identity(c.size).scale(2) and s.is_zero(),
            "torus x2, sphere 0")


def _cancelling_pair(d, e, f, over):
    """A movie and the same movie with an R2 and its inverse inserted."""
    base = torus_movie(d)
    m1 = r2_add(d, e, f, over)
    m2 = r2_remove(m1.after, d.n, d.n + 1)
    if m2.after != d:
        return False, "R2 inverse did not restore the frame"
    longer = Movie.of((m1, m2) + base.moves)
    a = movie_map(base, True).map
    b = movie_map(longer, True).map
    return agree_up_to_sign(a, b), ""


def _r3_conjugate(mi):
    a = r3_conjugate_map(mi.move)
    b = reidemeister_map(mi.move)
    return agree_up_to_sign(a.map, b.map), ""


def _spectral(d):
    c = ckh(d)
    for which, order in (("h", 1), ("q", 0)):
        fc = FilteredComplex.by_grading(c, which, order)
        pages = spectral_sequence(fc, "f2")
        einf = {k: v for k, v in pages[-1].dims.items() if v}
        if einf != associated_graded_homology(fc, "f2"):
            return False, "E_infinity differs from the associated graded (%s)" % which
        if which == "q" and any(not p.d_is_zero() for p in pages[1:]):
            return False, "q-filtration does not collapse at E_1"
    rc, _ = reversed_cube(d)
    h = [g[0] for g in rc.grades]
    if ord_matrix(rc.d, h, h) < 1:
        return False, "reversed cube differential has h-order below 1"
    return True, ""


def _random_graded_iso(rng, l, filtered):
    """A q-graded (or q-filtered) automorphism of CKh(U_l) with unit blocks."""
    c = ckh(unlink(l))
    qs = [g[1] for g in c.grades]
    m = SparseMatrix(c.size, c.size)
    for q in sorted(set(qs)):
        idx = [k for k in range(c.size) if qs[k] == q]
        perm = idx[:]
        rng.shuffle(perm)
        for a, b in zip(idx, perm):
            m.add_to(b, a, rng.choice((1, -1)))
    if filtered:
        for j in range(c.size):
            ups = [i for i in range(c.size) if qs[i] > qs[j]]
            if ups and rng.random() < 0.5:
                m.add_to(rng.choice(ups), j, rng.randint(-2, 2))
    return m


def _claims(l, seed):
    er = extremal_ranks(l)
    if any(v != (1, ()) for v in er.values()):
        return False, "extremal groups %s" % er
    rng = random.Random(seed * 1000 + l)
    one = SparseMatrix.identity(ckh(unlink(l)).size)
    if not sign_uniqueness_check(l, one, one).birth_sign == 1:
        return False, "identity pair"
    if not sign_uniqueness_check(l, one, one.scale(-1)).birth_sign == -1:
        return False, "sign pair"
    for k in range(6):
        f = _random_graded_iso(rng, l, k % 2 == 1)
        g = _random_graded_iso(rng, l, k % 3 == 0)
        if not sign_uniqueness_check(l, f, g):
            return False, "pair %d" % k
    twist = graded_automorphism(l, {l - 2: -1})
    return bool(sign_uniqueness_check(l, one, twist)), ""


# ---------------------------------------------------------------------------
# suites


def _random_diagrams(opts):
    rng = random.Random(opts.seed)
    return [("random-%d" % k, random_braid_diagram(rng, opts.max_crossings))
            for k in range(opts.random_count)]


def checks_for(suite: str, opts: Options):
    """``[(name, thunk)]`` for a suite, in report order."""
    if suite not in SUITES:
        raise UnknownSuite(suite)
    corpus = load_corpus(opts.corpus)
    diagrams = corpus.all_diagrams()
    out = []
    if suite == "signs":
        out = [(n, lambda d=d: _signs(d)) for n, d in _small(diagrams, 8)]
    elif suite == "dsquared":
        out = [(n, lambda d=d: _dsquared(d)) for n, d in diagrams + _random_diagrams(opts)]
        out += [("jones:" + n, lambda d=d: _jones(d)) for n, d in corpus.diagrams.items()]
    elif suite == "invariance":
        out = [(n, lambda mi=mi: _invariance(mi)) for n, mi in corpus.moves.items()]
    elif suite == "kunneth":
        pairs = [("trefoil-right", "unknot-0"), ("hopf-pos", "trefoil-right"),
                 ("unknot-0", "unknot-0"), ("hopf-neg", "unknot-1a")]
        out = [("%s+%s" % p, lambda p=p: _kunneth(corpus[p[0]], corpus[p[1]])) for p in pairs]
    elif suite == "mirror":
        out = [(n, lambda d=d: _mirror(d)) for n, d in _small(diagrams, 7)]
    elif suite == "movies":
        for n in ("unknot-0", "trefoil-right"):
            out.append(("torus/sphere:" + n, lambda d=corpus[n]: _torus_sphere(d)))
        out.append(("torus/sphere:empty", lambda: _torus_sphere(LinkDiagram())))
        for n, mi in corpus.moves.items():
            out.append(("homotopy:" + n, lambda mi=mi: _r_move(mi)))
        out.append(("cancelling-r2:trefoil",
                    lambda: _cancelling_pair(corpus["trefoil-right"], 1, 3, "o")))
        out.append(("cancelling-r2:unlink",
                    lambda: _cancelling_pair(parse_pd("U;U"), 1, 2, "u")))
        out.append(("r3-conjugate:r3-braid-121",
                    lambda: _r3_conjugate(corpus.moves["r3-braid-121"])))
    elif suite == "spectral":
        out = [(n, lambda d=d: _spectral(d)) for n, d in _small(diagrams, 7)]
    elif suite == "claims":
        out = [("unlink-%d" % l, lambda l=l: _claims(l, opts.seed))
               for l in range(1, opts.max_unlink + 1)]
    return out


def _run_one(name, thunk):
    try:
        ok, detail = thunk()
    except Exception as exc:  # any failure inside a check is a failed check
        return CheckResult(name, False, "%s: %s" % (type(exc).__name__, exc))
    return CheckResult(name, bool(ok), detail)


def _run_index(args):
    suite, opts, k = args
    name, thunk = checks_for(suite, opts)[k]
    return _run_one(name, thunk)


def run_suite(suite: str, opts: Options = Options(), jobs: int = 1):
    """Run every check of a suite; ``jobs > 1`` uses a process pool."""
    checks = checks_for(suite, opts)
    if jobs <= 1:
        return [_run_one(n, t) for n, t in checks]
    with ProcessPoolExecutor(jobs) as pool:
        return list(pool.map(_run_index, [(suite, opts, k) for k in range(len(checks))]))


def report(suite, opts, results):
    return {
        "schema": "kh-verify/1",
        "suite": suite,
        "seed": opts.seed,
        "max_crossings": opts.max_crossings,
        "passed": all(r.passed for r in results),
        "checks": [r.to_dict() for r in results],
    }
