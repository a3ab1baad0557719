"""Chain maps of elementary cobordisms and of movies.

Births, deaths and saddles act statewise through the Frobenius algebra.
Reidemeister maps come from Gaussian elimination: the contractible pieces
created by a move are cancelled in the larger complex, the survivors are
matched with the smaller complex by a signed basis bijection, and the
inclusion and projection of the elimination give the two maps.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from ..cube import EdgeData
from ..diagram import LinkDiagram
from ..homalg.complexes import ChainMap, ChainMapViolation
from ..homalg.matrix import SparseMatrix
from ..homalg.reduction import Reduction
from ..khovanov import MINUS, PLUS, FrobeniusV, apply_edge, build_ckh
from .moves import ElementaryMove, MoveError, birth, death

__all__ = [
    "CircleNotFree",
    "SiteInconsistent",
    "HomotopyCheckFailed",
    "NoEliminationPlan",
    "CobMap",
    "ckh",
    "birth_map",
    "death_map",
    "saddle_map",
    "relabel_map",
    "reidemeister_map",
    "elementary_map",
    "identity_map",
]


class CircleNotFree(MoveError):
    pass


class SiteInconsistent(MoveError):
    pass


class HomotopyCheckFailed(ValueError):
    pass


class NoEliminationPlan(HomotopyCheckFailed):
    pass


@lru_cache(maxsize=256)
def ckh(d: LinkDiagram):
    """Cached Khovanov complex with the standard signs."""
    return build_ckh(d)


@dataclass
class CobMap:
    """A chain map with its declared bidegree ``(0, chi)`` and provenance.

    ``inverse`` is a homotopy inverse when the map is an equivalence.
    ``certificates`` holds ``(C, i, p, H)`` tuples with
    ``1 - i p = d H + H d`` on C, recorded by the elimination.
    """

    map: ChainMap
    declared: tuple
    provenance: list = field(default_factory=list)
    inverse: ChainMap | None = None
    certificates: list = field(default_factory=list, repr=False)

    @property
    def source(self):
        return self.map.source

    @property
    def target(self):
        return self.map.target

    @property
    def matrix(self):
        return self.map.matrix

    def check(self):
        """Exact chain-map identity and the declared bidegree, entrywise."""
        if not self.map.commutes():
            raise ChainMapViolation("d' f != f d for %s" % self.describe())
        if self.map.bidegree != self.declared or self.map.bidegree_violations():
            raise ChainMapViolation("entries off the bidegree %s in %s"
                                    % (self.declared, self.describe()))
        return True

    def describe(self):
        return "; ".join(self.provenance) or "identity"

    def then(self, other: "CobMap") -> "CobMap":
        """``other after self``."""
        inv = None
        if self.inverse is not None and other.inverse is not None:
            inv = self.inverse @ other.inverse
        dq = (self.declared[0] + other.declared[0], self.declared[1] + other.declared[1])
        return CobMap(other.map @ self.map, dq, self.provenance + other.provenance, inv,
                      self.certificates + other.certificates)


def identity_map(d: LinkDiagram) -> CobMap:
    c = ckh(d)
    return CobMap(ChainMap.identity(c), (0, 0), [], ChainMap.identity(c))


# ---------------------------------------------------------------------------
# statewise maps


def _statewise(move: ElementaryMove, local_op, dq):
    """Assemble a map acting separately on every state of an unchanged cube."""
    cb, ca = ckh(move.before), ckh(move.after)
    if move.before.n != move.after.n:
        raise SiteInconsistent("statewise maps need the same crossings")
    m = SparseMatrix(ca.size, cb.size)
    for v, rb in cb.resolutions.items():
        ra = ca.resolutions[v]
        op = local_op(v, rb, ra)
        for labels in itertools.product((PLUS, MINUS), repeat=rb.r):
            j = cb.index[(v, labels)]
            for new, c in op(labels):
                m.add_to(ca.index[(v, new)], j, c)
    f = ChainMap(cb, ca, m, (0, dq))
    return CobMap(f, (0, dq), [move.text])


def _bystanders(rb, ra, amap, skip):
    out = {}
    for ci, circ in enumerate(rb.circles):
        if ci in skip:
            continue
        img = amap.get(circ[0], circ[0])
        out[ci] = ra.circle_of[img]
    return out


def birth_map(move) -> CobMap:
    """``x -> x (x) v+``; accepts a birth move or the diagram before it."""
    if isinstance(move, LinkDiagram):
        move = birth(move)
    new = move.after.loops[-1]

    def op(v, rb, ra):
        by = _bystanders(rb, ra, move.arc_map, ())
        nc = ra.circle_of[new]

        def f(labels):
            out = [0] * ra.r
            for ci, cj in by.items():
                out[cj] = labels[ci]
            out[nc] = PLUS
            return [(tuple(out), 1)]
        return f

    return _statewise(move, op, 1)


def death_map(move, circle=None) -> CobMap:
    """Counit on a free loop; accepts a death move, or a diagram and the
    arc label of the loop."""
    if isinstance(move, LinkDiagram):
        if circle not in move.loops:
            raise CircleNotFree("arc %r is not a free loop" % (circle,))
        move = death(move, move.loops.index(circle))
    gone = move.before.loops[move.args[0]]

    def op(v, rb, ra):
        gc = rb.circle_of[gone]
        by = _bystanders(rb, ra, move.arc_map, (gc,))

        def f(labels):
            c = FrobeniusV.counit(labels[gc])
            if not c:
                return []
            out = [0] * ra.r
            for ci, cj in by.items():
                out[cj] = labels[ci]
            return [(tuple(out), c)]
        return f

    return _statewise(move, op, 1)


def saddle_map(move: ElementaryMove) -> CobMap:
    e, f = move.args
    after = move.after
    new_loop = None
    if e == f:
        new_loop = after.loops[-1]

    def op(v, rb, ra):
        ce, cf = rb.circle_of[e], rb.circle_of[f]
        amap = move.arc_map
        if new_loop is not None:
            kind, pre = "split", (ce,)
            post = (ra.circle_of[e], ra.circle_of[new_loop])
        elif ce == cf:
            kind, pre = "split", (ce,)
            post = (ra.circle_of[amap[e]], ra.circle_of[amap[f]])
            if post[0] == post[1]:
                raise SiteInconsistent("saddle neither merges nor splits")
        else:
            kind, pre = "merge", (ce, cf)
            post = (ra.circle_of[amap[e]],)
            if ra.circle_of[amap[f]] != post[0]:
                raise SiteInconsistent("saddle neither merges nor splits")
        if ra.r != rb.r + (1 if kind == "split" else -1):
            raise SiteInconsistent("circle count does not change by one")
        by = _bystanders(rb, ra, amap, set(pre))
        ed = EdgeData(v, v, -1, kind, pre, post, by)
        return lambda labels: apply_edge(ed, labels, ra.r)

    cm = _statewise(move, op, -1)
    cm.check()
    return cm


def relabel_map(move: ElementaryMove) -> CobMap:
    def op(v, rb, ra):
        by = _bystanders(rb, ra, move.arc_map, ())

        def f(labels):
            out = [0] * ra.r
            for ci, cj in by.items():
                out[cj] = labels[ci]
            return [(tuple(out), 1)]
        return f

    cm = _statewise(move, op, 0)
    inv_m = cm.map.matrix.T
    cm.inverse = ChainMap(cm.target, cm.source, inv_m)
    return cm


# ---------------------------------------------------------------------------
# Reidemeister maps by elimination


def _local_circle(res, proj):
    for ci, circ in enumerate(res.circles):
        if all(proj.get(a, a) is None for a in circ):
            return ci
    return None


def _plans(c, local, proj):
    """Candidate (s*, lower index, upper index) triples, in a fixed order."""
    n = c.diagram.n
    base = [0] * n
    star = []
    for bits in itertools.product((0, 1), repeat=len(local)):
        v = list(base)
        for i, b in zip(local, bits):
            v[i] = b
        if _local_circle(c.resolutions[tuple(v)], proj) is not None:
            star.append(bits)
    plans = []
    for s in star:
        lows = [local[k] for k, b in enumerate(s) if b == 1] or [None]
        ups = [local[k] for k, b in enumerate(s) if b == 0] or [None]
        for lo in lows:
            for up in ups:
                plans.append((s, lo, up))
    return plans


def _pivot_pairs(c, local, proj, plan):
    s, lo, up = plan
    pairs = []
    rows = None
    for a, (v, labels) in enumerate(c.basis):
        if tuple(v[i] for i in local) != s:
            continue
        lc = _local_circle(c.resolutions[v], proj)
        if labels[lc] == MINUS and lo is not None:
            # partner: the generator below whose split produces this one
            if rows is None:
                rows = c.d.rows()
            src = [x for x, val in rows.get(a, {}).items()
                   if c.basis[x][0][lo] == 0 and val in (1, -1)
                   and c.basis[x][0] == v[:lo] + (0,) + v[lo + 1:]]
            if len(src) != 1:
                return None
            pairs.append((src[0], a))
        elif labels[lc] == PLUS and up is not None:
            w = v[:up] + (1,) + v[up + 1:]
            tgt = [y for y, val in c.d.cols.get(a, {}).items()
                   if c.basis[y][0] == w and val in (1, -1)]
            if len(tgt) != 1:
                return None
            pairs.append((a, tgt[0]))
    pairs.sort(key=lambda ab: (c.grades[ab[0]], ab[0]))
    return pairs


def _eliminate(c, local, proj, plan, homotopy):
    pairs = _pivot_pairs(c, local, proj, plan)
    if pairs is None:
        return None
    red = Reduction(c.d, ring="z", track=True, track_homotopy=homotopy)
    for a, b in pairs:
        red.cancel(a, b)
    return red


def _circle_key(res, proj, skip):
    out = []
    for ci, circ in enumerate(res.circles):
        if ci == skip:
            continue
        arcs = frozenset(p for p in (proj.get(a, a) for a in circ) if p is not None)
        out.append((ci, arcs))
    return out


def _keys(c, idx, local, proj, with_local):
    """Matching key of each generator: outer bits, circle arc sets, labels, grade."""
    keys = {}
    for g in idx:
        v, labels = c.basis[g]
        res = c.resolutions[v]
        lc = _local_circle(res, proj) if proj is not None else None
        outer = tuple(b for i, b in enumerate(v) if i not in local)
        circ = frozenset((arcs, labels[ci]) for ci, arcs in _circle_key(res, proj or {}, lc))
        loc = tuple(v[i] for i in local) if with_local else ()
        keys[g] = (outer, loc, circ, c.grades[g])
    return keys


def _match(keys_a, keys_b):
    inv = {}
    for g, k in keys_b.items():
        if k in inv:
            return None
        inv[k] = g
    if len(inv) != len(keys_a):
        return None
    out = {}
    for g, k in keys_a.items():
        h = inv.get(k)
        if h is None:
            return None
        out[g] = h
    return out


def _solve_signs(da, db, perm, pos_a, pos_b, cls):
    """Signs s with ``db[perm y, perm x] s_x == s_y da[y, x]``, or None.

    Signs are constant on the classes ``cls`` (the cube vertex of each
    survivor), so the only freedom left is one sign per connected piece of
    the cube; the first class of each piece gets +1.
    """
    adj = {}
    count = 0
    for x, col in da.cols.items():
        for y, val in col.items():
            other = db[pos_b[perm[pos_a[y]]], pos_b[perm[pos_a[x]]]]
            if other not in (val, -val):
                return None
            r = 1 if other == val else -1
            cx, cy = cls[x], cls[y]
            adj.setdefault(cx, []).append((cy, r))
            adj.setdefault(cy, []).append((cx, r))
            count += 1
    if count != db.nnz:
        return None
    sign = {}
    for start in sorted(set(cls.values())):
        if start in sign:
            continue
        sign[start] = 1
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y, r in adj.get(x, ()):
                want = sign[x] * r
                if y in sign:
                    if sign[y] != want:
                        return None
                else:
                    sign[y] = want
                    queue.append(y)
    return {k: sign[c] for k, c in cls.items()}


def _basis_iso(c_a, red_a, keys_a, red_b_d, keys_b, size_b):
    """Signed bijection from survivors of ``red_a`` to a complex of size ``size_b``."""
    surv = red_a.survivors()
    pos_a = {g: k for k, g in enumerate(surv)}
    perm = _match(keys_a, keys_b)
    if perm is None:
        return None
    da = red_a.differential()
    # perm maps original index -> index in b; positions in b are given by keys_b order
    b_ids = sorted(keys_b)
    pos_b = {g: k for k, g in enumerate(b_ids)}
    idx_perm = {g: perm[g] for g in surv}
    cls = {k: c_a.basis[g][0] for k, g in enumerate(surv)}
    signs = _solve_signs(da, red_b_d, idx_perm, {k: g for g, k in pos_a.items()}, pos_b, cls)
    if signs is None:
        return None
    P = SparseMatrix(size_b, len(surv))
    for k, g in enumerate(surv):
        P.add_to(pos_b[perm[g]], k, signs[k])
    return P


def _reduce_to_small(big, small, local, proj, homotopy=True):
    """Elimination of ``big`` matching ``small``: (reduction, P) with P: R -> small."""
    all_small = list(range(small.size))
    keys_s = _keys(small, all_small, (), None, False)
    for plan in _plans(big, local, proj):
        red = _eliminate(big, local, proj, plan, homotopy)
        if red is None:
            continue
        keys_b = _keys(big, red.survivors(), local, proj, False)
        P = _basis_iso(big, red, keys_b, small.d, keys_s, small.size)
        if P is not None:
            return red, P
    raise NoEliminationPlan("no elimination plan matches the smaller complex")


def _r3_iso(c1, c2, local, proj, homotopy=True):
    plans1 = _plans(c1, local, proj)
    plans2 = _plans(c2, local, proj)
    for p1 in plans1:
        r1 = _eliminate(c1, local, proj, p1, homotopy)
        if r1 is None:
            continue
        for p2 in plans2:
            r2 = _eliminate(c2, local, proj, p2, homotopy)
            if r2 is None:
                continue
            s1 = sorted({tuple(c1.basis[g][0][i] for i in local) for g in r1.survivors()})
            s2 = sorted({tuple(c2.basis[g][0][i] for i in local) for g in r2.survivors()})
            if len(s1) != len(s2):
                continue
            for pi in _weight_bijections(s1, s2):
                k1 = _keys(c1, r1.survivors(), local, proj, True)
                k1 = {g: (k[0], pi[k[1]], k[2], k[3]) for g, k in k1.items()}
                k2 = _keys(c2, r2.survivors(), local, proj, True)
                surv2 = r2.survivors()
                k2_pos = {k: kk for k, kk in zip(range(len(surv2)), [k2[g] for g in surv2])}
                P = _basis_iso(c1, r1, k1, r2.differential(), k2_pos, len(surv2))
                if P is not None:
                    return r1, r2, P
    raise NoEliminationPlan("no elimination plans identify the two sides of the R3 move")


def _weight_bijections(s1, s2):
    groups1, groups2 = {}, {}
    for s in s1:
        groups1.setdefault(sum(s), []).append(s)
    for s in s2:
        groups2.setdefault(sum(s), []).append(s)
    if {k: len(v) for k, v in groups1.items()} != {k: len(v) for k, v in groups2.items()}:
        return
    ws = sorted(groups1)
    choices = [list(itertools.permutations(groups2[w])) for w in ws]
    for combo in itertools.product(*choices):
        pi = {}
        for w, perm in zip(ws, combo):
            pi.update(dict(zip(groups1[w], perm)))
        yield pi


def _certificate(c, red):
    return (c, red.include_matrix(), red.project_matrix(), red.homotopy_matrix())


_R3_CACHE = {}


def reidemeister_map(move: ElementaryMove, homotopy=True) -> CobMap:
    """Homotopy equivalence for an R1, R2 or R3 move, with its inverse."""
    before, after = ckh(move.before), ckh(move.after)
    if move.kind == "r3":
        key = (move.before, move.after, move.local)
        rkey = (move.after, move.before, move.local)
        if rkey in _R3_CACHE and key not in _R3_CACHE:
            f, g, certs = _R3_CACHE[rkey]
            _R3_CACHE[key] = (g, f, certs)
        if key not in _R3_CACHE:
            r1, r2, P = _r3_iso(before, after, move.local, move.proj, homotopy)
            f = r2.include_matrix() @ P @ r1.project_matrix()
            g = r1.include_matrix() @ P.T @ r2.project_matrix()
            certs = [_certificate(before, r1), _certificate(after, r2)] if homotopy else []
            _R3_CACHE[key] = (f, g, certs)
        f, g, certs = _R3_CACHE[key]
        return CobMap(ChainMap(before, after, f), (0, 0), [move.text],
                      ChainMap(after, before, g), certs)
    if move.kind not in ("r1+", "r1-", "r2+", "r2-"):
        raise MoveError("not a Reidemeister move: %s" % move.kind)
    big, small = (after, before) if move.big_is_after else (before, after)
    red, P = _reduce_to_small(big, small, move.local, move.proj, homotopy)
    inc = red.include_matrix() @ P.T
    proj = P @ red.project_matrix()
    certs = [_certificate(big, red)] if homotopy else []
    if move.big_is_after:
        return CobMap(ChainMap(before, after, inc), (0, 0), [move.text],
                      ChainMap(after, before, proj), certs)
    return CobMap(ChainMap(before, after, proj), (0, 0), [move.text],
                  ChainMap(after, before, inc), certs)


def elementary_map(move: ElementaryMove, homotopy=False) -> CobMap:
    if move.kind == "birth":
        return birth_map(move)
    if move.kind == "death":
        return death_map(move)
    if move.kind == "saddle":
        return saddle_map(move)
    if move.kind == "relabel":
        return relabel_map(move)
    return reidemeister_map(move, homotopy)
