"""Elementary moves on PD diagrams.

Each move returns an :class:`ElementaryMove` holding both frames and the
arc bookkeeping the chain-level maps need.  Orientation is carried by the
stored crossing signs, so moves never re-derive it from labels.

Faces are traced by always leaving a crossing through the slot clockwise
of the one we arrived at; the face then lies on the left of every dart.
A dart is ``(arc, +1)`` along the orientation or ``(arc, -1)`` against it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..diagram import Crossing, DiagramError, LinkDiagram

__all__ = [
    "MoveError",
    "ElementaryMove",
    "faces",
    "is_planar",
    "birth",
    "death",
    "saddle",
    "r1_add",
    "r1_remove",
    "r2_add",
    "r2_remove",
    "r3",
    "relabel",
    "apply_move",
]


class MoveError(DiagramError):
    pass


@dataclass(frozen=True)
class ElementaryMove:
    """One frame change ``before -> after``.

    For Reidemeister moves ``local`` lists the crossings of the larger
    diagram created by the move and ``proj`` sends its arcs to arcs of the
    smaller one (None for arcs that vanish).  For R3 both frames are the same
    size; ``local`` indexes both and ``proj`` is the shared projection.  For
    births, deaths, saddles and relabelings ``arc_map`` sends arcs of
    ``before`` to arcs of ``after``.
    """

    kind: str
    before: LinkDiagram
    after: LinkDiagram
    args: tuple = ()
    local: tuple = ()
    proj: dict = field(default_factory=dict, compare=False)
    big_is_after: bool = True
    arc_map: dict = field(default_factory=dict, compare=False)

    @property
    def text(self):
        return " ".join([self.kind] + [str(a) for a in self.args])

    @property
    def euler(self):
        return {"birth": 1, "death": 1, "saddle": -1}.get(self.kind, 0)


# ---------------------------------------------------------------------------
# faces and planarity


def _dart_at_slot(d, ci, j):
    arc = d.crossings[ci].arcs[j]
    return (arc, 1) if d.tail(arc) == (ci, j) else (arc, -1)


def faces(d: LinkDiagram):
    """All faces as lists of darts; each free loop contributes two."""
    seen = set()
    out = []
    for arc in sorted(d._tails):
        for s in (1, -1):
            if (arc, s) in seen:
                continue
            face = []
            dart = (arc, s)
            while dart not in seen:
                seen.add(dart)
                face.append(dart)
                a, sg = dart
                ci, i = d.head(a) if sg > 0 else d.tail(a)
                dart = _dart_at_slot(d, ci, (i - 1) % 4)
            out.append(face)
    for loop in d.loops:
        out.append([(loop, 1)])
        out.append([(loop, -1)])
    return out


def _crossing_components(d):
    parent = list(range(d.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for arc in d._tails:
        a, b = d.tail(arc)[0], d.head(arc)[0]
        parent[find(a)] = find(b)
    return [find(i) for i in range(d.n)]


def is_planar(d: LinkDiagram) -> bool:
    """Each connected piece with k crossings must bound k + 2 faces."""
    comp = _crossing_components(d)
    count = {}
    for c in comp:
        count[c] = count.get(c, 0) + 1
    fcount = {}
    for face in faces(d):
        arc = face[0][0]
        if arc in d.loops:
            continue
        c = comp[d.tail(arc)[0]]
        fcount[c] = fcount.get(c, 0) + 1
    return all(fcount.get(c, 0) == k + 2 for c, k in count.items())


def _checked(d):
    if not is_planar(d):
        raise MoveError("move produced a non-planar diagram")
    return d


def _replace_slots(crossings, changes):
    """``changes`` maps (crossing, slot) -> new arc label."""
    xs = [list(x.arcs) for x in crossings]
    for (ci, j), a in changes.items():
        xs[ci][j] = a
    return [Crossing(tuple(a), x.sign) for a, x in zip(xs, crossings)]


def _strand_slots(x: Crossing, over: bool):
    """(in slot, out slot) of the under or over strand at a crossing."""
    if not over:
        return 0, 2
    return (3, 1) if x.sign > 0 else (1, 3)


def _is_over(x: Crossing, slot):
    return slot in (1, 3)


# ---------------------------------------------------------------------------
# births, deaths, saddles, relabelings


def birth(d: LinkDiagram) -> ElementaryMove:
    new = d.max_arc + 1
    after = LinkDiagram(d.crossings, d.loops + (new,))
    return ElementaryMove("birth", d, after, (), arc_map={a: a for a in d.arcs})


def death(d: LinkDiagram, index: int) -> ElementaryMove:
    if not 0 <= index < len(d.loops):
        raise MoveError("no free loop with index %d" % index)
    gone = d.loops[index]
    after = LinkDiagram(d.crossings, d.loops[:index] + d.loops[index + 1:])
    amap = {a: (None if a == gone else a) for a in d.arcs}
    return ElementaryMove("death", d, after, (index,), arc_map=amap)


def relabel(d: LinkDiagram, mapping: dict) -> ElementaryMove:
    full = {a: mapping.get(a, a) for a in d.arcs}
    if len(set(full.values())) != len(full):
        raise MoveError("relabeling is not a bijection")
    args = (",".join("%d:%d" % kv for kv in sorted(mapping.items())),)
    return ElementaryMove("relabel", d, d.relabel(full), args, arc_map=full)


def saddle(d: LinkDiagram, e: int, f: int) -> ElementaryMove:
    """Oriented band between arcs e and f.

    Two distinct arcs must share a face in which both run the same way
    round the boundary; the band then swaps their heads.  A band from an
    arc to itself splits off a new free loop.  A band touching a free loop
    absorbs the loop.
    """
    arcs = set(d.arcs)
    if e not in arcs or f not in arcs:
        raise MoveError("saddle arcs must exist")
    loops = list(d.loops)
    ident = {a: a for a in d.arcs}
    if e == f:
        new = d.max_arc + 1
        after = LinkDiagram(d.crossings, tuple(loops) + (new,))
        return ElementaryMove("saddle", d, after, (e, f), arc_map=ident)
    if e in loops or f in loops:
        if e in loops and f in loops:
            keep, gone = min(e, f), max(e, f)
        else:
            keep, gone = (f, e) if e in loops else (e, f)
        loops.remove(gone)
        amap = dict(ident)
        amap[gone] = keep
        after = LinkDiagram(d.crossings, tuple(loops))
        return ElementaryMove("saddle", d, after, (e, f), arc_map=amap)
    ok = False
    for face in faces(d):
        for s in (1, -1):
            if (e, s) in face and (f, s) in face:
                ok = True
    if not ok:
        raise MoveError("arcs %d and %d do not bound a face coherently" % (e, f))
    he, hf = d.head(e), d.head(f)
    xs = _replace_slots(d.crossings, {he: f, hf: e})
    after = _checked(LinkDiagram(tuple(xs), d.loops))
    return ElementaryMove("saddle", d, after, (e, f), arc_map=ident)


# ---------------------------------------------------------------------------
# Reidemeister I

_KINKS = {
    # (sign, first pass) -> tuple pattern over (p, k, q)
    (-1, "u"): ("p", "k", "k", "q"),
    (1, "u"): ("p", "q", "k", "k"),
    (-1, "o"): ("k", "p", "q", "k"),
    (1, "o"): ("k", "k", "q", "p"),
}


def r1_add(d: LinkDiagram, arc: int, sign: int, first: str = "u") -> ElementaryMove:
    """Put a kink of the given sign on ``arc``; ``first`` is u or o for the
    first pass through the new crossing."""
    if (sign, first) not in _KINKS:
        raise MoveError("kink needs sign +-1 and first pass u or o")
    if arc not in d.arcs:
        raise MoveError("no arc %d" % arc)
    top = d.max_arc
    k = top + 1
    loops = list(d.loops)
    if arc in loops:
        loops.remove(arc)
        p = q = arc
        xs = list(d.crossings)
    else:
        p, q = arc, top + 2
        xs = _replace_slots(d.crossings, {d.head(arc): q})
    names = {"p": p, "k": k, "q": q}
    new = Crossing(tuple(names[s] for s in _KINKS[(sign, first)]), sign)
    after = _checked(LinkDiagram(tuple(xs) + (new,), tuple(loops)))
    proj = {a: a for a in d.arcs}
    proj.update({p: arc, q: arc, k: None})
    return ElementaryMove("r1+", d, after, (arc, "+" if sign > 0 else "-", first),
                          local=(d.n,), proj=proj, big_is_after=True)


def r1_remove(d: LinkDiagram, c: int) -> ElementaryMove:
    if not 0 <= c < d.n:
        raise MoveError("no crossing %d" % c)
    x = d.crossings[c]
    kinks = [a for a in set(x.arcs) if d.tail(a)[0] == c and d.head(a)[0] == c
             and (d.tail(a)[1] - d.head(a)[1]) % 2 == 1]
    if not kinks:
        raise MoveError("crossing %d is not a kink" % c)
    k = max(kinks)
    p = next(x.arcs[j] for j in x.entry_slots() if x.arcs[j] != k)
    q = next(x.arcs[j] for j in x.exit_slots() if x.arcs[j] != k)
    rest = [y for i, y in enumerate(d.crossings) if i != c]
    loops = list(d.loops)
    if p == q:
        loops.append(p)
        small = LinkDiagram(tuple(rest), tuple(loops))
    else:
        hq = d.head(q)
        ci, j = hq
        ci = ci - (1 if ci > c else 0)
        small = LinkDiagram(tuple(_replace_slots(rest, {(ci, j): p})), tuple(loops))
    small = _checked(small)
    proj = {a: a for a in d.arcs}
    proj.update({q: p, k: None})
    return ElementaryMove("r1-", d, small, (c,), local=(c,), proj=proj, big_is_after=False)


# ---------------------------------------------------------------------------
# Reidemeister II

E_, N_, W_, S_ = 0, 1, 2, 3


def _crossing_from_compass(arc_at, under_in, over_in):
    """PD crossing from compass directions; ``*_in`` are incoming directions."""
    arcs = tuple(arc_at[(under_in + k) % 4] for k in range(4))
    rel = (over_in - under_in) % 4
    if rel not in (1, 3):
        raise MoveError("strands do not cross transversally")
    return Crossing(arcs, 1 if rel == 3 else -1)


def r2_add(d: LinkDiagram, e: int, f: int, over: str = "o", choice: int = 0) -> ElementaryMove:
    """Push a finger of arc ``e`` over (o) or under (u) arc ``f``.

    The finger runs through a face bounded by both arcs; ``choice`` picks
    among several such faces.  A free loop involved is placed in the face
    to the left of the other arc.
    """
    if e == f:
        raise MoveError("an R2 move needs two different arcs")
    arcs = set(d.arcs)
    if e not in arcs or f not in arcs:
        raise MoveError("no such arcs")
    if over not in ("o", "u"):
        raise MoveError("R2 needs o or u")
    e_loop, f_loop = e in d.loops, f in d.loops
    if e_loop or f_loop:
        de, df = 1, 1
    else:
        common = []
        for face in faces(d):
            de_ = [s for a, s in face if a == e]
            df_ = [s for a, s in face if a == f]
            if de_ and df_:
                common.append((de_[0], df_[0]))
        if choice >= len(common):
            raise MoveError("arcs %d and %d share no face (choice %d)" % (e, f, choice))
        de, df = common[choice]
    # picture: e along the bottom with the face above, f along the top with
    # the face below; the finger of e rises through f at L, falls back at R
    e_east = de > 0
    f_west = df > 0
    top = d.max_arc
    fresh = iter(range(top + 1, top + 10))
    em = next(fresh)
    e_out = e if e_loop else next(fresh)
    fm = next(fresh)
    f_out = f if f_loop else next(fresh)
    e_in, f_in = e, f
    low_left, low_right = (e_in, e_out) if e_east else (e_out, e_in)
    west, east = (f_out, f_in) if f_west else (f_in, f_out)
    L = {E_: fm, N_: em, W_: west, S_: low_left}
    R = {E_: east, N_: em, W_: fm, S_: low_right}
    e_dir_L, e_dir_R = (S_, N_) if e_east else (N_, S_)  # incoming directions
    f_dir = E_ if f_west else W_
    if over == "o":
        xL = _crossing_from_compass(L, f_dir, e_dir_L)
        xR = _crossing_from_compass(R, f_dir, e_dir_R)
    else:
        xL = _crossing_from_compass(L, e_dir_L, f_dir)
        xR = _crossing_from_compass(R, e_dir_R, f_dir)
    changes = {}
    if not e_loop:
        changes[d.head(e)] = e_out
    if not f_loop:
        changes[d.head(f)] = f_out
    xs = _replace_slots(d.crossings, changes)
    loops = tuple(a for a in d.loops if a not in (e, f))
    after = _checked(LinkDiagram(tuple(xs) + (xL, xR), loops))
    proj = {a: a for a in d.arcs}
    proj.update({e_out: e, f_out: f, em: None, fm: None})
    return ElementaryMove("r2+", d, after, (e, f, over) + ((choice,) if choice else ()),
                          local=(d.n, d.n + 1), proj=proj, big_is_after=True)


def _remove_crossings(d: LinkDiagram, cs, local_arcs):
    """Delete crossings and splice each strand through them.

    Returns the smaller diagram and the projection of arcs (local arcs go to
    None, every other arc to the label of the spliced arc containing it).
    """
    cs = sorted(set(cs))
    gone = set(cs)
    nxt = {}
    for c in cs:
        x = d.crossings[c]
        for over in (False, True):
            i, o = _strand_slots(x, over)
            nxt[x.arcs[i]] = x.arcs[o]
    proj = {}
    changes = {}
    starts = [a for a in d._tails if d.tail(a)[0] not in gone]
    for a in starts:
        cur = a
        chain = [a]
        while d.head(cur)[0] in gone:
            cur = nxt[cur]
            chain.append(cur)
        for b in chain:
            proj[b] = a
        changes[d.head(cur)] = a
    loops = list(d.loops)
    rest = [a for a in d._tails if a not in proj]
    seen = set()
    for a in sorted(rest):
        if a in seen:
            continue
        cyc = [a]
        seen.add(a)
        cur = nxt[a]
        while cur != a:
            cyc.append(cur)
            seen.add(cur)
            cur = nxt[cur]
        lab = min(cyc)
        loops.append(lab)
        for b in cyc:
            proj[b] = lab
    for a in d.loops:
        proj[a] = a
    for a in local_arcs:
        proj[a] = None
    xs = _replace_slots(d.crossings, changes)
    xs = [xs[i] for i in range(d.n) if i not in gone]
    return LinkDiagram(tuple(xs), tuple(loops)), proj


def _bigon(d: LinkDiagram, c1: int, c2: int):
    """The two arcs of a bigon face between crossings c1 and c2.

    Two crossings joined only to each other bound several bigons; the one
    with the newest labels is taken, so R2 followed by removal of the same
    pair of crossings undoes the finger it made.
    """
    found = []
    for face in faces(d):
        if len(face) != 2:
            continue
        arcs = [a for a, _ in face]
        if arcs[0] in d.loops:
            continue
        ends = [{d.tail(a)[0], d.head(a)[0]} for a in arcs]
        if all(e == {c1, c2} for e in ends):
            found.append(arcs)
    return max(found, key=lambda arcs: sorted(arcs, reverse=True), default=None)


def r2_remove(d: LinkDiagram, c1: int, c2: int) -> ElementaryMove:
    if c1 == c2 or not (0 <= c1 < d.n and 0 <= c2 < d.n):
        raise MoveError("R2 removal needs two distinct crossings")
    arcs = _bigon(d, c1, c2)
    if arcs is None:
        raise MoveError("crossings %d and %d do not bound a bigon" % (c1, c2))
    for a in arcs:
        t, h = d.tail(a), d.head(a)
        if _is_over(d.crossings[t[0]], t[1]) != _is_over(d.crossings[h[0]], h[1]):
            raise MoveError("bigon strands switch over/under; not an R2 bigon")
    small, proj = _remove_crossings(d, (c1, c2), arcs)
    small = _checked(small)
    return ElementaryMove("r2-", d, small, (c1, c2), local=tuple(sorted((c1, c2))),
                          proj=proj, big_is_after=False)


# ---------------------------------------------------------------------------
# Reidemeister III


def _triangle(d: LinkDiagram, cs):
    cs = set(cs)
    for face in faces(d):
        if len(face) != 3:
            continue
        arcs = [a for a, _ in face]
        if any(a in d.loops for a in arcs):
            continue
        ends = [(d.tail(a)[0], d.head(a)[0]) for a in arcs]
        if {c for t in ends for c in t} == cs and all(t != h for t, h in ends):
            return arcs
    return None


def r3(d: LinkDiagram, c1: int, c2: int, c3: int) -> ElementaryMove:
    """Slide a strand across the crossing of the other two.

    The three crossings bound a triangle face.  Each strand's (in, out)
    labels are exchanged between its two triangle crossings, which moves
    the strand past the opposite crossing and reverses the triangle.
    """
    cs = (c1, c2, c3)
    if len(set(cs)) != 3 or not all(0 <= c < d.n for c in cs):
        raise MoveError("R3 needs three distinct crossings")
    sides = _triangle(d, cs)
    if sides is None:
        raise MoveError("crossings %s do not bound a triangle" % (cs,))
    heights = []
    changes = {}
    for s in sides:
        (X, sx), (Y, sy) = d.tail(s), d.head(s)
        x, y = d.crossings[X], d.crossings[Y]
        ox, oy = _is_over(x, sx), _is_over(y, sy)
        heights.append(int(ox) + int(oy))
        ix, _ = _strand_slots(x, ox)
        _, jy = _strand_slots(y, oy)
        i_arc, o_arc = x.arcs[ix], y.arcs[jy]
        changes[(X, ix)] = s
        changes[(X, sx)] = o_arc
        changes[(Y, sy)] = i_arc
        changes[(Y, jy)] = s
    if sorted(heights) != [0, 1, 2]:
        raise MoveError("the three strands are cyclically layered")
    xs = _replace_slots(d.crossings, changes)
    after = _checked(LinkDiagram(tuple(xs), d.loops))
    proj = {a: a for a in d.arcs}
    for s in sides:
        proj[s] = None
    return ElementaryMove("r3", d, after, cs, local=tuple(sorted(cs)), proj=proj)


# ---------------------------------------------------------------------------
# text form


def apply_move(d: LinkDiagram, text: str) -> ElementaryMove:
    """Apply a move written as in movie files, e.g. ``r2+ 3 7 o``."""
    parts = text.split()
    if not parts:
        raise MoveError("empty move")
    kind, args = parts[0], parts[1:]
    try:
        if kind == "birth" and not args:
            return birth(d)
        if kind == "death" and len(args) == 1:
            return death(d, int(args[0]))
        if kind == "saddle" and len(args) == 2:
            return saddle(d, int(args[0]), int(args[1]))
        if kind == "r1+" and len(args) in (2, 3):
            sign = {"+": 1, "-": -1}[args[1]]
            return r1_add(d, int(args[0]), sign, args[2] if len(args) == 3 else "u")
        if kind == "r1-" and len(args) == 1:
            return r1_remove(d, int(args[0]))
        if kind == "r2+" and len(args) in (3, 4):
            return r2_add(d, int(args[0]), int(args[1]), args[2],
                          int(args[3]) if len(args) == 4 else 0)
        if kind == "r2-" and len(args) == 2:
            return r2_remove(d, int(args[0]), int(args[1]))
        if kind == "r3" and len(args) == 3:
            return r3(d, *(int(a) for a in args))
        if kind == "relabel" and len(args) == 1:
            mapping = {}
            for pair in args[0].split(","):
                a, b = pair.split(":")
                mapping[int(a)] = int(b)
            return relabel(d, mapping)
    except (KeyError, ValueError) as exc:
        if isinstance(exc, DiagramError):
            raise
        raise MoveError("bad arguments in move %r" % text) from None
    raise MoveError("unknown move %r" % text)
