"""
Link diagrams in planar-diagram (PD) notation.

A crossing ``X[a,b,c,d]`` lists its four incident arcs counterclockwise,
starting from the incoming under-strand, so the under-strand always runs
``a -> c``.  The over-strand runs ``d -> b`` at a positive crossing and
``b -> d`` at a negative one.  Crossingless components are written ``U``.

The 0-resolution of ``X[a,b,c,d]`` joins ``a`` with ``b`` and ``c`` with
``d``; the 1-resolution joins ``a`` with ``d`` and ``b`` with ``c``.  For a
positive crossing the 0-resolution is the oriented smoothing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "DiagramError",
    "MalformedToken",
    "ArcMultiplicity",
    "OrientationInconsistent",
    "DimensionMismatch",
    "Crossing",
    "LinkDiagram",
    "ResolvedDiagram",
    "parse_pd",
    "resolve",
    "mirror",
    "disjoint_union",
    "unlink",
    "braid_closure",
    "random_braid_diagram",
]


class DiagramError(ValueError):
    pass


class MalformedToken(DiagramError):
    pass


class ArcMultiplicity(DiagramError):
    pass


class OrientationInconsistent(DiagramError):
    pass


class DimensionMismatch(DiagramError):
    pass


# slot pairs joined by each smoothing
_SMOOTHING = {0: ((0, 1), (2, 3)), 1: ((0, 3), (1, 2))}


@dataclass(frozen=True)
class Crossing:
    arcs: tuple[int, int, int, int]
    sign: int

    def entry_slots(self):
        """Slots where the oriented strands enter: under first, then over."""
        return (0, 3) if self.sign > 0 else (0, 1)

    def exit_slots(self):
        return (2, 1) if self.sign > 0 else (2, 3)

    def rotated(self, k):
        a = self.arcs
        return tuple(a[(i + k) % 4] for i in range(4))

    def __str__(self):
        return "X[%d,%d,%d,%d]" % self.arcs


@dataclass(frozen=True)
class LinkDiagram:
    """An oriented link diagram with an ordered list of crossings.

    ``loops`` holds the arc labels of crossingless components.  Orientation
    is carried by the crossing signs: together with the PD convention they
    determine the tail and head of every arc.
    """

    crossings: tuple[Crossing, ...] = ()
    loops: tuple[int, ...] = ()
    _tails: dict = field(default=None, repr=False, compare=False, hash=False)
    _heads: dict = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        tails, heads = {}, {}
        for ci, x in enumerate(self.crossings):
            if x.sign not in (1, -1):
                raise DiagramError("crossing sign must be +1 or -1")
            for arc in x.arcs:
                if not isinstance(arc, int) or arc <= 0:
                    raise MalformedToken("arc labels must be positive integers")
            for p in x.entry_slots():
                if x.arcs[p] in heads:
                    raise OrientationInconsistent(
                        "arc %d enters two crossings" % x.arcs[p])
                heads[x.arcs[p]] = (ci, p)
            for p in x.exit_slots():
                if x.arcs[p] in tails:
                    raise OrientationInconsistent(
                        "arc %d leaves two crossings" % x.arcs[p])
                tails[x.arcs[p]] = (ci, p)
        if set(tails) != set(heads):
            bad = sorted(set(tails) ^ set(heads))
            raise OrientationInconsistent("arcs without consistent ends: %s" % bad)
        overlap = set(self.loops) & set(tails)
        if overlap or len(set(self.loops)) != len(self.loops):
            raise ArcMultiplicity("loop labels must be fresh")
        object.__setattr__(self, "_tails", tails)
        object.__setattr__(self, "_heads", heads)

    # basic counts -----------------------------------------------------

    @property
    def n(self):
        return len(self.crossings)

    @property
    def n_plus(self):
        return sum(1 for x in self.crossings if x.sign > 0)

    @property
    def n_minus(self):
        return sum(1 for x in self.crossings if x.sign < 0)

    @property
    def arcs(self):
        return sorted(set(self._tails) | set(self.loops))

    @property
    def arc_count(self):
        return len(self._tails) + len(self.loops)

    @property
    def max_arc(self):
        a = self.arcs
        return a[-1] if a else 0

    def tail(self, arc):
        """Slot ``(crossing, position)`` the arc leaves from."""
        return self._tails[arc]

    def head(self, arc):
        """Slot ``(crossing, position)`` the arc runs into."""
        return self._heads[arc]

    def components(self):
        """Components as lists of arcs in orientation order."""
        seen = set()
        comps = []
        for start in sorted(self._tails):
            if start in seen:
                continue
            comp = []
            arc = start
            while arc not in seen:
                seen.add(arc)
                comp.append(arc)
                ci, p = self._heads[arc]
                arc = self.crossings[ci].arcs[(p + 2) % 4]
            comps.append(comp)
        comps.extend([loop] for loop in self.loops)
        return comps

    @property
    def component_count(self):
        return len(self.components())

    def to_pd(self):
        items = [str(x) for x in self.crossings] + ["U"] * len(self.loops)
        return ";".join(items)

    def same_shape(self, other):
        """Equal crossing tuples and the same number of free loops."""
        return (tuple(x.arcs for x in self.crossings)
                == tuple(x.arcs for x in other.crossings)
                and len(self.loops) == len(other.loops))

    def __str__(self):
        return self.to_pd() or "<empty>"

    def relabel(self, mapping):
        """Rename arcs by ``mapping``; unmapped labels are kept."""
        get = lambda a: mapping.get(a, a)
        xs = tuple(Crossing(tuple(get(a) for a in x.arcs), x.sign)
                   for x in self.crossings)
        return LinkDiagram(xs, tuple(get(a) for a in self.loops))

    def normalized(self):
        """Relabel arcs to 1..N in order of first appearance."""
        mapping = {}
        for x in self.crossings:
            for a in x.arcs:
                mapping.setdefault(a, len(mapping) + 1)
        for a in self.loops:
            mapping.setdefault(a, len(mapping) + 1)
        return self.relabel(mapping)


# ---------------------------------------------------------------------------
# parsing

_ITEM = re.compile(r"^X\[(-?\d+),(-?\d+),(-?\d+),(-?\d+)\]$|^U$")


def _orient(tuples: Sequence[tuple[int, int, int, int]]) -> list[int]:
    """Crossing signs induced by the under-strand convention.

    Components without an under-crossing are oriented so the arc after the
    smallest label carries the smaller of its two neighbouring labels.
    """
    slots = {}
    for ci, arcs in enumerate(tuples):
        for p, a in enumerate(arcs):
            slots.setdefault(a, []).append((ci, p))

    def other_end(arc, slot):
        s1, s2 = slots[arc]
        return s2 if s1 == slot else s1

    entered = {}  # (ci, p) -> True for slots where the strand enters
    visited = set()
    for ci0 in range(len(tuples)):
        for p0 in range(4):
            if (ci0, p0) in visited:
                continue
            # walk one direction, entering at (ci0, p0)
            entries = []
            arcs = []
            ci, p = ci0, p0
            while True:
                entries.append((ci, p))
                visited.add((ci, p))
                out = (ci, (p + 2) % 4)
                visited.add(out)
                arc = tuples[ci][out[1]]
                arcs.append(arc)
                ci, p = other_end(arc, out)
                if (ci, p) == (ci0, p0):
                    break
            under = [p for (_, p) in entries if p in (0, 2)]
            if under:
                fwd = all(p == 0 for p in under)
                if not fwd and not all(p == 2 for p in under):
                    raise OrientationInconsistent(
                        "under-strands disagree along a component")
            else:
                k = arcs.index(min(arcs))
                succ = arcs[(k + 1) % len(arcs)]
                pred = arcs[(k - 1) % len(arcs)]
                fwd = len(arcs) == 1 or succ <= pred
            for (c, q) in entries:
                if fwd:
                    entered[(c, q)] = True
                else:
                    entered[(c, (q + 2) % 4)] = True
    signs = []
    for ci in range(len(tuples)):
        signs.append(1 if entered.get((ci, 3)) else -1)
    return signs


def diagram_from_tuples(tuples: Iterable[Sequence[int]], loops: int | Sequence[int] = 0):
    """Build a diagram, deriving crossing signs from the PD convention."""
    tuples = [tuple(int(a) for a in t) for t in tuples]
    for t in tuples:
        if len(t) != 4:
            raise MalformedToken("a crossing needs four arcs")
        if any(a <= 0 for a in t):
            raise MalformedToken("arc labels must be positive integers")
    counts = {}
    for t in tuples:
        for a in t:
            counts[a] = counts.get(a, 0) + 1
    bad = sorted(a for a, k in counts.items() if k != 2)
    if bad:
        raise ArcMultiplicity("arcs not appearing exactly twice: %s" % bad)
    if isinstance(loops, int):
        top = max(counts, default=0)
        loops = tuple(range(top + 1, top + 1 + loops))
    signs = _orient(tuples)
    return LinkDiagram(tuple(Crossing(t, s) for t, s in zip(tuples, signs)),
                       tuple(loops))


def parse_pd(text: str) -> LinkDiagram:
    """Parse ``X[a,b,c,d];...;U`` text.  The empty string is the empty diagram."""
    body = re.sub(r"\s+", "", text)
    if body == "":
        return LinkDiagram()
    tuples = []
    loops = 0
    for item in body.split(";"):
        m = _ITEM.match(item)
        if m is None:
            raise MalformedToken("cannot parse %r" % item)
        if item == "U":
            loops += 1
        else:
            tuples.append(tuple(int(g) for g in m.groups()))
    return diagram_from_tuples(tuples, loops)


# ---------------------------------------------------------------------------
# resolutions


@dataclass(frozen=True)
class ResolvedDiagram:
    """Circles of one resolution, each a cyclic list starting at its least arc.

    Circles are sorted by least arc.  ``site_incidence[i]`` gives the circle
    index of each of the four arcs at crossing ``i``.
    """

    circles: tuple[tuple[int, ...], ...]
    site_incidence: tuple[tuple[int, int, int, int], ...]
    circle_of: dict = field(repr=False, compare=False, hash=False)

    @property
    def r(self):
        return len(self.circles)


def _circles(d: LinkDiagram, bits: Sequence[int]):
    # nodes are slots; arcs and smoothing pairs are the edges
    slot_arc = {}
    for arc in d._tails:
        t, h = d._tails[arc], d._heads[arc]
        slot_arc[t] = (arc, h)
        slot_arc[h] = (arc, t)
    partner = {}
    for ci, b in enumerate(bits):
        for p, q in _SMOOTHING[b]:
            partner[(ci, p)] = (ci, q)
            partner[(ci, q)] = (ci, p)
    seen = set()
    circles = []
    for arc in sorted(d._tails):
        if arc in seen:
            continue
        circ = []
        slot = d._tails[arc]
        while True:
            a, far = slot_arc[slot]
            if a in seen:
                break
            seen.add(a)
            circ.append(a)
            slot = partner[far]
        circles.append(circ)
    circles.extend([loop] for loop in d.loops)
    out = []
    for c in circles:
        k = c.index(min(c))
        out.append(tuple(c[k:] + c[:k]))
    out.sort(key=lambda c: c[0])
    return tuple(out)


def resolve(d: LinkDiagram, v: Sequence[int]) -> ResolvedDiagram:
    """Smooth every crossing of ``d`` according to the state ``v``."""
    v = tuple(v)
    if len(v) != d.n:
        raise DimensionMismatch("state has %d bits, diagram has %d crossings"
                                % (len(v), d.n))
    circles = _circles(d, v)
    circle_of = {}
    for i, c in enumerate(circles):
        for a in c:
            circle_of[a] = i
    inc = tuple(tuple(circle_of[a] for a in x.arcs) for x in d.crossings)
    return ResolvedDiagram(circles, inc, circle_of)


# ---------------------------------------------------------------------------
# constructions


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Switch every crossing; the PD tuple rotates by one slot."""
    xs = []
    for x in d.crossings:
        # the old over-strand becomes the under-strand; start at its entry
        k = 3 if x.sign > 0 else 1
        xs.append(Crossing(x.rotated(k), -x.sign))
    return LinkDiagram(tuple(xs), d.loops)


def disjoint_union(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    shift = d1.max_arc
    d2s = d2.relabel({a: a + shift for a in d2.arcs})
    return LinkDiagram(d1.crossings + d2s.crossings, d1.loops + d2s.loops)


def unlink(l: int) -> LinkDiagram:
    return LinkDiagram((), tuple(range(1, l + 1)))


def braid_closure(word: Sequence[int], strands: int) -> LinkDiagram:
    """Closure of a braid word; ``+i``/``-i`` crosses strands ``i`` and ``i+1``.

    All strands run upward.  Strands that never cross become free loops.
    """
    label = list(range(1, strands + 1))
    nxt = strands + 1
    raw = []
    for g in word:
        i = abs(g) - 1
        if not 0 <= i < strands - 1:
            raise DiagramError("generator %d out of range" % g)
        x, y = label[i], label[i + 1]
        xo, yo = nxt, nxt + 1
        nxt += 2
        if g > 0:
            raw.append((y, yo, xo, x))   # under strand runs SE -> NW
        else:
            raw.append((x, y, yo, xo))   # under strand runs SW -> NE
        label[i], label[i + 1] = xo, yo
    close = {label[k]: k + 1 for k in range(strands)}
    tuples = [tuple(close.get(a, a) for a in t) for t in raw]
    used = {a for t in tuples for a in t}
    free = [k + 1 for k in range(strands) if k + 1 not in used]
    xs = diagram_from_tuples(tuples, 0)
    mapping = {}
    for x in xs.crossings:
        for a in x.arcs:
            mapping.setdefault(a, len(mapping) + 1)
    top = len(mapping)
    d = LinkDiagram(xs.crossings, tuple(range(1000000, 1000000 + len(free))))
    mapping.update({1000000 + k: top + 1 + k for k in range(len(free))})
    return d.relabel(mapping)


def random_braid_diagram(rng, max_crossings=8, max_strands=4) -> LinkDiagram:
    strands = rng.randint(2, max_strands)
    length = rng.randint(1, max_crossings)
    word = []
    for _ in range(length):
        g = rng.randint(1, strands - 1)
        word.append(g if rng.random() < 0.5 else -g)
    return braid_closure(word, strands)
