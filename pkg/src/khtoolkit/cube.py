"""Cube of resolutions: states, edges, and sign assignments."""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass

from .diagram import LinkDiagram, ResolvedDiagram, resolve

__all__ = [
    "CubeError",
    "CubeTooLarge",
    "NotAdjacent",
    "IncompleteAssignment",
    "NoTransform",
    "MAX_CROSSINGS",
    "weight",
    "enumerate_states",
    "adjacent_index",
    "EdgeData",
    "edge_data",
    "standard_sign",
    "SignAssignment",
    "verify_sign_assignment",
    "cochain_transform",
]

MAX_CROSSINGS = 20


class CubeError(ValueError):
    pass


class CubeTooLarge(CubeError):
    pass


class NotAdjacent(CubeError):
    pass


class IncompleteAssignment(CubeError):
    pass


class NoTransform(CubeError):
    pass


def weight(v):
    return sum(v)


def enumerate_states(n: int, bound: int = MAX_CROSSINGS):
    """All states of the n-cube, sorted by weight then lexicographically."""
    if n < 0:
        raise CubeError("negative crossing count")
    if n > bound:
        raise CubeTooLarge("%d crossings exceeds the bound %d" % (n, bound))
    states = list(itertools.product((0, 1), repeat=n))
    states.sort(key=lambda v: (sum(v), v))
    return states


def adjacent_index(u, v):
    """Index where ``u < v`` differ, raising NotAdjacent otherwise."""
    if len(u) != len(v):
        raise NotAdjacent("states of different length")
    diff = [i for i in range(len(u)) if u[i] != v[i]]
    if len(diff) != 1 or u[diff[0]] != 0:
        raise NotAdjacent("%s -> %s is not a cube edge" % (u, v))
    return diff[0]


def edges(n):
    for u in itertools.product((0, 1), repeat=n):
        for i in range(n):
            if u[i] == 0:
                yield u, u[:i] + (1,) + u[i + 1:]


@dataclass(frozen=True)
class EdgeData:
    """Surgery between adjacent resolutions.

    For a merge ``before`` holds two circle indices of D_u and ``after`` one
    of D_v; for a split the other way round.  ``bystanders`` maps each
    untouched circle of D_u to the equal circle of D_v.
    """

    u: tuple
    v: tuple
    index: int
    kind: str
    before: tuple
    after: tuple
    bystanders: dict


def edge_data(d: LinkDiagram, u, v, ru: ResolvedDiagram | None = None,
              rv: ResolvedDiagram | None = None) -> EdgeData:
    i = adjacent_index(tuple(u), tuple(v))
    ru = ru or resolve(d, u)
    rv = rv or resolve(d, v)
    site_u = sorted(set(ru.site_incidence[i]))
    site_v = sorted(set(rv.site_incidence[i]))
    if len(site_u) == 2 and len(site_v) == 1:
        kind = "merge"
    elif len(site_u) == 1 and len(site_v) == 2:
        kind = "split"
    else:
        raise CubeError("edge %s -> %s is neither a merge nor a split" % (u, v))
    by = {}
    for ci, circ in enumerate(ru.circles):
        if ci in site_u:
            continue
        cj = rv.circle_of[circ[0]]
        if rv.circles[cj] != circ:
            raise CubeError("bystander circle changed across an edge")
        by[ci] = cj
    if kind == "split":
        # order the two new circles by which side of the site they touch
        x = d.crossings[i].arcs
        a_circle = rv.circle_of[x[0]]
        other = [c for c in site_v if c != a_circle][0]
        after = (a_circle, other)
    else:
        x = d.crossings[i].arcs
        a_circle = ru.circle_of[x[0]]
        other = [c for c in site_u if c != a_circle][0]
        site_u = [a_circle, other]
        after = tuple(site_v)
    return EdgeData(tuple(u), tuple(v), i, kind, tuple(site_u), after, by)


def standard_sign(u, v) -> int:
    """(-1) to the number of 1s before the changing coordinate."""
    i = adjacent_index(tuple(u), tuple(v))
    return -1 if sum(u[:i]) % 2 else 1


class SignAssignment:
    """A sign for every cube edge.  With no table, the standard assignment."""

    def __init__(self, n: int, values: dict | None = None):
        self.n = n
        self.values = None if values is None else {
            (tuple(u), tuple(v)): int(s) for (u, v), s in values.items()}

    @classmethod
    def standard(cls, n):
        return cls(n)

    @classmethod
    def from_function(cls, n, fn):
        return cls(n, {(u, v): fn(u, v) for u, v in edges(n)})

    @property
    def is_standard(self):
        return self.values is None

    def __call__(self, u, v):
        if self.values is None:
            return standard_sign(u, v)
        try:
            return self.values[(tuple(u), tuple(v))]
        except KeyError:
            raise IncompleteAssignment("no sign on %s -> %s" % (u, v)) from None

    def table(self):
        return {(u, v): self(u, v) for u, v in edges(self.n)}

    def flipped_at(self, vertex):
        """Multiply every edge touching ``vertex`` by -1 (coboundary of a point)."""
        vertex = tuple(vertex)
        t = self.table()
        for (u, v) in t:
            if vertex in (u, v):
                t[(u, v)] = -t[(u, v)]
        return SignAssignment(self.n, t)

    def to_json(self):
        rows = [[list(u), list(v), s] for (u, v), s in sorted(self.table().items())]
        return json.dumps(rows)

    @classmethod
    def from_json(cls, text):
        rows = json.loads(text)
        if not rows:
            return cls(0, {})
        n = len(rows[0][0])
        return cls(n, {(tuple(u), tuple(v)): s for u, v, s in rows})


def verify_sign_assignment(e: SignAssignment, n: int) -> bool:
    """Every square u -> v, v' -> w must anticommute."""
    for u in itertools.product((0, 1), repeat=n):
        zeros = [i for i in range(n) if u[i] == 0]
        for i, j in itertools.combinations(zeros, 2):
            v = u[:i] + (1,) + u[i + 1:]
            v2 = u[:j] + (1,) + u[j + 1:]
            w = v[:j] + (1,) + v[j + 1:]
            if e(v, w) * e(u, v) + e(v2, w) * e(u, v2) != 0:
                return False
    return True


def cochain_transform(e: SignAssignment, e2: SignAssignment) -> dict:
    """Vertex signs f with e(u,v) * e2(u,v) == f(u) * f(v) on every edge.

    Found by breadth-first propagation from the zero state and then checked
    on every remaining edge.
    """
    if e.n != e2.n:
        raise NoTransform("assignments live on different cubes")
    n = e.n
    root = (0,) * n
    f = {root: 1}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for i in range(n):
            w = u[:i] + (1 - u[i],) + u[i + 1:]
            if w in f:
                continue
            a, b = (u, w) if u[i] == 0 else (w, u)
            f[w] = f[u] * e(a, b) * e2(a, b)
            queue.append(w)
    for u, v in edges(n):
        if e(u, v) * e2(u, v) != f[u] * f[v]:
            raise NoTransform("assignments do not differ by a coboundary")
    return f
