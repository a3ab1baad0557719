"""Khovanov complexes, homology and the structural isomorphisms.

Generators are enhanced states ``(v, labels)`` where ``labels[k]`` is +1 or
-1 on the k-th circle of ``resolve(d, v)``.  The homological and quantum
gradings are ``|v| - n_-`` and ``|v| + sum(labels) + n_+ - 2 n_-``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict

from .cube import (MAX_CROSSINGS, SignAssignment, cochain_transform, edge_data, edges,
                   enumerate_states)
from .diagram import LinkDiagram, disjoint_union, mirror, resolve
from .homalg.complexes import (BigradedGroup, ChainComplex, ChainMap, ChainMapViolation,
                               dual, dual_label, homology, tensor)
from .homalg.matrix import SparseMatrix

__all__ = [
    "FrobeniusV",
    "KhovanovComplex",
    "LaurentPolynomial",
    "apply_edge",
    "build_ckh",
    "kh_homology",
    "graded_euler",
    "kauffman_jones",
    "disjoint_iso",
    "mirror_dual_iso",
    "induced_mirror_signs",
    "reversed_cube",
    "rescaling",
]

PLUS, MINUS = 1, -1


class FrobeniusV:
    """The rank two Frobenius algebra on {v+, v-} (encoded as +1, -1)."""

    basis = (PLUS, MINUS)
    deg = {PLUS: 1, MINUS: -1}

    @staticmethod
    def unit():
        return {(PLUS,): 1}

    @staticmethod
    def counit(x):
        return 1 if x == MINUS else 0

    @staticmethod
    def m(x, y):
        if x == PLUS and y == PLUS:
            return {(PLUS,): 1}
        if x == MINUS and y == MINUS:
            return {}
        return {(MINUS,): 1}

    @staticmethod
    def delta(x):
        if x == PLUS:
            return {(PLUS, MINUS): 1, (MINUS, PLUS): 1}
        return {(MINUS, MINUS): 1}

    # linear extensions on tensor words -------------------------------

    @classmethod
    def _apply(cls, vec, pos, width, fn):
        out = defaultdict(int)
        for word, c in vec.items():
            img = fn(*word[pos:pos + width])
            for w2, c2 in img.items():
                out[word[:pos] + w2 + word[pos + width:]] += c * c2
        return {w: c for w, c in out.items() if c}

    @classmethod
    def check(cls):
        """Unit, counit, (co)associativity and the Frobenius relations."""
        ok = True
        for x in cls.basis:
            ok &= cls.m(PLUS, x) == {(x,): 1} and cls.m(x, PLUS) == {(x,): 1}
            counit_left = defaultdict(int)
            for (a, b), c in cls.delta(x).items():
                counit_left[(b,)] += cls.counit(a) * c
            ok &= {k: v for k, v in counit_left.items() if v} == {(x,): 1}
        for x, y, z in itertools.product(cls.basis, repeat=3):
            v = {(x, y, z): 1}
            left = cls._apply(cls._apply(v, 0, 2, cls.m), 0, 2, cls.m)
            right = cls._apply(cls._apply(v, 1, 2, cls.m), 0, 2, cls.m)
            ok &= left == right
        for x in cls.basis:
            v = {(x,): 1}
            ok &= (cls._apply(cls._apply(v, 0, 1, cls.delta), 0, 1, cls.delta)
                   == cls._apply(cls._apply(v, 0, 1, cls.delta), 1, 1, cls.delta))
        for x, y in itertools.product(cls.basis, repeat=2):
            v = {(x, y): 1}
            dm = cls._apply(cls._apply(v, 0, 2, cls.m), 0, 1, cls.delta)
            left = cls._apply(cls._apply(v, 1, 1, cls.delta), 0, 2, cls.m)   # (m x id)(id x Delta)
            right = cls._apply(cls._apply(v, 0, 1, cls.delta), 1, 2, cls.m)  # (id x m)(Delta x id)
            ok &= left == dm and right == dm
        return bool(ok)


def apply_edge(ed, labels, r_after):
    """Image of an enhanced state's labels under the edge surgery ``ed``.

    Returns a list of ``(new_labels, coefficient)``; the sign of the edge is
    not included.
    """
    new = [0] * r_after
    for ci, cj in ed.bystanders.items():
        new[cj] = labels[ci]
    out = []
    if ed.kind == "merge":
        a, b = ed.before
        for word, c in FrobeniusV.m(labels[a], labels[b]).items():
            new[ed.after[0]] = word[0]
            out.append((tuple(new), c))
    else:
        a, b = ed.after
        for word, c in FrobeniusV.delta(labels[ed.before[0]]).items():
            new[a], new[b] = word
            out.append((tuple(new), c))
    return out


class KhovanovComplex(ChainComplex):
    """CKh(D) with the diagram, sign assignment and per-state data kept."""

    def __init__(self, diagram, signs, basis, grades, d, resolutions, check=False):
        super().__init__(basis, grades, d, check=check)
        self.diagram = diagram
        self.signs = signs
        self.resolutions = resolutions

    def gen(self, v, labels):
        return self.index[(tuple(v), tuple(labels))]

    def state_indices(self, v):
        v = tuple(v)
        return [k for k, b in enumerate(self.basis) if b[0] == v]


def build_ckh(d: LinkDiagram, e: SignAssignment | None = None,
              bound: int = MAX_CROSSINGS) -> KhovanovComplex:
    """The Khovanov complex of ``d`` with sign assignment ``e`` (standard by default)."""
    n = d.n
    e = e if e is not None else SignAssignment.standard(n)
    if e.n != n:
        raise ValueError("sign assignment is for %d crossings, diagram has %d" % (e.n, n))
    states = enumerate_states(n, bound)
    res = {v: resolve(d, v) for v in states}
    npos, nneg = d.n_plus, d.n_minus
    basis, grades = [], []
    for v in states:
        w = sum(v)
        for labels in itertools.product((PLUS, MINUS), repeat=res[v].r):
            basis.append((v, labels))
            grades.append((w - nneg, w + sum(labels) + npos - 2 * nneg))
    index = {b: k for k, b in enumerate(basis)}
    N = len(basis)
    dm = SparseMatrix(N, N)
    for u, v in edges(n):
        ed = edge_data(d, u, v, res[u], res[v])
        s = e(u, v)
        rv = res[v].r
        for labels in itertools.product((PLUS, MINUS), repeat=res[u].r):
            j = index[(u, labels)]
            for new, c in apply_edge(ed, labels, rv):
                i = index[(v, new)]
                if grades[i][1] != grades[j][1]:
                    raise AssertionError("edge map does not preserve the quantum grading")
                dm.add_to(i, j, s * c)
    return KhovanovComplex(d, e, basis, grades, dm, res)


def kh_homology(d: LinkDiagram, coeff="z", e: SignAssignment | None = None) -> BigradedGroup:
    return homology(build_ckh(d, e), coeff)


# ---------------------------------------------------------------------------
# Laurent polynomials and the Jones oracle


class LaurentPolynomial:
    """Integer Laurent polynomial in q, stored as ``{exponent: coefficient}``."""

    def __init__(self, coeffs=None):
        self.coeffs = {int(k): int(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def q(cls, k=1, c=1):
        return cls({k: c})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return LaurentPolynomial(out)

    def __neg__(self):
        return LaurentPolynomial({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPolynomial({k: v * other for k, v in self.coeffs.items()})
        out = defaultdict(int)
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                out[a + b] += x * y
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = LaurentPolynomial({0: 1})
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, LaurentPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def invert(self):
        """Substitute q -> 1/q."""
        return LaurentPolynomial({-k: v for k, v in self.coeffs.items()})

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            mono = "1" if k == 0 else ("q" if k == 1 else "q^%d" % k)
            mag = abs(c)
            body = mono if mag == 1 else ("%d" % mag if k == 0 else "%d%s" % (mag, mono))
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return "LaurentPolynomial(%s)" % self

    @classmethod
    def parse(cls, text):
        """Inverse of ``str`` for the forms it produces."""
        text = text.replace(" ", "")
        if text == "0":
            return cls()
        out = defaultdict(int)
        for sign, body in _terms(text):
            if "q" in body:
                c, _, e = body.partition("q")
                c = int(c) if c else 1
                e = int(e[1:]) if e.startswith("^") else 1
            else:
                c, e = int(body), 0
            out[e] += sign * c
        return cls(out)


def _terms(text):
    k = 0
    sign = 1
    buf = ""
    while k < len(text):
        ch = text[k]
        if ch in "+-" and buf and not buf.endswith("^"):
            yield sign, buf
            buf = ""
            sign = -1 if ch == "-" else 1
        elif ch == "-" and not buf:
            sign = -1
        elif ch == "+" and not buf:
            sign = 1
        else:
            buf += ch
        k += 1
    if buf:
        yield sign, buf


def graded_euler(d: LinkDiagram, group: BigradedGroup | None = None) -> LaurentPolynomial:
    """sum over (i, j) of (-1)^i rank_Q Kh^{i,j} q^j."""
    g = group if group is not None else kh_homology(d, "q")
    out = defaultdict(int)
    for (i, j), (r, _) in g.data.items():
        out[j] += (-1) ** (i % 2) * r
    return LaurentPolynomial(out)


def _circle_count(d: LinkDiagram, v) -> int:
    # union-find on arcs; independent of the traversal used by resolve
    parent = {a: a for x in d.crossings for a in x.arcs}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x, b in zip(d.crossings, v):
        a0, a1, a2, a3 = x.arcs
        pairs = ((a0, a1), (a2, a3)) if b == 0 else ((a0, a3), (a1, a2))
        for p, q in pairs:
            parent[find(p)] = find(q)
    return len({find(a) for a in parent}) + len(d.loops)


def kauffman_jones(d: LinkDiagram) -> LaurentPolynomial:
    """Unnormalised Jones polynomial from the Kauffman state sum."""
    loop = LaurentPolynomial({1: 1, -1: 1})
    total = LaurentPolynomial()
    for v in itertools.product((0, 1), repeat=d.n):
        w = sum(v)
        total = total + LaurentPolynomial({w: (-1) ** w}) * loop ** _circle_count(d, v)
    npos, nneg = d.n_plus, d.n_minus
    return total * LaurentPolynomial({npos - 2 * nneg: (-1) ** nneg})


# ---------------------------------------------------------------------------
# structural isomorphisms


def _permutation_map(source, target, image):
    """ChainMap sending source basis k to ``image(label) = (target label, sign)``."""
    m = SparseMatrix(target.size, source.size)
    for k, b in enumerate(source.basis):
        lab, s = image(b)
        m.add_to(target.index[lab], k, s)
    return ChainMap(source, target, m)


def _check_iso(f: ChainMap, what):
    if not f.is_isomorphism():
        raise ChainMapViolation("%s is not a basis bijection" % what)
    if not f.commutes():
        raise ChainMapViolation("%s does not commute with the differentials" % what)
    if f.bidegree_violations():
        raise ChainMapViolation("%s does not preserve the bigrading" % what)
    return f


def disjoint_iso(d1: LinkDiagram, d2: LinkDiagram) -> ChainMap:
    """CKh(d1) (x) CKh(d2) -> CKh(d1 u d2), ``(x, y) -> x u y``.

    The tensor sign is ``(-1)^(gr_h(x) + n_-(d1)) = (-1)^|u|``, which makes
    the map the identity on enhanced states with the standard signs.
    """
    c1, c2 = build_ckh(d1), build_ckh(d2)
    c12 = build_ckh(disjoint_union(d1, d2))
    t = tensor(c1, c2, sign_offset=d1.n_minus)

    def image(b):
        (u1, l1), (u2, l2) = b
        return (u1 + u2, l1 + l2), 1

    return _check_iso(_permutation_map(t, c12, image), "disjoint union map")


def _bar(v):
    return tuple(1 - b for b in v)


def induced_mirror_signs(e: SignAssignment) -> SignAssignment:
    """Sign assignment on the mirror cube with ``e*(u, w) = e(w bar, u bar)``."""
    return SignAssignment.from_function(e.n, lambda u, w: e(_bar(w), _bar(u)))


def rescaling(c: KhovanovComplex, e2: SignAssignment, target: KhovanovComplex) -> ChainMap:
    """Diagonal chain isomorphism CKh(D, e) -> CKh(D, e2) from the 0-cochain."""
    f = cochain_transform(c.signs, e2)
    return _permutation_map(c, target, lambda b: (b, f[b[0]]))


def mirror_dual_iso(d: LinkDiagram, standard_target=False):
    """Chain isomorphism CKh(D*) -> CKh(D)* with ``(v, x) -> (v bar, -x)*``.

    CKh(D*) carries the sign assignment induced from the standard one on D.
    With ``standard_target`` the map is precomposed with the rescaling from
    the standard assignment on D*, so the source is CKh(D*) with standard
    signs.  Returns the ChainMap; the source complex is ``f.source``.
    """
    c = build_ckh(d)
    star = mirror(d)
    e_star = induced_mirror_signs(c.signs)
    cs = build_ckh(star, e_star)
    cd = dual(c)

    def image(b):
        v, labels = b
        return dual_label((_bar(v), tuple(-x for x in labels))), 1

    f = _check_iso(_permutation_map(cs, cd, image), "mirror duality map")
    if not standard_target:
        return f
    std = build_ckh(star)
    r = rescaling(std, e_star, cs)
    return _check_iso(f @ r, "rescaled mirror duality map")


def reversed_cube(d: LinkDiagram):
    """Descending cube complex with filtration gradings, and gamma.

    The edge map from C_v to C_u (v > u) is the transpose of the Khovanov
    edge map, with gradings ``h = -|v| + n_-`` and ``q = Q - |v| - n_+ + 2n_-``
    where Q is the degree read through gamma.  gamma sends ``(v, x)`` to
    ``(v bar, -x)`` in CKh(D*) with standard signs, rescaled vertexwise by
    the 0-cochain relating the induced and standard assignments.
    """
    c = build_ckh(d)
    npos, nneg = d.n_plus, d.n_minus
    basis = [("rev",) + b for b in c.basis]
    grades = []
    for v, labels in c.basis:
        w = sum(v)
        Q = -sum(labels)
        grades.append((-w + nneg, Q - w - npos + 2 * nneg))
    rc = ChainComplex(basis, grades, c.d.T, check=True)
    star = mirror(d)
    std = build_ckh(star)
    f = cochain_transform(induced_mirror_signs(c.signs), std.signs)

    def image(b):
        _, v, labels = b
        vb = _bar(v)
        return (vb, tuple(-x for x in labels)), f[vb]

    gamma = _check_iso(_permutation_map(rc, std, image), "gamma")
    return rc, gamma
