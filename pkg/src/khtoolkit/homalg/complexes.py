"""Based cochain complexes, chain maps and bigraded homology.

A complex here is one global basis with a bigrade ``(h, q)`` per generator
and a single sparse differential of homological degree +1.  Degree-wise
views (``module(i)``, ``differential(i)``) are slices of that matrix.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass

from .linsolve import solvable_z, solve_q
from .matrix import SparseMatrix
from .reduction import Reduction
from .snf import invariant_factors, rank_q

__all__ = [
    "NotAComplex",
    "ChainMapViolation",
    "BasedModule",
    "ChainComplex",
    "ChainMap",
    "BigradedGroup",
    "homology",
    "tensor",
    "dual",
    "is_chain_homotopic",
    "homotopy_solve",
    "induced_map",
    "gaussian_eliminate",
    "eliminate_all",
    "HomologyBasis",
    "dual_label",
]


class NotAComplex(ValueError):
    pass


class ChainMapViolation(ValueError):
    pass


@dataclass(frozen=True)
class BasedModule:
    basis: tuple
    bigrade: tuple

    @property
    def rank(self):
        return len(self.basis)


class ChainComplex:
    """Free complex with distinguished basis; ``d`` raises h by one."""

    def __init__(self, basis, grades, d: SparseMatrix, check=True):
        self.basis = list(basis)
        self.grades = [tuple(g) for g in grades]
        if len(self.grades) != len(self.basis):
            raise ValueError("one bigrade per basis element is required")
        if d.shape != (len(self.basis), len(self.basis)):
            raise ValueError("differential has shape %s for rank %d" % (d.shape, len(self.basis)))
        self.d = d
        self.index = {b: k for k, b in enumerate(self.basis)}
        if len(self.index) != len(self.basis):
            raise ValueError("basis labels must be unique")
        if check:
            for j, col in d.cols.items():
                for i in col:
                    if self.grades[i][0] != self.grades[j][0] + 1:
                        raise NotAComplex("entry d[%d,%d] does not raise h by one" % (i, j))

    @property
    def size(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def degrees(self):
        return sorted({g[0] for g in self.grades})

    def bigrades(self):
        return sorted(set(self.grades))

    def indices(self, h=None, q=None):
        return [k for k, g in enumerate(self.grades)
                if (h is None or g[0] == h) and (q is None or g[1] == q)]

    def module(self, i):
        idx = self.indices(h=i)
        return BasedModule(tuple(self.basis[k] for k in idx), tuple(self.grades[k] for k in idx))

    def differential(self, i):
        """Matrix of ``d: C^i -> C^{i+1}`` in the module bases."""
        return self.d.submatrix(self.indices(h=i + 1), self.indices(h=i))

    def d_squared_is_zero(self):
        return (self.d @ self.d).is_zero()

    def preserves_q(self):
        return all(self.grades[i][1] == self.grades[j][1]
                   for j, col in self.d.cols.items() for i in col)

    def blocks(self):
        """Indices grouped by bigrade."""
        out = defaultdict(list)
        for k, g in enumerate(self.grades):
            out[g].append(k)
        return dict(out)

    def export(self):
        """Matrix-market-like text form, 1-based like the MM exchange format."""
        lines = ["%%KhComplex 1", "%% basis %d" % self.size]
        for k, (b, g) in enumerate(zip(self.basis, self.grades)):
            lines.append("%d %d %d %s" % (k + 1, g[0], g[1], _label_text(b)))
        ent = list(self.d.entries())
        lines.append("%% differential %d %d %d" % (self.size, self.size, len(ent)))
        for i, j, v in ent:
            lines.append("%d %d %s" % (i + 1, j + 1, v))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_export(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("%%KhComplex"):
            raise ValueError("not a complex export")
        n = int(lines[1].split()[-1])
        basis, grades = [], []
        for ln in lines[2:2 + n]:
            k, h, q, lab = ln.split(" ", 3)
            basis.append(lab)
            grades.append((int(h), int(q)))
        d = SparseMatrix(n, n)
        for ln in lines[3 + n:]:
            i, j, v = ln.split()
            d.add_to(int(i) - 1, int(j) - 1, int(v))
        return cls(basis, grades, d)

    def __repr__(self):
        return "ChainComplex(rank=%d, degrees=%s)" % (self.size, self.degrees())


def _label_text(b):
    return json.dumps(b, default=str, separators=(",", ":"))


class ChainMap:
    """Matrix ``target.size x source.size`` with a declared bidegree."""

    def __init__(self, source: ChainComplex, target: ChainComplex, matrix: SparseMatrix,
                 bidegree=(0, 0)):
        if matrix.shape != (target.size, source.size):
            raise ValueError("map matrix has shape %s, expected %s"
                             % (matrix.shape, (target.size, source.size)))
        self.source = source
        self.target = target
        self.matrix = matrix
        self.bidegree = tuple(bidegree)

    def commutes(self):
        return self.target.d @ self.matrix == self.matrix @ self.source.d

    def check(self):
        if not self.commutes():
            raise ChainMapViolation("d' f != f d")
        bad = self.bidegree_violations()
        if bad:
            raise ChainMapViolation("%d entries violate the bidegree %s" % (len(bad), self.bidegree))
        return self

    def bidegree_violations(self):
        dh, dq = self.bidegree
        sg, tg = self.source.grades, self.target.grades
        return [(i, j) for j, col in self.matrix.cols.items() for i in col
                if (tg[i][0] - sg[j][0], tg[i][1] - sg[j][1]) != (dh, dq)]

    def __matmul__(self, other: "ChainMap"):
        """Composition ``self after other``."""
        if other.target.size != self.source.size:
            raise ValueError("maps are not composable")
        return ChainMap(other.source, self.target, self.matrix @ other.matrix,
                        (self.bidegree[0] + other.bidegree[0], self.bidegree[1] + other.bidegree[1]))

    def scale(self, c):
        return ChainMap(self.source, self.target, self.matrix.scale(c), self.bidegree)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return ChainMap(self.source, self.target, self.matrix - other.matrix, self.bidegree)

    def __add__(self, other):
        return ChainMap(self.source, self.target, self.matrix + other.matrix, self.bidegree)

    @classmethod
    def identity(cls, c: ChainComplex):
        return cls(c, c, SparseMatrix.identity(c.size))

    @classmethod
    def zero(cls, source, target, bidegree=(0, 0)):
        return cls(source, target, SparseMatrix(target.size, source.size), bidegree)

    def is_isomorphism(self):
        """Square map whose matrix is a signed permutation."""
        m = self.matrix
        if m.nrows != m.ncols or len(m.cols) != m.ncols:
            return False
        seen = set()
        for col in m.cols.values():
            if len(col) != 1:
                return False
            (i, v), = col.items()
            if v not in (1, -1) or i in seen:
                return False
            seen.add(i)
        return True


class BigradedGroup:
    """``{(i, j): (rank, torsion)}`` with torsion a tuple of invariant factors >= 2."""

    def __init__(self, data=None, coeff="z"):
        self.coeff = coeff
        self.data = {}
        for k, (r, t) in (data or {}).items():
            t = tuple(sorted(int(x) for x in t))
            if r or t:
                self.data[tuple(k)] = (int(r), t)

    def rank(self, i, j):
        return self.data.get((i, j), (0, ()))[0]

    def torsion(self, i, j):
        return self.data.get((i, j), (0, ()))[1]

    def ranks(self):
        return {k: r for k, (r, t) in self.data.items() if r}

    def total_rank(self):
        return sum(r for r, _ in self.data.values())

    def bigrades(self):
        return sorted(self.data)

    def __eq__(self, other):
        return isinstance(other, BigradedGroup) and self.data == other.data

    def __repr__(self):
        return "BigradedGroup(%s)" % self.poincare()

    def to_dict(self):
        return {"(%d,%d)" % k: {"rank": r, "torsion": list(t)}
                for k, (r, t) in sorted(self.data.items())}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), sort_keys=False, **kw)

    @classmethod
    def from_json(cls, text, coeff="z"):
        raw = json.loads(text) if isinstance(text, str) else text
        data = {}
        for key, val in raw.items():
            i, j = key.strip("()").split(",")
            data[(int(i), int(j))] = (val["rank"], val.get("torsion", []))
        return cls(data, coeff)

    def poincare(self):
        """Text rendering: sum of rank t^i q^j, torsion as Z/n[t^i q^j]."""
        terms = []
        for (i, j), (r, t) in sorted(self.data.items()):
            mono = "t^%d q^%d" % (i, j)
            if r:
                terms.append(mono if r == 1 else "%d %s" % (r, mono))
            for n in t:
                terms.append("Z/%d[%s]" % (n, mono))
        return " + ".join(terms) if terms else "0"


def _blocks_by(c: ChainComplex, use_q: bool):
    out = defaultdict(list)
    for k, (h, q) in enumerate(c.grades):
        out[(h, q if use_q else 0)].append(k)
    return out


def homology(c: ChainComplex, coeff="z", check=True) -> BigradedGroup:
    """Bigraded homology over 'z', 'q' or 'f2'.

    Unit pivots are cancelled first; over a field that leaves a zero
    differential, over Z the remainder is handled by Smith normal form per
    bigrade.  Blocks are per (h, q) when d preserves q, else q is reported 0.
    """
    if check and not c.d_squared_is_zero():
        raise NotAComplex("d o d != 0")
    use_q = c.preserves_q()
    red = Reduction(c.d, ring=coeff, track=False)
    red.cancel_all(order=lambda x: (c.grades[x], x))
    alive = red.survivors()
    if coeff in ("q", "f2"):
        counts = defaultdict(int)
        for x in alive:
            h, q = c.grades[x]
            counts[(h, q if use_q else 0)] += 1
        return BigradedGroup({k: (v, ()) for k, v in counts.items()}, coeff)
    groups = defaultdict(list)
    for x in alive:
        h, q = c.grades[x]
        groups[(h, q if use_q else 0)].append(x)
    data = {}
    for (h, q), gens in groups.items():
        inc = groups.get((h - 1, q), [])
        out = groups.get((h + 1, q), [])
        r_out = _rank_block(red, out, gens)
        factors = _factors_block(red, gens, inc)
        free = len(gens) - r_out - len(factors)
        data[(h, q)] = (free, tuple(f for f in factors if f > 1))
    return BigradedGroup(data, coeff)


def _dense_block(red, rows, cols):
    rpos = {r: k for k, r in enumerate(rows)}
    M = [[0] * len(cols) for _ in rows]
    for k, x in enumerate(cols):
        for y, v in red.col.get(x, {}).items():
            if y in rpos:
                M[rpos[y]][k] = v
    return M


def _rank_block(red, rows, cols):
    if not rows or not cols:
        return 0
    return rank_q(_dense_block(red, rows, cols))


def _factors_block(red, rows, cols):
    if not rows or not cols:
        return []
    return invariant_factors(_dense_block(red, rows, cols))


def tensor(c1: ChainComplex, c2: ChainComplex, sign_offset=0) -> ChainComplex:
    """Tensor product with ``d(x (x) y) = dx (x) y + (-1)^(h(x)+offset) x (x) dy``."""
    n1, n2 = c1.size, c2.size
    basis = [(a, b) for a in c1.basis for b in c2.basis]
    grades = [(g1[0] + g2[0], g1[1] + g2[1]) for g1 in c1.grades for g2 in c2.grades]
    d = SparseMatrix(n1 * n2, n1 * n2)
    for x in range(n1):
        sign = -1 if (c1.grades[x][0] + sign_offset) % 2 else 1
        for y in range(n2):
            col = {}
            for x2, v in c1.d.cols.get(x, {}).items():
                col[x2 * n2 + y] = col.get(x2 * n2 + y, 0) + v
            for y2, v in c2.d.cols.get(y, {}).items():
                col[x * n2 + y2] = col.get(x * n2 + y2, 0) + sign * v
            col = {i: v for i, v in col.items() if v}
            if col:
                d.cols[x * n2 + y] = col
    return ChainComplex(basis, grades, d, check=False)


class _Dual(tuple):
    """Marker for a dual basis label; ``_Dual((b,))`` stands for b*."""

    def __repr__(self):
        return "%r*" % (self[0],)


def dual_label(b):
    return b[0] if isinstance(b, _Dual) else _Dual((b,))


def dual(c: ChainComplex) -> ChainComplex:
    """Dual complex: transposed differential, bigrades negated."""
    return ChainComplex([dual_label(b) for b in c.basis],
                        [(-h, -q) for h, q in c.grades], c.d.T, check=False)


def homotopy_solve(f: ChainMap, g: ChainMap, ring="q"):
    """Find H with ``f - g = d' H + H d``, or None.

    H lowers h by one and shifts q by the maps' q-degree.  Over 'q' a
    solution matrix is returned; over 'z' the answer is only True/None
    (solvability through Smith normal form of the assembled system).
    """
    src, tgt = f.source, f.target
    dh, dq = f.bidegree
    diff = f.matrix - g.matrix
    by_grade = defaultdict(list)
    for y, gr in enumerate(tgt.grades):
        by_grade[gr].append(y)
    # unknowns H[z, x] with grade(z) = grade(x) + (dh - 1, dq)
    # equations (y, x) with grade(y) = grade(x) + (dh, dq)
    # the system splits by the source q-grade because both d's preserve q
    eq_blocks = defaultdict(dict)  # q -> {(y, x): {unknown: coeff}}
    rhs_blocks = defaultdict(dict)
    sd_rows = src.d.rows()
    for x, (h, q) in enumerate(src.grades):
        for y in by_grade.get((h + dh, q + dq), []):
            eq_blocks[q][(y, x)] = {}
            rhs_blocks[q][(y, x)] = diff[y, x]
    for x, (h, q) in enumerate(src.grades):
        for z in by_grade.get((h + dh - 1, q + dq), []):
            # (d' H)[y, x] += d'[y, z] H[z, x]
            for y, v in tgt.d.cols.get(z, {}).items():
                row = eq_blocks[q].get((y, x))
                if row is not None:
                    row[(z, x)] = row.get((z, x), 0) + v
            # (H d)[z, w] += H[z, x] d[x, w]
            for w, v in sd_rows.get(x, {}).items():
                row = eq_blocks[src.grades[w][1]].get((z, w))
                if row is not None:
                    row[(z, x)] = row.get((z, x), 0) + v
    for q, eqs in eq_blocks.items():
        for key, val in rhs_blocks[q].items():
            if val and not eqs[key]:
                return None
    H = SparseMatrix(tgt.size, src.size)
    for q in sorted(eq_blocks):
        keys = list(eq_blocks[q])
        rows = [eq_blocks[q][k] for k in keys]
        rhs = [rhs_blocks[q][k] for k in keys]
        if not any(rhs):
            continue
        rows_nz = [(r, b) for r, b in zip(rows, rhs) if r or b]
        if ring == "z":
            # an integral rational solution already settles it
            sol = solve_q([r for r, _ in rows_nz], [b for _, b in rows_nz])
            if sol is None:
                return None
            if all(getattr(v, "denominator", 1) == 1 for v in sol.values()):
                continue
            unknowns = sorted({u for r, _ in rows_nz for u in r})
            if not solvable_z([r for r, _ in rows_nz], [b for _, b in rows_nz], unknowns):
                return None
            continue
        sol = solve_q([r for r, _ in rows_nz], [b for _, b in rows_nz])
        if sol is None:
            return None
        for (z, x), v in sol.items():
            H.add_to(z, x, v)
    if ring == "z":
        return True
    if tgt.d @ H + H @ src.d != diff:
        raise ArithmeticError("homotopy solve returned a non-solution")
    return H


def is_chain_homotopic(f: ChainMap, g: ChainMap, ring="z") -> bool:
    """True iff ``f - g = d' H + H d`` has a solution over the given ring."""
    if f.source is not g.source and f.source.size != g.source.size:
        raise ValueError("maps have different sources")
    if (f.matrix - g.matrix).is_zero():
        return True
    return homotopy_solve(f, g, ring=ring) is not None


class HomologyBasis:
    """Field-coefficient homology basis from a tracked reduction."""

    def __init__(self, c: ChainComplex, field="q"):
        self.complex = c
        red = Reduction(c.d, ring=field, track=True)
        red.cancel_all(order=lambda x: (c.grades[x], x))
        if any(red.col.get(x) for x in red.alive):
            raise NotAComplex("reduced differential is not zero")
        self.field = field
        self.survivors = red.survivors()
        self.include = red.include_matrix()
        self.project = red.project_matrix()

    def grades(self):
        return [self.complex.grades[x] for x in self.survivors]


def induced_map(f: ChainMap, field="q", bases=None):
    """Matrices of ``f_*`` per source bigrade over a field.

    Returns ``{(i, j): dense matrix}`` with rows indexed by the target
    homology generators in bigrade ``(i, j) + bidegree`` and columns by the
    source generators in ``(i, j)``.  Bases are taken from a deterministic
    reduction, so results are comparable across calls.
    """
    hs = bases[0] if bases else HomologyBasis(f.source, field)
    ht = bases[1] if bases else HomologyBasis(f.target, field)
    m = ht.project @ f.matrix @ hs.include
    if field == "f2":
        m = m.map_entries(lambda v: int(v) % 2)
    sg, tg = hs.grades(), ht.grades()
    dh, dq = f.bidegree
    out = {}
    for g in sorted(set(sg)):
        cols = [k for k, gg in enumerate(sg) if gg == g]
        rows = [k for k, gg in enumerate(tg) if gg == (g[0] + dh, g[1] + dq)]
        out[g] = m.submatrix(rows, cols).to_dense()
    return out


def gaussian_eliminate(c: ChainComplex, entry, ring="z"):
    """Cancel ``d[b, a]`` (a unit) and return the certified equivalence.

    ``entry`` is ``(b, a)``: row (target) and column (source) of the pivot.
    Returns ``(reduced, include, project, htpy)`` where include and project
    are ChainMaps and htpy a SparseMatrix with
    ``1 - include o project = d H + H d`` and ``project o include = 1``.
    """
    b, a = entry
    red = Reduction(c.d, ring=ring, track=True, track_homotopy=True)
    red.cancel(a, b)
    return _package(c, red)


def _package(c, red):
    surv = red.survivors()
    reduced = ChainComplex([c.basis[x] for x in surv], [c.grades[x] for x in surv],
                           red.differential(), check=False)
    inc = ChainMap(reduced, c, red.include_matrix())
    proj = ChainMap(c, reduced, red.project_matrix())
    return reduced, inc, proj, red.homotopy_matrix()


def eliminate_all(c: ChainComplex, ring="z", homotopy=False):
    """Cancel every unit entry (pivot order: lowest h, then q, then basis)."""
    red = Reduction(c.d, ring=ring, track=True, track_homotopy=homotopy)
    red.cancel_all(order=lambda x: (c.grades[x], x))
    return _package(c, red)
