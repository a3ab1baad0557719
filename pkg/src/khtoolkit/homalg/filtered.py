"""Decreasing filtrations, map orders and spectral-sequence pages.

``F^p`` is spanned by the basis elements of level at least ``p``.  Pages
come from a persistence-style column reduction over a field: once the
differential is put in filtered normal form, each cancelling pair
``x -> y`` of level gap ``r`` survives on E_0 .. E_r and is killed by d_r,
and each unpaired generator lives to E_infinity.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import ChainComplex, ChainMap
from .matrix import SparseMatrix
from .snf import rank_mod_p, rank_q

__all__ = [
    "UnboundedFiltration",
    "FiltrationViolation",
    "FilteredComplex",
    "ord_matrix",
    "ord",
    "Page",
    "spectral_sequence",
    "associated_graded_homology",
]

INF = math.inf


class UnboundedFiltration(ValueError):
    pass


class FiltrationViolation(ValueError):
    pass


def ord_matrix(m: SparseMatrix, src_levels, tgt_levels):
    """min over nonzero entries of level(target) - level(source); inf for 0."""
    best = INF
    for j, col in m.cols.items():
        lj = src_levels[j]
        for i in col:
            k = tgt_levels[i] - lj
            if k < best:
                best = k
    return best


def ord(f: ChainMap, which="h", src_levels=None, tgt_levels=None):
    """Order of a map with respect to the h- or q-filtration.

    Levels default to the grades of source and target; explicit level lists
    override them.
    """
    k = {"h": 0, "q": 1}[which]
    sl = src_levels if src_levels is not None else [g[k] for g in f.source.grades]
    tl = tgt_levels if tgt_levels is not None else [g[k] for g in f.target.grades]
    return ord_matrix(f.matrix, sl, tl)


class FilteredComplex:
    """A complex with an integer level per generator (decreasing filtration)."""

    def __init__(self, complex: ChainComplex, levels, declared_order=0):
        levels = list(levels)
        if len(levels) != complex.size:
            raise ValueError("one level per generator is required")
        for lv in levels:
            if not isinstance(lv, int) or isinstance(lv, bool):
                raise UnboundedFiltration("level %r is not a finite integer" % (lv,))
        self.complex = complex
        self.levels = levels
        self.declared_order = declared_order
        o = ord_matrix(complex.d, levels, levels)
        if o < declared_order:
            raise FiltrationViolation("d has order %s below the declared %s" % (o, declared_order))

    @classmethod
    def by_grading(cls, c: ChainComplex, which="h", declared_order=0):
        k = {"h": 0, "q": 1}[which]
        return cls(c, [g[k] for g in c.grades], declared_order)

    @property
    def d_order(self):
        return ord_matrix(self.complex.d, self.levels, self.levels)

    def level_range(self):
        return (min(self.levels), max(self.levels)) if self.levels else (0, 0)


@dataclass
class Page:
    """E_r with ``dims[(p, h)]`` and ``d_rank[(p, h)]`` for d_r out of (p, h)."""

    r: int
    dims: dict = field(default_factory=dict)
    d_rank: dict = field(default_factory=dict)

    @property
    def total(self):
        return sum(self.dims.values())

    def d_is_zero(self):
        return not any(self.d_rank.values())

    def to_dict(self):
        return {"r": self.r,
                "dims": {"%d,%d" % k: v for k, v in sorted(self.dims.items())},
                "d_rank": {"%d,%d" % k: v for k, v in sorted(self.d_rank.items()) if v}}


def _pairs_f2(d: SparseMatrix, order):
    pos = {g: k for k, g in enumerate(order)}
    low_of = {}
    pairs = []
    for j in order:
        col = 0
        for i in d.cols.get(j, {}):
            if d.cols[j][i] % 2:
                col |= 1 << pos[i]
        while col:
            low = col.bit_length() - 1
            if low in low_of:
                col ^= low_of[low]
            else:
                low_of[low] = col
                pairs.append((order[low], j))
                break
    return pairs


def _pairs_q(d: SparseMatrix, order):
    pos = {g: k for k, g in enumerate(order)}
    low_of = {}
    pairs = []
    for j in order:
        col = {pos[i]: Fraction(v) for i, v in d.cols.get(j, {}).items() if v}
        while col:
            low = max(col)
            if low in low_of:
                piv = low_of[low]
                f = col[low] / piv[low]
                for k, v in piv.items():
                    w = col.get(k, 0) - f * v
                    if w:
                        col[k] = w
                    else:
                        col.pop(k, None)
            else:
                low_of[low] = col
                pairs.append((order[low], j))
                break
    return pairs


def persistence_pairs(fc: FilteredComplex, field="f2"):
    """Pairs ``(y, x)`` of generator indices with x cancelling against y."""
    c = fc.complex
    if fc.d_order < 0:
        raise FiltrationViolation("d does not preserve the filtration")
    # higher levels first, and within a level higher degree first, so every
    # prefix is a subcomplex
    order = sorted(range(c.size), key=lambda g: (-fc.levels[g], -c.grades[g][0], g))
    if field == "f2":
        return _pairs_f2(c.d, order)
    if field == "q":
        return _pairs_q(c.d, order)
    raise ValueError("spectral sequences are computed over 'f2' or 'q' only")


def spectral_sequence(fc: FilteredComplex, field="f2", r_max=None):
    """Pages E_0, E_1, ... until every later differential vanishes.

    The last page returned is E_infinity.  ``r_max`` caps the number of
    pages; the sequence is always bounded for a finite complex.
    """
    c = fc.complex
    pairs = persistence_pairs(fc, field)
    lv = fc.levels
    paired = {}
    lengths = []
    for y, x in pairs:
        r = lv[y] - lv[x]
        paired[x] = r
        paired[y] = r
        lengths.append((x, r))
    last = max((r for _, r in lengths), default=-1) + 1
    if r_max is not None:
        last = min(last, r_max)
    pages = []
    for r in range(last + 1):
        dims = defaultdict(int)
        for g in range(c.size):
            if g not in paired or paired[g] >= r:
                dims[(lv[g], c.grades[g][0])] += 1
        d_rank = defaultdict(int)
        for x, length in lengths:
            if length == r:
                d_rank[(lv[x], c.grades[x][0])] += 1
        pages.append(Page(r, dict(dims), dict(d_rank)))
    return pages


def e_infinity(fc: FilteredComplex, field="f2"):
    return spectral_sequence(fc, field)[-1].dims


def _rank(rows, field):
    return rank_mod_p(rows, 2) if field == "f2" else rank_q(rows)


def associated_graded_homology(fc: FilteredComplex, field="f2"):
    """``dim F^p H^h / F^{p+1} H^h`` computed from ranks alone.

    ``dim F^p H = dim(Z n F^p) - dim(B n F^p)`` with
    ``dim(Z n F^p) = dim F^p - rank(d | F^p)`` and
    ``dim(B n F^p) = rank d - rank(pi_{<p} d)``.
    """
    c = fc.complex
    lv = fc.levels
    by_h = defaultdict(list)
    for g, (h, q) in enumerate(c.grades):
        by_h[h].append(g)
    levels = sorted(set(lv))
    if not levels:
        return {}
    levels_ext = levels + [levels[-1] + 1]

    def dim_fh(h, p):
        src = [g for g in by_h.get(h, []) if lv[g] >= p]
        tgt = by_h.get(h + 1, [])
        rk = _rank(c.d.submatrix(tgt, src).to_dense(), field) if src and tgt else 0
        z = len(src) - rk
        prev = by_h.get(h - 1, [])
        here = by_h.get(h, [])
        if not prev or not here:
            return z
        full = _rank(c.d.submatrix(here, prev).to_dense(), field)
        low = [g for g in here if lv[g] < p]
        part = _rank(c.d.submatrix(low, prev).to_dense(), field) if low else 0
        return z - (full - part)

    out = {}
    for h in sorted(by_h):
        vals = [dim_fh(h, p) for p in levels_ext]
        for k, p in enumerate(levels):
            v = vals[k] - vals[k + 1]
            if v:
                out[(p, h)] = v
    return out
