"""Gaussian elimination of based chain complexes.

Cancelling an invertible entry ``d[b, a]`` removes the generators ``a`` and
``b`` and produces a homotopy equivalent complex.  :class:`Reduction` runs any
number of cancellations in place while keeping the inclusion, projection and
homotopy that certify the equivalence with the original complex.
"""

from __future__ import annotations

from fractions import Fraction

from .matrix import SparseMatrix

__all__ = ["EntryNotUnit", "Reduction", "ring_of"]


class EntryNotUnit(ValueError):
    pass


def ring_of(name):
    """Return ``(coerce, is_unit, inverse)`` for 'z', 'q' or 'f2'."""
    if name == "z":
        return int, (lambda x: x in (1, -1)), (lambda x: x)
    if name == "q":
        return Fraction, (lambda x: x != 0), (lambda x: 1 / x)
    if name == "f2":
        return (lambda x: int(x) % 2), (lambda x: x % 2 == 1), (lambda x: 1)
    raise ValueError("unknown coefficient ring %r" % name)


class Reduction:
    """Mutable reduced copy of a complex with its certificate maps.

    ``alive`` lists the surviving original generator indices.  ``inc[x]`` is
    the image of survivor x in the original complex, ``proj[s]`` is the
    functional giving the coefficient of survivor s in the projection, and
    ``htpy`` accumulates ``H`` with ``1 - inc proj = dH + Hd``.
    """

    def __init__(self, d: SparseMatrix, ring="z", track=True, track_homotopy=False):
        self.ring = ring
        self.coerce, self.is_unit, self.inverse = ring_of(ring)
        self.mod2 = ring == "f2"
        c = self.coerce
        self.n = d.ncols
        self.col = {j: {i: c(v) for i, v in col.items() if c(v)} for j, col in d.cols.items()}
        self.col = {j: col for j, col in self.col.items() if col}
        self.row = {}
        for j, col in self.col.items():
            for i, v in col.items():
                self.row.setdefault(i, {})[j] = v
        self.alive = set(range(self.n))
        self.track = track
        if track:
            self.inc = {x: {x: c(1)} for x in range(self.n)}
            self.proj = {x: {x: c(1)} for x in range(self.n)}
        self.htpy = {} if track_homotopy else None

    def _norm(self, v):
        return v % 2 if self.mod2 else v

    def entry(self, b, a):
        return self.col.get(a, {}).get(b, 0)

    def cancel(self, a, b):
        """Cancel source ``a`` against target ``b`` through ``d[b, a]``."""
        u = self.entry(b, a)
        if not self.is_unit(u):
            raise EntryNotUnit("entry d[%d,%d] = %s is not invertible" % (b, a, u))
        ui = self.inverse(u)
        col_a = {y: v for y, v in self.col.get(a, {}).items() if y != b}
        row_b = {x: v for x, v in self.row.get(b, {}).items() if x != a}
        norm = self._norm
        # zig-zag update of the differential
        for x, dbx in row_b.items():
            f = dbx * ui
            cx = self.col.setdefault(x, {})
            for y, dya in col_a.items():
                w = norm(cx.get(y, 0) - dya * f)
                ry = self.row.setdefault(y, {})
                if w:
                    cx[y] = w
                    ry[x] = w
                else:
                    cx.pop(y, None)
                    ry.pop(x, None)
        if self.track:
            if self.htpy is not None:
                ia, pb = self.inc[a], self.proj[b]
                for z, pz in pb.items():
                    hz = self.htpy.setdefault(z, {})
                    for o, io in ia.items():
                        w = norm(hz.get(o, 0) + ui * pz * io)
                        if w:
                            hz[o] = w
                        else:
                            hz.pop(o, None)
            ia = self.inc[a]
            for x, dbx in row_b.items():
                f = dbx * ui
                ix = self.inc[x]
                for o, v in ia.items():
                    w = norm(ix.get(o, 0) - f * v)
                    if w:
                        ix[o] = w
                    else:
                        ix.pop(o, None)
            pb = self.proj[b]
            for y, dya in col_a.items():
                f = dya * ui
                py = self.proj[y]
                for z, v in pb.items():
                    w = norm(py.get(z, 0) - f * v)
                    if w:
                        py[z] = w
                    else:
                        py.pop(z, None)
            for k in (a, b):
                del self.inc[k]
                del self.proj[k]
        for k in (a, b):
            for y in self.col.pop(k, {}):
                r = self.row.get(y)
                if r is not None:
                    r.pop(k, None)
            for x in self.row.pop(k, {}):
                c = self.col.get(x)
                if c is not None:
                    c.pop(k, None)
        self.alive.discard(a)
        self.alive.discard(b)

    def cancel_all(self, order=None):
        """Cancel invertible entries until none remain.

        ``order`` ranks generators; pivots are taken at the smallest source.
        """
        key = order or (lambda x: x)
        progress = True
        while progress:
            progress = False
            for a in sorted(self.col, key=key):
                col = self.col.get(a)
                if not col or a not in self.alive:
                    continue
                units = [b for b, v in col.items() if self.is_unit(v)]
                if units:
                    b = min(units, key=lambda y: (len(self.row.get(y, ())), key(y)))
                    self.cancel(a, b)
                    progress = True

    # exports ----------------------------------------------------------

    def survivors(self):
        return sorted(self.alive)

    def differential(self):
        """Reduced differential on ``survivors()`` as a SparseMatrix."""
        surv = self.survivors()
        pos = {x: k for k, x in enumerate(surv)}
        m = SparseMatrix(len(surv), len(surv))
        for x in surv:
            col = self.col.get(x)
            if col:
                m.cols[pos[x]] = {pos[y]: v for y, v in col.items()}
                if not m.cols[pos[x]]:
                    del m.cols[pos[x]]
        return m

    def include_matrix(self):
        surv = self.survivors()
        m = SparseMatrix(self.n, len(surv))
        for k, x in enumerate(surv):
            if self.inc[x]:
                m.cols[k] = dict(self.inc[x])
        return m

    def project_matrix(self):
        surv = self.survivors()
        m = SparseMatrix(len(surv), self.n)
        for k, s in enumerate(surv):
            for z, v in self.proj[s].items():
                m.cols.setdefault(z, {})[k] = v
        return m

    def homotopy_matrix(self):
        m = SparseMatrix(self.n, self.n)
        for z, col in (self.htpy or {}).items():
            if col:
                m.cols[z] = dict(col)
        return m
