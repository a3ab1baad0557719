"""Sparse matrices with exact (Python int or Fraction) entries."""

from __future__ import annotations

from typing import Iterable


class SparseMatrix:
    """Column-major sparse matrix: ``cols[j]`` maps row index to entry.

    Zero entries are never stored.
    """

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: dict | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = {}
        if cols:
            for j, col in cols.items():
                col = {i: v for i, v in col.items() if v}
                if col:
                    self.cols[j] = col

    # construction -----------------------------------------------------

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_entries(cls, nrows, ncols, entries: Iterable):
        m = cls(nrows, ncols)
        for i, j, v in entries:
            m.add_to(i, j, v)
        return m

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls.from_entries(nrows, ncols, ((i, j, v) for i, r in enumerate(rows)
                                               for j, v in enumerate(r) if v))

    @classmethod
    def diagonal(cls, values):
        values = list(values)
        return cls(len(values), len(values), {i: {i: v} for i, v in enumerate(values)})

    # access -----------------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.cols.get(j, {}).get(i, 0)

    def add_to(self, i, j, v):
        if not v:
            return
        col = self.cols.setdefault(j, {})
        w = col.get(i, 0) + v
        if w:
            col[i] = w
        else:
            del col[i]
            if not col:
                del self.cols[j]

    def entries(self):
        for j in sorted(self.cols):
            col = self.cols[j]
            for i in sorted(col):
                yield i, j, col[i]

    @property
    def nnz(self):
        return sum(len(c) for c in self.cols.values())

    def is_zero(self):
        return not self.cols

    def column(self, j):
        return dict(self.cols.get(j, {}))

    def rows(self):
        """Row-major copy: ``{i: {j: v}}``."""
        out = {}
        for j, col in self.cols.items():
            for i, v in col.items():
                out.setdefault(i, {})[j] = v
        return out

    def to_dense(self):
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in self.cols.items():
            for i, v in col.items():
                out[i][j] = v
        return out

    def submatrix(self, rows, cols):
        """Restrict to the given row and column index lists (order kept)."""
        rpos = {r: k for k, r in enumerate(rows)}
        out = SparseMatrix(len(rows), len(cols))
        for k, j in enumerate(cols):
            col = self.cols.get(j)
            if not col:
                continue
            sub = {rpos[i]: v for i, v in col.items() if i in rpos}
            if sub:
                out.cols[k] = sub
        return out

    def copy(self):
        m = SparseMatrix(self.nrows, self.ncols)
        m.cols = {j: dict(c) for j, c in self.cols.items()}
        return m

    # arithmetic -------------------------------------------------------

    @property
    def T(self):
        out = SparseMatrix(self.ncols, self.nrows)
        for j, col in self.cols.items():
            for i, v in col.items():
                out.cols.setdefault(i, {})[j] = v
        return out

    def __matmul__(self, other: "SparseMatrix"):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        out = SparseMatrix(self.nrows, other.ncols)
        mine = self.cols
        for j, col in other.cols.items():
            acc = {}
            for k, b in col.items():
                a_col = mine.get(k)
                if not a_col:
                    continue
                for i, a in a_col.items():
                    acc[i] = acc.get(i, 0) + a * b
            acc = {i: v for i, v in acc.items() if v}
            if acc:
                out.cols[j] = acc
        return out

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))
        out = self.copy()
        for j, col in other.cols.items():
            for i, v in col.items():
                out.add_to(i, j, sign * v)
        return out

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        if not c:
            return SparseMatrix(self.nrows, self.ncols)
        return SparseMatrix(self.nrows, self.ncols,
                            {j: {i: c * v for i, v in col.items()}
                             for j, col in self.cols.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def map_entries(self, fn):
        return SparseMatrix(self.nrows, self.ncols,
                            {j: {i: fn(v) for i, v in col.items()}
                             for j, col in self.cols.items()})

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def __repr__(self):
        return "SparseMatrix(%d x %d, nnz=%d)" % (self.nrows, self.ncols, self.nnz)
