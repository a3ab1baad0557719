"""Sparse exact linear systems ``A x = b``."""

from __future__ import annotations

import heapq
from fractions import Fraction

from .snf import invariant_factors

__all__ = ["solve_q", "solvable_z"]


def _num(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def solve_q(rows, rhs):
    """Solve a sparse system over the rationals.

    ``rows`` is a list of ``{unknown: coefficient}`` dicts and ``rhs`` the
    matching right-hand sides.  Returns ``{unknown: value}`` (free unknowns
    set to zero) or None when the system is inconsistent.

    Forward elimination to echelon form, preferring unit pivots so that
    the mostly +-1 systems met in practice stay in integers, then one
    back-substitution pass.
    """
    pivots = {}  # pivot unknown -> (rank, row without the pivot, rhs), pivot coeff 1
    order = []
    for row, b in sorted(zip(rows, rhs), key=lambda rb: len(rb[0])):
        r = {k: v for k, v in row.items() if v}
        b = _num(Fraction(b))
        heap = [(pivots[k][0], k) for k in r if k in pivots]
        heapq.heapify(heap)
        while heap:
            _, k = heapq.heappop(heap)
            f = r.pop(k, 0)
            if not f:
                continue
            _, prow, pb = pivots[k]
            for j, v in prow.items():
                w = r.get(j, 0) - f * v
                if w:
                    if j not in r and j in pivots:
                        heapq.heappush(heap, (pivots[j][0], j))
                    r[j] = _num(w)
                else:
                    r.pop(j, None)
            b = _num(b - f * pb)
        if not r:
            if b:
                return None
            continue
        k = min(r, key=lambda u: (abs(r[u]) != 1, u))
        c = r.pop(k)
        if c == 1:
            prow, pb = r, b
        elif c == -1:
            prow, pb = {j: -v for j, v in r.items()}, -b
        else:
            prow = {j: _num(Fraction(v) / c) for j, v in r.items()}
            pb = _num(Fraction(b) / c)
        pivots[k] = (len(order), prow, pb)
        order.append(k)
    sol = {}
    for k in reversed(order):
        _, prow, pb = pivots[k]
        val = pb - sum(v * sol.get(j, 0) for j, v in prow.items())
        if val:
            sol[k] = _num(Fraction(val))
    return sol


def solvable_z(rows, rhs, unknowns):
    """Integer solvability: A and [A | b] share their invariant factors."""
    idx = {u: k for k, u in enumerate(unknowns)}
    n = len(unknowns)
    A = [[0] * n for _ in rows]
    Ab = [[0] * (n + 1) for _ in rows]
    for r, (row, b) in enumerate(zip(rows, rhs)):
        for u, v in row.items():
            A[r][idx[u]] = int(v)
            Ab[r][idx[u]] = int(v)
        Ab[r][n] = int(b)
    if not rows:
        return True
    return invariant_factors(A) == invariant_factors(Ab)
