"""Smith normal form and ranks over Z, Q and F_p."""

from __future__ import annotations

from fractions import Fraction

from .matrix import SparseMatrix

__all__ = [
    "smith_normal_form",
    "is_smith_normal_form",
    "invariant_factors",
    "rank_mod_p",
    "rank_q",
    "det",
]


def _xgcd(a, b):
    # returns g, s, t with s*a + t*b == g == gcd(a, b) >= 0
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _as_dense(M):
    if isinstance(M, SparseMatrix):
        return M.to_dense(), M.nrows, M.ncols
    rows = [list(r) for r in M]
    return rows, len(rows), (len(rows[0]) if rows else 0)


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M, transforms=True):
    """Return ``(U, D, V)`` with ``M == U @ D @ V``, U and V unimodular.

    ``D`` is diagonal with nonnegative entries, each dividing the next.
    Inputs may be nested lists or a SparseMatrix; outputs are nested lists.
    With ``transforms=False`` the unimodular factors are returned as None.
    """
    A, m, n = _as_dense(M)
    A = [[int(x) for x in row] for row in A]
    U = _identity(m) if transforms else None
    V = _identity(n) if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            for row in U:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            V[i], V[j] = V[j], V[i]

    def add_row(i, j, k):  # row_i += k * row_j
        ri, rj = A[i], A[j]
        for c in range(n):
            if rj[c]:
                ri[c] += k * rj[c]
        if U is not None:
            for row in U:
                row[j] -= k * row[i]

    def add_col(i, j, k):  # col_i += k * col_j
        for row in A:
            if row[j]:
                row[i] += k * row[j]
        if V is not None:
            vi, vj = V[i], V[j]
            for c in range(n):
                if vi[c]:
                    vj[c] -= k * vi[c]

    def mix_rows(i, j, a, b):
        g, s, t = _xgcd(a, b)
        p, q = -b // g, a // g
        ri, rj = A[i], A[j]
        for c in range(n):
            x, y = ri[c], rj[c]
            ri[c], rj[c] = s * x + t * y, p * x + q * y
        if U is not None:
            for row in U:
                x, y = row[i], row[j]
                row[i], row[j] = x * q + y * (b // g), -x * t + y * s

    def mix_cols(i, j, a, b):
        g, s, t = _xgcd(a, b)
        p, q = -b // g, a // g
        for row in A:
            x, y = row[i], row[j]
            row[i], row[j] = s * x + t * y, p * x + q * y
        if V is not None:
            vi, vj = V[i], V[j]
            for c in range(n):
                x, y = vi[c], vj[c]
                vi[c], vj[c] = q * x + (b // g) * y, -t * x + s * y

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            for i in range(t + 1, m):
                b = A[i][t]
                if not b:
                    continue
                a = A[t][t]
                if b % a == 0:
                    add_row(i, t, -(b // a))
                else:
                    mix_rows(t, i, a, b)
            for j in range(t + 1, n):
                b = A[t][j]
                if not b:
                    continue
                a = A[t][t]
                if b % a == 0:
                    add_col(j, t, -(b // a))
                else:
                    mix_cols(t, j, a, b)
            if any(A[i][t] for i in range(t + 1, m)):
                continue
            a = A[t][t]
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % a:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                for row in U:
                    row[t] = -row[t]
        t += 1
    return U, A, V


def is_smith_normal_form(D):
    D, m, n = _as_dense(D)
    diag = []
    for i in range(m):
        for j in range(n):
            if i != j and D[i][j]:
                return False
    for k in range(min(m, n)):
        diag.append(D[k][k])
    if any(x < 0 for x in diag):
        return False
    nz = [x for x in diag if x]
    if diag[:len(nz)] != nz:
        return False
    return all(nz[k + 1] % nz[k] == 0 for k in range(len(nz) - 1))


def invariant_factors(M):
    """Nonzero diagonal entries of the Smith form, ascending."""
    _, D, _ = smith_normal_form(M, transforms=False)
    return [D[k][k] for k in range(min(len(D), len(D[0]) if D else 0)) if D[k][k]]


def det(M):
    rows, m, n = _as_dense(M)
    if m != n:
        raise ValueError("determinant of a non-square matrix")
    A = [[Fraction(x) for x in r] for r in rows]
    out = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            out = -out
        out *= A[c][c]
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] / A[c][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return int(out) if out.denominator == 1 else out


def _rows_of(M):
    if isinstance(M, SparseMatrix):
        return list(M.rows().values())
    return [{j: v for j, v in enumerate(r) if v} for r in M]


def rank_mod_p(M, p=2):
    """Rank over F_p; F_2 uses integer bitsets."""
    if p == 2:
        basis = {}  # leading bit -> vector
        rank = 0
        for row in _rows_of(M):
            x = 0
            for j, v in row.items():
                if v % 2:
                    x |= 1 << j
            while x:
                lead = x.bit_length() - 1
                if lead in basis:
                    x ^= basis[lead]
                else:
                    basis[lead] = x
                    rank += 1
                    break
        return rank
    pivots = {}
    rank = 0
    for row in _rows_of(M):
        r = {j: v % p for j, v in row.items() if v % p}
        while r:
            lead = max(r)
            if lead in pivots:
                prow = pivots[lead]
                f = r[lead]
                for j, v in prow.items():
                    w = (r.get(j, 0) - f * v) % p
                    if w:
                        r[j] = w
                    else:
                        r.pop(j, None)
            else:
                inv = pow(r[lead], -1, p)
                pivots[lead] = {j: (v * inv) % p for j, v in r.items()}
                rank += 1
                break
    return rank


def rank_q(M):
    """Rank over the rationals by fraction-exact elimination."""
    pivots = {}
    rank = 0
    for row in _rows_of(M):
        r = {j: Fraction(v) for j, v in row.items() if v}
        while r:
            lead = max(r)
            if lead in pivots:
                prow = pivots[lead]
                f = r[lead]
                for j, v in prow.items():
                    w = r.get(j, 0) - f * v
                    if w:
                        r[j] = w
                    else:
                        r.pop(j, None)
            else:
                c = r[lead]
                pivots[lead] = {j: v / c for j, v in r.items()}
                rank += 1
                break
    return rank
