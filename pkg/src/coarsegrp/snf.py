"""Smith normal form over the integers.

Two paths share one result type.  ``dense_snf`` works on a full matrix and
can return unimodular transforms; ``sparse_snf`` first eliminates unit
pivots (cheapest row first, then cheapest column) and hands the leftover
block to the dense routine.  Boundary matrices of graphs and Rips
complexes are almost entirely resolved by unit pivots.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .sparse import SparseMatrix, as_sparse


@dataclass(frozen=True)
class SNFResult:
    """``diagonal`` has ``min(rows, cols)`` entries: the nonzero invariant
    factors in divisibility order followed by zeros.  ``U`` and ``V`` are
    dense unimodular matrices with ``U M V = D`` when requested."""

    diagonal: tuple
    rank: int
    shape: tuple
    U: list | None = None
    V: list | None = None

    @property
    def invariant_factors(self):
        """Nonzero diagonal entries greater than one."""
        return tuple(d for d in self.diagonal if d > 1)

    def rank_mod(self, p):
        return sum(1 for d in self.diagonal if d and d % p)

    def diagonal_matrix(self):
        m, n = self.shape
        D = [[0] * n for _ in range(m)]
        for i, d in enumerate(self.diagonal):
            D[i][i] = d
        return D


def _swap_rows(A, i, j):
    A[i], A[j] = A[j], A[i]


def _swap_cols(A, i, j):
    for row in A:
        row[i], row[j] = row[j], row[i]


def _pick(A, t, m, n):
    # smallest magnitude, then fewest nonzeros in its row and column
    best = None
    for i in range(t, m):
        row = A[i]
        for j in range(t, n):
            v = row[j]
            if v:
                a = abs(v)
                if best is not None and a > best[0]:
                    continue
                fill = sum(1 for x in row[t:] if x) + sum(1 for r in A[t:] if r[j])
                cand = (a, fill, i, j)
                if best is None or cand < best:
                    best = cand
    return best


def dense_snf(M, transforms=False):
    """Smith normal form of a dense integer matrix (list of rows)."""
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    if m and any(len(r) != n for r in A):
        raise ValueError("ragged matrix")
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None
    t = 0
    while t < min(m, n):
        p = _pick(A, t, m, n)
        if p is None:
            break
        _, _, i, j = p
        if i != t:
            _swap_rows(A, i, t)
            if U:
                _swap_rows(U, i, t)
        if j != t:
            _swap_cols(A, j, t)
            if V:
                _swap_cols(V, j, t)
        while True:
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                v = A[i][t]
                if v:
                    q = v // piv
                    if q:
                        ri, rt = A[i], A[t]
                        for k in range(t, n):
                            if rt[k]:
                                ri[k] -= q * rt[k]
                        if U:
                            ui, ut = U[i], U[t]
                            for k in range(m):
                                ui[k] -= q * ut[k]
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                v = A[t][j]
                if v:
                    q = v // piv
                    if q:
                        for r in A[t:]:
                            if r[t]:
                                r[j] -= q * r[t]
                        if V:
                            for r in V:
                                r[j] -= q * r[t]
                    if A[t][j]:
                        dirty = True
            if dirty:
                # bring the smallest leftover in row/column t to the pivot
                cands = [(abs(A[i][t]), 0, i) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), 1, j) for j in range(t + 1, n) if A[t][j]]
                _, kind, k = min(cands)
                if kind == 0 and k != t:
                    _swap_rows(A, k, t)
                    if U:
                        _swap_rows(U, k, t)
                elif kind == 1:
                    _swap_cols(A, k, t)
                    if V:
                        _swap_cols(V, k, t)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # row t += row bad, then column t is no longer clear
            for k in range(t, n):
                A[t][k] += A[bad][k]
            if U:
                for k in range(m):
                    U[t][k] += U[bad][k]
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U:
                U[t] = [-x for x in U[t]]
        t += 1
    diag = tuple(A[i][i] for i in range(min(m, n)))
    rank = sum(1 for d in diag if d)
    return SNFResult(diag, rank, (m, n), U, V)


def sparse_snf(M):
    """Smith normal form via unit-pivot elimination plus a dense remainder.

    Returns only the diagonal (no transforms).
    """
    S = as_sparse(M)
    m, n = S.shape
    rows = {}
    cols = {}
    for (i, j), v in S.entries.items():
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)
    units = 0
    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    while heap:
        ln, i = heapq.heappop(heap)
        r = rows.get(i)
        if r is None or len(r) != ln:
            continue
        unit_cols = [j for j, v in r.items() if v in (1, -1)]
        if not unit_cols:
            continue
        j = min(unit_cols, key=lambda c: (len(cols[c]), c))
        v = r[j]
        for k in sorted(cols[j] - {i}):
            rk = rows[k]
            f = rk[j] * v
            for c, w in r.items():
                x = rk.get(c, 0) - f * w
                if x:
                    if c not in rk:
                        cols[c].add(k)
                    rk[c] = x
                else:
                    if c in rk:
                        del rk[c]
                        cols[c].discard(k)
            if rk:
                heapq.heappush(heap, (len(rk), k))
            else:
                del rows[k]
        for c in r:
            cols[c].discard(i)
        del rows[i]
        del cols[j]
        units += 1
    left_rows = sorted(rows)
    left_cols = sorted(c for c, s in cols.items() if s)
    dense = [[rows[i].get(c, 0) for c in left_cols] for i in left_rows]
    rest = dense_snf(dense).diagonal if dense and left_cols else ()
    nz = [1] * units + [d for d in rest if d]
    diag = tuple(nz) + (0,) * (min(m, n) - len(nz))
    return SNFResult(diag, len(nz), (m, n))


def smith_normal_form(M, transforms=False):
    """Smith normal form of an integer matrix (dense rows or ``SparseMatrix``).

    >>> smith_normal_form([[2, 4], [6, 8]]).diagonal
    (2, 4)
    """
    if transforms:
        if isinstance(M, SparseMatrix):
            M = M.to_dense()
        return dense_snf(M, transforms=True)
    if isinstance(M, SparseMatrix):
        return sparse_snf(M)
    M = [list(r) for r in M]
    if not M or not M[0]:
        return SNFResult((), 0, (len(M), 0))
    if len(M) * len(M[0]) <= 400:
        return dense_snf(M)
    return sparse_snf(M)
