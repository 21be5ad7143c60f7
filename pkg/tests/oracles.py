"""Independent reference implementations used only by the tests.

None of these import the library's normal forms: words are plain tuples
of signed generator indices (``1`` is the first generator, ``-1`` its
inverse) and matrices are lists of int rows.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd


# -- word problems ----------------------------------------------------------

def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def abelian_vector(word, n):
    v = [0] * n
    for x in word:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


def bs_trivial(word, m, n):
    """Britton's lemma by pinch rewriting; letters 1 = a, 2 = t."""
    # syllables: ["a", k] or ["t", +-1]
    syl = []
    for x in word:
        if abs(x) == 1:
            k = 1 if x > 0 else -1
            if syl and syl[-1][0] == "a":
                syl[-1][1] += k
                if syl[-1][1] == 0:
                    syl.pop()
            else:
                syl.append(["a", k])
        else:
            syl.append(["t", 1 if x > 0 else -1])
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(syl):
            s = syl[i]
            if s[0] == "t" and i + 1 < len(syl):
                nxt = syl[i + 1]
                # t t^-1 or t^-1 t
                if nxt[0] == "t" and nxt[1] == -s[1]:
                    del syl[i:i + 2]
                    changed = True
                    break
                if nxt[0] == "a" and i + 2 < len(syl) and syl[i + 2] == ["t", -s[1]]:
                    k = nxt[1]
                    src, dst = (m, n) if s[1] > 0 else (n, m)
                    if k % src == 0:
                        syl[i:i + 3] = [["a", k // src * dst]]
                        changed = True
                        break
            i += 1
        # merge neighbouring a-powers
        merged = []
        for s in syl:
            if s[0] == "a" and merged and merged[-1][0] == "a":
                merged[-1][1] += s[1]
                if merged[-1][1] == 0:
                    merged.pop()
            elif not (s[0] == "a" and s[1] == 0):
                merged.append(list(s))
        syl = merged
    return not syl


def _mat_mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def bs1n_matrix(word, n):
    """Faithful affine representation of BS(1, n)."""
    a = [[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]]
    ai = [[Fraction(1), Fraction(-1)], [Fraction(0), Fraction(1)]]
    t = [[Fraction(n), Fraction(0)], [Fraction(0), Fraction(1)]]
    ti = [[Fraction(1, n), Fraction(0)], [Fraction(0), Fraction(1)]]
    table = {1: a, -1: ai, 2: t, -2: ti}
    M = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    for x in word:
        M = _mat_mul(M, table[x])
    return tuple(tuple(r) for r in M)


def _tits():
    gens = []
    for i in range(3):
        M = [[int(r == c) for c in range(3)] for r in range(3)]
        # column j is the image of e_j
        for j in range(3):
            if j == i:
                M[i][i] = -1
            else:
                M[i][j] += 1
        gens.append(M)
    return gens


_TITS = _tits()


def triangle_matrix(word):
    """Tits representation of the (3,3,3) reflection group; faithful."""
    M = [[int(r == c) for c in range(3)] for r in range(3)]
    for x in word:
        M = _mat_mul(M, _TITS[abs(x) - 1])
    return tuple(tuple(r) for r in M)


# -- integer linear algebra ---------------------------------------------------

def bareiss_det(M):
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def fraction_rank(M):
    A = [[Fraction(x) for x in r] for r in M]
    rank = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(len(A)):
            if i != rank and A[i][c] != 0:
                f = A[i][c] / A[rank][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def rank_mod_p(M, p):
    A = [[x % p for x in r] for r in M]
    rank = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c] * inv % p
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def determinantal_divisors(M):
    """``d_k`` = gcd of all ``k x k`` minors, for ``k = 1..rank``."""
    m, n = len(M), len(M[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, bareiss_det([[M[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors_from_divisors(ds):
    prev = 1
    out = []
    for d in ds:
        out.append(d // prev)
        prev = d
    return out


# -- abelian group bookkeeping ------------------------------------------------

def primary_parts(orders):
    """Multiset of prime powers of a finite abelian group given by cyclic orders."""
    out = []
    for m in orders:
        p = 2
        while m > 1:
            if m % p == 0:
                q = 1
                while m % p == 0:
                    m //= p
                    q *= p
                out.append(q)
            p += 1
    return sorted(out)
