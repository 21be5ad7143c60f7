"""Quotient spaces G/H of left cosets with the Hausdorff metric.

Exact coset oracles ship for

* any subgroup of ``free_abelian(n)`` (echelon reduction of the lattice),
* ``<a^k>`` in ``baumslag_solitar(m, n)`` and ``<x^k>`` in a free group
  (read off the normal form of ``g^-1``),
* products of factor subgroups in direct products, factor subgroups in free
  products,
* ``<tau>`` in the triangle group for a primitive translation ``tau``,
* the trivial subgroup and the whole group.

Anything else falls back to union-find over a ball and is flagged
window-approximate.

Distances between cosets use that ``d(a, kH)`` equals the distance from the
base coset ``H`` to ``a^-1 k H`` in the Schreier graph of left
multiplication, so only the outer sup is restricted to the window.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import BudgetExceeded, ContractError, InputError, RefusalError, WindowError
from .groups import (DEFAULT_BUDGET, BaumslagSolitarGroup, DirectProduct, FreeAbelianGroup,
                     FreeGroup, FreeProduct, GroupElement, TriangleGroup333, ball,
                     multiply, word_metric)

# ---------------------------------------------------------------------------
# distortion functions


@dataclass(frozen=True)
class DistortionProfile:
    """Monotone piecewise tables for a pair of distortion functions.

    Tables are tuples of ``(x, y)`` points with increasing ``x``.  ``tail``
    says how the functions continue past the last point: ``"linear"``
    extends the last slope, ``"unknown"`` refuses to extrapolate.
    """

    eta: tuple
    phi: tuple
    tail: str = "unknown"

    def evaluate(self, which, x):
        return _table_eval(getattr(self, which), x, self.tail)


def _table_eval(table, x, tail):
    if not table:
        raise ValueError("empty table")
    best = None
    for tx, ty in table:
        if tx <= x:
            best = ty
        else:
            break
    if x > table[-1][0]:
        if tail != "linear" or len(table) < 2:
            raise ValueError(f"{x} lies past the table and tail rule is {tail!r}")
        (x0, y0), (x1, y1) = table[-2], table[-1]
        return y1 + (y1 - y0) / (x1 - x0) * (x - x1)
    if best is None:
        raise ValueError(f"{x} lies before the table start")
    return best


def proper_inverse(phi, R, upper=None, tol=1e-12):
    """``sup{x >= 0 : phi(x) <= R}`` for proper non-decreasing ``phi``.

    ``phi`` is either a callable on the non-negative reals or a table, i.e.
    a mapping or sequence of ``(x, phi(x))`` pairs regarded as a function on
    its listed points.  Returns 0 when ``R < phi(0)``.

    >>> proper_inverse({0: 0, 1: 5, 2: 5, 3: 9}, 5)
    2
    """
    if isinstance(phi, dict) or (not callable(phi)):
        pts = sorted(dict(phi).items())
        ok = [x for x, y in pts if y <= R]
        return max(ok) if ok else 0
    if phi(0) > R:
        return 0
    lo = 0.0
    hi = 1.0 if upper is None else float(upper)
    while phi(hi) <= R:
        lo, hi = hi, hi * 2
        if hi > 1e300:
            raise ValueError("phi does not appear to be proper")
    while hi - lo > tol * max(1.0, hi):
        mid = (lo + hi) / 2
        if phi(mid) <= R:
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# subgroups and coset oracles


class SubgroupSpec:
    """A finitely generated subgroup ``H`` of ``owner``.

    ``coset_oracle_kind`` is ``"exact"`` when a canonical coset key is
    available and ``"window-approximate"`` otherwise.
    """

    def __init__(self, owner, generators, label=None):
        self.owner = owner
        self.generators = tuple(generators)
        for h in self.generators:
            if h.owner != owner:
                raise InputError("subgroup generators must belong to the ambient group")
        self.label = label or "<" + ", ".join(str(h) for h in self.generators) + ">"
        self._key = _exact_oracle(owner, self.generators)

    @property
    def coset_oracle_kind(self):
        return "exact" if self._key is not None else "window-approximate"

    @property
    def exact(self):
        return self._key is not None

    def coset_key(self, g):
        """Canonical key of ``gH``; only for exact oracles."""
        if self._key is None:
            raise ContractError(f"no exact coset oracle for {self.label} in {self.owner}",
                                precondition="exact coset oracle")
        return self._key(g)

    def inverse_coset_key(self, y):
        """Key of ``y^-1 H``; skips the inversion when the oracle allows."""
        f = getattr(self._key, "from_inverse", None)
        if f is not None:
            return f(y)
        return self.coset_key(y.inverse())

    def contains(self, g):
        return self.coset_key(g) == self.coset_key(self.owner.identity())

    def __repr__(self):
        return f"SubgroupSpec({self.owner}, {self.label})"


def subgroup(group, words, label=None):
    """``SubgroupSpec`` generated by the given words or elements."""
    gens = [w if isinstance(w, GroupElement) else group.element(w) for w in words]
    return SubgroupSpec(group, gens, label=label)


def _exact_oracle(group, gens):
    gens = [h for h in gens if not h.is_identity()]
    if not gens:
        return lambda g: g.key
    gen_keys = {h.key for h in gens}
    if all(group.element((i + 1,)).key in gen_keys for i in range(group.rank)):
        return lambda g: b""
    if isinstance(group, FreeAbelianGroup):
        return _lattice_oracle([h.normal_form for h in gens])
    if isinstance(group, BaumslagSolitarGroup):
        exps = [h.normal_form[0] for h in gens if len(h.normal_form) == 1]
        if len(exps) != len(gens):
            return None
        k = 0
        for e in exps:
            k = gcd(k, e)

        def bs_from_inverse(y):
            inv = list(y.normal_form)
            inv[0] = inv[0] % k
            return repr(tuple(inv)).encode()

        def bs_key(g):
            return bs_from_inverse(g.inverse())
        bs_key.from_inverse = bs_from_inverse
        return bs_key
    if isinstance(group, FreeGroup):
        letters = {abs(x) for h in gens for x in h.normal_form}
        if len(letters) != 1:
            return None
        x = letters.pop()
        k = 0
        for h in gens:
            k = gcd(k, sum(1 if y > 0 else -1 for y in h.normal_form))

        def free_from_inverse(y):
            w = y.normal_form
            j = 0
            while j < len(w) and abs(w[j]) == x:
                j += 1
            lead = sum(1 if y > 0 else -1 for y in w[:j])
            return repr((lead % k, w[j:])).encode()

        def free_key(g):
            return free_from_inverse(g.inverse())
        free_key.from_inverse = free_from_inverse
        return free_key
    if isinstance(group, DirectProduct):
        parts = ([], [])
        for h in gens:
            a, b = h.normal_form
            in0 = b == group.factors[1]._identity()
            in1 = a == group.factors[0]._identity()
            if in0:
                parts[0].append(GroupElement(group.factors[0], a))
            elif in1:
                parts[1].append(GroupElement(group.factors[1], b))
            else:
                return None
        k0 = _exact_oracle(group.factors[0], parts[0])
        k1 = _exact_oracle(group.factors[1], parts[1])
        if k0 is None or k1 is None:
            return None

        def prod_key(g):
            a, b = g.normal_form
            return repr((k0(GroupElement(group.factors[0], a)),
                         k1(GroupElement(group.factors[1], b)))).encode()
        return prod_key
    if isinstance(group, FreeProduct):
        sides = {f for h in gens for f, _ in h.normal_form}
        if len(sides) != 1 or any(len(h.normal_form) != 1 for h in gens):
            return None
        f = sides.pop()
        fac = group.factors[f]
        kf = _exact_oracle(fac, [GroupElement(fac, h.normal_form[0][1]) for h in gens])
        if kf is None:
            return None

        def fp_key(g):
            nf = g.normal_form
            if nf and nf[-1][0] == f:
                return repr((nf[:-1], kf(GroupElement(fac, nf[-1][1])))).encode()
            return repr((nf, kf(fac.identity()))).encode()
        return fp_key
    if isinstance(group, TriangleGroup333):
        if len(gens) != 1:
            return None
        k, s, x, y = gens[0].normal_form
        if k != 0 or s != 0 or gcd(x, y) != 1:
            return None
        d = (x, y)

        def tri_key(g):
            gk, gs, gx, gy = g.normal_form
            dd = TriangleGroup333.zconj(d) if gs else d
            dd = TriangleGroup333.zmul(TriangleGroup333._UNITS[gk], dd)
            return repr((gk, gs, gx * dd[1] - gy * dd[0])).encode()
        return tri_key
    return None


def _echelon(rows):
    """Integer row echelon form with positive pivots (zero rows dropped)."""
    rows = [list(r) for r in rows if any(r)]
    out = []
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rows and col < ncols:
        nz = [r for r in rows if r[col] != 0]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for j in range(ncols):
                    r[j] -= q * piv[j]
            nz = [r for r in nz if r[col] != 0]
        piv = nz[0]
        if piv[col] < 0:
            piv[:] = [-v for v in piv]
        out.append(piv)
        rows = [r for r in rows if r is not piv and any(r)]
        col += 1
    return out


def _lattice_oracle(vectors):
    basis = _echelon(vectors)
    pivots = [next(j for j, v in enumerate(b) if v) for b in basis]

    def key(g):
        v = list(g.normal_form)
        for b, c in zip(basis, pivots):
            q = v[c] // b[c]
            if q:
                for j in range(len(v)):
                    v[j] -= q * b[j]
        return repr(tuple(v)).encode()
    return key


# ---------------------------------------------------------------------------
# Schreier distances


class CosetDistances:
    """Distances from the base coset ``H`` in the left Schreier graph.

    ``length(c)`` is ``min{|x| : x in cH}``, the word-metric distance from
    the identity to the coset.  Breadth-first search is extended lazily.
    """

    def __init__(self, sub, budget=DEFAULT_BUDGET):
        if not sub.exact:
            raise ContractError("Schreier distances need an exact coset oracle",
                                precondition="exact coset oracle")
        self.sub = sub
        self.budget = budget
        e = sub.owner.identity()
        k = sub.coset_key(e)
        self.dist = {k: 0}
        self.rep = {k: e}
        self.frontier = [k]
        self.depth = 0
        self._gens = [sub.owner.element((x,)) for x in sub.owner.letter_order()]

    def _grow(self):
        nxt = []
        for k in self.frontier:
            x = self.rep[k]
            for s in self._gens:
                y = multiply(s, x)
                ky = self.sub.coset_key(y)
                if ky not in self.dist:
                    self.dist[ky] = self.depth + 1
                    self.rep[ky] = y
                    nxt.append(ky)
        if len(self.dist) > self.budget:
            raise BudgetExceeded("Schreier graph search exceeded its budget",
                                 completed=self.depth)
        self.frontier = nxt
        self.depth += 1

    def length_of_key(self, key, limit=64):
        while key not in self.dist:
            if not self.frontier or self.depth >= limit:
                raise BudgetExceeded(f"coset not reached within depth {limit}",
                                     completed=self.depth)
            self._grow()
        return self.dist[key]

    def length(self, c, limit=64):
        return self.length_of_key(self.sub.coset_key(c), limit)


# ---------------------------------------------------------------------------
# Hausdorff distance on windows


@dataclass(frozen=True)
class HausdorffEstimate:
    value: int
    converged: bool
    radius: int
    extended_value: int


def _members(spec, elements):
    if callable(spec):
        return [g for g in elements if spec(g)]
    keys = {g.key for g in spec}
    return [g for g in elements if g.key in keys]


def hausdorff_distance(A, B, window, margin=1, budget=None):
    """Window estimate of ``d_Haus(A, B)`` with a stabilization flag.

    ``A`` and ``B`` are membership predicates or element collections;
    ``window`` is a :class:`~coarsegrp.groups.Ball`.  The estimate takes the
    larger directed sup-inf distance over window points; it is converged
    when the window grown by ``margin`` gives the same value.
    """
    group = window.center.owner
    big = ball(group, window.radius + margin, center=window.center)
    budget = budget or 2 * big.radius

    def estimate(w):
        a = _members(A, w)
        b = _members(B, w)
        if not a or not b:
            raise WindowError("set does not meet the window", precondition="A, B meet window")

        def directed(xs, ys):
            worst = 0
            for x in xs:
                best = None
                for y in ys:
                    d = word_metric(x, y, budget)
                    if isinstance(d, int) and (best is None or d < best):
                        best = d
                        if best <= worst:
                            break
                if best is None:
                    raise WindowError("distance exceeded the search budget")
                worst = max(worst, best)
            return worst
        return max(directed(a, b), directed(b, a))

    v = estimate(window)
    v2 = estimate(big)
    return HausdorffEstimate(v, v == v2, window.radius, v2)


def coset_hausdorff(sub, g, k, limit=64):
    """Exact ``d_Haus(gH, kH)`` when ``H`` is commensurated.

    Uses left invariance: the directed distance from ``gH`` to ``kH`` is
    the largest Schreier length over the ``H``-orbit of ``g^-1 k H``, and
    that orbit is finite exactly when ``H`` and ``xHx^-1`` are
    commensurable.  Raises :class:`BudgetExceeded` on an infinite orbit.
    """
    cd = CosetDistances(sub)
    x = multiply(g.inverse(), k)

    def directed(y):
        orbit = _h_orbit(sub, y, limit=10**5)
        return max(cd.length(z, limit) for z in orbit)
    return max(directed(x), directed(x.inverse()))


def _h_orbit(sub, y, limit, depth=None):
    """Cosets ``h y H`` for ``h`` in ``H``, by breadth-first search.

    Returns the representatives; raises :class:`BudgetExceeded` when the
    orbit has more than ``limit`` points or ``depth`` is exhausted.
    """
    gens = []
    for h in sub.generators:
        gens.extend((h, h.inverse()))
    start = sub.coset_key(y)
    seen = {start: y}
    frontier = [y]
    d = 0
    while frontier:
        if depth is not None and d >= depth:
            raise BudgetExceeded("orbit search depth exhausted", completed=d,
                                 partial=list(seen.values()))
        nxt = []
        for z in frontier:
            for h in gens:
                w = multiply(h, z)
                kw = sub.coset_key(w)
                if kw not in seen:
                    seen[kw] = w
                    nxt.append(w)
                    if len(seen) > limit:
                        raise BudgetExceeded("orbit exceeded its size limit", completed=d,
                                             partial=list(seen.values()))
        frontier = nxt
        d += 1
    return list(seen.values())


# ---------------------------------------------------------------------------
# quotient windows


@dataclass
class QuotientWindow:
    """Cosets of ``subgroup`` met by ``Ball(R)`` with Hausdorff distances.

    ``distance[i][j]`` is the window estimate for cosets ``i, j``;
    ``converged[i][j]`` says it survived growing the window by ``margin``.
    ``fibers[i]`` lists the elements of ``cosets[i]`` inside ``Ball(R)`` and
    ``min_length[i]`` the word length of the closest one.
    """

    group: object
    subgroup: SubgroupSpec
    R: int
    margin: int
    cosets: list
    representatives: list
    distance: list
    converged: list
    fibers: list
    min_length: list
    ball: object
    exact: bool
    coset_index: dict = field(default_factory=dict)
    extended: list = field(default_factory=list)

    def __len__(self):
        return len(self.cosets)

    def index_of(self, g):
        key = self.subgroup.coset_key(g) if self.exact else None
        return self.coset_index[key]

    def coset_counts(self):
        """Number of distinct cosets met by ``Ball(r)`` for ``r = 0..R``."""
        counts = [0] * (self.R + 1)
        for m in self.min_length:
            for r in range(m, self.R + 1):
                counts[r] += 1
        return counts

    def diameters(self):
        out = []
        for r in range(self.R + 1):
            idx = [i for i, m in enumerate(self.min_length) if m <= r]
            out.append(max((self.distance[i][j] for i in idx for j in idx), default=0))
        return out

    def all_converged(self):
        return all(all(row) for row in self.converged)

    def edges(self, scale=1, extended=False):
        """Pairs ``(i, j)``, ``i < j``, at estimated distance at most ``scale``.

        With ``extended`` the estimates from the grown window are used,
        which are never smaller and suppress spurious short edges between
        cosets whose fibers are truncated by the window.
        """
        dist = self.extended if extended else self.distance
        n = len(self.cosets)
        return [(i, j) for i in range(n) for j in range(i + 1, n)
                if dist[i][j] <= scale]

    def to_json(self):
        return json.dumps({
            "group": self.group.catalog_id,
            "subgroup": self.subgroup.label,
            "R": self.R,
            "margin": self.margin,
            "oracle": self.subgroup.coset_oracle_kind,
            "representatives": [str(g) for g in self.representatives],
            "min_length": self.min_length,
            "distance": self.distance,
            "converged": self.converged,
        }, sort_keys=True)

    def edge_list(self, scale=1):
        return "\n".join(f"{i} {j}" for i, j in self.edges(scale))


def _approximate_keys(sub, big):
    # union-find over the ball under right multiplication by H generators
    parent = {k: k for k in big.elements}

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    gens = []
    for h in sub.generators:
        gens.extend((h, h.inverse()))
    order = {k: i for i, k in enumerate(big.elements)}
    for k, g in big.elements.items():
        for h in gens:
            kk = multiply(g, h).key
            if kk in parent:
                a, b = find(k), find(kk)
                if a != b:
                    if order[a] < order[b]:
                        parent[b] = a
                    else:
                        parent[a] = b
    return {k: find(k) for k in big.elements}


def quotient_window(group, sub, R, margin=1, budget=DEFAULT_BUDGET, schreier_limit=64):
    """Finite window of ``G/H``: the cosets met by ``Ball(R)``.

    Cosets are ordered by their first element in shortlex BFS order.
    Exact oracles give distances via Schreier lengths; approximate ones via
    word-metric Hausdorff estimates inside the window.
    """
    if not (R >= margin >= 1):
        raise InputError("quotient_window needs R >= margin >= 1")
    if sub.owner != group:
        raise InputError("subgroup belongs to a different group")
    big = ball(group, R + margin, budget=budget)
    if sub.exact:
        keys = {k: sub.coset_key(g) for k, g in big.elements.items()}
    else:
        keys = _approximate_keys(sub, big)
    cosets, reps, index = [], [], {}
    fib_R, fib_big, min_len = [], [], []
    for k, g in big.elements.items():
        c = keys[k]
        d = big.lengths[k]
        if c not in index:
            if d > R:
                continue
            index[c] = len(cosets)
            cosets.append(c)
            reps.append(g)
            fib_R.append([])
            fib_big.append([])
            min_len.append(d)
        i = index[c]
        fib_big[i].append(g)
        if d <= R:
            fib_R[i].append(g)
    n = len(cosets)
    dist = [[0] * n for _ in range(n)]
    ext = [[0] * n for _ in range(n)]
    conv = [[True] * n for _ in range(n)]
    if sub.exact:
        cd = CosetDistances(sub, budget=budget)
        rep_inv = [g.inverse() for g in reps]
        pos_R = [len(f) for f in fib_R]

        def directed(i, j):
            # lengths of a^-1 rep_j H over the grown fiber; the first
            # pos_R[i] entries are the fiber inside Ball(R)
            ls = [cd.length_of_key(sub.inverse_coset_key(multiply(rep_inv[j], a)),
                                   schreier_limit) for a in fib_big[i]]
            return max(ls[:pos_R[i]]), max(ls)
        for i in range(n):
            for j in range(i + 1, n):
                s_ij, b_ij = directed(i, j)
                s_ji, b_ji = directed(j, i)
                d_small, d_big = max(s_ij, s_ji), max(b_ij, b_ji)
                dist[i][j] = dist[j][i] = d_small
                ext[i][j] = ext[j][i] = d_big
                conv[i][j] = conv[j][i] = d_small == d_big
    else:
        lim = 2 * (R + margin)

        def directed(xs, ys):
            worst = 0
            for x in xs:
                best = min(d for d in (word_metric(x, y, lim) for y in ys)
                           if isinstance(d, int))
                worst = max(worst, best)
            return worst
        for i in range(n):
            for j in range(i + 1, n):
                d_small = max(directed(fib_R[i], fib_R[j]), directed(fib_R[j], fib_R[i]))
                d_big = max(directed(fib_big[i], fib_big[j]),
                            directed(fib_big[j], fib_big[i]))
                dist[i][j] = dist[j][i] = d_small
                ext[i][j] = ext[j][i] = d_big
                conv[i][j] = conv[j][i] = d_small == d_big
    return QuotientWindow(group, sub, R, margin, cosets, reps, dist, conv, fib_R,
                          min_len, big.sub(R), sub.exact, index, ext)


# ---------------------------------------------------------------------------
# commensuration


@dataclass(frozen=True)
class CommensurationCertificate:
    """Evidence about ``[H : H cap gHg^-1]``.

    ``verdict`` is ``"exact-finite"`` (``index`` is the exact index),
    ``"no-bound-up-to-radius"`` (``index_lower_bound`` distinct cosets seen
    within ``radius``) or ``"window-finite"`` for approximate oracles.
    """

    conjugator: str
    index_lower_bound: int
    verdict: str
    radius: int
    index: int | None = None

    @property
    def finite(self):
        return self.verdict in ("exact-finite", "window-finite")

    def as_dict(self):
        return {"conjugator": self.conjugator, "index": self.index,
                "index_lower_bound": self.index_lower_bound,
                "verdict": self.verdict, "radius": self.radius}


def commensuration_witness(group, sub, g, R, limit=10**5):
    """Index of ``H cap gHg^-1`` in ``H`` from the ``H``-orbit of ``gH``.

    The stabilizer of ``gH`` under left multiplication by ``H`` is
    ``H cap gHg^-1``, so the orbit size is the index.  The orbit is explored
    to ``H``-word depth ``R``; if it closes the index is exact.
    """
    if g.owner != group:
        raise InputError("conjugator belongs to a different group")
    name = str(g)
    if sub.exact:
        try:
            orbit = _h_orbit(sub, g, limit=limit, depth=R)
        except BudgetExceeded as exc:
            return CommensurationCertificate(name, len(exc.partial), "no-bound-up-to-radius", R)
        return CommensurationCertificate(name, len(orbit), "exact-finite", R, len(orbit))
    # approximate: orbits of H cap gHg^-1 on H cap Ball(R)
    big = ball(group, 2 * R + 2 * _length_or(g, R))
    keys = _approximate_keys(sub, big)
    seen = set()
    gens = []
    for h in sub.generators:
        gens.extend((h, h.inverse()))
    frontier = [g]
    seen.add(keys.get(g.key, g.key))
    for _ in range(R):
        nxt = []
        for z in frontier:
            for h in gens:
                w = multiply(h, z)
                kw = keys.get(w.key)
                if kw is None:
                    continue
                if kw not in seen:
                    seen.add(kw)
                    nxt.append(w)
        frontier = nxt
    verdict = "window-finite" if not frontier else "no-bound-up-to-radius"
    return CommensurationCertificate(name, len(seen), verdict, R,
                                     len(seen) if not frontier else None)


def _length_or(g, default):
    from .groups import word_length
    d = word_length(g, budget=2 * default + 2)
    return d if isinstance(d, int) else default


def almost_normality_certificates(group, sub, R):
    """Certificates for every generator of ``G`` and its inverse."""
    out = []
    for letter in group.letter_order():
        out.append(commensuration_witness(group, sub, group.element((letter,)), R))
    return out


def require_almost_normal(group, sub, R):
    """Raise :class:`RefusalError` unless every certificate is finite."""
    certs = almost_normality_certificates(group, sub, R)
    bad = [c for c in certs if not c.finite]
    if bad:
        raise RefusalError(
            f"{sub.label} is not certified commensurated in {group}: "
            f"[H : H cap gHg^-1] unbounded up to radius {R} at g = {bad[0].conjugator}",
            precondition="H almost normal in G",
            anchor="splitting criterion: H commensurated in G",
            details={"certificates": [c.as_dict() for c in certs],
                     "failing": bad[0].as_dict()})
    return certs


# ---------------------------------------------------------------------------
# finite index and bundle axioms


@dataclass(frozen=True)
class FiniteIndexVerdict:
    finite: bool
    index_bound: int | None
    coset_counts: tuple
    diameters: tuple
    exact: bool

    @property
    def label(self):
        if self.finite:
            return f"finite-index (index {self.index_bound})"
        return f"unbounded-at-radius {len(self.coset_counts) - 1}"


def finite_index_check(qw, steps=3):
    """Finite index iff coset counts and diameters stall over ``steps`` radii."""
    counts = qw.coset_counts()
    diams = qw.diameters()
    tail = counts[-steps:]
    dtail = diams[-steps:]
    finite = len(counts) >= steps and len(set(tail)) == 1 and len(set(dtail)) == 1
    return FiniteIndexVerdict(finite, counts[-1] if finite else None, tuple(counts),
                              tuple(diams), qw.exact)


@dataclass
class BundleReport:
    """Fitted coarse-bundle constants for the projection ``G -> G/H``.

    Fibers are the cosets themselves (``E = 0``).  ``distortion`` tabulates
    ``max{|h|_H : h in H, |h|_G <= r}``, the proper inverse of ``eta``.
    """

    K: int
    A: int
    E: int
    profile: DistortionProfile
    distortion: tuple
    superlinear: bool
    fiber_spread: int
    violations: list
    pairs_checked: int


def _intrinsic_lengths(sub, targets, limit=10**5):
    # BFS in H's own generators until every target key is reached
    gens = []
    for h in sub.generators:
        gens.extend((h, h.inverse()))
    e = sub.owner.identity()
    lengths = {e.key: 0}
    frontier = [e]
    missing = set(targets) - {e.key}
    d = 0
    while missing and frontier:
        nxt = []
        for z in frontier:
            for h in gens:
                w = multiply(z, h)
                if w.key not in lengths:
                    lengths[w.key] = d + 1
                    nxt.append(w)
                    missing.discard(w.key)
        frontier = nxt
        d += 1
        if len(lengths) > limit:
            raise BudgetExceeded("intrinsic subgroup search exceeded its budget", completed=d)
    return lengths, d


def verify_bundle_axioms(qw):
    """Check the coarse-bundle axioms for ``G -> G/H`` on the window.

    Axiom 1 is fitted on generator steps between interior cosets (minimal
    length at most ``R - margin``); those distances must be converged.
    """
    R, margin = qw.R, qw.margin
    interior = {i for i, m in enumerate(qw.min_length) if m <= R - margin}
    if not qw.exact:
        raise ContractError("bundle axioms need an exact coset oracle",
                            precondition="exact coset oracle")
    b = qw.ball
    gens = [qw.group.element((x,)) for x in qw.group.letter_order()]
    K = 1
    unconverged = []
    for g in b:
        i = qw.index_of(g)
        if i not in interior:
            continue
        for s in gens:
            h = multiply(g, s)
            if h not in b:
                continue
            j = qw.index_of(h)
            if j not in interior:
                continue
            if not qw.converged[i][j]:
                unconverged.append((i, j))
            K = max(K, qw.distance[i][j])
    if unconverged:
        raise ContractError(f"{len(unconverged)} interior coset pairs are not converged",
                            precondition="converged window",
                            details={"pairs": unconverged[:10]})
    # check the fitted (K, A) on pairs x, x*y with |y| <= 3
    A = 0
    small = b.sub(min(3, R))
    pairs = 0
    for g in b:
        i = qw.index_of(g)
        if i not in interior:
            continue
        for y in small:
            h = multiply(g, y)
            if h not in b:
                continue
            j = qw.index_of(h)
            if j not in interior:
                continue
            pairs += 1
            A = max(A, qw.distance[i][j] - K * small.length(y))
    # axiom 2: distortion of H in G
    H_in = [g for g in b if qw.subgroup.contains(g)]
    lengths, _ = _intrinsic_lengths(qw.subgroup, {g.key for g in H_in})
    pts = [(lengths[g.key], b.length(g)) for g in H_in]
    max_h = max(p[0] for p in pts)
    # phi(n) exact while the whole H-ball of radius n sits inside the window
    hball = {k: d for k, d in lengths.items()}
    phi, eta = [], []
    for n in range(max_h + 1):
        inside = [b.lengths.get(k) for k, d in hball.items() if d <= n]
        if any(x is None for x in inside):
            break
        phi.append((n, max(inside)))
    for n in range(max_h + 1):
        cands = [gl for hl, gl in pts if hl >= n]
        eta.append((n, min(cands)))
    distortion = []
    for r in range(R + 1):
        distortion.append((r, max(hl for hl, gl in pts if gl <= r)))
    violations = []
    for hl, gl in pts:
        if hl < len(phi) and gl > phi[hl][1]:
            violations.append({"axiom": 2, "h_length": hl, "g_length": gl})
        if gl < eta[hl][1]:
            violations.append({"axiom": 2, "h_length": hl, "g_length": gl})
    half = max(1, R // 2)
    superlinear = (distortion[R][1] * half >= 1.5 * distortion[half][1] * R
                   and distortion[R][1] > R)
    spread = max((max(row) for row in qw.distance), default=0)
    return BundleReport(K, A, 0, DistortionProfile(tuple(eta), tuple(phi)),
                        tuple(distortion), superlinear, spread, violations, pairs)
