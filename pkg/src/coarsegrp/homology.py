"""Homology, compactly supported cohomology, Kunneth and universal coefficients.

Everything reduces to Smith normal forms of boundary matrices.  Over the
integers ``H_k`` has free rank ``n_k - rank d_k - rank d_{k+1}`` and
torsion given by the invariant factors of ``d_{k+1}``; over ``Q`` only the
ranks matter and over ``Z/p`` the rank of ``d`` is the number of invariant
factors not divisible by ``p``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from .complexes import (CochainComplex, ProperChainComplex, algebraic_complex, compact_dual,
                        relative_collar_complex)
from .errors import InputError
from .snf import smith_normal_form


def _is_prime(p):
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


@dataclass(frozen=True)
class RingSpec:
    """``integers``, ``rationals`` or ``integers_mod_p`` with prime ``p``."""

    tag: str
    p: int | None = None

    def __post_init__(self):
        if self.tag not in ("integers", "rationals", "integers_mod_p"):
            raise InputError(f"unknown ring tag {self.tag!r}")
        if self.tag == "integers_mod_p" and not (isinstance(self.p, int) and _is_prime(self.p)):
            raise InputError(f"Z/p needs a prime p, got {self.p!r}")
        if self.tag != "integers_mod_p" and self.p is not None:
            raise InputError("only integers_mod_p takes a prime")

    @property
    def is_field(self):
        return self.tag != "integers"

    @property
    def name(self):
        return {"integers": "Z", "rationals": "Q"}.get(self.tag) or f"Z{self.p}"

    @classmethod
    def parse(cls, text):
        t = str(text).strip().replace("_", "").replace("/", "")
        if t in ("Z", "integers", "ZZ"):
            return INTEGERS
        if t in ("Q", "rationals", "QQ"):
            return RATIONALS
        for prefix in ("integersmodp", "Zmod", "Z", "F", "GF"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return cls("integers_mod_p", int(t[len(prefix):]))
        raise InputError(f"cannot parse ring {text!r}")

    def __str__(self):
        return self.name


INTEGERS = RingSpec("integers")
RATIONALS = RingSpec("rationals")


def mod(p):
    return RingSpec("integers_mod_p", p)


def normalize_torsion(orders):
    """Invariant factors (``d1 | d2 | ...``, all > 1) of a sum of cyclic groups."""
    xs = sorted(abs(int(x)) for x in orders if abs(int(x)) > 1)
    changed = True
    while changed:
        changed = False
        for i in range(len(xs)):
            for j in range(i + 1, len(xs)):
                a, b = xs[i], xs[j]
                if b % a:
                    g = gcd(a, b)
                    xs[i], xs[j] = g, a * b // g
                    changed = True
        xs = sorted(x for x in xs if x > 1)
    return tuple(xs)


@dataclass(frozen=True)
class HomologyGroup:
    """``R^free_rank`` plus cyclic torsion in invariant-factor form."""

    free_rank: int
    torsion: tuple = ()
    ring: str = "Z"

    def __post_init__(self):
        object.__setattr__(self, "torsion", normalize_torsion(self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative rank")

    def __add__(self, other):
        if self.ring != other.ring:
            raise InputError("direct sum across different rings")
        return HomologyGroup(self.free_rank + other.free_rank, self.torsion + other.torsion,
                             self.ring)

    @property
    def is_zero(self):
        return self.free_rank == 0 and not self.torsion

    def invariants(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "ring": self.ring}

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append(self.ring + (f"^{self.free_rank}" if self.free_rank > 1 else ""))
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


def zero_group(ring=INTEGERS):
    return HomologyGroup(0, (), ring.name)


def _snf(C, k, transpose=False):
    cache = C.__dict__.setdefault("_snf_cache", {})
    if k not in cache:
        d = C.boundary(k) if isinstance(C, ProperChainComplex) else C.coboundary(k)
        if d.rows == 0 or d.cols == 0:
            cache[k] = ()
        else:
            cache[k] = smith_normal_form(d).diagonal
    return cache[k]


def _rank(diag, ring):
    if ring.tag == "integers_mod_p":
        return sum(1 for d in diag if d % ring.p)
    return sum(1 for d in diag if d)


def _check_ring(C, ring):
    tag = C.modules[0].ring if C.modules else "integers"
    if tag != "integers" and tag != ring.tag:
        raise InputError(f"complex over {tag} cannot be read over {ring.tag}")


def homology(C, ring=INTEGERS):
    """``[H_0, ..., H_top]`` of a chain complex."""
    _check_ring(C, ring)
    out = []
    for k in range(C.top + 1):
        dk, dk1 = _snf(C, k), _snf(C, k + 1)
        free = C.rank(k) - _rank(dk, ring) - _rank(dk1, ring)
        tors = tuple(d for d in dk1 if d > 1) if ring.tag == "integers" else ()
        out.append(HomologyGroup(free, tors, ring.name))
    return out


def cochain_cohomology(D, ring=INTEGERS):
    """``[H^0, ..., H^top]`` of a cochain complex."""
    out = []
    for k in range(D.top + 1):
        dk, dprev = _snf(D, k), _snf(D, k - 1)
        free = D.modules[k].rank - _rank(dk, ring) - _rank(dprev, ring)
        tors = tuple(d for d in dprev if d > 1) if ring.tag == "integers" else ()
        out.append(HomologyGroup(free, tors, ring.name))
    return out


def cohomology_c(C, ring=INTEGERS, collar=None):
    """Cohomology of the compact dual, after cutting a collar if asked."""
    _check_ring(C, ring)
    if collar is not None:
        C = relative_collar_complex(C, collar)
    return cochain_cohomology(compact_dual(C), ring)


def tensor_and_tor(A, B, ring=INTEGERS):
    """``(A (x) B, Tor_1(A, B))`` over ``ring``."""
    if ring.is_field:
        return (HomologyGroup(A.free_rank * B.free_rank, (), ring.name), zero_group(ring))
    tors = [n for n in B.torsion for _ in range(A.free_rank)]
    tors += [m for m in A.torsion for _ in range(B.free_rank)]
    pair = [gcd(m, n) for m in A.torsion for n in B.torsion]
    return (HomologyGroup(A.free_rank * B.free_rank, tuple(tors + pair), ring.name),
            HomologyGroup(0, tuple(pair), ring.name))


def base_change(A, target):
    """``(A (x) R, Tor_1(A, R))`` for an abelian group ``A`` and a field ``R``."""
    if target.tag == "rationals":
        return HomologyGroup(A.free_rank, (), target.name), zero_group(target)
    if target.tag == "integers_mod_p":
        t = sum(1 for m in A.torsion if m % target.p == 0)
        return (HomologyGroup(A.free_rank + t, (), target.name),
                HomologyGroup(t, (), target.name))
    return A, zero_group(target)


@dataclass(frozen=True)
class Verdict:
    degree: int
    lhs: HomologyGroup
    rhs: HomologyGroup

    @property
    def equal(self):
        return self.lhs == self.rhs

    def as_dict(self):
        return {"degree": self.degree, "lhs_invariants": self.lhs.invariants(),
                "rhs_invariants": self.rhs.invariants(), "equal": self.equal}


def kunneth_check(C, D, ring=INTEGERS, product=None):
    """Compare ``H(C (x) D)`` with the Kunneth direct sum in every degree."""
    from .complexes import tensor_product
    if C.ring != D.ring:
        raise InputError("Kunneth factors must share a ring")
    P = product if product is not None else tensor_product(C, D)
    HP = homology(P, ring)
    HC, HD = homology(C, ring), homology(D, ring)
    out = []
    for k in range(C.top + D.top + 2):
        lhs = HP[k] if k < len(HP) else zero_group(ring)
        rhs = zero_group(ring)
        for i in range(len(HC)):
            j = k - i
            if 0 <= j < len(HD):
                rhs = rhs + tensor_and_tor(HC[i], HD[j], ring)[0]
            if 0 <= j - 1 < len(HD):
                rhs = rhs + tensor_and_tor(HC[i], HD[j - 1], ring)[1]
        out.append(Verdict(k, lhs, rhs))
    return out


def uct_check(C, target):
    """Compare ``H^k_c(C; R)`` with ``H^k_c(C; Z) (x) R + Tor(H^{k+1}_c(C; Z), R)``."""
    if target.tag == "integers":
        raise InputError("target must be Q or Z/p")
    HZ = cohomology_c(C, INTEGERS)
    HR = cohomology_c(C, target)
    out = []
    for k in range(len(HZ)):
        rhs = base_change(HZ[k], target)[0]
        if k + 1 < len(HZ):
            rhs = rhs + base_change(HZ[k + 1], target)[1]
        out.append(Verdict(k, HR[k], rhs))
    return out


def all_equal(verdicts):
    return all(v.equal for v in verdicts)


# ---------------------------------------------------------------------------
# the exhaustive small family


def _matrices(rows, cols, entries):
    for vals in itertools.product(entries, repeat=rows * cols):
        yield tuple(tuple(vals[i * cols:(i + 1) * cols]) for i in range(rows))


def _product_zero(A, B):
    return all(sum(A[i][k] * B[k][j] for k in range(len(B))) == 0
               for i in range(len(A)) for j in range(len(B[0]) if B else 0))


def exhaustive_family(max_rank=2, entries=range(-2, 3), degrees=3):
    """Every complex ``C_2 -> C_1 -> C_0`` with ranks ``<= max_rank``,
    boundary entries from ``entries`` and ``d o d = 0``.

    Yields ``(ranks, boundary matrices)`` in a fixed order.
    """
    if degrees != 3:
        raise InputError("only three degrees are enumerated")
    entries = tuple(entries)
    for r0, r1, r2 in itertools.product(range(max_rank + 1), repeat=3):
        d1s = list(_matrices(r0, r1, entries)) if r0 and r1 else [None]
        d2s = list(_matrices(r1, r2, entries)) if r1 and r2 else [None]
        for d1 in d1s:
            for d2 in d2s:
                if d1 is not None and d2 is not None and not _product_zero(d1, d2):
                    continue
                yield (r0, r1, r2), (d1, d2)


def family_complex(ranks, mats):
    bounds = {}
    for k, m in enumerate(mats, start=1):
        if m is not None:
            bounds[k] = [list(r) for r in m]
    return algebraic_complex(list(ranks), bounds)


def iso_class_key(C):
    """Ranks and boundary Smith forms: a complete invariant over ``Z``."""
    return (C.ranks,) + tuple(_snf(C, k) for k in range(1, C.top + 1))
