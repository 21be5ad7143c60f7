"""Euler characteristics of graphs of groups, in exact rationals.

Values are propagated, never computed from resolutions: callers supply
catalog values such as ``chi(Z) = 0``, ``chi(F_r) = 1 - r`` or
``chi(trivial) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, NonReducedError, RefusalError

CATALOG_CHI = {
    "trivial": Fraction(1),
    "integers": Fraction(0),
}


def as_chi(x):
    """Coerce ints, Fractions and strings like ``"-3/2"`` to ``Fraction``."""
    if isinstance(x, float):
        raise InputError("Euler characteristics must be exact, not float")
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise InputError(f"cannot read {x!r} as a rational") from exc


def chi_free(r):
    return Fraction(1 - r)


def chi_surface(genus):
    return Fraction(2 - 2 * genus)


def chi_amalgam(a, b, c):
    """``chi(A *_C B) = chi(A) + chi(B) - chi(C)``."""
    return as_chi(a) + as_chi(b) - as_chi(c)


def chi_hnn(a, c):
    """``chi(A *_C) = chi(A) - chi(C)``."""
    return as_chi(a) - as_chi(c)


def chi_finite_index(chi_G, index):
    """Characteristic of an index-``index`` subgroup: ``chi(G) * index``."""
    if not isinstance(index, int) or index < 1:
        raise InputError("index must be a positive integer")
    return as_chi(chi_G) * index


@dataclass(frozen=True)
class GogEdge:
    endpoints: tuple
    chi: Fraction
    indices: tuple = ("equal", "equal")

    @property
    def is_loop(self):
        return self.endpoints[0] == self.endpoints[1]


@dataclass(frozen=True)
class GraphOfGroups:
    """Vertices ``(label, chi)``; edges with ``[A:C]``-style indices.

    An index is a positive integer or ``"equal"`` (the edge group is the
    whole vertex group).  ``reduced`` is derived: no non-loop edge has index
    one at an endpoint.
    """

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        labels = [v for v, _ in self.vertices]
        if len(set(labels)) != len(labels):
            raise InputError("vertex labels must be distinct")
        for e in self.edges:
            for v in e.endpoints:
                if v not in labels:
                    raise InputError(f"edge endpoint {v!r} is not a vertex")
            for i in e.indices:
                if i != "equal" and (not isinstance(i, int) or i < 1):
                    raise InputError(f"bad index {i!r}")

    @classmethod
    def build(cls, vertices, edges):
        vs = tuple((str(v), as_chi(x)) for v, x in vertices)
        es = []
        for e in edges:
            if isinstance(e, GogEdge):
                es.append(e)
                continue
            ends, chi = e[0], e[1]
            idx = tuple(e[2]) if len(e) > 2 else ("equal", "equal")
            es.append(GogEdge(tuple(str(v) for v in ends), as_chi(chi), idx))
        return cls(vs, tuple(es))

    @property
    def reduced(self):
        for e in self.edges:
            if e.is_loop:
                continue
            if any(i == 1 or i == "equal" for i in e.indices):
                return False
        return True

    def connected(self):
        labels = [v for v, _ in self.vertices]
        if not labels:
            return False
        adj = {v: set() for v in labels}
        for e in self.edges:
            a, b = e.endpoints
            adj[a].add(b)
            adj[b].add(a)
        seen = {labels[0]}
        stack = [labels[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(labels)


def chi_graph(gog):
    """``sum chi(vertex) - sum chi(edge)`` for a connected graph of groups."""
    if not gog.connected():
        raise InputError("graph of groups must be connected")
    return sum((x for _, x in gog.vertices), Fraction(0)) - \
        sum((e.chi for e in gog.edges), Fraction(0))


@dataclass(frozen=True)
class Amalgam:
    p: int
    q: int
    c_index: int = 1


@dataclass(frozen=True)
class HNN:
    p: int
    c_index: int = 1


@dataclass(frozen=True)
class EulerCheck:
    chi_G: Fraction
    chi_H: Fraction
    ratio_sign: int
    line_case: bool

    def as_dict(self):
        return {"chi_G": str(self.chi_G), "chi_H": str(self.chi_H),
                "ratio_sign": self.ratio_sign, "line_case": self.line_case}


def _sign(x):
    return (x > 0) - (x < 0)


def gogeuler_check(chi_H, shape):
    """``chi(G)`` for a one-edge graph of groups whose edge group contains
    ``H`` with index ``c_index``.

    Amalgam: ``chi(G) = chi(H)/c * (1/p + 1/q - 1)``; HNN:
    ``chi(G) = chi(H)/c * (1/p - 1)``.  ``ratio_sign`` is the sign of
    ``chi(G)/chi(H)`` (0 when ``chi(H) = 0``).
    """
    chi_H = as_chi(chi_H)
    if isinstance(shape, Amalgam):
        if shape.p < 2 or shape.q < 2:
            raise NonReducedError("amalgam endpoints need index at least 2",
                                  precondition="reduced graph of groups")
        factor = Fraction(1, shape.p) + Fraction(1, shape.q) - 1
        line = (shape.p, shape.q) == (2, 2)
    elif isinstance(shape, HNN):
        if shape.p < 1:
            raise InputError("HNN index must be positive")
        factor = Fraction(1, shape.p) - 1
        line = shape.p == 1
    else:
        raise InputError(f"unknown shape {shape!r}")
    if shape.c_index < 1:
        raise InputError("c_index must be positive")
    if chi_H == 0:
        return EulerCheck(Fraction(0), chi_H, 0, line)
    chi_G = chi_H / shape.c_index * factor
    return EulerCheck(chi_G, chi_H, _sign(chi_G / chi_H), line)


@dataclass(frozen=True)
class OneRelatorChi:
    chi: Fraction
    n: int
    m: int
    outside_regime: bool


def one_relator_chi(n, m):
    """``1 - n + 1/m`` for ``n`` generators and relator a proper ``m``-th power.

    ``outside_regime`` flags values above zero, which only happen for
    ``n = 1``.
    """
    if not (isinstance(n, int) and isinstance(m, int)) or n < 1 or m < 1:
        raise InputError("n and m must be positive integers")
    chi = 1 - n + Fraction(1, m)
    return OneRelatorChi(chi, n, m, chi > 0)


@dataclass(frozen=True)
class EulerReport:
    classification: str
    chi_G: Fraction
    chi_H: Fraction
    detail: str

    def as_dict(self):
        return {"classification": self.classification, "chi_G": str(self.chi_G),
                "chi_H": str(self.chi_H), "detail": self.detail}


def eulerchar_report(chi_G, chi_H, shape=None):
    """Classify a commensurated-subgroup situation with ``chi(G), chi(H) <= 0``.

    Classifications: ``"chi-H-zero"``, ``"line-case"`` (quotient ``Z`` or
    ``Z/2 * Z/2``), ``"contradiction"`` (the inputs cannot satisfy the
    conclusion ``chi(G) = 0``, including a supplied shape that is not a
    line).
    """
    chi_G, chi_H = as_chi(chi_G), as_chi(chi_H)
    if chi_G > 0:
        raise RefusalError("hypothesis chi(G) <= 0 violated", precondition="chi(G) <= 0",
                           anchor="non-positive Euler characteristics")
    if chi_H > 0:
        raise RefusalError("hypothesis chi(H) <= 0 violated", precondition="chi(H) <= 0",
                           anchor="non-positive Euler characteristics")
    if chi_H == 0:
        return EulerReport("chi-H-zero", chi_G, chi_H,
                           "chi(H) = 0 forces chi(G) = 0" if chi_G == 0
                           else "chi(H) = 0 but chi(G) != 0: inputs inconsistent")
    if chi_G != 0:
        return EulerReport("contradiction", chi_G, chi_H,
                           "chi(G) != 0: hypotheses force contradiction")
    if shape is not None:
        chk = gogeuler_check(chi_H, shape)
        if chk.line_case:
            return EulerReport("line-case", chi_G, chi_H,
                               "normal N with quotient Z or Z/2 * Z/2")
        return EulerReport("contradiction", chi_G, chi_H,
                           f"shape gives chi(G) = {chk.chi_G} != 0: not a line")
    return EulerReport("line-case", chi_G, chi_H,
                       "chi(G) = 0 with chi(H) < 0: quotient Z or Z/2 * Z/2")


def parse_shape(spec):
    """``{"amalgam": [p, q], "c_index": c}`` or ``{"hnn": p, "c_index": c}``."""
    if spec is None:
        return None
    c = int(spec.get("c_index", 1))
    if "amalgam" in spec:
        p, q = spec["amalgam"]
        return Amalgam(int(p), int(q), c)
    if "hnn" in spec:
        return HNN(int(spec["hnn"]), c)
    raise InputError(f"cannot read shape {spec!r}")
