"""Ends of graph windows, coarse H^0/H^1 surrogates and the splitting report.

A finite window cannot tell bounded from unbounded components.  The
surrogate used throughout: after deleting the open ball ``B_r`` around
the base vertex, a component counts when it meets the window's
``boundary_set``.  Counts are only trusted while ``r + margin`` stays
inside the window radius (margin ``2r`` unless given).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from .complexes import flag_complex
from .cosets import (finite_index_check, quotient_window, require_almost_normal)
from .errors import ContractError, InputError
from .homology import RATIONALS, cohomology_c


@dataclass
class GraphWindow:
    """Finite piece of a locally finite graph around a base vertex.

    ``depth[v]`` is the distance from ``v`` to the window's frontier;
    ``boundary_set`` holds the vertices with depth at most
    ``boundary_width``.  ``radius`` is the largest graph distance from the
    base.
    """

    vertices: list
    adjacency: dict
    base: object
    boundary_set: frozenset
    depth: dict | None
    source: str = "explicit"
    dist: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.base not in self.adjacency:
            raise InputError("base vertex is not in the window")
        for v, nbrs in self.adjacency.items():
            for w in nbrs:
                if w not in self.adjacency:
                    raise InputError(f"edge {v}-{w} leaves the window")
        if not self.boundary_set <= set(self.adjacency):
            raise InputError("boundary_set must consist of window vertices")
        self.dist = _bfs(self.adjacency, self.base)

    @property
    def radius(self):
        return max(self.dist.values(), default=0)

    @property
    def edges(self):
        pos = {v: i for i, v in enumerate(self.vertices)}
        return [(v, w) for v in self.vertices for w in self.adjacency[v] if pos[v] < pos[w]]

    @classmethod
    def from_edges(cls, vertices, edges, base, boundary_set=None, depth=None, source="explicit",
                   boundary_width=0):
        vertices = list(vertices)
        adj = {v: [] for v in vertices}
        if base not in adj:
            raise InputError("base vertex is not in the window")
        seen = set()
        for u, v in edges:
            if u != v and (u, v) not in seen:
                seen.add((u, v))
                seen.add((v, u))
                adj[u].append(v)
                adj[v].append(u)
        if depth is None and boundary_set is None:
            d = _bfs(adj, base)
            if len(d) == len(vertices):
                R = max(d.values())
                depth = {v: R - d[v] for v in vertices}
        if boundary_set is None:
            boundary_set = frozenset(v for v in vertices
                                     if depth is not None and depth[v] <= boundary_width)
        return cls(vertices, adj, base, frozenset(boundary_set), depth, source)

    def to_edge_list(self):
        pos = {v: i for i, v in enumerate(self.vertices)}
        return "\n".join(f"{pos[u]} {pos[v]}" for u, v in self.edges)


def _bfs(adj, start, blocked=None, limit=None):
    dist = {start: 0}
    q = deque([start])
    while q:
        v = q.popleft()
        if limit is not None and dist[v] >= limit:
            continue
        for w in adj[v]:
            if w not in dist and (blocked is None or w not in blocked):
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


# ---------------------------------------------------------------------------
# window constructors


def path_window(R):
    """``[-R, R]`` in the Cayley graph of ``Z``, shortlex vertex order."""
    verts = [0] + [x for k in range(1, R + 1) for x in (k, -k)]
    edges = [(x, x + 1) for x in range(-R, R)]
    return GraphWindow.from_edges(verts, edges, 0, depth={x: R - abs(x) for x in verts},
                                  source="ball")


def cayley_window(group, R, boundary_width=0, budget=10**6):
    """``Ball(R)`` of a marked group as a graph window on normal-form keys."""
    from .groups import ball, multiply
    b = ball(group, R, budget=budget)
    gens = [group.element((x,)) for x in group.letter_order()]
    edges = []
    for k, g in b.elements.items():
        for s in gens:
            h = multiply(g, s)
            if h.key in b.elements:
                edges.append((k, h.key))
    depth = {k: R - d for k, d in b.lengths.items()}
    return GraphWindow.from_edges(list(b.elements), edges, group.identity().key,
                                  depth=depth, source="ball", boundary_width=boundary_width)


def grid_window(R):
    """Word-metric ball of radius ``R`` in ``Z^2`` on integer pairs."""
    verts = [(0, 0)]
    for d in range(1, R + 1):
        for x in range(-d, d + 1):
            y = d - abs(x)
            verts.append((x, y))
            if y:
                verts.append((x, -y))
    vs = set(verts)
    edges = [(v, (v[0] + dx, v[1] + dy)) for v in verts for dx, dy in ((1, 0), (0, 1))
             if (v[0] + dx, v[1] + dy) in vs]
    return GraphWindow.from_edges(verts, edges, (0, 0),
                                  depth={v: R - abs(v[0]) - abs(v[1]) for v in verts},
                                  source="ball")


def tree_window(R, degree=3):
    """Ball of radius ``R`` in the ``degree``-regular tree.

    Vertices are integers in breadth-first order with the root ``0``.
    """
    edges = []
    depth = {0: R}
    layer = [0]
    n = 1
    for d in range(R):
        nxt = []
        for v in layer:
            for _ in range(degree if d == 0 else degree - 1):
                edges.append((v, n))
                depth[n] = R - d - 1
                nxt.append(n)
                n += 1
        layer = nxt
    return GraphWindow.from_edges(range(n), edges, 0, depth=depth, source="explicit")


def quotient_graph_window(qw, scale):
    """Graph of ``G/H`` at ``scale`` from a quotient window.

    Edges join cosets whose grown-window Hausdorff estimate is at most
    ``scale``.  The frontier depth of a coset is ``R`` minus the length of
    its shortest element.
    """
    n = len(qw)
    edges = qw.edges(scale, extended=True)
    depth = {i: qw.R - qw.min_length[i] for i in range(n)}
    return GraphWindow.from_edges(list(range(n)), edges, 0, depth=depth, source="quotient")


# ---------------------------------------------------------------------------
# connectivity


@dataclass(frozen=True)
class ConnectivityReport:
    scale: int | None
    components: tuple
    gaps: tuple = ()

    @property
    def connected(self):
        return self.scale is not None


def check_coarse_connectivity(points, r_schedule, dist=None):
    """First scheduled ``r`` at which the scale-``r`` graph is connected.

    ``points`` is a sequence with ``dist`` a metric on it, or a
    :class:`~coarsegrp.cosets.QuotientWindow` (grown-window distances).
    On failure, ``gaps`` lists for each point the distance to its nearest
    neighbour, sorted, as a census of what scale would be needed.
    """
    from .cosets import QuotientWindow
    if isinstance(points, QuotientWindow):
        qw = points
        idx = list(range(len(qw)))
        dist = lambda i, j: qw.extended[i][j]
        pts = idx
    else:
        pts = list(points)
        if dist is None:
            dist = lambda x, y: abs(x - y)
    if not pts:
        raise InputError("empty window")
    n = len(pts)
    D = [[dist(pts[i], pts[j]) for j in range(n)] for i in range(n)]
    comps = []
    first = None
    for r in sorted(r_schedule):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for i in range(n):
            for j in range(i + 1, n):
                if D[i][j] <= r:
                    a, b = find(i), find(j)
                    if a != b:
                        parent[a] = b
        c = len({find(i) for i in range(n)})
        comps.append((r, c))
        if c == 1 and first is None:
            first = r
    gaps = ()
    if first is None:
        gaps = tuple(sorted(min((D[i][j] for j in range(n) if j != i), default=0)
                            for i in range(n)))
    return ConnectivityReport(first, tuple(comps), gaps)


# ---------------------------------------------------------------------------
# ends


@dataclass(frozen=True)
class EndsReport:
    """``schedule`` entries are ``(r, count, reliable)``.

    ``verdict`` is one of ``"exact"`` (``value`` ends), ``"one-end"``,
    ``"lower-bound"`` (at least ``value``, unstabilized) or
    ``"window-too-small"``.
    """

    schedule: tuple
    verdict: str
    value: int | None
    radius: int

    @property
    def counts(self):
        return [c for _, c, _ in self.schedule]

    def describe(self):
        if self.verdict == "exact":
            return f"e = {self.value}"
        if self.verdict == "one-end":
            return "one end"
        if self.verdict == "lower-bound":
            return f">= {self.value}, unstabilized"
        return "window too small"

    def as_dict(self):
        return {"schedule": [{"r": r, "count": c, "reliable": ok} for r, c, ok in self.schedule],
                "verdict": self.verdict, "value": self.value, "radius": self.radius}


def count_boundary_components(g, r):
    """Components of ``window - B_r`` (open ball) that meet ``boundary_set``."""
    removed = {v for v, d in g.dist.items() if d < r}
    seen = set(removed)
    count = 0
    for v in g.vertices:
        if v in seen:
            continue
        comp_hits = False
        q = deque([v])
        seen.add(v)
        while q:
            x = q.popleft()
            if x in g.boundary_set:
                comp_hits = True
            for y in g.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    q.append(y)
        count += comp_hits
    return count


def ends_estimate(g, r_schedule, margin=None):
    """Boundary-touching component counts with a stabilization verdict.

    Three equal consecutive reliable counts give an exact answer; a count
    of one stabilized means one end.  Otherwise the largest reliable count
    is reported as a lower bound; infinitely many ends are never claimed.
    """
    sched = []
    for r in sorted(r_schedule):
        m = 2 * r if margin is None else margin
        ok = g.radius >= r + m
        sched.append((r, count_boundary_components(g, r), ok))
    good = [c for _, c, ok in sched if ok]
    if not good:
        return EndsReport(tuple(sched), "window-too-small", None, g.radius)
    if len(good) >= 3 and len(set(good[-3:])) == 1:
        e = good[-1]
        if e == 1:
            return EndsReport(tuple(sched), "one-end", 1, g.radius)
        return EndsReport(tuple(sched), "exact", e, g.radius)
    return EndsReport(tuple(sched), "lower-bound", max(good), g.radius)


# ---------------------------------------------------------------------------
# H^0 and H^1 surrogates


def _rips_from_graph(g, scale, dim_cap=2):
    edges = []
    if scale == 1:
        edges = g.edges
    else:
        pos = {v: i for i, v in enumerate(g.vertices)}
        for v in g.vertices:
            for w, d in _bfs(g.adjacency, v, limit=scale).items():
                if 0 < d and pos[v] < pos[w]:
                    edges.append((v, w))
    return flag_complex(g.vertices, edges, dim_cap, frontier_depth=g.depth)


@dataclass(frozen=True)
class H0Report:
    bounded: bool
    h0_rank: int
    components: int
    collar_rank: int | None


def coarse_h0_check(g, collar_width=1):
    """Bounded windows give rank 1; unbounded ones the collar-relative rank.

    ``components`` counts graph components so a disconnected bounded window
    is visible.  ``collar_rank`` is the relative ``H^0`` rank computed from
    the cochain complex, which must be 0 for an unbounded window.
    """
    comps = _component_count(g)
    if not g.boundary_set:
        return H0Report(True, 1, comps, None)
    C = _rips_from_graph(g, 1, dim_cap=1)
    H = cohomology_c(C, RATIONALS, collar=collar_width)
    return H0Report(False, 0, comps, H[0].free_rank)


def _component_count(g):
    seen = set()
    n = 0
    for v in g.vertices:
        if v not in seen:
            n += 1
            seen.update(_bfs(g.adjacency, v))
    return n


@dataclass(frozen=True)
class H1Report:
    rank: int
    h0_rank: int
    ends: EndsReport | None
    consistent: bool | None
    scale: int
    relative_f_vector: tuple


def coarse_h1_rank(g, collar_width=1, scale=1, ends=None, dim_cap=2):
    """Rank of collar-relative ``H^1`` of the scale-``scale`` Rips complex.

    Compared with ``ends.value - 1`` when an ends verdict is supplied and
    exact or one-end; a lower-bound verdict is only checked for ``>=``.
    """
    if _component_count(g) != 1:
        raise ContractError("window is not connected at scale 1",
                            precondition="coarse connectivity at scale 1")
    from .complexes import relative_collar_complex
    C = _rips_from_graph(g, scale, dim_cap=dim_cap)
    rel = relative_collar_complex(C, collar_width)
    from .complexes import compact_dual
    from .homology import cochain_cohomology
    H = cochain_cohomology(compact_dual(rel), RATIONALS)
    rank = H[1].free_rank if len(H) > 1 else 0
    consistent = None
    if ends is not None:
        if ends.verdict in ("exact", "one-end"):
            consistent = rank == ends.value - 1
        elif ends.verdict == "lower-bound":
            consistent = rank >= ends.value - 1
    return H1Report(rank, H[0].free_rank, ends, consistent, scale, rel.ranks)


# ---------------------------------------------------------------------------
# splitting


@dataclass
class SplitReport:
    group: str
    subgroup: str
    certificates: list
    coset_count_schedule: list
    ends_schedule: list
    verdict: str
    detail: str = ""
    scale: int | None = None
    index: int | None = None
    params: dict = field(default_factory=dict)

    def as_dict(self):
        return {"group": self.group, "subgroup": self.subgroup,
                "certificates": [c.as_dict() for c in self.certificates],
                "coset_count_schedule": self.coset_count_schedule,
                "ends_schedule": self.ends_schedule, "verdict": self.verdict,
                "detail": self.detail, "scale": self.scale, "index": self.index,
                "params": self.params}

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True)


SPLIT_DEFAULTS = {"R": 6, "margin": 1, "cert_radius": 8, "scales": [1, 2, 3, 4],
                  "r_schedule": [1, 2], "ends_margin": None, "finite_steps": 3}


def splitting_criterion(group, sub, params=None):
    """Ends of ``G/H`` for a commensurated ``H``.

    Refuses (``RefusalError``) unless every generator of ``G`` and its
    inverse gets a finite commensuration certificate.  Verdicts:
    ``"finite-index"``, ``"splits"`` (two or more ends witnessed),
    ``"one-end"`` and ``"inconclusive"``.
    """
    p = dict(SPLIT_DEFAULTS)
    p.update(params or {})
    certs = require_almost_normal(group, sub, p["cert_radius"])
    qw = quotient_window(group, sub, p["R"], p["margin"])
    fi = finite_index_check(qw, p["finite_steps"])
    counts = list(fi.coset_counts)
    base = dict(group=group.catalog_id, subgroup=sub.label, certificates=certs,
                coset_count_schedule=counts, params=p)
    if fi.finite:
        return SplitReport(ends_schedule=[], verdict="finite-index",
                           detail=f"finite-index, index {fi.index_bound}",
                           index=fi.index_bound, **base)
    conn = check_coarse_connectivity(qw, p["scales"])
    if not conn.connected:
        return SplitReport(ends_schedule=[], verdict="inconclusive",
                           detail="quotient window not coarsely connected at scheduled scales",
                           **base)
    g = quotient_graph_window(qw, conn.scale)
    ends = ends_estimate(g, p["r_schedule"], p["ends_margin"])
    sched = [e for e in ends.as_dict()["schedule"]]
    if ends.verdict in ("exact", "lower-bound") and ends.value >= 2:
        verdict, detail = "splits", f"ends of G/H: {ends.describe()}"
    elif ends.verdict == "one-end":
        verdict, detail = "one-end", "one end: no splitting over H"
    else:
        verdict, detail = "inconclusive", ends.describe()
    return SplitReport(ends_schedule=sched, verdict=verdict, detail=detail,
                       scale=conn.scale, **base)
