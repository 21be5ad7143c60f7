"""Based free modules, proper chain complexes and their compact duals.

Everything is finite here: a "proper" complex is one whose boundary maps
hit each basis element from finitely many cells, which is automatic for
finite bases but still reported by :func:`is_proper_map`.

Cells may carry a control point in a metric window.  Windows with a
frontier also record ``frontier_depth`` (distance from a point to the edge
of the window) so that :func:`relative_collar_complex` can cut a collar.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BudgetExceeded, ContractError, DegenerateInputError, InputError
from .sparse import SparseMatrix, as_sparse

RING_TAGS = ("integers", "rationals", "integers_mod_p")


@dataclass(frozen=True)
class BasedFreeModule:
    """Free module with an ordered basis and an optional control map."""

    basis: tuple
    control: dict | None = None
    ring: str = "integers"

    def __post_init__(self):
        if len(set(self.basis)) != len(self.basis):
            raise InputError("basis identifiers must be distinct")
        if self.control is not None and any(b not in self.control for b in self.basis):
            raise InputError("control map must be defined on the whole basis")

    @property
    def rank(self):
        return len(self.basis)

    def index(self):
        return {b: i for i, b in enumerate(self.basis)}


class ProperChainComplex:
    """Chain complex ``C_n -> ... -> C_0`` of based free modules.

    ``boundaries[k]`` is the sparse matrix of ``d_k : C_k -> C_{k-1}``
    with shape ``(rank C_{k-1}, rank C_k)``.  ``d o d = 0`` is checked on
    construction.  ``metric`` (a distance on control points) together with
    ``displacement_bound`` enables the displacement check.
    """

    def __init__(self, modules, boundaries, displacement_bound=None, metric=None,
                 frontier_depth=None, factors=None, check=True):
        self.modules = list(modules)
        self.boundaries = {}
        for k in range(1, len(self.modules)):
            d = boundaries.get(k) if isinstance(boundaries, dict) else boundaries[k - 1]
            d = SparseMatrix(self.modules[k - 1].rank, self.modules[k].rank) if d is None \
                else as_sparse(d)
            if d.shape != (self.modules[k - 1].rank, self.modules[k].rank):
                raise InputError(f"boundary {k} has shape {d.shape}, expected "
                                 f"{(self.modules[k - 1].rank, self.modules[k].rank)}")
            self.boundaries[k] = d
        self.displacement_bound = displacement_bound
        self.metric = metric
        self.frontier_depth = frontier_depth
        self.factors = factors
        if check:
            self.check()

    # -- structure -------------------------------------------------------
    @property
    def top(self):
        return len(self.modules) - 1

    @property
    def ranks(self):
        return tuple(m.rank for m in self.modules)

    @property
    def ring(self):
        return self.modules[0].ring if self.modules else "integers"

    @property
    def has_control(self):
        return bool(self.modules) and all(m.control is not None for m in self.modules)

    def boundary(self, k):
        """``d_k``; zero matrices outside ``1..top``."""
        if k in self.boundaries:
            return self.boundaries[k]
        rows = self.modules[k - 1].rank if 0 <= k - 1 <= self.top else 0
        cols = self.modules[k].rank if 0 <= k <= self.top else 0
        return SparseMatrix(rows, cols)

    def rank(self, k):
        return self.modules[k].rank if 0 <= k <= self.top else 0

    def euler_characteristic(self):
        return sum((-1) ** k * m.rank for k, m in enumerate(self.modules))

    def cells(self, k):
        return self.modules[k].basis

    def check(self):
        for k in range(2, self.top + 1):
            if not (self.boundaries[k - 1] @ self.boundaries[k]).is_zero():
                raise ContractError(f"boundary squares to a nonzero map in degree {k}",
                                    precondition="d o d = 0")
        if self.displacement_bound is not None and self.metric is not None:
            worst = self.max_displacement()
            if worst > self.displacement_bound:
                raise ContractError(f"displacement {worst} exceeds bound {self.displacement_bound}",
                                    precondition="finite displacement")

    def max_displacement(self):
        if not self.has_control:
            raise ContractError("displacement needs control maps", precondition="control maps")
        worst = 0
        for k in range(1, self.top + 1):
            src = self.modules[k]
            tgt = self.modules[k - 1]
            for (i, j), _ in self.boundaries[k].entries.items():
                d = self.metric(src.control[src.basis[j]], tgt.control[tgt.basis[i]])
                worst = max(worst, d)
        return worst

    # -- export ----------------------------------------------------------
    def to_text(self):
        """Ranks line followed by one sparse block per boundary."""
        parts = ["ranks " + " ".join(map(str, self.ranks))]
        for k in range(1, self.top + 1):
            parts.append(self.boundaries[k].to_text(degree=k))
        return "\n\n".join(parts) + "\n"

    @classmethod
    def from_text(cls, text):
        blocks = [b for b in text.strip().split("\n\n") if b.strip()]
        head = blocks[0].split()
        if head[0] != "ranks":
            raise InputError("complex text must start with a ranks line")
        ranks = [int(x) for x in head[1:]]
        mats = {}
        for b in blocks[1:]:
            k = int(b.split()[0])
            mats[k] = SparseMatrix.from_text(b)
        return algebraic_complex(ranks, mats)

    def __repr__(self):
        return f"ProperChainComplex(ranks={self.ranks})"


def algebraic_complex(ranks, boundaries, ring="integers"):
    """Complex with generic basis names ``(k, i)`` and no control.

    ``boundaries`` maps ``k`` to a dense or sparse matrix for ``d_k``, or
    is a list ``[d_1, d_2, ...]``.
    """
    mods = [BasedFreeModule(tuple((k, i) for i in range(r)), None, ring)
            for k, r in enumerate(ranks)]
    if not isinstance(boundaries, dict):
        boundaries = {k + 1: m for k, m in enumerate(boundaries)}
    return ProperChainComplex(mods, boundaries)


@dataclass(frozen=True)
class Chain:
    """Sparse chain ``sum n_sigma sigma`` in one degree of a complex."""

    complex: ProperChainComplex
    degree: int
    coefficients: dict = field(default_factory=dict)

    @property
    def support(self):
        return frozenset(c for c, n in self.coefficients.items() if n)

    def boundary(self):
        d = self.complex.boundary(self.degree)
        src = self.complex.modules[self.degree].basis
        tgt = self.complex.modules[self.degree - 1].basis
        out = {}
        for (i, j), v in d.entries.items():
            n = self.coefficients.get(src[j], 0)
            if n:
                out[tgt[i]] = out.get(tgt[i], 0) + n * v
        return Chain(self.complex, self.degree - 1, {k: v for k, v in out.items() if v})


@dataclass(frozen=True)
class Cochain:
    """Finitely supported cochain."""

    complex: object
    degree: int
    coefficients: dict = field(default_factory=dict)

    @property
    def support(self):
        return frozenset(c for c, n in self.coefficients.items() if n)


class CochainComplex:
    """Compact dual: ``coboundaries[k]`` is ``delta^k : C^k -> C^{k+1}``."""

    def __init__(self, modules, coboundaries, frontier_depth=None):
        self.modules = list(modules)
        self.coboundaries = dict(coboundaries)
        self.frontier_depth = frontier_depth
        for k in range(len(self.modules) - 2):
            if not (self.coboundaries[k + 1] @ self.coboundaries[k]).is_zero():
                raise ContractError(f"coboundary squares to a nonzero map in degree {k}",
                                    precondition="delta o delta = 0")

    @property
    def top(self):
        return len(self.modules) - 1

    @property
    def ranks(self):
        return tuple(m.rank for m in self.modules)

    def coboundary(self, k):
        if k in self.coboundaries:
            return self.coboundaries[k]
        rows = self.modules[k + 1].rank if 0 <= k + 1 <= self.top else 0
        cols = self.modules[k].rank if 0 <= k <= self.top else 0
        return SparseMatrix(rows, cols)

    def __repr__(self):
        return f"CochainComplex(ranks={self.ranks})"


def compact_dual(C):
    """Dual complex with finitely supported cochains.

    On a :class:`ProperChainComplex` returns a :class:`CochainComplex` with
    ``delta^k`` the transpose of ``d_{k+1}``; on a cochain complex returns
    the chain complex again.
    """
    if isinstance(C, CochainComplex):
        return ProperChainComplex(C.modules, {k + 1: d.transpose()
                                              for k, d in C.coboundaries.items()},
                                  frontier_depth=C.frontier_depth)
    return CochainComplex(C.modules, {k - 1: d.transpose() for k, d in C.boundaries.items()},
                          frontier_depth=C.frontier_depth)


# ---------------------------------------------------------------------------
# Rips and flag complexes


def _default_metric(points):
    p = points[0]
    if isinstance(p, (int, float)):
        return lambda x, y: abs(x - y)
    if isinstance(p, tuple) and all(isinstance(v, (int, float)) for v in p):
        return lambda x, y: sum(abs(a - b) for a, b in zip(x, y))
    from .groups import GroupElement, word_metric
    if isinstance(p, GroupElement):
        # any two points are joined through the identity
        cap = 2 * max(len(x.letters()) for x in points)
        return lambda x, y: word_metric(x, y, cap)
    raise InputError("no default metric for these points; pass dist=")


def flag_complex(vertices, edges, dim_cap=3, frontier_depth=None, metric=None,
                 budget=10**6):
    """Clique complex of a graph, vertices in the given order.

    Simplices are vertex tuples sorted by position; the control point of a
    simplex is its first vertex and ``d`` removes vertex ``i`` with sign
    ``(-1)^i``.
    """
    if dim_cap < 1:
        raise InputError("dim_cap must be at least 1")
    vertices = list(vertices)
    pos = {v: i for i, v in enumerate(vertices)}
    if len(pos) != len(vertices):
        raise InputError("repeated vertex")
    up = [set() for _ in vertices]
    for u, v in edges:
        a, b = pos[u], pos[v]
        if a == b:
            continue
        if a > b:
            a, b = b, a
        up[a].add(b)
    layers = [[(i,) for i in range(len(vertices))]]
    count = len(vertices)
    for _ in range(dim_cap):
        nxt = []
        for s in layers[-1]:
            common = up[s[0]].copy()
            for x in s[1:]:
                common &= up[x]
            for w in sorted(common):
                if w > s[-1]:
                    nxt.append(s + (w,))
        count += len(nxt)
        if count > budget:
            raise BudgetExceeded(f"simplex count exceeded {budget}", completed=len(layers) - 1)
        if not nxt:
            break
        layers.append(nxt)
    mods = []
    for layer in layers:
        basis = tuple(tuple(vertices[i] for i in s) for s in layer)
        mods.append(BasedFreeModule(basis, {b: b[0] for b in basis}))
    bounds = {}
    for k in range(1, len(layers)):
        index = {s: i for i, s in enumerate(layers[k - 1])}
        ent = {}
        for j, s in enumerate(layers[k]):
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                ent[(index[face], j)] = -1 if i % 2 else 1
        bounds[k] = SparseMatrix(len(layers[k - 1]), len(layers[k]), ent)
    return ProperChainComplex(mods, bounds, displacement_bound=None, metric=metric,
                              frontier_depth=frontier_depth, check=False)


def rips_complex(points, r, dim_cap=3, dist=None, frontier_depth=None, budget=10**6):
    """Rips complex ``P_r`` of a finite metric set, truncated at ``dim_cap``.

    ``points`` should already be in canonical (shortlex) order.  ``dist``
    defaults to ``|x - y|`` for numbers and the l1 distance for integer
    tuples, which is the word metric of the standard lattice.
    """
    points = list(points)
    if not points:
        raise InputError("empty window")
    dist = dist or _default_metric(points)
    edges = [(points[i], points[j]) for i in range(len(points))
             for j in range(i + 1, len(points)) if dist(points[i], points[j]) <= r]
    C = flag_complex(points, edges, dim_cap, frontier_depth, metric=dist, budget=budget)
    C.displacement_bound = r
    return C


# ---------------------------------------------------------------------------
# tensor products and supports


def tensor_product(C, D):
    """``C (x) D`` with ``d(s x l) = ds x l + (-1)^i s x dl``.

    Basis cells are pairs ``(s, l)`` ordered by the degree of ``s`` then by
    position.  Control points, when both factors have them, are pairs
    ``(p(s), p(l))``.
    """
    if C.ring != D.ring:
        raise InputError("tensor factors must share a ring")
    top = C.top + D.top
    ctrl = C.has_control and D.has_control
    mods, index = [], []
    for n in range(top + 1):
        basis = []
        for i in range(max(0, n - D.top), min(n, C.top) + 1):
            for s in C.cells(i):
                for l in D.cells(n - i):
                    basis.append((s, l))
        control = None
        if ctrl:
            control = {}
            for i in range(max(0, n - D.top), min(n, C.top) + 1):
                cc, dc = C.modules[i].control, D.modules[n - i].control
                for s in C.cells(i):
                    for l in D.cells(n - i):
                        control[(s, l)] = (cc[s], dc[l])
        mods.append(BasedFreeModule(tuple(basis), control, C.ring))
        index.append({b: k for k, b in enumerate(basis)})
    bounds = {}
    for n in range(1, top + 1):
        ent = {}
        for i in range(max(0, n - D.top), min(n, C.top) + 1):
            j = n - i
            if i >= 1:
                dC = C.boundary(i)
                for (a, b), v in dC.entries.items():
                    s, s2 = C.cells(i)[b], C.cells(i - 1)[a]
                    for l in D.cells(j):
                        key = (index[n - 1][(s2, l)], index[n][(s, l)])
                        ent[key] = ent.get(key, 0) + v
            if j >= 1:
                dD = D.boundary(j)
                sign = -1 if i % 2 else 1
                for (a, b), v in dD.entries.items():
                    l, l2 = D.cells(j)[b], D.cells(j - 1)[a]
                    for s in C.cells(i):
                        key = (index[n - 1][(s, l2)], index[n][(s, l)])
                        ent[key] = ent.get(key, 0) + sign * v
        bounds[n] = SparseMatrix(mods[n - 1].rank, mods[n].rank,
                                 {k: v for k, v in ent.items() if v})
    metric = None
    if ctrl and C.metric and D.metric:
        metric = lambda x, y: max(C.metric(x[0], y[0]), D.metric(x[1], y[1]))
    out = ProperChainComplex(mods, bounds, metric=metric, factors=(C, D), check=False)
    if C.displacement_bound is not None and D.displacement_bound is not None:
        out.displacement_bound = max(C.displacement_bound, D.displacement_bound)
    return out


def supports(chain):
    """``(supp_X, supp_B)`` of a chain.

    For a product ``B (x) F`` the fiber control points give ``supp_X`` and
    the base control points ``supp_B``; otherwise ``supp_B`` is ``None``.
    """
    C = chain.complex
    if not C.has_control:
        raise ContractError("supports need control maps", precondition="control maps")
    control = C.modules[chain.degree].control
    cells = chain.support
    if C.factors is not None:
        return (frozenset(control[c][1] for c in cells),
                frozenset(control[c][0] for c in cells))
    return frozenset(control[c] for c in cells), None


@dataclass(frozen=True)
class ProperMapReport:
    proper: bool
    max_preimage_count: int


def is_proper_map(f):
    """Largest number of source cells whose image meets one target cell."""
    f = as_sparse(f)
    counts = f.row_counts()
    return ProperMapReport(True, max(counts, default=0))


# ---------------------------------------------------------------------------
# collars


def relative_collar_complex(C, w):
    """Quotient ``C / C[collar]`` for the collar of width ``w``.

    A cell lies in the collar when its control point has frontier depth
    less than ``w``; faces of collar cells are added so the collar is a
    subcomplex.  Windows without a frontier are returned unchanged.
    """
    if not C.has_control:
        raise ContractError("collar needs control maps", precondition="control maps")
    depth = C.frontier_depth
    if depth is None:
        return C
    radius = max(depth.values(), default=0)
    if w > radius:
        raise DegenerateInputError(f"collar width {w} exceeds the window radius {radius}",
                                   precondition="w < window radius")
    killed = [set() for _ in C.modules]
    for k in range(C.top, -1, -1):
        mod = C.modules[k]
        for c in mod.basis:
            if depth.get(mod.control[c], radius) < w:
                killed[k].add(c)
        if k >= 1:
            low = C.modules[k - 1].basis
            for (i, j), _ in C.boundaries[k].entries.items():
                if mod.basis[j] in killed[k]:
                    killed[k - 1].add(low[i])
    keep = [[i for i, c in enumerate(m.basis) if c not in killed[k]]
            for k, m in enumerate(C.modules)]
    if not any(keep):
        raise DegenerateInputError("collar swallows the whole window",
                                   precondition="nonempty interior")
    mods = []
    for k, m in enumerate(C.modules):
        basis = tuple(m.basis[i] for i in keep[k])
        mods.append(BasedFreeModule(basis, {b: m.control[b] for b in basis}, m.ring))
    while len(mods) > 1 and not mods[-1].basis:
        mods.pop()
    bounds = {k: C.boundaries[k].submatrix(keep[k - 1], keep[k]) for k in range(1, len(mods))}
    return ProperChainComplex(mods, bounds, metric=C.metric, frontier_depth=None, check=False)


def interval_complex():
    """Two vertices joined by one edge."""
    return algebraic_complex([2, 1], [[[-1], [1]]])


def cycle_complex(n):
    """Cycle graph ``C_n`` as a 1-dimensional complex."""
    d = {}
    for j in range(n):
        d[(j, j)] = -1
        d[((j + 1) % n, j)] = d.get(((j + 1) % n, j), 0) + 1
    return algebraic_complex([n, n], [SparseMatrix(n, n, d)])


def multiplication_complex(k):
    """``0 -> Z --(x k)--> Z -> 0`` in degrees 1 and 0."""
    return algebraic_complex([1, 1], [[[k]]])


def point_complex():
    return algebraic_complex([1], [])
