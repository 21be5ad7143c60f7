"""Catalog of finitely generated groups with solvable word problem.

Every group exposes a canonical normal form, so two words represent the same
element exactly when their normal forms coincide.  Words are sequences of
*letters*: the integer ``i + 1`` stands for generator ``i`` and ``-(i + 1)``
for its inverse.

Shipped groups::

    free(k)                    reduced words
    free_abelian(n)            exponent vectors
    baumslag_solitar(m, n)     Britton normal form, <a, t | t a^m t^-1 = a^n>
    direct_product(G1, G2)     pairs of factor normal forms
    free_product(G1, G2)       alternating syllables
    euclidean_triangle_333     affine isometries over Z[w], w^3 = 1

>>> G = parse_group("baumslag_solitar(1,2)")
>>> str(normal_form(G, "t a t^-1"))
'a^2'
>>> len(ball(parse_group("free(2)"), 2))
17
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from string import ascii_lowercase

from .errors import BudgetExceeded, InputError

DEFAULT_BUDGET = 10**6


def _default_names(k):
    if k <= len(ascii_lowercase):
        return tuple(ascii_lowercase[:k])
    return tuple(f"x{i + 1}" for i in range(k))


class MarkedGroup:
    """A group together with an ordered finite generating set.

    Subclasses implement ``_identity``, ``_mul_letter`` and ``_letters``;
    multiplication and inversion default to letter-by-letter rewriting.
    Instances compare equal when their catalog ids agree.
    """

    normal_form_kind = "abstract"

    def __init__(self, catalog_id, generators):
        self.catalog_id = catalog_id
        self.generators = tuple(generators)
        self._balls = {}

    # -- subclass hooks ---------------------------------------------------
    def _identity(self):
        raise NotImplementedError

    def _mul_letter(self, nf, letter):
        raise NotImplementedError

    def _letters(self, nf):
        raise NotImplementedError

    def _mul(self, nf1, nf2):
        for letter in self._letters(nf2):
            nf1 = self._mul_letter(nf1, letter)
        return nf1

    def _inverse(self, nf):
        out = self._identity()
        for letter in reversed(self._letters(nf)):
            out = self._mul_letter(out, -letter)
        return out

    # -- public -----------------------------------------------------------
    @property
    def rank(self):
        return len(self.generators)

    def letter_order(self):
        """Letters in shortlex order: a, a^-1, b, b^-1, ..."""
        out = []
        for i in range(self.rank):
            out.extend((i + 1, -(i + 1)))
        return tuple(out)

    def identity(self):
        return GroupElement(self, self._identity())

    def gen(self, name_or_index):
        if isinstance(name_or_index, str):
            try:
                i = self.generators.index(name_or_index)
            except ValueError:
                raise InputError(f"unknown generator {name_or_index!r} in {self}") from None
        else:
            i = int(name_or_index)
        return self.element((i + 1,))

    def element(self, word):
        """Element represented by ``word`` (text or letter sequence)."""
        letters = parse_word(self, word) if isinstance(word, str) else tuple(word)
        nf = self._identity()
        for letter in letters:
            if not isinstance(letter, int) or letter == 0 or abs(letter) > self.rank:
                raise InputError(f"letter {letter!r} is not a generator of {self}")
            nf = self._mul_letter(nf, letter)
        return GroupElement(self, nf)

    def __eq__(self, other):
        return isinstance(other, MarkedGroup) and other.catalog_id == self.catalog_id

    def __hash__(self):
        return hash(self.catalog_id)

    def __repr__(self):
        return f"MarkedGroup({self.catalog_id})"

    def __str__(self):
        return self.catalog_id


@dataclass(frozen=True)
class GroupElement:
    """An element of ``owner`` stored in canonical normal form."""

    owner: MarkedGroup
    normal_form: object
    word_length_cache: int | None = field(default=None, compare=False, repr=False)

    def __mul__(self, other):
        return multiply(self, other)

    def inverse(self):
        return GroupElement(self.owner, self.owner._inverse(self.normal_form))

    def __pow__(self, k):
        base = self if k >= 0 else self.inverse()
        out = self.owner.identity()
        for _ in range(abs(k)):
            out = out * base
        return out

    @property
    def key(self):
        """Canonical byte key; equal iff the elements are equal."""
        return repr(self.normal_form).encode()

    def is_identity(self):
        return self.normal_form == self.owner._identity()

    def letters(self):
        """A word for this element read off the normal form (not geodesic)."""
        return tuple(self.owner._letters(self.normal_form))

    def __str__(self):
        return format_word(self.owner, self.letters())

    def __repr__(self):
        return f"<{self.owner.catalog_id}: {self}>"


# ---------------------------------------------------------------------------
# word syntax

_TOKEN = re.compile(r"^(?P<name>[A-Za-z][A-Za-z0-9_.]*)"
                    r"(?:\^\(?(?P<exp>[+-]?\d+)\)?|(?P<sup>⁻?[⁰¹²³⁴⁵⁶⁷⁸⁹]+))?$")
_SUPERSCRIPT = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹⁻", "0123456789-")


def _token_letters(group, token):
    m = _TOKEN.match(token)
    if not m:
        raise InputError(f"cannot parse word token {token!r}")
    name = m.group("name")
    if m.group("exp") is not None:
        exp = int(m.group("exp"))
    elif m.group("sup") is not None:
        exp = int(m.group("sup").translate(_SUPERSCRIPT))
    else:
        exp = 1
    if name in group.generators:
        letter = group.generators.index(name) + 1
    elif name.lower() in group.generators and name.lower() != name:
        letter = -(group.generators.index(name.lower()) + 1)
    else:
        raise InputError(f"unknown generator {name!r} in {group}")
    return (letter if exp > 0 else -letter,) * abs(exp)


def parse_word(group, text):
    """Parse ``"a a^-1 b"``, ``"t a t⁻¹"`` or compact ``"aBA"`` into letters.

    An uppercase single letter denotes the inverse of its lowercase
    generator.  The empty string and ``"e"``/``"1"`` give the identity.
    """
    text = text.strip()
    if text in ("", "e", "1"):
        return ()
    tokens = [t for t in re.split(r"[\s*·]+", text) if t]
    out = []
    for tok in tokens:
        try:
            out.extend(_token_letters(group, tok))
        except InputError:
            if all(len(g) == 1 for g in group.generators) and tok.isalpha():
                for ch in tok:
                    out.extend(_token_letters(group, ch))
            else:
                raise
    return tuple(out)


def format_word(group, letters):
    """Inverse of :func:`parse_word`, collapsing runs into powers."""
    if not letters:
        return "e"
    parts = []
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        name = group.generators[abs(letters[i]) - 1]
        exp = (j - i) * (1 if letters[i] > 0 else -1)
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return " ".join(parts)


# ---------------------------------------------------------------------------
# catalog


class FreeGroup(MarkedGroup):
    normal_form_kind = "reduced_word"

    def __init__(self, k):
        if k < 0:
            raise InputError("free group rank must be non-negative")
        super().__init__(f"free({k})", _default_names(k))

    def _identity(self):
        return ()

    def _mul_letter(self, nf, letter):
        if nf and nf[-1] == -letter:
            return nf[:-1]
        return nf + (letter,)

    def _letters(self, nf):
        return nf

    def _mul(self, nf1, nf2):
        i = 0
        while i < min(len(nf1), len(nf2)) and nf1[-1 - i] == -nf2[i]:
            i += 1
        return nf1[:len(nf1) - i] + nf2[i:]

    def _inverse(self, nf):
        return tuple(-x for x in reversed(nf))


class FreeAbelianGroup(MarkedGroup):
    normal_form_kind = "exponent_vector"

    def __init__(self, n):
        if n < 0:
            raise InputError("free abelian rank must be non-negative")
        super().__init__(f"free_abelian({n})", _default_names(n))
        self.n = n

    def _identity(self):
        return (0,) * self.n

    def _mul_letter(self, nf, letter):
        i = abs(letter) - 1
        v = list(nf)
        v[i] += 1 if letter > 0 else -1
        return tuple(v)

    def _letters(self, nf):
        out = []
        for i, x in enumerate(nf):
            out.extend([(i + 1) if x > 0 else -(i + 1)] * abs(x))
        return tuple(out)

    def _mul(self, nf1, nf2):
        return tuple(x + y for x, y in zip(nf1, nf2))

    def _inverse(self, nf):
        return tuple(-x for x in nf)

    def vector(self, v):
        if len(v) != self.n:
            raise InputError(f"expected a vector of length {self.n}")
        return GroupElement(self, tuple(int(x) for x in v))


class BaumslagSolitarGroup(MarkedGroup):
    """``<a, t | t a^m t^-1 = a^n>`` in Britton normal form.

    A normal form is the flat tuple ``(k0, e1, r1, ..., el, rl)`` for the
    word ``a^k0 t^e1 a^r1 ... t^el a^rl``: ``k0`` is free, ``r_i`` lies in
    ``[0, |m|)`` after ``t`` and in ``[0, |n|)`` after ``t^-1``, and no
    ``t^e a^0 t^-e`` pinch survives.
    """

    normal_form_kind = "britton"

    def __init__(self, m, n):
        if m == 0 or n == 0:
            raise InputError("Baumslag-Solitar parameters must be non-zero")
        super().__init__(f"baumslag_solitar({m},{n})", ("a", "t"))
        self.m, self.n = m, n

    def _identity(self):
        return (0,)

    def _settle(self, exps, ts, j):
        # exps[j] may be unreduced; push quotients left and cancel pinches.
        while j >= 1:
            e = ts[j - 1]
            mod, out = (self.m, self.n) if e > 0 else (self.n, self.m)
            r = exps[j] % abs(mod)
            q = (exps[j] - r) // mod
            exps[j] = r
            exps[j - 1] += out * q
            if r == 0 and j < len(ts) and ts[j] == -e:
                exps[j - 1] += exps[j + 1]
                del exps[j:j + 2]
                del ts[j - 1:j + 1]
                j -= 1
                continue
            if q == 0:
                break
            j -= 1

    def _split(self, nf):
        return list(nf[0::2]), list(nf[1::2])

    def _join(self, exps, ts):
        out = [exps[0]]
        for e, r in zip(ts, exps[1:]):
            out.extend((e, r))
        return tuple(out)

    def _mul_letter(self, nf, letter):
        exps, ts = self._split(nf)
        if abs(letter) == 1:
            exps[-1] += 1 if letter > 0 else -1
            self._settle(exps, ts, len(exps) - 1)
        else:
            ts.append(1 if letter > 0 else -1)
            exps.append(0)
            # a pinch can only form around the exponent just before the new t
            self._settle(exps, ts, len(exps) - 2)
        return self._join(exps, ts)

    def _push(self, exps, ts, syllables):
        # syllables: ("a", k) or ("t", +-1), applied on the right in order
        for kind, k in syllables:
            if kind == "a":
                if k:
                    exps[-1] += k
                    self._settle(exps, ts, len(exps) - 1)
            else:
                ts.append(k)
                exps.append(0)
                self._settle(exps, ts, len(exps) - 2)

    def _syllables(self, nf):
        out = [("a", nf[0])]
        for i in range(1, len(nf), 2):
            out.append(("t", nf[i]))
            out.append(("a", nf[i + 1]))
        return out

    def _mul(self, nf1, nf2):
        exps, ts = self._split(nf1)
        self._push(exps, ts, self._syllables(nf2))
        return self._join(exps, ts)

    def _inverse(self, nf):
        inv = [(kind, -k) for kind, k in reversed(self._syllables(nf))]
        exps, ts = [0], []
        self._push(exps, ts, inv)
        return self._join(exps, ts)

    def _letters(self, nf):
        exps, ts = self._split(nf)
        out = []

        def power(k):
            out.extend([1 if k > 0 else -1] * abs(k))

        power(exps[0])
        for e, r in zip(ts, exps[1:]):
            out.append(2 if e > 0 else -2)
            power(r)
        return tuple(out)

    def t_exponent(self, nf):
        return sum(nf[1::2])


class TriangleGroup333(MarkedGroup):
    """The Euclidean (3,3,3) reflection triangle group.

    ``<a, b, c | a^2, b^2, c^2, (ab)^3, (ac)^3, (bc)^3>`` acting on the
    plane, realized exactly over Z[w] with w a primitive cube root of
    unity.  The fundamental triangle has vertices 0, 1 and 1 + w.  A normal
    form ``(k, s, x, y)`` is the isometry ``z -> w^k conj^s(z) + (x + y w)``
    and words act by composition, ``gh = g o h``.
    """

    normal_form_kind = "affine_isometry_zw"
    _GENS = ((0, 1, 0, 0), (1, 1, 0, 0), (2, 1, 2, 1))

    def __init__(self):
        super().__init__("euclidean_triangle_333", ("a", "b", "c"))

    @staticmethod
    def zmul(u, v):
        a, b = u
        c, d = v
        return (a * c - b * d, a * d + b * c - b * d)

    @staticmethod
    def zconj(u):
        x, y = u
        return (x - y, -y)

    _UNITS = ((1, 0), (0, 1), (-1, -1))

    def _compose(self, f, g):
        k, s, x, y = f
        k2, s2, x2, y2 = g
        v2 = (x2, y2)
        if s:
            v2 = self.zconj(v2)
        v2 = self.zmul(self._UNITS[k], v2)
        k_new = (k + (-k2 if s else k2)) % 3
        return (k_new, (s + s2) % 2, v2[0] + x, v2[1] + y)

    def _identity(self):
        return (0, 0, 0, 0)

    def _mul_letter(self, nf, letter):
        return self._compose(nf, self._GENS[abs(letter) - 1])

    def _mul(self, nf1, nf2):
        return self._compose(nf1, nf2)

    def _letters(self, nf):
        # Walk back to the identity greedily by reflecting the base triangle.
        return _triangle_word(self, nf)

    def apply(self, nf, z):
        """Image of the Z[w] point ``z`` under the isometry ``nf``."""
        k, s, x, y = nf
        if s:
            z = self.zconj(z)
        z = self.zmul(self._UNITS[k], z)
        return (z[0] + x, z[1] + y)


def _triangle_word(group, nf):
    # Reflect the image triangle across a wall facing the base triangle until
    # it returns home; each step crosses one separating wall, so the word is
    # geodesic.  Right multiplication by a generator reflects the image
    # across one of its own walls.
    letters = []
    cur = nf
    ident = group._identity()
    while cur != ident:
        best = None
        for i, g in enumerate(group._GENS):
            cand = group._compose(cur, g)
            d = _centroid_norm(group, cand)
            if best is None or d < best[0]:
                best = (d, i, cand)
        letters.append(best[1] + 1)
        cur = best[2]
    return tuple(reversed(letters))


def _centroid_norm(group, nf):
    # squared distance (times 9) from the image of the base centroid to it;
    # reflecting across a wall facing the origin strictly decreases it.
    k, s, x, y = nf
    z = (2, 1)
    if s:
        z = group.zconj(z)
    z = group.zmul(group._UNITS[k], z)
    dx, dy = z[0] + 3 * x - 2, z[1] + 3 * y - 1
    # |dx + dy w|^2 = dx^2 - dx dy + dy^2
    return dx * dx - dx * dy + dy * dy


class DirectProduct(MarkedGroup):
    normal_form_kind = "pair"

    def __init__(self, g1, g2):
        super().__init__(f"direct_product({g1.catalog_id},{g2.catalog_id})",
                         _merge_names(g1.generators, g2.generators))
        self.factors = (g1, g2)

    def _split_letter(self, letter):
        k1 = self.factors[0].rank
        i = abs(letter)
        if i <= k1:
            return 0, letter
        return 1, (i - k1) * (1 if letter > 0 else -1)

    def _identity(self):
        return (self.factors[0]._identity(), self.factors[1]._identity())

    def _mul_letter(self, nf, letter):
        f, local = self._split_letter(letter)
        parts = list(nf)
        parts[f] = self.factors[f]._mul_letter(parts[f], local)
        return tuple(parts)

    def _letters(self, nf):
        k1 = self.factors[0].rank
        first = self.factors[0]._letters(nf[0])
        second = tuple(x + k1 if x > 0 else x - k1 for x in self.factors[1]._letters(nf[1]))
        return tuple(first) + second

    def _mul(self, nf1, nf2):
        return tuple(f._mul(a, b) for f, a, b in zip(self.factors, nf1, nf2))

    def _inverse(self, nf):
        return tuple(f._inverse(a) for f, a in zip(self.factors, nf))

    def embed(self, index, element):
        """Image of a factor element under the inclusion of factor ``index``."""
        parts = list(self._identity())
        parts[index] = element.normal_form
        return GroupElement(self, tuple(parts))

    def project(self, index, element):
        return GroupElement(self.factors[index], element.normal_form[index])


class FreeProduct(MarkedGroup):
    normal_form_kind = "syllables"

    def __init__(self, g1, g2):
        super().__init__(f"free_product({g1.catalog_id},{g2.catalog_id})",
                         _merge_names(g1.generators, g2.generators))
        self.factors = (g1, g2)

    _split_letter = DirectProduct._split_letter

    def _identity(self):
        return ()

    def _mul_letter(self, nf, letter):
        f, local = self._split_letter(letter)
        fac = self.factors[f]
        if nf and nf[-1][0] == f:
            new = fac._mul_letter(nf[-1][1], local)
            if new == fac._identity():
                return nf[:-1]
            return nf[:-1] + ((f, new),)
        return nf + ((f, fac._mul_letter(fac._identity(), local)),)

    def _letters(self, nf):
        k1 = self.factors[0].rank
        out = []
        for f, part in nf:
            local = self.factors[f]._letters(part)
            if f == 0:
                out.extend(local)
            else:
                out.extend(x + k1 if x > 0 else x - k1 for x in local)
        return tuple(out)


def _merge_names(n1, n2):
    if set(n1) & set(n2):
        return tuple(f"{x}_1" for x in n1) + tuple(f"{x}_2" for x in n2)
    return tuple(n1) + tuple(n2)


_CATALOG_INT = {
    "free": (1, lambda a: FreeGroup(*a)),
    "free_abelian": (1, lambda a: FreeAbelianGroup(*a)),
    "baumslag_solitar": (2, lambda a: BaumslagSolitarGroup(*a)),
}
_CATALOG_GROUP = {
    "direct_product": DirectProduct,
    "free_product": FreeProduct,
}


def parse_group(text):
    """Build a catalog group from its id, e.g. ``"direct_product(free(1),free(2))"``."""
    pos, group = _parse_group(text.replace(" ", ""), 0)
    if pos != len(text.replace(" ", "")):
        raise InputError(f"trailing characters in group id {text!r}")
    return group


def _parse_group(s, pos):
    m = re.compile(r"[a-z_0-9]+").match(s, pos)
    if not m:
        raise InputError(f"expected a catalog name at position {pos} in {s!r}")
    name = m.group(0)
    pos = m.end()
    if name == "euclidean_triangle_333":
        if s.startswith("()", pos):
            pos += 2
        return pos, TriangleGroup333()
    if pos >= len(s) or s[pos] != "(":
        raise InputError(f"catalog entry {name!r} needs arguments")
    pos += 1
    if name in _CATALOG_INT:
        arity, make = _CATALOG_INT[name]
        m = re.compile(r"-?\d+(?:,-?\d+)*").match(s, pos)
        if not m:
            raise InputError(f"{name} expects integer arguments")
        args = [int(x) for x in m.group(0).split(",")]
        if len(args) != arity:
            raise InputError(f"{name} expects {arity} argument(s), got {len(args)}")
        pos = m.end()
        if pos >= len(s) or s[pos] != ")":
            raise InputError(f"unclosed argument list for {name}")
        return pos + 1, make(args)
    if name in _CATALOG_GROUP:
        pos, g1 = _parse_group(s, pos)
        if pos >= len(s) or s[pos] != ",":
            raise InputError(f"{name} expects two group arguments")
        pos, g2 = _parse_group(s, pos + 1)
        if pos >= len(s) or s[pos] != ")":
            raise InputError(f"unclosed argument list for {name}")
        return pos + 1, _CATALOG_GROUP[name](g1, g2)
    raise InputError(f"unknown catalog group {name!r}")


# ---------------------------------------------------------------------------
# operations


def normal_form(group, word):
    """Canonical element represented by ``word``."""
    return group.element(word)


def multiply(g, h):
    if g.owner != h.owner:
        raise InputError(f"cannot multiply elements of {g.owner} and {h.owner}")
    return GroupElement(g.owner, g.owner._mul(g.normal_form, h.normal_form))


@dataclass(frozen=True)
class Ball:
    """Closed word-metric ball, elements listed in shortlex BFS order.

    ``lengths[key]`` is the distance to ``center`` and ``words[key]`` the
    shortlex-least geodesic word from the center.
    """

    center: GroupElement
    radius: int
    elements: dict
    lengths: dict
    words: dict

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements.values())

    def __contains__(self, g):
        return g.key in self.elements

    def length(self, g):
        return self.lengths.get(g.key)

    def layer(self, r):
        return [g for k, g in self.elements.items() if self.lengths[k] == r]

    def sub(self, r):
        """The sub-ball of radius ``r <= radius``."""
        if r > self.radius:
            raise ValueError("sub-ball radius exceeds the ball radius")
        keys = [k for k in self.elements if self.lengths[k] <= r]
        return Ball(self.center, r, {k: self.elements[k] for k in keys},
                    {k: self.lengths[k] for k in keys},
                    {k: self.words[k] for k in keys})

    def layer_sizes(self):
        sizes = [0] * (self.radius + 1)
        for d in self.lengths.values():
            sizes[d] += 1
        return sizes


def _identity_ball(group, radius, budget):
    cached = group._balls.get("max")
    if cached is not None and cached.radius >= radius:
        return cached if cached.radius == radius else cached.sub(radius)
    e = group.identity()
    if cached is None:
        elements, lengths, words = {e.key: e}, {e.key: 0}, {e.key: ()}
        start = 0
    else:
        elements = dict(cached.elements)
        lengths = dict(cached.lengths)
        words = dict(cached.words)
        start = cached.radius
    frontier = [k for k in elements if lengths[k] == start]
    order = group.letter_order()
    for r in range(start, radius):
        nxt = []
        for k in frontier:
            g = elements[k]
            w = words[k]
            for letter in order:
                nf = group._mul_letter(g.normal_form, letter)
                key = repr(nf).encode()
                if key in elements:
                    continue
                elements[key] = GroupElement(group, nf)
                lengths[key] = r + 1
                words[key] = w + (letter,)
                nxt.append(key)
                if len(elements) > budget:
                    for kk in nxt:
                        del elements[kk], lengths[kk], words[kk]
                    if cached is None or cached.radius < r:
                        group._balls["max"] = Ball(e, r, elements, lengths, words)
                    raise BudgetExceeded(
                        f"ball of {group} exceeded {budget} elements at radius {r + 1}",
                        completed=r)
        frontier = nxt
    out = Ball(e, radius, elements, lengths, words)
    group._balls["max"] = out
    return out


def ball(group, radius, budget=DEFAULT_BUDGET, center=None):
    """All elements within word distance ``radius`` of ``center`` (identity)."""
    if radius < 0:
        raise InputError("radius must be non-negative")
    base = _identity_ball(group, radius, budget)
    if center is None or center.is_identity():
        return base
    elements = {}
    lengths = {}
    words = {}
    for k, g in base.elements.items():
        h = center * g
        elements[h.key] = h
        lengths[h.key] = base.lengths[k]
        words[h.key] = base.words[k]
    return Ball(center, radius, elements, lengths, words)


@dataclass(frozen=True)
class ExceedsBudget:
    """Word-metric report when the distance is larger than ``budget``."""

    budget: int

    def __str__(self):
        return f"> {self.budget}"


def word_length(g, budget=16, ball_budget=DEFAULT_BUDGET):
    """Word length of ``g`` if at most ``budget``, else :class:`ExceedsBudget`.

    Uses a cached ball of radius ``ceil(budget / 2)`` and a
    meet-in-the-middle split of a geodesic.
    """
    group = g.owner
    cached = group._balls.get("max")
    if cached is not None and g.key in cached.lengths:
        d = cached.lengths[g.key]
        return d if d <= budget else ExceedsBudget(budget)
    half = math.ceil(budget / 2)
    if cached is None or cached.radius < half:
        cached = _identity_ball(group, half, ball_budget)
        if g.key in cached.lengths:
            d = cached.lengths[g.key]
            return d if d <= budget else ExceedsBudget(budget)
    if cached.radius >= budget:
        return ExceedsBudget(budget)
    best = None
    lengths = cached.lengths
    for k, x in cached.elements.items():
        dx = lengths[k]
        if best is not None and dx >= best:
            break
        y = multiply(x.inverse(), g)
        dy = lengths.get(y.key)
        if dy is not None and (best is None or dx + dy < best):
            best = dx + dy
    if best is None or best > budget:
        return ExceedsBudget(budget)
    return best


def word_metric(g, h, budget=16):
    """``d(g, h) = |g^-1 h|`` or :class:`ExceedsBudget` past ``budget``."""
    if g.owner != h.owner:
        raise InputError("word_metric needs elements of the same group")
    return word_length(multiply(g.inverse(), h), budget)


def shortlex_word(g, budget=16):
    """Shortlex-least geodesic word for ``g`` (as letters)."""
    length = word_length(g, budget)
    if isinstance(length, ExceedsBudget):
        raise BudgetExceeded(f"{g} is longer than {budget}", completed=budget)
    b = _identity_ball(g.owner, length, DEFAULT_BUDGET)
    return b.words[g.key]
