"""Free graded Lie algebras over R with a Lyndon-word basis.

Generators are ordered by (degree, declaration order).  The basis in each
degree consists of the standard bracketings of Lyndon words together with the
squares [l, l] of odd-degree Lyndon basis elements.  Elements are dictionaries
from :class:`Monomial` to nonzero :class:`~fractions.Fraction` coefficients.

Brackets of basis elements are rewritten with graded antisymmetry
[x, y] = -(-1)^{|x||y|} [y, x] and the graded Jacobi identity
[x, [y, z]] = [[x, y], z] + (-1)^{|x||y|} [y, [x, z]].  Both 2 and 3 must be
invertible for the result to be meaningful; all coefficients stay rational.

:func:`tensor_embed` expands into the tensor algebra and is used as an
independent check of the rewriting.
"""
from __future__ import annotations

import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import UndeclaredGenerator

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


@dataclass(frozen=True)
class GradedGenerator:
    name: str
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"generator {self.name} must have positive degree")


@dataclass(frozen=True, order=True)
class Monomial:
    """A basis element: Lyndon ``word`` (letter indices), or its square."""

    word: tuple
    square: bool = False

    @property
    def key(self) -> tuple:
        return self.word + self.word if self.square else self.word

    @property
    def length(self) -> int:
        return 2 * len(self.word) if self.square else len(self.word)


# a bracket tree is a generator name or a pair of trees
Tree = Union[str, tuple]


def is_lyndon(word: Sequence) -> bool:
    w = tuple(word)
    return bool(w) and all(w < w[i:] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def standard_factorization(word: tuple) -> tuple:
    """(u, v) with word = uv and v the longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise ValueError(f"{word} has no standard factorization")


def lyndon_words(alphabet_size: int, max_length: int):
    """All Lyndon words of length <= max_length, in lexicographic order (Duval)."""
    if alphabet_size == 0 or max_length == 0:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_length:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet_size - 1:
            w.pop()


class FreeLieAlgebra:
    """The free graded Lie algebra on a list of generators.

    >>> L = FreeLieAlgebra([("u", 3), ("v", 6)])
    >>> L.bracket(L.gen("v"), L.gen("u"))
    -[u,v]
    """

    def __init__(self, generators: Iterable):
        gens = [g if isinstance(g, GradedGenerator) else GradedGenerator(*g)
                for g in generators]
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        order = sorted(range(len(gens)), key=lambda i: (gens[i].degree, i))
        self.generators = [gens[i] for i in order]
        self.index = {g.name: i for i, g in enumerate(self.generators)}
        self.degrees = tuple(g.degree for g in self.generators)
        self._bracket_cache = {}
        self._basis_cache = {}
        self._active = set()

    def __repr__(self):
        gs = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"FreeLieAlgebra({gs})"

    @property
    def names(self) -> list:
        return [g.name for g in self.generators]

    def degree_of(self, name: str) -> int:
        return self.generators[self._letter(name)].degree

    def _letter(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UndeclaredGenerator(name) from None

    # -- monomials -------------------------------------------------------

    def mono_degree(self, m: Monomial) -> int:
        d = sum(self.degrees[i] for i in m.word)
        return 2 * d if m.square else d

    def children(self, m: Monomial) -> tuple:
        """The two monomials whose bracket is ``m`` (m must have length >= 2)."""
        if m.square:
            w = Monomial(m.word)
            return w, w
        a, b = standard_factorization(m.word)
        return Monomial(a), Monomial(b)

    def tree(self, m: Monomial) -> Tree:
        if not m.square and len(m.word) == 1:
            return self.generators[m.word[0]].name
        a, b = self.children(m)
        return (self.tree(a), self.tree(b))

    def format_monomial(self, m: Monomial) -> str:
        return format_tree(self.tree(m))

    # -- elements --------------------------------------------------------

    def zero(self) -> "LieElement":
        return LieElement(self, {})

    def gen(self, name: str) -> "LieElement":
        return LieElement(self, {Monomial((self._letter(name),)): Fraction(1)})

    def mono(self, m: Monomial) -> "LieElement":
        return LieElement(self, {m: Fraction(1)})

    def element(self, terms: dict) -> "LieElement":
        return LieElement(self, {m: Fraction(c) for m, c in terms.items() if c})

    def bracket(self, x: "LieElement", y: "LieElement") -> "LieElement":
        out = {}
        for a, ca in x.terms.items():
            for b, cb in y.terms.items():
                for m, c in self._bracket_mono(a, b).items():
                    _accumulate(out, m, ca * cb * c)
        return LieElement(self, out)

    def _sign(self, a: Monomial, b: Monomial) -> int:
        return -1 if (self.mono_degree(a) * self.mono_degree(b)) % 2 else 1

    def _bracket_mono(self, a: Monomial, b: Monomial) -> dict:
        key = (a, b)
        cached = self._bracket_cache.get(key)
        if cached is not None:
            return cached
        if key in self._active:
            raise RuntimeError(f"bracket rewriting loops on {key}")
        self._active.add(key)
        try:
            result = self._compute_bracket(a, b)
        finally:
            self._active.discard(key)
        self._bracket_cache[key] = result
        return result

    def _compute_bracket(self, a: Monomial, b: Monomial) -> dict:
        ka, kb = a.key, b.key
        if ka == kb:
            if not a.square and self.mono_degree(a) % 2:
                return {Monomial(a.word, True): Fraction(1)}
            return {}
        if ka > kb:
            s = -self._sign(a, b)
            return {m: s * c for m, c in self._bracket_mono(b, a).items()}
        A, B = self.mono(a), self.mono(b)
        if a.square:
            # [[w,w],b] = 2 [w,[w,b]] for odd w
            w = self.mono(Monomial(a.word))
            return (2 * self.bracket(w, self.bracket(w, B))).terms
        if b.square:
            # [a,[w,w]] = [[a,w],w] + (-1)^{|a||w|} [w,[a,w]]
            wm = Monomial(b.word)
            if a == wm:
                # 3[w,[w,w]] = 0
                return {}
            w = self.mono(wm)
            aw = self.bracket(A, w)
            s = self._sign(a, wm)
            return (self.bracket(aw, w) + s * self.bracket(w, aw)).terms
        u, v = a.word, b.word
        if len(u) == 1 or standard_factorization(u)[1] >= v:
            return {Monomial(u + v): Fraction(1)}
        # u = u1 u2 with u2 < v:  [[u1,u2],v] = [u1,[u2,v]] - (-1)^{|u1||u2|} [u2,[u1,v]]
        m1, m2 = Monomial(standard_factorization(u)[0]), Monomial(standard_factorization(u)[1])
        x1, x2 = self.mono(m1), self.mono(m2)
        s = self._sign(m1, m2)
        return (self.bracket(x1, self.bracket(x2, B))
                - s * self.bracket(x2, self.bracket(x1, B))).terms

    # -- trees ----------------------------------------------------------

    def from_tree(self, tree: Tree) -> "LieElement":
        if isinstance(tree, str):
            return self.gen(tree)
        left, right = tree
        return self.bracket(self.from_tree(left), self.from_tree(right))

    def normal_form(self, expression) -> "LieElement":
        """Normal form of a tree, a list of (coefficient, tree) pairs, or an element."""
        if isinstance(expression, LieElement):
            if expression.algebra is self:
                return expression
            return self.convert(expression)
        if isinstance(expression, (str, tuple)):
            return self.from_tree(expression)
        out = self.zero()
        for coeff, tree in expression:
            out = out + Fraction(coeff) * self.from_tree(tree)
        return out

    def convert(self, x: "LieElement") -> "LieElement":
        """Re-express an element of another free Lie algebra sharing generator names."""
        out = self.zero()
        for m, c in x.terms.items():
            out = out + c * self.from_tree(x.algebra.tree(m))
        return out

    # -- bases ----------------------------------------------------------

    def basis(self, degree: int) -> list:
        cached = self._basis_cache.get(degree)
        if cached is not None:
            return list(cached)
        out = []
        if self.generators and degree >= 1:
            max_len = degree // min(self.degrees)
            for w in lyndon_words(len(self.generators), max_len):
                d = sum(self.degrees[i] for i in w)
                if d == degree:
                    out.append(Monomial(w))
                if 2 * d == degree and d % 2 == 1:
                    out.append(Monomial(w, True))
        out.sort(key=lambda m: (m.length, m.key))
        self._basis_cache[degree] = tuple(out)
        return out

    def dimension(self, degree: int) -> int:
        return len(self.basis(degree))

    def coordinates(self, x: "LieElement", degree: int) -> list:
        """Coordinate vector of a homogeneous element in ``basis(degree)``."""
        basis = self.basis(degree)
        pos = {m: i for i, m in enumerate(basis)}
        vec = [Fraction(0)] * len(basis)
        for m, c in x.terms.items():
            if m not in pos:
                raise ValueError(f"{self.format_monomial(m)} is not of degree {degree}")
            vec[pos[m]] = c
        return vec

    def from_coordinates(self, vec: Sequence, degree: int) -> "LieElement":
        return self.element(dict(zip(self.basis(degree), vec)))

    def bracket_length(self, m: Monomial) -> int:
        return m.length

    # -- maps -----------------------------------------------------------

    def derivation(self, values: dict, degree: int, target: "FreeLieAlgebra" = None):
        """The derivation of the given degree extending generator values.

        Returns a function on elements; Leibniz rule
        D[a,b] = [Da,b] + (-1)^{degree*|a|}[a,Db].
        """
        target = target or self
        cache = {}
        vals = {}
        for g in self.generators:
            v = values.get(g.name)
            vals[g.name] = target.zero() if v is None else v

        def on_mono(m: Monomial) -> LieElement:
            hit = cache.get(m)
            if hit is not None:
                return hit
            if not m.square and len(m.word) == 1:
                res = vals[self.generators[m.word[0]].name]
            else:
                a, b = self.children(m)
                s = -1 if (degree * self.mono_degree(a)) % 2 else 1
                res = (target.bracket(on_mono(a), target.mono(b) if target is self else target.convert(self.mono(b)))
                       + s * target.bracket(target.mono(a) if target is self else target.convert(self.mono(a)), on_mono(b)))
            cache[m] = res
            return res

        def apply(x: LieElement) -> LieElement:
            out = {}
            for m, c in x.terms.items():
                for mm, cc in on_mono(m).terms.items():
                    _accumulate(out, mm, c * cc)
            return LieElement(target, out)

        return apply

    def homomorphism(self, values: dict, target: "FreeLieAlgebra"):
        """The Lie algebra map sending each generator name to values[name]."""
        cache = {}

        def on_mono(m: Monomial) -> LieElement:
            hit = cache.get(m)
            if hit is not None:
                return hit
            if not m.square and len(m.word) == 1:
                name = self.generators[m.word[0]].name
                res = values.get(name)
                if res is None:
                    res = target.zero()
            else:
                a, b = self.children(m)
                res = target.bracket(on_mono(a), on_mono(b))
            cache[m] = res
            return res

        def apply(x: LieElement) -> LieElement:
            out = {}
            for m, c in x.terms.items():
                for mm, cc in on_mono(m).terms.items():
                    _accumulate(out, mm, c * cc)
            return LieElement(target, out)

        return apply


def _accumulate(d: dict, key, value) -> None:
    v = d.get(key, 0) + value
    if v:
        d[key] = v
    else:
        d.pop(key, None)


class LieElement:
    """An R-linear combination of basis monomials of a :class:`FreeLieAlgebra`."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: FreeLieAlgebra, terms: dict):
        self.algebra = algebra
        self.terms = terms

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            _accumulate(out, m, c)
        return LieElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return LieElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        if scalar == 0:
            return LieElement(self.algebra, {})
        return LieElement(self.algebra, {m: scalar * c for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        """Common degree of the terms, None for zero, "mixed" otherwise."""
        degs = {self.algebra.mono_degree(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            return "mixed"
        return degs.pop()

    @property
    def is_homogeneous(self) -> bool:
        return self.degree != "mixed"

    def items(self):
        return sorted(self.terms.items(), key=lambda mc: (mc[0].length, mc[0].key))

    def __repr__(self):
        return format_element(self)

    __str__ = __repr__


# ---------------------------------------------------------------------------
# formatting and the tensor-algebra oracle


def format_tree(tree: Tree) -> str:
    if isinstance(tree, str):
        return tree
    return f"[{format_tree(tree[0])},{format_tree(tree[1])}]"


def format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_element(x: LieElement) -> str:
    if not x.terms:
        return "0"
    parts = []
    for m, c in x.items():
        mono = x.algebra.format_monomial(m)
        mag = abs(c)
        body = mono if mag == 1 else f"{format_coefficient(mag)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def tree_degree(tree: Tree, degrees: dict) -> int:
    if isinstance(tree, str):
        if tree not in degrees:
            raise UndeclaredGenerator(tree)
        return degrees[tree]
    return tree_degree(tree[0], degrees) + tree_degree(tree[1], degrees)


def embed_tree(tree: Tree, degrees: dict) -> dict:
    """Tensor-algebra image of a bracket tree: words (tuples of names) -> coefficient."""
    if isinstance(tree, str):
        if tree not in degrees:
            raise UndeclaredGenerator(tree)
        return {(tree,): Fraction(1)}
    left, right = tree
    a, b = embed_tree(left, degrees), embed_tree(right, degrees)
    s = -1 if (tree_degree(left, degrees) * tree_degree(right, degrees)) % 2 else 1
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            _accumulate(out, wa + wb, ca * cb)
            _accumulate(out, wb + wa, -s * ca * cb)
    return out


def tensor_embed(x: LieElement) -> dict:
    """Expand [x,y] -> xy - (-1)^{|x||y|} yx recursively; words are tuples of names."""
    alg = x.algebra
    degrees = {g.name: g.degree for g in alg.generators}
    out = {}
    for m, c in x.terms.items():
        for w, cw in embed_tree(alg.tree(m), degrees).items():
            _accumulate(out, w, c * cw)
    return out


def embed_expression(expression, degrees: dict) -> dict:
    """Tensor image of a list of (coefficient, tree) pairs, computed without rewriting."""
    if isinstance(expression, (str, tuple)):
        expression = [(1, expression)]
    out = {}
    for coeff, tree in expression:
        for w, c in embed_tree(tree, degrees).items():
            _accumulate(out, w, Fraction(coeff) * c)
    return out


def basis(generators: Sequence, degree: int) -> list:
    return FreeLieAlgebra(generators).basis(degree)


def dimension(generators: Sequence, degree: int) -> int:
    return len(basis(generators, degree)) if generators else 0


def normal_form(generators: Sequence, expression) -> LieElement:
    return FreeLieAlgebra(generators).normal_form(expression)


def random_tree(names: Sequence, leaves: int, rng: random.Random) -> Tree:
    if leaves == 1:
        return rng.choice(list(names))
    k = rng.randint(1, leaves - 1)
    return (random_tree(names, k, rng), random_tree(names, leaves - k, rng))
