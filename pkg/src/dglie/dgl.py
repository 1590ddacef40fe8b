"""Free DG Lie algebras (L(V), d) over a localized ring.

A :class:`DglPresentation` stores generators with their degrees and the value
of the differential on each generator.  Everything else (the derivation on
all of L(V), homology, morphisms) is derived from that data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (DSquaredNonzero, DegreeMismatch, DegreeWindowMismatch,
                     InhomogeneousDifferential, NotAChainMap, NotACycle,
                     NonSUnitDenominator, UndeclaredGenerator)
from .freelie import FreeLieAlgebra, LieElement
from .ring import (HomologyData, LocalRing, ModuleDescription, chain_homology,
                   cokernel, determinant, from_columns, solve, zeros)


def hypothesis_holds(m: int, k: int, ring: LocalRing) -> bool:
    """k < min(m + 2p - 3, mp - 1) where p is the least non-invertible prime."""
    p = ring.least_noninvertible
    if ring.rational:
        return True
    return k < min(m + 2 * p - 3, m * p - 1)


@dataclass
class ValidationReport:
    d_squared_zero: bool
    homogeneous: bool
    hypothesis: bool
    window: tuple
    least_noninvertible: object
    warnings: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.d_squared_zero and self.homogeneous

    def to_dict(self) -> dict:
        p = self.least_noninvertible
        return {"d_squared_zero": self.d_squared_zero, "homogeneous": self.homogeneous,
                "hypothesis": self.hypothesis, "window": list(self.window),
                "least_noninvertible": "infinity" if p == float("inf") else p,
                "warnings": list(self.warnings)}


class DglPresentation:
    """Generators, degrees, and differential values of a free DG Lie algebra.

    Args:
        ring: coefficient ring.
        generators: ``(name, degree)`` pairs or :class:`GradedGenerator`.
        differential: generator name -> value.  Values may be LieElements of
            any free Lie algebra sharing the names, bracket trees, or lists of
            ``(coefficient, tree)`` pairs.  Missing names have zero differential.
        window: ``(m, k)``; defaults to the smallest and largest generator degree.
    """

    def __init__(self, ring: LocalRing, generators: Iterable, differential: Mapping = None,
                 window: tuple = None, check: bool = True):
        self.ring = ring
        self.algebra = FreeLieAlgebra(generators)
        degs = [g.degree for g in self.algebra.generators]
        if window is None:
            window = (min(degs), max(degs)) if degs else (1, 1)
        m, k = window
        if m < 1 or m > k:
            raise DegreeWindowMismatch(f"window ({m}, {k}) must satisfy 1 <= m <= k")
        bad = [g.name for g in self.algebra.generators if not m <= g.degree <= k]
        if bad:
            raise DegreeWindowMismatch(f"generators {bad} lie outside the window ({m}, {k})")
        self.window = (m, k)
        differential = dict(differential or {})
        unknown = set(differential) - set(self.algebra.names)
        if unknown:
            raise UndeclaredGenerator(sorted(unknown)[0])
        self.differential = {}
        for g in self.algebra.generators:
            value = differential.get(g.name)
            value = self.algebra.zero() if value is None else self.algebra.normal_form(value)
            for c in value.terms.values():
                if not ring.contains(c):
                    raise NonSUnitDenominator(
                        f"coefficient {c} in d({g.name}) is not in {ring}")
            self.differential[g.name] = value
        self._d = self.algebra.derivation(self.differential, -1)
        self._homology_cache = {}
        self._boundary_cache = {}
        self.warnings = []
        self.report = self.validate(raise_errors=check)

    # -- basic data -----------------------------------------------------

    @property
    def generators(self) -> list:
        return list(self.algebra.generators)

    @property
    def names(self) -> list:
        return self.algebra.names

    def degree_of(self, name: str) -> int:
        return self.algebra.degree_of(name)

    def generators_in_degree(self, n: int) -> list:
        return [g.name for g in self.algebra.generators if g.degree == n]

    @property
    def degrees(self) -> list:
        return sorted({g.degree for g in self.algebra.generators})

    @property
    def is_empty(self) -> bool:
        return not self.algebra.generators

    def gen(self, name: str) -> LieElement:
        return self.algebra.gen(name)

    def d(self, x: LieElement) -> LieElement:
        """The differential extended to all of L(V) by the Leibniz rule."""
        if x.algebra is not self.algebra:
            x = self.algebra.convert(x)
        return self._d(x)

    def __repr__(self):
        return f"DglPresentation({self.ring}, {self.algebra.generators})"

    def __eq__(self, other):
        if not isinstance(other, DglPresentation):
            return NotImplemented
        return (self.ring == other.ring and self.window == other.window
                and [(g.name, g.degree) for g in self.algebra.generators]
                == [(g.name, g.degree) for g in other.algebra.generators]
                and all(str(self.differential[n]) == str(other.differential[n])
                        for n in self.names))

    __hash__ = object.__hash__

    # -- validation -----------------------------------------------------

    def validate(self, raise_errors: bool = True) -> ValidationReport:
        homogeneous = True
        d_sq = True
        for g in self.algebra.generators:
            value = self.differential[g.name]
            deg = value.degree
            if deg == "mixed":
                homogeneous = False
                if raise_errors:
                    raise InhomogeneousDifferential(f"d({g.name}) = {value} is not homogeneous")
            elif deg is not None and deg != g.degree - 1:
                homogeneous = False
                if raise_errors:
                    raise DegreeMismatch(
                        f"d({g.name}) = {value} has degree {deg}, expected {g.degree - 1}")
        if homogeneous:
            for g in self.algebra.generators:
                dd = self._d(self.differential[g.name])
                if dd:
                    d_sq = False
                    if raise_errors:
                        raise DSquaredNonzero(g.name, dd)
        m, k = self.window
        # nothing to interpret for the trivial model
        hyp = not self.algebra.generators or hypothesis_holds(m, k, self.ring)
        warnings = []
        if not hyp:
            p = self.ring.least_noninvertible
            warnings.append(
                f"window ({m}, {k}) with least non-invertible prime {p} violates "
                f"k < min(m+2p-3, mp-1); topological interpretation not guaranteed")
        self.warnings = warnings
        return ValidationReport(d_sq, homogeneous, hyp, self.window,
                                self.ring.least_noninvertible, warnings)

    # -- boundary matrices and homology ------------------------------------

    def boundary_matrix(self, degree: int) -> list:
        """Matrix of d : L_degree -> L_{degree-1} (rows indexed by the target basis)."""
        hit = self._boundary_cache.get(degree)
        if hit is not None:
            return hit
        src = self.algebra.basis(degree)
        tgt = self.algebra.basis(degree - 1) if degree > 1 else []
        cols = [self.algebra.coordinates(self._d(self.algebra.mono(b)), degree - 1)
                if tgt else [] for b in src]
        M = from_columns(cols, len(tgt)) if tgt else []
        self._boundary_cache[degree] = M
        return M

    def lie_homology(self, degree: int) -> "LieHomology":
        hit = self._homology_cache.get(degree)
        if hit is not None:
            return hit
        h = LieHomology(self, degree)
        self._homology_cache[degree] = h
        return h


class LieHomology:
    """H_n(L(V), d) with explicit cycle representatives."""

    def __init__(self, p: DglPresentation, degree: int):
        self.presentation = p
        self.degree = degree
        alg = p.algebra
        self.basis = alg.basis(degree) if degree >= 1 else []
        dim = len(self.basis)
        self.d_out = p.boundary_matrix(degree) if dim else []
        self.above = alg.basis(degree + 1)
        self.d_in = p.boundary_matrix(degree + 1) if dim and self.above else []
        self.data: HomologyData = chain_homology(self.d_out, self.d_in, dim, p.ring,
                                                 in_dim=len(self.above) if self.d_in else 0)

    @property
    def module(self) -> ModuleDescription:
        return self.data.module

    @property
    def orders(self) -> list:
        return self.data.orders

    @property
    def rank(self) -> int:
        return self.data.rank

    def representatives(self) -> list:
        alg = self.presentation.algebra
        return [alg.from_coordinates(r, self.degree) for r in self.data.representatives]

    def vector(self, x: LieElement) -> list:
        alg = self.presentation.algebra
        if x.algebra is not alg:
            x = alg.convert(x)
        if not self.basis:
            if x:
                raise ValueError(f"{x} is not in degree {self.degree}")
            return []
        return alg.coordinates(x, self.degree)

    def is_cycle(self, x: LieElement) -> bool:
        return not self.presentation.d(x)

    def class_of(self, x: LieElement) -> list:
        """Coordinates of the homology class of the cycle x."""
        if not self.is_cycle(x):
            raise NotACycle(f"{x} is not a cycle")
        if not self.data.rank:
            return []
        return self.data.coordinates(self.vector(x))

    def is_boundary(self, x: LieElement) -> bool:
        return self.preimage(x) is not None

    def preimage(self, x: LieElement):
        """Some y in degree+1 with d(y) = x, or None."""
        alg = self.presentation.algebra
        v = self.vector(x)
        if not any(v):
            return alg.zero()
        if not self.d_in:
            return None
        y = solve(self.d_in, v, self.presentation.ring, len(self.above))
        if y is None:
            return None
        return alg.from_coordinates(y, self.degree + 1)


def extend_derivation(p: DglPresentation, x: LieElement) -> LieElement:
    return p.d(x)


def truncate_below(p: DglPresentation, n: int) -> DglPresentation:
    """The sub-DG Lie algebra generated by generators of degree < n."""
    gens = [(g.name, g.degree) for g in p.generators if g.degree < n]
    sub = FreeLieAlgebra(gens)
    diff = {name: sub.convert(p.differential[name]) for name, _ in gens}
    window = None
    if gens:
        window = (p.window[0], max(p.window[0], max(d for _, d in gens)))
    return DglPresentation(p.ring, gens, diff, window=window, check=False)


def restrict_to(p: DglPresentation, names: Iterable) -> DglPresentation:
    """Sub-presentation on the given generators (must be closed under d)."""
    names = set(names)
    gens = [(g.name, g.degree) for g in p.generators if g.name in names]
    sub = FreeLieAlgebra(gens)
    diff = {name: sub.convert(p.differential[name]) for name, _ in gens}
    return DglPresentation(p.ring, gens, diff, check=False)


@dataclass
class LinearPart:
    """The length-one component of the differential, degree by degree.

    ``matrices[n]`` is the matrix of d_n : V_n -> V_{n-1} with rows indexed by
    ``names[n-1]`` and columns by ``names[n]``.
    """

    names: dict
    matrices: dict

    def matrix(self, n: int) -> list:
        return self.matrices.get(n, [])

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for M in self.matrices.values() for row in M for x in row)


def linear_part(p: DglPresentation) -> LinearPart:
    names = {n: p.generators_in_degree(n) for n in p.degrees}
    matrices = {}
    for n, cols in names.items():
        rows = names.get(n - 1, [])
        if not rows or not cols:
            continue
        M = zeros(len(rows), len(cols))
        pos = {r: i for i, r in enumerate(rows)}
        for j, c in enumerate(cols):
            for mono, coeff in p.differential[c].terms.items():
                if len(mono.word) == 1 and not mono.square:
                    M[pos[p.algebra.generators[mono.word[0]].name]][j] = coeff
        matrices[n] = M
    return LinearPart(names, matrices)


def generator_homology(p: DglPresentation, degree: int) -> HomologyData:
    lp = linear_part(p)
    dim = len(lp.names.get(degree, []))
    d_out = lp.matrix(degree)
    d_in = lp.matrix(degree + 1)
    return chain_homology(d_out, d_in, dim, p.ring,
                          in_dim=len(lp.names.get(degree + 1, [])) if d_in else 0)


def homology_of_generators(p: DglPresentation, degree: int) -> ModuleDescription:
    """H_degree(V, d) for the linear part d."""
    return generator_homology(p, degree).module


def homology_of_lie(p: DglPresentation, degree: int):
    """(module, representatives, incoming boundary matrix) for H_degree(L(V), d)."""
    h = p.lie_homology(degree)
    return h.module, h.representatives(), h.d_in


# ---------------------------------------------------------------------------
# morphisms


class DglMorphism:
    """A DG Lie algebra map determined by its values on generators."""

    def __init__(self, source: DglPresentation, target: DglPresentation,
                 values: Mapping, check: bool = True):
        self.source = source
        self.target = target
        self.values = {}
        for g in source.generators:
            v = values.get(g.name)
            v = target.algebra.zero() if v is None else target.algebra.normal_form(v)
            if v and v.degree != g.degree:
                raise DegreeMismatch(f"image of {g.name} has degree {v.degree}, expected {g.degree}")
            for c in v.terms.values():
                if not target.ring.contains(c):
                    raise NonSUnitDenominator(f"coefficient {c} of the image of {g.name}")
            self.values[g.name] = v
        self._apply = source.algebra.homomorphism(self.values, target.algebra)
        if check:
            self.check_chain_map()

    def __call__(self, x: LieElement) -> LieElement:
        if x.algebra is not self.source.algebra:
            x = self.source.algebra.convert(x)
        return self._apply(x)

    def chain_defect(self):
        """First generator where d f != f d, as (name, lhs, rhs), or None."""
        for g in self.source.generators:
            lhs = self.target.d(self.values[g.name])
            rhs = self(self.source.differential[g.name])
            if lhs != rhs:
                return g.name, lhs, rhs
        return None

    def check_chain_map(self) -> None:
        bad = self.chain_defect()
        if bad:
            raise NotAChainMap(*bad)

    def compose(self, other: "DglMorphism") -> "DglMorphism":
        """self after other."""
        vals = {n: self(v) for n, v in other.values.items()}
        return DglMorphism(other.source, self.target, vals, check=False)

    def __mul__(self, other):
        return self.compose(other)

    def __eq__(self, other):
        if not isinstance(other, DglMorphism):
            return NotImplemented
        return all(self.values[n] == other.values.get(n, self.target.algebra.zero())
                   for n in self.values)

    __hash__ = object.__hash__

    def __repr__(self):
        body = ", ".join(f"{n} -> {v}" for n, v in self.values.items())
        return f"DglMorphism({body})"

    @classmethod
    def identity(cls, p: DglPresentation) -> "DglMorphism":
        return cls(p, p, {n: p.gen(n) for n in p.names}, check=False)

    def linear_matrix(self, n: int) -> list:
        """Matrix of the linear part V_n -> V_n (columns = images of source generators)."""
        src = self.source.generators_in_degree(n)
        tgt = self.target.generators_in_degree(n)
        pos = {name: i for i, name in enumerate(tgt)}
        M = zeros(len(tgt), len(src))
        for j, name in enumerate(src):
            for mono, c in self.values[name].terms.items():
                if len(mono.word) == 1 and not mono.square:
                    M[pos[self.target.algebra.generators[mono.word[0]].name]][j] = c
        return M

    def is_automorphism(self) -> bool:
        """Linear part invertible over R in every degree (hence an automorphism of L(V))."""
        for n in self.source.degrees:
            M = self.linear_matrix(n)
            if len(M) != len(self.source.generators_in_degree(n)):
                return False
            if not self.source.ring.is_unit(determinant(M)):
                return False
        return True

    def on_generator_homology(self, n: int) -> list:
        """Matrix of the map induced on H_n(V, d) in class coordinates."""
        hs = generator_homology(self.source, n)
        ht = generator_homology(self.target, n)
        M = self.linear_matrix(n)
        cols = []
        for r in hs.representatives:
            img = [sum((M[i][j] * r[j] for j in range(len(r))), Fraction(0))
                   for i in range(len(M))]
            cols.append(ht.coordinates(img))
        return from_columns(cols, ht.rank) if cols else []

    def is_quasi_isomorphism(self) -> bool:
        """Induces an isomorphism on H(V, d) (hence on H(L(V), d))."""
        for n in self.source.degrees:
            hs = generator_homology(self.source, n)
            ht = generator_homology(self.target, n)
            if hs.module != ht.module:
                return False
            if not hs.rank:
                continue
            if not _endomorphism_surjective(self.on_generator_homology(n), ht.orders,
                                            self.source.ring):
                return False
        return True

    def is_pointed(self) -> bool:
        """Induces the identity on H(V, d)."""
        for n in self.source.degrees:
            h = generator_homology(self.source, n)
            if not h.rank:
                continue
            M = self.on_generator_homology(n)
            for i in range(h.rank):
                for j in range(h.rank):
                    want = 1 if i == j else 0
                    delta = M[i][j] - want
                    e = h.orders[i]
                    if e:
                        if delta.numerator * pow(delta.denominator, -1, e) % e:
                            return False
                    elif delta:
                        return False
        return True


def _endomorphism_surjective(M: list, orders: list, ring: LocalRing) -> bool:
    """Is the map with matrix M onto R^r / diag(orders)?  Surjective endomorphisms
    of finitely generated modules are isomorphisms."""
    r = len(orders)
    rel = [[Fraction(orders[i]) if i == j else Fraction(0) for j in range(r)] for i in range(r)]
    A = [list(M[i]) + rel[i] for i in range(r)]
    return cokernel(A, ring, r).is_zero


def induced_on_homology(f: DglMorphism, degree: int) -> list:
    """Matrix of H(f) in representative coordinates (torsion entries reduced)."""
    hs = f.source.lie_homology(degree)
    ht = f.target.lie_homology(degree)
    cols = [ht.class_of(f(r)) for r in hs.representatives()]
    return from_columns(cols, ht.rank) if cols else []


def scaling_morphism(p: DglPresentation, scale: Mapping) -> DglMorphism:
    """Generator x -> scale[x] * x (missing names fixed)."""
    return DglMorphism(p, p, {n: Fraction(scale.get(n, 1)) * p.gen(n) for n in p.names})


__all__ = [
    "DglPresentation", "DglMorphism", "LieHomology", "LinearPart", "ValidationReport",
    "extend_derivation", "truncate_below", "restrict_to", "linear_part",
    "homology_of_generators", "homology_of_lie", "generator_homology",
    "induced_on_homology", "hypothesis_holds", "scaling_morphism",
]
