"""Self-equivalence groups of free DG Lie algebras, one cell block at a time.

Given V = V_{q-1} + V_{<n}, a self-equivalence restricts to the truncation
L(V_<n) and projects to an automorphism of V_{q-1}.  The pair must commute
with the map B : V_{q-1} -> H_{q-2}(L(V_<n)), v -> {dv}, giving the group C^q.
The kernel of the projection is parametrized by maps v -> v + psi(v) with
psi(v) a cycle of degree q-1.

Two morphisms of this kernel form are homotopic when their psi differ by a
boundary, and also (when the truncation has zero differential) by a term
h(dv) for a degree +1 derivation h of L(V_<n); :func:`effective_kernel`
accounts for both.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .dgl import (DglMorphism, DglPresentation, LieHomology, linear_part,
                  generator_homology, truncate_below)
from .errors import (DegreeWindowMismatch, InvalidSplit, NoSolution, NotACycle,
                     NotAnEquivalence, NotPointed)
from .freelie import LieElement
from .groups import (Aut, Extension, Finite, GroupExpression, Product, RModule,
                     Subgroup, Trivial, aut_description, extension, general_linear,
                     product)
from .ring import (HomologyData, LocalRing, ModuleDescription, chain_homology,
                   cokernel, column, column_space_basis, determinant, from_columns,
                   inverse, kernel_basis, matmul, rank, smith_normal_form,
                   span_quotient)


# ---------------------------------------------------------------------------
# the split


class SplitData:
    """V = V_{q-1} + V_{<n} for a presentation, with cached homology of L(V_<n)."""

    def __init__(self, p: DglPresentation, n: int, q: int):
        if not q > n:
            raise InvalidSplit(f"need q > n, got n={n}, q={q}")
        stray = [g.name for g in p.generators if g.degree >= n and g.degree != q - 1]
        if stray:
            raise InvalidSplit(
                f"generators {stray} are neither in degree q-1={q - 1} nor below n={n}")
        self.presentation = p
        self.n = n
        self.q = q
        self.top = p.generators_in_degree(q - 1)
        self.truncation = truncate_below(p, n)
        self.h_below: LieHomology = self.truncation.lie_homology(q - 2)
        self.h_top: LieHomology = self.truncation.lie_homology(q - 1)
        self._b = None
        self._w = None

    @classmethod
    def natural(cls, p: DglPresentation) -> "SplitData":
        """Top generator degree against everything below it."""
        if p.is_empty:
            raise InvalidSplit("empty presentation has no top block")
        top = p.degrees[-1]
        return cls(p, top, top + 1)

    @property
    def j(self) -> int:
        return len(self.top)

    def d_top(self, name: str) -> LieElement:
        """d(v) for a top generator, as an element of L(V_<n)."""
        return self.truncation.algebra.convert(self.presentation.differential[name])

    @property
    def b_matrix(self) -> list:
        if self._b is None:
            cols = [self.h_below.class_of(self.d_top(v)) for v in self.top]
            self._b = from_columns(cols, self.h_below.rank) if cols else []
        return self._b

    @property
    def b_is_zero(self) -> bool:
        return all(x == 0 for row in self.b_matrix for x in row)

    @property
    def truncation_differential_zero(self) -> bool:
        return all(not v for v in self.truncation.differential.values())

    def _w_split(self):
        if self._w is None:
            lp = linear_part(self.presentation)
            d = lp.matrix(self.q - 1)
            j = self.j
            if not d or all(x == 0 for row in d for x in row):
                ident = [[Fraction(int(i == k)) for k in range(j)] for i in range(j)]
                self._w = ([], [column(ident, i) for i in range(j)])
            else:
                _, D, V = smith_normal_form(d, self.presentation.ring, ncols_=j)
                r = sum(1 for i in range(min(len(D), j)) if D[i][i] != 0)
                self._w = ([column(V, i) for i in range(r)],
                           [column(V, i) for i in range(r, j)])
        return self._w

    @property
    def w_basis(self) -> list:
        """Basis vectors (top coordinates) of a complement W of ker d_{q-1}."""
        return self._w_split()[0]

    @property
    def ker_basis(self) -> list:
        return self._w_split()[1]

    def top_element(self, vec) -> LieElement:
        alg = self.presentation.algebra
        out = alg.zero()
        for c, name in zip(vec, self.top):
            out = out + c * alg.gen(name)
        return out


def b_map(s: SplitData) -> list:
    return s.b_matrix


# ---------------------------------------------------------------------------
# C^q


@dataclass
class CqElement:
    """(xi, gamma): xi a matrix on V_{q-1} (on W when ``on_w``), gamma a self-map of L(V_<n).

    Column j of xi holds the coordinates of xi(v_j).
    """

    xi: list
    gamma: DglMorphism
    on_w: bool = False


def full_xi(s: SplitData, e: CqElement) -> list:
    """xi on V_{q-1}; a W-matrix is extended by the identity on ker d."""
    if not e.on_w:
        return e.xi
    W, K = s.w_basis, s.ker_basis
    P = from_columns(W + K, s.j)
    w = len(W)
    block = [[Fraction(0)] * s.j for _ in range(s.j)]
    for i in range(s.j):
        for k in range(s.j):
            if i < w and k < w:
                block[i][k] = Fraction(e.xi[i][k])
            elif i == k:
                block[i][k] = Fraction(1)
    return matmul(matmul(P, block), inverse(P))


def cq_membership(s: SplitData, e: CqElement, pointed: bool = False) -> bool:
    """Does (xi, gamma) make the B-square commute (on all of V_{q-1})?"""
    ring = s.presentation.ring
    if not e.gamma.is_quasi_isomorphism():
        raise NotAnEquivalence("gamma does not induce an isomorphism on H(V)")
    xi = full_xi(s, e)
    if s.j and not ring.is_unit(determinant(xi)):
        raise NotAnEquivalence("xi is not invertible over R")
    if pointed and not e.gamma.is_pointed():
        raise NotPointed("gamma moves H(V)")
    alg = s.truncation.algebra
    for k, v in enumerate(s.top):
        lhs = alg.zero()
        for i, w in enumerate(s.top):
            lhs = lhs + Fraction(xi[i][k]) * s.d_top(w)
        rhs = e.gamma(s.d_top(v))
        if not s.h_below.is_boundary(lhs - rhs):
            return False
    return True


def lift(s: SplitData, e: CqElement) -> DglMorphism:
    """A self-equivalence alpha of L(V) with top projection xi and restriction gamma."""
    p = s.presentation
    xi = full_xi(s, e)
    vals = {n: p.algebra.convert(e.gamma.values[n]) for n in s.truncation.names}
    alg = s.truncation.algebra
    for k, v in enumerate(s.top):
        xv = p.algebra.zero()
        dxv = alg.zero()
        for i, w in enumerate(s.top):
            c = Fraction(xi[i][k])
            if c:
                xv = xv + c * p.gen(w)
                dxv = dxv + c * s.d_top(w)
        target = e.gamma(s.d_top(v)) - dxv
        u = s.h_below.preimage(target)
        if u is None:
            raise NoSolution(f"gamma(d{v}) - d(xi {v}) is not a boundary")
        vals[v] = xv + p.algebra.convert(u)
    return DglMorphism(p, p, vals)


def project(s: SplitData, alpha: DglMorphism) -> CqElement:
    """Read (xi, gamma) back off a self-map of L(V)."""
    xi = alpha.linear_matrix(s.q - 1)
    T = s.truncation
    gamma = DglMorphism(T, T, {n: T.algebra.convert(alpha.values[n]) for n in T.names},
                        check=False)
    return CqElement(xi, gamma)


# ---------------------------------------------------------------------------
# kernel


def kernel_module(s: SplitData) -> ModuleDescription:
    """Hom(V_{q-1}, H_{q-1}(L(V_<n))): j copies of that homology module."""
    return s.h_top.module * s.j


def homotopy_indeterminacy(s: SplitData):
    """Vectors v -> h(dv) for degree +1 derivations h of L(V_<n), in Hom coordinates.

    Only meaningful when the truncation has zero differential; returns None otherwise.
    """
    if not s.truncation_differential_zero:
        return None
    T = s.truncation
    alg = T.algebra
    dim = len(s.h_top.basis)
    vecs = []
    if not dim or not s.j:
        return vecs
    for g in T.generators:
        for mono in alg.basis(g.degree + 1):
            h = alg.derivation({g.name: alg.mono(mono)}, +1)
            vec = []
            for v in s.top:
                vec += alg.coordinates(h(s.d_top(v)), s.q - 1)
            if any(vec):
                vecs.append(vec)
    return vecs


@dataclass
class KernelData:
    """The kernel of the projection to C^q, as a quotient of Hom(V_{q-1}, L_{q-1}).

    ``exact`` is False when self-homotopies of the truncation could not be
    analysed, in which case ``module`` is Hom(V_{q-1}, H_{q-1}) and only an
    upper bound.
    """

    module: ModuleDescription
    exact: bool
    homology: HomologyData | None
    dim: int


def effective_kernel(s: SplitData) -> KernelData:
    gamma = homotopy_indeterminacy(s)
    if gamma is None:
        return KernelData(kernel_module(s), False, None, 0)
    dim = len(s.h_top.basis)
    N = dim * s.j
    # truncation differential is zero, so H_{q-1} = L_{q-1} and Hom = R^N
    d_in = from_columns(gamma, N) if gamma else []
    data = chain_homology([], d_in, N, s.presentation.ring, in_dim=len(gamma))
    return KernelData(data.module, True, data, dim)


def theta_kernel_element(s: SplitData, psi: Mapping) -> DglMorphism:
    """beta(v) = v + psi(v) on top generators, identity below."""
    p = s.presentation
    vals = {n: p.gen(n) for n in p.names}
    for v in s.top:
        z = psi.get(v)
        if z is None:
            continue
        z = s.truncation.algebra.normal_form(z) if not isinstance(z, LieElement) \
            else s.truncation.algebra.convert(z)
        if z and z.degree != s.q - 1:
            raise NotACycle(f"psi({v}) = {z} is not of degree {s.q - 1}")
        if s.truncation.d(z):
            raise NotACycle(f"psi({v}) = {z} is not a cycle")
        vals[v] = p.gen(v) + p.algebra.convert(z)
    return DglMorphism(p, p, vals)


def theta_class(s: SplitData, beta: DglMorphism) -> list:
    """Classes {beta(v) - v} in H_{q-1}(L(V_<n)) for each top generator."""
    out = []
    T = s.truncation
    for v in s.top:
        diff = T.algebra.convert(beta.values[v] - s.presentation.gen(v))
        out.append(s.h_top.class_of(diff))
    return out


# ---------------------------------------------------------------------------
# recursive resolution


@dataclass
class Resolution:
    """A group expression; ``factors`` lists (tag, group) when it is a plain product."""

    expr: GroupExpression
    factors: list | None
    exact: bool
    warnings: list = field(default_factory=list)
    notes: list = field(default_factory=list)


def _all_generators(T: DglPresentation, degree: int) -> bool:
    return all(len(m.word) == 1 and not m.square for m in T.algebra.basis(degree))


def _length_homogeneous(T: DglPresentation, degree: int) -> bool:
    return len({m.length for m in T.algebra.basis(degree)}) <= 1


def _matrix_rank(M: list) -> int:
    return rank(M) if M and M[0] else 0


def eta_forced_identity(s: SplitData) -> bool:
    """Every pointed self-equivalence of L(V_<n) acts trivially on H_{q-2}."""
    T = s.truncation
    if _all_generators(T, s.q - 2):
        return True
    return linear_part(T).is_zero and _length_homogeneous(T, s.q - 2)


def _merge_moore_block(s: SplitData, low: Resolution):
    """aut(coker B) in place of the GL factor of V_{q-2}, or None."""
    T = s.truncation
    deg = s.q - 2
    if low.factors is None or not _all_generators(T, deg):
        return None
    block = T.generators_in_degree(deg)
    if not block or any(T.differential[n] for n in block):
        return None
    if s.h_below.rank != len(block) or any(s.h_below.orders):
        return None
    B = s.b_matrix
    if _matrix_rank(B) != s.j:
        return None
    idx = [i for i, (tag, _) in enumerate(low.factors) if tag == ("gl", deg)]
    if len(idx) != 1:
        return None
    coker = cokernel(B, s.presentation.ring, len(block))
    factors = list(low.factors)
    factors[idx[0]] = (("aut", deg), aut_description(coker, s.presentation.ring))
    return factors


def _quotient(s: SplitData, low: Resolution, pointed: bool) -> Resolution:
    ring = s.presentation.ring
    warnings = list(low.warnings)
    if s.j == 0:
        return Resolution(low.expr, low.factors, low.exact, warnings)
    top_tag = ("gl", s.q - 1)
    if not pointed:
        if s.b_is_zero:
            gl = general_linear(s.j)
            factors = None if low.factors is None else low.factors + [(top_tag, gl)]
            return Resolution(product(low.expr, gl), factors, low.exact, warnings)
        merged = _merge_moore_block(s, low)
        if merged is not None:
            expr = product(*[g for _, g in merged])
            return Resolution(expr, merged, low.exact, warnings)
        B = s.b_matrix
        if (len(B) == s.j and not any(s.h_below.orders)
                and ring.is_unit(determinant(B))):
            return Resolution(low.expr, low.factors, low.exact, warnings)
        warnings.append(f"C^{s.q} left as a subgroup cut out by the B-map")
        sub = Subgroup(product(general_linear(s.j), low.expr), "B∘ξ = H(γ)∘B")
        return Resolution(sub, None, False, warnings)
    w = len(s.w_basis)
    if s.b_is_zero:
        gl = general_linear(w)
        factors = None if low.factors is None else low.factors + ([(top_tag, gl)] if w else [])
        return Resolution(product(low.expr, gl), factors, low.exact, warnings)
    if eta_forced_identity(s):
        # B restricted to W, on free coordinates of H_{q-2}
        free_rows = [i for i, o in enumerate(s.h_below.orders) if o == 0]
        BW = []
        for i in free_rows:
            BW.append([sum((s.b_matrix[i][k] * wv[k] for k in range(s.j)), Fraction(0))
                       for wv in s.w_basis])
        if w == 0 or _matrix_rank(BW) == w:
            return Resolution(low.expr, low.factors, low.exact, warnings)
    warnings.append(f"C^{s.q}_* left as a subgroup cut out by the B-map")
    sub = Subgroup(product(general_linear(w), low.expr), "B∘χ = H(η)∘B on W")
    return Resolution(sub, None, False, warnings)


def _square_notes(s: SplitData) -> list:
    """Say which squares [u,u] can contribute to H_{q-1} of the truncation."""
    notes = []
    if not s.j:
        return notes
    for g in s.truncation.generators:
        if 2 * g.degree != s.q - 1:
            continue
        if g.degree % 2:
            notes.append(f"[{g.name},{g.name}] is a nonzero basis element of L_{s.q - 1} "
                         f"since |{g.name}| = {g.degree} is odd")
        else:
            notes.append(f"[{g.name},{g.name}] = 0 since |{g.name}| = {g.degree} is even")
    return notes


def resolve_split(s: SplitData, pointed: bool = False) -> Resolution:
    low = resolve(s.truncation, pointed)
    C = _quotient(s, low, pointed)
    K = effective_kernel(s)
    warnings = list(C.warnings)
    notes = list(low.notes) + _square_notes(s)
    if not K.exact and not K.module.is_zero:
        warnings.append(
            f"kernel at q={s.q} reported as Hom(V_{s.q - 1}, H_{s.q - 1}); self-homotopies "
            f"of the truncation may identify some of its elements")
    split = True if s.truncation_differential_zero else None
    expr = extension(RModule(K.module), C.expr, split)
    factors = C.factors if K.module.is_zero else None
    return Resolution(expr, factors, C.exact and K.exact, warnings, notes)


def resolve(p: DglPresentation, pointed: bool = False) -> Resolution:
    """E (or E_* when ``pointed``) of L(V) by iterating natural splits."""
    if p.is_empty:
        return Resolution(Trivial(), [], True)
    return resolve_split(SplitData.natural(p), pointed)


@dataclass
class SequenceReport:
    split: SplitData
    pointed: bool
    kernel: KernelData
    quotient: Resolution
    sequence: GroupExpression
    warnings: list
    notes: list = field(default_factory=list)

    @property
    def label(self) -> str:
        return "E_*" if self.pointed else "E"

    def render(self) -> str:
        return f"{self.label} ≅ {self.sequence.render()}"

    def to_dict(self) -> dict:
        return {
            "group": self.label,
            "n": self.split.n, "q": self.split.q,
            "kernel": self.kernel.module.to_dict(),
            "kernel_exact": self.kernel.exact,
            "quotient": self.quotient.expr.to_dict(),
            "expression": self.sequence.to_dict(),
            "rendered": self.sequence.render(),
            "split": True if self.split.truncation_differential_zero else None,
            "exact": self.quotient.exact and self.kernel.exact,
            "notes": list(self.notes),
        }


def sequence_report(s: SplitData, pointed: bool = False) -> SequenceReport:
    low = resolve(s.truncation, pointed)
    C = _quotient(s, low, pointed)
    r = resolve_split(s, pointed)
    K = effective_kernel(s)
    return SequenceReport(s, pointed, K, C, r.expr, r.warnings, r.notes)


# ---------------------------------------------------------------------------
# infiniteness


@dataclass
class Verdict:
    status: str                         # "infinite", "finite", "unknown"
    criterion: str = ""
    family: str = ""
    witnesses: list = field(default_factory=list)
    verified: bool = False
    order: int | None = None

    def to_dict(self) -> dict:
        return {"status": self.status, "criterion": self.criterion, "family": self.family,
                "verified": self.verified, "order": self.order,
                "witnesses": [{n: str(v) for n, v in w.values.items()} for w in self.witnesses]}


def _test_units(ring) -> list:
    """Two multiplicatively independent-enough units for a = 2, 3 style families."""
    if ring.rational:
        return [Fraction(2), Fraction(3)]
    ps = list(ring.inverted_primes)
    if len(ps) >= 2:
        return [Fraction(ps[0]), Fraction(ps[1])]
    if ps:
        return [Fraction(ps[0]), Fraction(ps[0] ** 2)]
    return []


def weight_solutions(p: DglPresentation) -> list:
    """Integer weight vectors w with d weight-homogeneous (basis of the solution space)."""
    names = p.names
    idx = {n: i for i, n in enumerate(names)}
    rows = []
    for n in names:
        for mono in p.differential[n].terms:
            row = [Fraction(0)] * len(names)
            row[idx[n]] += 1
            for letter in mono.word:
                row[letter] -= 2 if mono.square else 1
            rows.append(row)
    Q = LocalRing.rationals()
    if not rows:
        basis = [[Fraction(int(i == k)) for k in range(len(names))] for i in range(len(names))]
    else:
        basis = kernel_basis(rows, Q, len(names))
    out = []
    for v in basis:
        den = 1
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)
        ints = [int(x * den) for x in v]
        out.append(dict(zip(names, ints)))
    return out


def weight_morphism(p: DglPresentation, weights: Mapping, a: Fraction) -> DglMorphism:
    return DglMorphism(p, p, {n: Fraction(a) ** weights[n] * p.gen(n) for n in p.names})


def _free_action_nontrivial(f: DglMorphism) -> bool:
    """Does f act on the free part of H(V) by something other than the identity?"""
    for n in f.source.degrees:
        h = generator_homology(f.source, n)
        free = [i for i, o in enumerate(h.orders) if o == 0]
        if not free:
            continue
        M = f.on_generator_homology(n)
        for i in free:
            for k in free:
                if M[i][k] != (1 if i == k else 0):
                    return True
    return False


def _distinct_on_generators(f: DglMorphism, g: DglMorphism) -> bool:
    return any(f.values[n] != g.values[n] for n in f.source.names)


def _verify_pair(ws: list) -> bool:
    if len(ws) != 2:
        return False
    for w in ws:
        if w.chain_defect() is not None:
            return False
    return _distinct_on_generators(ws[0], ws[1])


def infiniteness_check(target, n: int | None = None, q: int | None = None) -> Verdict:
    """Look for an explicit infinite family of pairwise non-homotopic self-equivalences.

    ``target`` is a presentation (natural split unless n, q given) or a SplitData.
    """
    if isinstance(target, SplitData):
        s = target
    else:
        p = target
        if p.is_empty:
            return Verdict("finite", "empty presentation", order=1)
        s = SplitData(p, n, q) if n is not None else SplitData.natural(p)
    p = s.presentation
    units = _test_units(p.ring)

    if not units:
        return Verdict("unknown", "no unit of infinite order in R")

    # d = 0: scaling every generator
    if all(not v for v in p.differential.values()):
        ws = [weight_morphism(p, {x: 1 for x in p.names}, a) for a in units]
        return Verdict("infinite", "zero differential: E = aut(V)",
                       "alpha^a(x) = a x for every generator x", ws, _verify_pair(ws))

    # B = 0 with top generators: xi^a lifted
    if s.j and s.b_is_zero:
        T = s.truncation
        ws = []
        for a in units:
            xi = [[a if i == k else Fraction(0) for k in range(s.j)] for i in range(s.j)]
            ws.append(lift(s, CqElement(xi, DglMorphism.identity(T))))
        ok = _verify_pair(ws) and all(_free_action_nontrivial(w) for w in ws)
        return Verdict("infinite", "B = 0 on a nonzero top block",
                       f"(xi^a, [id]) with xi^a(v) = a v on V_{s.q - 1}", ws, ok)

    # free part in the (homotopy-corrected) kernel
    K = effective_kernel(s)
    if K.exact and K.module.free_rank > 0:
        reps = [r for r, o in zip(K.homology.representatives, K.homology.orders) if o == 0]
        z = reps[0]
        ws = []
        for a in units:
            psi = {}
            for k, v in enumerate(s.top):
                chunk = z[k * K.dim:(k + 1) * K.dim]
                psi[v] = s.truncation.algebra.from_coordinates(
                    [a * c for c in chunk], s.q - 1)
            ws.append(theta_kernel_element(s, psi))
        return Verdict("infinite",
                       "free summand in the kernel (Hom(V_{q-1}, H_{q-1}) modulo self-homotopies)",
                       "beta^a(v) = v + a psi(v) with {psi} of infinite order", ws,
                       _verify_pair(ws))

    # weight gradings
    for weights in weight_solutions(p):
        ws = [weight_morphism(p, weights, a) for a in units]
        if all(_free_action_nontrivial(w) for w in ws):
            desc = ", ".join(f"{x}:{w}" for x, w in weights.items())
            return Verdict("infinite", "weight grading compatible with d",
                           f"alpha^a(x) = a^w(x) x with weights {desc}", ws, _verify_pair(ws))

    r = resolve(p)
    order = _finite_order(r.expr) if r.exact else None
    if order is not None:
        return Verdict("finite", "closed form", order=order)
    return Verdict("unknown", "no implemented criterion applies")


def _finite_order(g: GroupExpression):
    if isinstance(g, Trivial):
        return 1
    if isinstance(g, Finite):
        return g.order
    if isinstance(g, Aut) and isinstance(g.order, int):
        return g.order
    if isinstance(g, RModule) and g.module.is_finite:
        return g.module.order
    if isinstance(g, Product):
        total = 1
        for f in g.factors:
            o = _finite_order(f)
            if o is None:
                return None
            total *= o
        return total
    if isinstance(g, Extension):
        a, b = _finite_order(g.kernel), _finite_order(g.quotient)
        return None if a is None or b is None else a * b
    return None


# ---------------------------------------------------------------------------
# degree <= 3 models: H_4 and H_3 by named summands


H4_NAMES = ("[ker d3, V1]", "[V2, V2]", "[V2, [V1, V1]] / [d3 V3, V2]",
            "[V1, [V1, [V1, V1]]] / [d3 V3, [V1, V1]]")
H3_NAMES = ("ker d3", "[V2, V1]", "[V1, [V1, V1]] / [d3 V3, V1]")


@dataclass
class Decomposition:
    degree: int
    components: dict        # name -> ModuleDescription (multigraded piece)
    literal: dict           # name -> ModuleDescription (summand read literally)
    direct: ModuleDescription
    total: ModuleDescription
    literal_total: ModuleDescription
    notes: list = field(default_factory=list)

    @property
    def agrees(self) -> bool:
        return self.total == self.direct

    @property
    def literal_agrees(self) -> bool:
        return self.literal_total == self.direct

    def to_dict(self) -> dict:
        return {"degree": self.degree,
                "components": {k: v.to_dict() for k, v in self.components.items()},
                "literal": {k: v.to_dict() for k, v in self.literal.items()},
                "direct": self.direct.to_dict(), "agrees": self.agrees,
                "literal_agrees": self.literal_agrees, "notes": list(self.notes)}


def _grading(p: DglPresentation, mono) -> tuple:
    """(number of V2 letters, weight with V1 -> 1, V3 -> 2)."""
    degs = p.algebra.degrees
    mult = 2 if mono.square else 1
    c2 = sum(1 for i in mono.word if degs[i] == 2) * mult
    w = sum({1: 1, 3: 2}.get(degs[i], 0) for i in mono.word) * mult
    return c2, w


def _component_homology(p: DglPresentation, degree: int, grade: tuple) -> ModuleDescription:
    alg = p.algebra
    ring = p.ring

    def idx(d):
        return [i for i, m in enumerate(alg.basis(d)) if _grading(p, m) == grade] if d >= 1 else []

    here, below, above = idx(degree), idx(degree - 1), idx(degree + 1)
    if not here:
        return ModuleDescription()
    full_out = p.boundary_matrix(degree) if degree > 1 else []
    full_in = p.boundary_matrix(degree + 1) if above else []
    d_out = [[full_out[r][c] for c in here] for r in below] if below and full_out else []
    d_in = [[full_in[r][c] for c in above] for r in here] if above else []
    return chain_homology(d_out, d_in, len(here), ring, in_dim=len(above) if d_in else 0).module


def _check_low_degrees(p: DglPresentation):
    bad = [g.name for g in p.generators if not 1 <= g.degree <= 3]
    if bad:
        raise DegreeWindowMismatch(f"generators {bad} are outside Lie degrees 1..3")
    if not linear_part(p).is_zero:
        raise DegreeWindowMismatch("named summands need a zero linear part")


def _span_rank(vectors: list, dim: int, ring) -> ModuleDescription:
    return ModuleDescription(len(column_space_basis(vectors, dim, ring)))


def h4_decomposition(p: DglPresentation) -> Decomposition:
    """H_4(L(V_<=3)) split by V2-letter count and weight, plus the summands read literally.

    The multigraded pieces always add up to H_4.  The literal summands use
    [ker d3, V1] and [d3 V3, [V1, V1]], which can differ from the pieces when
    d3 V3 meets brackets that Jacobi relations kill (e.g. d x = [a, a]).
    """
    _check_low_degrees(p)
    ring = p.ring
    alg = p.algebra
    comps = {
        H4_NAMES[0]: _component_homology(p, 4, (0, 3)),
        H4_NAMES[1]: _component_homology(p, 4, (2, 0)),
        H4_NAMES[2]: _component_homology(p, 4, (1, 2)),
        H4_NAMES[3]: _component_homology(p, 4, (0, 4)),
    }
    direct = p.lie_homology(4).module
    V1 = [alg.gen(n) for n in p.generators_in_degree(1)]
    V2 = [alg.gen(n) for n in p.generators_in_degree(2)]
    V3n = p.generators_in_degree(3)
    dim4 = alg.dimension(4)

    def vec(x):
        return alg.coordinates(x, 4)

    br = alg.bracket
    # ker d3 inside V3
    if V3n:
        d3 = from_columns([alg.coordinates(p.differential[n], 2) for n in V3n],
                          alg.dimension(2)) if alg.dimension(2) else []
        kers = kernel_basis(d3, ring, len(V3n)) if d3 else \
            [[Fraction(int(i == k)) for k in range(len(V3n))] for i in range(len(V3n))]
    else:
        kers = []
    ker_elems = [sum((c * alg.gen(n) for c, n in zip(kv, V3n)), alg.zero()) for kv in kers]
    dV3 = [p.differential[n] for n in V3n]
    V1V1 = [br(a, b) for a in V1 for b in V1]
    lit = {
        H4_NAMES[0]: _span_rank([vec(br(z, a)) for z in ker_elems for a in V1], dim4, ring),
        H4_NAMES[1]: _span_rank([vec(br(x, y)) for x in V2 for y in V2], dim4, ring),
        H4_NAMES[2]: span_quotient([vec(br(y, c)) for y in V2 for c in V1V1],
                                   [vec(br(c, y)) for c in dV3 for y in V2], dim4, ring),
        H4_NAMES[3]: span_quotient(
            [vec(br(a, br(b, br(c, e)))) for a in V1 for b in V1 for c in V1 for e in V1],
            [vec(br(c, x)) for c in dV3 for x in V1V1], dim4, ring),
    }
    total = _sum(comps.values())
    literal_total = _sum(lit.values())
    notes = []
    if literal_total != direct:
        notes.append("summands read literally do not add up to H_4 for this model")
    return Decomposition(4, comps, lit, direct, total, literal_total, notes)


def h3_decomposition(p: DglPresentation) -> Decomposition:
    """H_3(L(V_<=3)) as ker d3 + [V2, V1] + [V1,[V1,V1]]/[d3 V3, V1]."""
    _check_low_degrees(p)
    ring = p.ring
    alg = p.algebra
    comps = {
        H3_NAMES[0]: _component_homology(p, 3, (0, 2)),
        H3_NAMES[1]: _component_homology(p, 3, (1, 1)),
        H3_NAMES[2]: _component_homology(p, 3, (0, 3)),
    }
    direct = p.lie_homology(3).module
    V1 = [alg.gen(n) for n in p.generators_in_degree(1)]
    V2 = [alg.gen(n) for n in p.generators_in_degree(2)]
    V3n = p.generators_in_degree(3)
    dim3 = alg.dimension(3)
    br = alg.bracket
    if V3n and alg.dimension(2):
        d3 = from_columns([alg.coordinates(p.differential[n], 2) for n in V3n], alg.dimension(2))
        k = len(kernel_basis(d3, ring, len(V3n)))
    else:
        k = len(V3n)
    lit = {
        H3_NAMES[0]: ModuleDescription(k),
        H3_NAMES[1]: _span_rank([alg.coordinates(br(y, a), 3) for y in V2 for a in V1],
                                dim3, ring),
        H3_NAMES[2]: span_quotient(
            [alg.coordinates(br(a, br(b, c)), 3) for a in V1 for b in V1 for c in V1],
            [alg.coordinates(br(p.differential[n], a), 3) for n in V3n for a in V1],
            dim3, ring),
    }
    notes = []
    if h3_hypotheses(p):
        notes.append("ker d3 = 0 and d3 V3 = [V1, V1]: H_3 reduces to [V2, V1]")
    return Decomposition(3, comps, lit, direct, _sum(comps.values()), _sum(lit.values()), notes)


def h3_hypotheses(p: DglPresentation) -> bool:
    """ker d3 = 0 and d3(V3) = [V1, V1]."""
    alg = p.algebra
    V3n = p.generators_in_degree(3)
    dim2 = alg.dimension(2)
    if not V3n:
        return dim2 == 0 or all(
            len(m.word) == 1 and not m.square for m in alg.basis(2))  # [V1,V1] = 0
    V1 = [alg.gen(n) for n in p.generators_in_degree(1)]
    target = [alg.coordinates(alg.bracket(a, b), 2) for a in V1 for b in V1]
    image = [alg.coordinates(p.differential[n], 2) for n in V3n]
    if len(column_space_basis(image, dim2, p.ring)) != len(V3n):
        return False
    # image equals the span of [V1, V1] as R-modules
    return (span_quotient(target, image, dim2, p.ring).is_zero
            and span_quotient(image, target, dim2, p.ring).is_zero)


def _sum(mods) -> ModuleDescription:
    out = ModuleDescription()
    for m in mods:
        out = out + m
    return out
