"""Cylinder homotopies between DG Lie morphisms.

The cylinder on (L(V), d) is L(V, sV, V') with D(v) = dv, D(sv) = v', D(v') = 0
and the degree +1 derivation S(v) = sv, S(sv) = S(v') = 0.  The degree zero
derivation theta = DS + SD exponentiates to an automorphism e^theta, and a
morphism F from the cylinder with F(v) = a(v), F(e^theta v) = a'(v) is a
homotopy from a to a'.

Deciding whether two morphisms are homotopic is not attempted.  Instead we
verify supplied witnesses and build witnesses in the situations that arise in
the exact-sequence machinery.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .dgl import DglMorphism, DglPresentation
from .errors import NonInvertibleFactorial, NoSolution
from .freelie import LieElement

MAX_ITERATIONS = 64


def _fresh(base: str, taken: set) -> str:
    name = base
    while name in taken:
        name = name + "_"
    taken.add(name)
    return name


@dataclass
class Cylinder:
    """The cylinder presentation together with its bookkeeping maps."""

    base: DglPresentation
    presentation: DglPresentation
    s_name: dict
    prime_name: dict
    _S: object = field(repr=False, default=None)

    @property
    def ring(self):
        return self.base.ring

    def v(self, name: str) -> LieElement:
        return self.presentation.gen(name)

    def s(self, name: str) -> LieElement:
        return self.presentation.gen(self.s_name[name])

    def prime(self, name: str) -> LieElement:
        return self.presentation.gen(self.prime_name[name])

    def D(self, x: LieElement) -> LieElement:
        return self.presentation.d(x)

    def S(self, x: LieElement) -> LieElement:
        return self._S(x)

    def embed(self, x: LieElement) -> LieElement:
        """Include an element of L(V) into the cylinder."""
        return self.presentation.algebra.convert(x)


def build_cylinder(p: DglPresentation) -> Cylinder:
    taken = set(p.names)
    s_name = {n: _fresh("s" + n, taken) for n in p.names}
    prime_name = {n: _fresh(n + "'", taken) for n in p.names}
    gens = []
    for g in p.generators:
        gens += [(g.name, g.degree), (s_name[g.name], g.degree + 1),
                 (prime_name[g.name], g.degree)]
    diff = {}
    for g in p.generators:
        diff[g.name] = [(c, p.algebra.tree(mono)) for mono, c in p.differential[g.name].terms.items()]
        diff[s_name[g.name]] = prime_name[g.name]
    m, k = p.window
    cyl = DglPresentation(p.ring, gens, diff, window=(m, k + 1) if gens else None)
    S = cyl.algebra.derivation({n: cyl.gen(s_name[n]) for n in p.names}, +1)
    return Cylinder(p, cyl, s_name, prime_name, S)


def susp_derivation(c: Cylinder, x: LieElement) -> LieElement:
    return c.S(x)


def theta(c: Cylinder, x: LieElement) -> LieElement:
    return c.D(c.S(x)) + c.S(c.D(x))


def _sd_series(c: Cylinder, v: str) -> LieElement:
    """sum_{n>=1} (SD)^n(v) / n!, checking that each needed n! is a unit."""
    total = c.presentation.algebra.zero()
    term = c.v(v)
    for n in range(1, MAX_ITERATIONS):
        term = c.S(c.D(term))
        if not term:
            return total
        if not c.ring.factorial_is_unit(n):
            raise NonInvertibleFactorial(n)
        total = total + Fraction(1, math.factorial(n)) * term
    raise RuntimeError(f"(SD)^n({v}) did not terminate")


def e_theta(c: Cylinder, v: str) -> LieElement:
    """e^theta on a generator v of V: v + v' + sum_{n>=1} (SD)^n(v)/n!."""
    return c.v(v) + c.prime(v) + _sd_series(c, v)


def e_theta_morphism(c: Cylinder) -> DglMorphism:
    """e^theta as a self-map of the cylinder (it fixes sV and V')."""
    values = {}
    for n in c.base.names:
        values[n] = e_theta(c, n)
        values[c.s_name[n]] = c.s(n)
        values[c.prime_name[n]] = c.prime(n)
    return DglMorphism(c.presentation, c.presentation, values, check=False)


def exp_theta_series(c: Cylinder, x: LieElement) -> LieElement:
    """sum_n theta^n(x)/n! computed directly (theta is locally nilpotent)."""
    total = x
    term = x
    for n in range(1, MAX_ITERATIONS):
        term = theta(c, term)
        if not term:
            return total
        total = total + Fraction(1, math.factorial(n)) * term
    raise RuntimeError("theta is not nilpotent on this element")


# ---------------------------------------------------------------------------
# witnesses


@dataclass
class HomotopyWitness:
    """F : cylinder -> target, claimed to be a homotopy from alpha to alpha_prime."""

    cylinder: Cylinder
    F: DglMorphism
    alpha: DglMorphism
    alpha_prime: DglMorphism


@dataclass
class HomotopyCertificate:
    ok: bool
    generator: str | None = None
    reason: str = ""
    lhs: LieElement | None = None
    rhs: LieElement | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "verified"
        return f"{self.reason} at {self.generator}: {self.lhs} != {self.rhs}"


def verify_homotopy(w: HomotopyWitness) -> HomotopyCertificate:
    """Check that F is a DG map with F(v) = alpha(v) and F(e^theta v) = alpha'(v)."""
    c = w.cylinder
    bad = w.F.chain_defect()
    if bad:
        return HomotopyCertificate(False, bad[0], "F does not commute with differentials",
                                   bad[1], bad[2])
    for name in c.base.names:
        lhs = w.F(c.v(name))
        rhs = w.alpha.values[name]
        if lhs != rhs:
            return HomotopyCertificate(False, name, "F(v) differs from alpha(v)", lhs, rhs)
    for name in c.base.names:
        lhs = w.F(e_theta(c, name))
        rhs = w.alpha_prime.values[name]
        if lhs != rhs:
            return HomotopyCertificate(False, name, "F(e^theta v) differs from alpha'(v)",
                                       lhs, rhs)
    return HomotopyCertificate(True)


def _cylinder_map(c: Cylinder, target: DglPresentation, on_v: Mapping, on_s: Mapping,
                  check: bool = True) -> DglMorphism:
    """F with F(v) = on_v[v], F(sv) = on_s[v] (default 0) and F(v') = d F(sv)."""
    zero = target.algebra.zero()
    values = {}
    for n in c.base.names:
        values[n] = on_v[n]
        h = on_s.get(n, zero)
        values[c.s_name[n]] = h
        values[c.prime_name[n]] = target.d(h)
    return DglMorphism(c.presentation, target, values, check=check)


def reflexivity_witness(alpha: DglMorphism) -> HomotopyWitness:
    """alpha ~ alpha via F(v) = alpha(v), F(sv) = F(v') = 0."""
    c = build_cylinder(alpha.source)
    F = _cylinder_map(c, alpha.target, alpha.values, {})
    return HomotopyWitness(c, F, alpha, alpha)


def flow_witness(alpha: DglMorphism, h: Mapping) -> HomotopyWitness:
    """The homotopy F(v) = alpha(v), F(sv) = h(v), F(v') = d h(v) and its far end.

    ``h`` maps generator names to elements of the target of degree one more.
    Returns the witness with ``alpha_prime = F o e^theta``, which is homotopic
    to alpha by construction.
    """
    c = build_cylinder(alpha.source)
    F = _cylinder_map(c, alpha.target, alpha.values, h)
    far = {n: F(e_theta(c, n)) for n in alpha.source.names}
    alpha_prime = DglMorphism(alpha.source, alpha.target, far)
    return HomotopyWitness(c, F, alpha, alpha_prime)


def _top_and_lower(p: DglPresentation, n: int):
    top = [g.name for g in p.generators if g.degree >= n]
    low = [g.name for g in p.generators if g.degree < n]
    return top, low


def normalize_kernel_element(alpha: DglMorphism, F_low: HomotopyWitness, n: int):
    """Replace alpha by a homotopic beta that is the identity below degree n.

    ``F_low`` must be a verified homotopy from the identity of the truncation
    L(V_<n) to the restriction of alpha.  Returns ``(beta, G)`` where
    beta(v) = alpha(v) - F(sum (SD)^k v / k!) on the top generators and G is a
    homotopy from beta to alpha on the full cylinder.
    """
    p = alpha.source
    top, low = _top_and_lower(p, n)
    c = build_cylinder(p)
    F = F_low.F
    cl = F_low.cylinder
    # F on the truncated cylinder, pushed into L(V)
    push = p.algebra.convert

    def F_full(x: LieElement) -> LieElement:
        # x lives in the full cylinder but involves only V_<n letters
        return push(F(cl.presentation.algebra.convert(x)))

    beta_vals = {name: p.gen(name) for name in low}
    for name in top:
        beta_vals[name] = alpha.values[name] - F_full(_sd_series(c, name))
    beta = DglMorphism(p, p, beta_vals)
    values = {}
    zero = p.algebra.zero()
    for name in low:
        values[name] = push(F.values[name])
        values[c.s_name[name]] = push(F.values[cl.s_name[name]])
        values[c.prime_name[name]] = push(F.values[cl.prime_name[name]])
    for name in top:
        values[name] = beta_vals[name]
        values[c.s_name[name]] = zero
        values[c.prime_name[name]] = zero
    G = DglMorphism(c.presentation, p, values)
    return beta, HomotopyWitness(c, G, beta, alpha)


def boundary_witness(beta: DglMorphism, beta_prime: DglMorphism, n: int):
    """A homotopy beta ~ beta' when they agree below degree n and differ by boundaries on top.

    Returns None when some difference beta'(v) - beta(v) is not a boundary.
    """
    p = beta.source
    top, low = _top_and_lower(p, n)
    for name in low:
        if beta.values[name] != beta_prime.values[name]:
            return None
    c = build_cylinder(p)
    target = beta.target
    on_s = {}
    for name in top:
        diff = beta_prime.values[name] - beta.values[name]
        y = target.lie_homology(p.degree_of(name)).preimage(diff)
        if y is None:
            return None
        on_s[name] = y
    # every (SD)^k v term contains an s- or prime-letter of V_<n, which F kills
    F = _cylinder_map(c, target, beta.values, on_s)
    return HomotopyWitness(c, F, beta, beta_prime)


def homotopic(alpha: DglMorphism, alpha_prime: DglMorphism, n: int | None = None):
    """("homotopic", witness) when a verified witness is found, else ("undetermined", None).

    Tries equality, then the boundary-difference construction above the given
    split degree (default: the top generator degree).
    """
    if alpha == alpha_prime:
        w = reflexivity_witness(alpha)
        return ("homotopic", w) if verify_homotopy(w) else ("undetermined", None)
    if n is None:
        degs = alpha.source.degrees
        n = degs[-1] if degs else 0
    w = boundary_witness(alpha, alpha_prime, n)
    if w is not None and verify_homotopy(w):
        return "homotopic", w
    return "undetermined", None


def homotopic_pair(p: DglPresentation, n: int, h: Mapping, top_cycles: Mapping = None):
    """Build (alpha, alpha_low_witness) with alpha_<n homotopic to the identity.

    ``h`` gives degree +1 values on generators of degree < n.  The restriction
    of alpha is id o e^theta pushed through the flow homotopy, and alpha on the
    top generators is v + u_v + z_v where d u_v = alpha(dv) - dv and z_v is the
    optional cycle ``top_cycles[v]``.
    """
    from .dgl import truncate_below
    low = truncate_below(p, n)
    w = flow_witness(DglMorphism.identity(low), h)
    top, lower = _top_and_lower(p, n)
    vals = {name: p.algebra.convert(w.alpha_prime.values[name]) for name in lower}
    partial = DglMorphism(p, p, {**vals, **{t: p.algebra.zero() for t in top}}, check=False)
    for name in top:
        dv = p.differential[name]
        target = partial(dv) - dv
        u = low.lie_homology(p.degree_of(name) - 1).preimage(target)
        if u is None:
            raise NoSolution(f"alpha(d{name}) - d{name} is not a boundary")
        u = p.algebra.convert(u)
        z = p.algebra.zero() if not top_cycles or name not in top_cycles else \
            p.algebra.normal_form(top_cycles[name])
        vals[name] = p.gen(name) + u + z
    return DglMorphism(p, p, vals), w
