"""Builders for standard models: sphere products, Moore spaces and wedges,
skeletal chains, and small random presentations."""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .dgl import DglPresentation, truncate_below
from .errors import DegreeWindowMismatch
from .ring import LocalRing, ModuleDescription, kernel_basis, span_quotient
from .selfeq import SplitData


@dataclass(frozen=True)
class AbelianGroupPresentation:
    """Z^free_rank + Z/t_1 + ... + Z/t_s with sorted orders t_i >= 2."""

    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0 or any(t < 2 for t in self.torsion):
            raise ValueError("free rank must be >= 0 and torsion orders >= 2")
        object.__setattr__(self, "torsion", tuple(sorted(self.torsion)))

    @classmethod
    def parse(cls, text: str) -> "AbelianGroupPresentation":
        """Read forms like ``Z``, ``Z^2+Z/5``, ``Z/3+Z/9`` or ``0``."""
        text = text.replace(" ", "")
        if text in ("", "0"):
            return cls()
        free, tors = 0, []
        for part in text.split("+"):
            m = re.fullmatch(r"Z(?:\^(\d+))?", part)
            if m:
                free += int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"Z/(\d+)", part)
            if m:
                tors.append(int(m.group(1)))
                continue
            raise ValueError(f"cannot read group summand {part!r}")
        return cls(free, tuple(tors))

    def localize(self, ring: LocalRing) -> ModuleDescription:
        return ModuleDescription.from_orders(self.free_rank, self.torsion, ring)

    def __str__(self):
        parts = (["Z" if self.free_rank == 1 else f"Z^{self.free_rank}"] if self.free_rank else [])
        parts += [f"Z/{t}" for t in self.torsion]
        return "+".join(parts) or "0"


def sphere_product(m: int, n: int, ring: LocalRing) -> DglPresentation:
    """Model of S^{m+1} x S^{n+1}: |u| = m, |v| = n, dw = [u, v]."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    return DglPresentation(ring, [("u", m), ("v", n), ("w", m + n + 1)], {"w": ("u", "v")})


def _moore_block(G: AbelianGroupPresentation, dim: int, ring: LocalRing, prefix: str,
                 warnings: list):
    gens, diff = [], {}
    k = 0
    for _ in range(G.free_rank):
        k += 1
        gens.append((f"{prefix}x{k}", dim - 1))
    for t in G.torsion:
        e = ring.canonical(t)
        if e == 1:
            warnings.append(f"Z/{t} vanishes over {ring}")
            continue
        k += 1
        x, y = f"{prefix}x{k}", f"{prefix}y{k}"
        gens += [(x, dim - 1), (y, dim)]
        diff[y] = [(e, x)]
    return gens, diff


def moore_space(G: AbelianGroupPresentation, dim: int, ring: LocalRing) -> DglPresentation:
    """M(G, dim): generators in Lie degrees dim-1 and dim, dy = e x for each Z/e."""
    if dim < 2:
        raise ValueError("Moore spaces need dim >= 2")
    warnings = []
    gens, diff = _moore_block(G, dim, ring, "", warnings)
    if not gens:
        warnings.append("model is contractible after localization")
    p = DglPresentation(ring, gens, diff, window=(dim - 1, dim) if gens else None)
    p.warnings += warnings
    return p


def moore_wedge(groups: list, m: int, ring: LocalRing) -> DglPresentation:
    """M(G_1, m+1) v M(G_2, m+3) v ... v M(G_r, m+2r-1), requiring r <= m/2."""
    r = len(groups)
    if 2 * r > m:
        raise DegreeWindowMismatch(f"a wedge of {r} Moore spaces needs r <= m/2 (m = {m})")
    gens, diff, warnings = [], {}, []
    for i, G in enumerate(groups, start=1):
        g, d = _moore_block(G, m + 2 * i - 1, ring, f"g{i}", warnings)
        gens += g
        diff.update(d)
    window = (m, m + 2 * r - 1) if gens else None
    p = DglPresentation(ring, gens, diff, window=window)
    p.warnings += warnings
    return p


# ---------------------------------------------------------------------------
# skeletal chains


@dataclass
class SkeletalChain:
    """A Moore space M(G, m+1) with further cells up to Lie degree 2m.

    ``stages`` holds one split per attachment degree; ``vanishing`` records
    H_{i+1}(L(V_<=i)) for i = m .. 2m-2.
    """

    presentation: DglPresentation | None
    m: int
    stages: list = field(default_factory=list)
    vanishing: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.stages)

    def __len__(self):
        return len(self.stages)

    def __getitem__(self, i):
        return self.stages[i]


def skeletal_chain(G: AbelianGroupPresentation, m: int, ring: LocalRing,
                   intermediate: dict = None, j: int = 0) -> SkeletalChain:
    """Build M(G, m+1) plus ``intermediate[d]`` cells in Lie degree d (m+2 <= d <= 2m-1)
    and ``j`` top cells in Lie degree 2m, all with vanishing linking maps.

    In this range L(V) has no brackets below degree 2m, so vanishing linking
    maps force every new differential to be zero.
    """
    intermediate = dict(intermediate or {})
    bad = [d for d in intermediate if not m + 2 <= d <= 2 * m - 1]
    if bad:
        raise DegreeWindowMismatch(f"intermediate degrees {bad} must lie in [m+2, 2m-1]")
    warnings = []
    gens, diff = _moore_block(G, m + 1, ring, "", warnings)
    for d in sorted(intermediate):
        gens += [(f"c{d}_{k}", d) for k in range(1, intermediate[d] + 1)]
    gens += [(f"t{k}", 2 * m) for k in range(1, j + 1)]
    if not gens:
        return SkeletalChain(None, m)
    p = DglPresentation(ring, gens, diff, window=(m, 2 * m))
    p.warnings += warnings
    stages = []
    for d in p.degrees:
        stage = truncate_below(p, d + 1)
        stages.append(SplitData(stage, d, d + 1))
    vanishing = {}
    for i in range(m, 2 * m - 1):
        vanishing[i] = truncate_below(p, i + 1).lie_homology(i + 1).module
    return SkeletalChain(p, m, stages, vanishing)


def bracket_square_module(G: AbelianGroupPresentation, m: int, ring: LocalRing) -> ModuleDescription:
    """[G_R, G_R] in G_R (x) G_R, spanned by x (x) y - (-1)^m y (x) x with |x| = m + 1.

    G_R (x) G_R is R^N / (relations); the span is computed modulo those relations.
    """
    orders = [0] * G.free_rank + [ring.canonical(t) for t in G.torsion]
    orders = [o for o in orders if o != 1]
    r = len(orders)
    N = r * r
    sign = -1 if m % 2 else 1

    def idx(a, b):
        return a * r + b

    rels = []
    for a in range(r):
        for b in range(r):
            g = math_gcd(orders[a], orders[b])
            if g:
                v = [Fraction(0)] * N
                v[idx(a, b)] = Fraction(g)
                rels.append(v)
    gens = []
    for a in range(r):
        for b in range(r):
            v = [Fraction(0)] * N
            v[idx(a, b)] += 1
            v[idx(b, a)] -= sign
            if any(v):
                gens.append(v)
    if not gens:
        return ModuleDescription()
    return span_quotient(gens, rels, N, ring)


def math_gcd(a: int, b: int) -> int:
    """gcd with 0 standing for an infinite cyclic factor."""
    import math
    if a == 0:
        return b
    if b == 0:
        return a
    return math.gcd(a, b)


def bracket_square_lie(G: AbelianGroupPresentation, m: int, ring: LocalRing) -> ModuleDescription:
    """The same module computed as H_{2m} of the model of M(G, m+1)."""
    p = moore_space(G, m + 1, ring)
    if p.is_empty:
        return ModuleDescription()
    return p.lie_homology(2 * m).module


# ---------------------------------------------------------------------------
# random models


def random_small(seed: int, dims: dict, ring: LocalRing, coefficient_range: int = 2,
                 density: float = 0.7) -> DglPresentation:
    """A random presentation with zero linear part.

    ``dims`` maps Lie degree -> number of generators.  Each differential is a
    random integer combination of a basis of decomposable cycles one degree
    down, so d^2 = 0 holds by construction.
    """
    rng = random.Random(seed)
    gens = []
    for d in sorted(dims):
        gens += [(f"g{d}_{k}", d) for k in range(1, dims[d] + 1)]
    diff = {}
    for idx, (name, deg) in enumerate(gens):
        lower = [g for g in gens[:idx] if g[1] < deg]
        if not lower or rng.random() > density:
            continue
        T = DglPresentation(ring, lower, {k: v for k, v in diff.items()
                                          if k in {g[0] for g in lower}}, check=False)
        alg = T.algebra
        target = deg - 1
        basis = alg.basis(target) if target >= 1 else []
        dec = [i for i, mono in enumerate(basis) if mono.length >= 2]
        if not dec:
            continue
        if target > 1 and alg.basis(target - 1):
            M = T.boundary_matrix(target)
            sub = [[row[i] for i in dec] for row in M]
            cycles = kernel_basis(sub, ring, len(dec))
        else:
            cycles = [[Fraction(int(i == k)) for k in range(len(dec))] for i in range(len(dec))]
        if not cycles:
            continue
        vec = [Fraction(0)] * len(basis)
        for z in cycles:
            c = rng.randint(-coefficient_range, coefficient_range)
            for i, x in zip(dec, z):
                vec[i] += c * x
        vec = _clear_denominators(vec, ring)
        value = alg.from_coordinates(vec, target)
        if value:
            diff[name] = [(c, alg.tree(mono)) for mono, c in value.terms.items()]
    return DglPresentation(ring, gens, diff)


def _clear_denominators(vec, ring):
    import math
    den = 1
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return [x * den for x in vec]


def random_dims(rng: random.Random, max_degree: int, max_dim: int = 2) -> dict:
    dims = {}
    while not dims:
        for d in range(1, max_degree + 1):
            k = rng.randint(0, max_dim)
            if k:
                dims[d] = k
    return dims


__all__ = ["AbelianGroupPresentation", "sphere_product", "moore_space", "moore_wedge",
           "SkeletalChain", "skeletal_chain", "bracket_square_module", "bracket_square_lie",
           "random_small", "random_dims"]
