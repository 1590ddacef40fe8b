"""Built-in worked calculations, run by ``dglie verify-paper``."""
from __future__ import annotations

import time
from dataclasses import dataclass

from .dgl import DglPresentation
from .errors import DegreeWindowMismatch
from .models import (AbelianGroupPresentation, bracket_square_lie, bracket_square_module,
                     moore_space, moore_wedge, skeletal_chain, sphere_product)
from .ring import LocalRing
from .selfeq import (SplitData, h3_decomposition, h4_decomposition, infiniteness_check,
                     sequence_report)


@dataclass
class ClaimResult:
    name: str
    expected: str
    observed: str
    seconds: float

    @property
    def ok(self) -> bool:
        return self.expected == self.observed

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status}  {self.name}: expected {self.expected!r}, got {self.observed!r} ({self.seconds:.2f}s)"

    def to_dict(self) -> dict:
        return {"name": self.name, "expected": self.expected, "observed": self.observed,
                "ok": self.ok}


def _report(p, n, q, pointed):
    return sequence_report(SplitData(p, n, q), pointed).render()


def _sphere(m, n, pointed):
    R = LocalRing.invert(2, 3, 5)
    return _report(sphere_product(m, n, R), m + n + 1, m + n + 2, pointed)


def _wedge(spec, m, pointed=False):
    R = LocalRing.invert(2, 3)
    groups = [AbelianGroupPresentation.parse(g) for g in spec]
    return sequence_report(SplitData.natural(moore_wedge(groups, m, R)), pointed).render()


def _wedge_rejected():
    G = AbelianGroupPresentation.parse("Z/5")
    try:
        moore_wedge([G, G, G], 4, LocalRing.invert(2, 3))
    except DegreeWindowMismatch:
        return "rejected"
    return "accepted"


def _aut_order():
    p = moore_wedge([AbelianGroupPresentation.parse("Z/5")], 4, LocalRing.invert(2, 3))
    v = infiniteness_check(p)
    return f"{v.status}, order {v.order}"


def _skeletal_top(G, m, j, primes=(2, 3, 5, 7, 11)):
    R = LocalRing.invert(*primes)
    chain = skeletal_chain(AbelianGroupPresentation.parse(G), m, R, {}, j)
    return sequence_report(chain[-1], pointed=True).render()


def _skeletal_intermediate():
    R = LocalRing.invert(2, 3, 5, 7, 11)
    chain = skeletal_chain(AbelianGroupPresentation.parse("Z"), 5, R, {7: 1, 8: 1}, 2)
    return ", ".join(sequence_report(s, pointed=True).render() for s in chain[:-1])


def _bracket_crosscheck(G, m, primes=(2, 3, 5, 7, 11)):
    R = LocalRing.invert(*primes)
    A = AbelianGroupPresentation.parse(G)
    a, b = bracket_square_module(A, m, R), bracket_square_lie(A, m, R)
    return a.render() if a == b else f"{a.render()} vs {b.render()}"


def _finite_then_infinite():
    R = LocalRing.invert(2, 3)
    base = moore_space(AbelianGroupPresentation.parse("Z/5"), 5, R)
    grown = DglPresentation(R, [(g.name, g.degree) for g in base.generators] + [("c", 6)],
                            base.differential)
    return f"{infiniteness_check(base).status} -> {infiniteness_check(grown).status}"


def _low_dimensional():
    R = LocalRing.invert(2, 3, 5)
    p = DglPresentation(R, [("a", 1), ("b", 2), ("x", 3), ("w", 4)],
                        {"x": ("a", "a"), "w": ("a", "b")})
    v = infiniteness_check(p)
    return f"{v.status} ({'verified' if v.verified else 'unverified'})"


def _h3_decomposition():
    R = LocalRing.invert(2, 3, 5)
    p = DglPresentation(R, [("a", 1), ("b", 2), ("x", 3)], {"x": ("a", "a")})
    d = h3_decomposition(p)
    return d.total.render() if d.agrees else f"{d.total.render()} vs {d.direct.render()}"


def _h4_decomposition():
    R = LocalRing.invert(2, 3, 5)
    p = DglPresentation(R, [("a", 1), ("b", 2), ("x", 3)], {"x": ("a", "a")})
    d = h4_decomposition(p)
    return d.total.render() if d.agrees else f"{d.total.render()} vs {d.direct.render()}"


CLAIMS = [
    ("sphere product (3,6): E", "E ≅ R ⊕ (R* × R*)", lambda: _sphere(3, 6, False)),
    ("sphere product (3,6): E_*", "E_* ≅ R", lambda: _sphere(3, 6, True)),
    ("sphere product (3,4): E", "E ≅ R* × R*", lambda: _sphere(3, 4, False)),
    ("sphere product (3,4): E_*", "E_* ≅ 0", lambda: _sphere(3, 4, True)),
    ("sphere product (2,4): E", "E ≅ R* × R*", lambda: _sphere(2, 4, False)),
    ("sphere product (2,4): E_*", "E_* ≅ 0", lambda: _sphere(2, 4, True)),
    ("Moore wedge Z/5, m=4", "E ≅ aut(Z/5)", lambda: _wedge(["Z/5"], 4)),
    ("aut(Z/5) order by enumeration", "finite, order 4", _aut_order),
    ("Moore wedge (Z+Z/5, Z), m=4", "E ≅ aut(R ⊕ Z/5) × R*", lambda: _wedge(["Z+Z/5", "Z"], 4)),
    ("Moore wedge (Z, Z), m=4", "E ≅ R* × R*", lambda: _wedge(["Z", "Z"], 4)),
    ("Moore wedge with r > m/2", "rejected", _wedge_rejected),
    ("skeletal chain G=Z, m=5, j=2", "E_* ≅ R^2", lambda: _skeletal_top("Z", 5, 2)),
    ("skeletal chain G=Z, m=6, j=1", "E_* ≅ 0", lambda: _skeletal_top("Z", 6, 1)),
    ("skeletal chain G=Z/5+Z, m=5, j=1", "E_* ≅ R ⊕ Z/5 ⊕ Z/5",
     lambda: _skeletal_top("Z/5+Z", 5, 1, (2, 3))),
    ("skeletal chain intermediate stages", "E_* ≅ 0, E_* ≅ 0, E_* ≅ 0",
     _skeletal_intermediate),
    ("[G,G] for G=Z, m=5 (two routes)", "R", lambda: _bracket_crosscheck("Z", 5)),
    ("[G,G] for G=Z+Z/5, m=5 (two routes)", "R ⊕ Z/5 ⊕ Z/5",
     lambda: _bracket_crosscheck("Z+Z/5", 5, (2, 3))),
    ("finite then one more cell", "finite -> infinite", _finite_then_infinite),
    ("dimension 5 complex", "infinite (verified)", _low_dimensional),
    ("H_3 decomposition", "R", _h3_decomposition),
    ("H_4 decomposition", "R", _h4_decomposition),
]


def run_claims() -> list:
    results = []
    for name, expected, fn in CLAIMS:
        t = time.perf_counter()
        try:
            observed = fn()
        except Exception as e:  # a crash is a failed claim, not a crashed suite
            observed = f"error: {type(e).__name__}: {e}"
        results.append(ClaimResult(name, expected, observed, time.perf_counter() - t))
    return results


__all__ = ["ClaimResult", "CLAIMS", "run_claims"]
