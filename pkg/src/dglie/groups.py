"""Symbolic descriptions of groups appearing in self-equivalence reports."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .ring import LocalRing, ModuleDescription

BRUTE_FORCE_LIMIT = 10 ** 4


class GroupExpression:
    """Base node.  Subclasses implement :meth:`render` and :meth:`to_dict`."""

    kind = "group"

    @property
    def is_trivial(self) -> bool:
        return False

    def render(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.render()

    def _wrapped(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Trivial(GroupExpression):
    kind = "trivial"

    @property
    def is_trivial(self):
        return True

    def render(self):
        return "0"

    def to_dict(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class RModule(GroupExpression):
    """An R-module viewed as an additive group."""

    module: ModuleDescription
    kind = "module"

    @property
    def is_trivial(self):
        return self.module.is_zero

    def render(self):
        return self.module.render()

    def _wrapped(self):
        s = self.render()
        return f"({s})" if " " in s else s

    def to_dict(self):
        return {"kind": self.kind, "module": self.module.to_dict()}


@dataclass(frozen=True)
class Units(GroupExpression):
    kind = "units"

    def render(self):
        return "R*"

    def to_dict(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class GL(GroupExpression):
    n: int
    kind = "GL"

    def render(self):
        return f"GL_{self.n}(R)"

    def to_dict(self):
        return {"kind": self.kind, "n": self.n}


@dataclass(frozen=True)
class Aut(GroupExpression):
    module: ModuleDescription
    order: float | int | None = None
    kind = "aut"

    def render(self):
        return f"aut({self.module.render()})"

    def to_dict(self):
        order = self.order
        if order == math.inf:
            order = "infinite"
        return {"kind": self.kind, "module": self.module.to_dict(), "order": order}


@dataclass(frozen=True)
class Product(GroupExpression):
    factors: tuple
    kind = "product"

    def render(self):
        return " × ".join(f._wrapped() for f in self.factors)

    def _wrapped(self):
        return f"({self.render()})"

    def to_dict(self):
        return {"kind": self.kind, "factors": [f.to_dict() for f in self.factors]}


@dataclass(frozen=True)
class Extension(GroupExpression):
    """0 -> kernel -> G -> quotient -> 0; ``split`` is True or None (unknown)."""

    kernel: GroupExpression
    quotient: GroupExpression
    split: bool | None = None
    kind = "extension"

    def render(self):
        if self.split:
            return f"{self.kernel._wrapped()} ⊕ {self.quotient._wrapped()}"
        return f"ext({self.kernel.render()}; {self.quotient.render()})"

    def _wrapped(self):
        return f"({self.render()})"

    def to_dict(self):
        return {"kind": self.kind, "kernel": self.kernel.to_dict(),
                "quotient": self.quotient.to_dict(), "split": self.split}


@dataclass(frozen=True)
class Subgroup(GroupExpression):
    """A subgroup of ``ambient`` cut out by a constraint we do not resolve."""

    ambient: GroupExpression
    constraint: str
    kind = "subgroup"

    def render(self):
        return f"C ⊆ {self.ambient.render()} [{self.constraint}]"

    def _wrapped(self):
        return f"({self.render()})"

    def to_dict(self):
        return {"kind": self.kind, "ambient": self.ambient.to_dict(),
                "constraint": self.constraint}


@dataclass(frozen=True)
class Finite(GroupExpression):
    order: int
    kind = "finite"

    @property
    def is_trivial(self):
        return self.order == 1

    def render(self):
        return f"finite(order {self.order})"

    def to_dict(self):
        return {"kind": self.kind, "order": self.order}


@dataclass(frozen=True)
class InfiniteWitness(GroupExpression):
    family: str
    kind = "infinite"

    def render(self):
        return f"infinite [{self.family}]"

    def to_dict(self):
        return {"kind": self.kind, "family": self.family}


def product(*factors: GroupExpression) -> GroupExpression:
    flat = []
    for f in factors:
        if isinstance(f, Product):
            flat.extend(f.factors)
        elif not f.is_trivial:
            flat.append(f)
    if not flat:
        return Trivial()
    if len(flat) == 1:
        return flat[0]
    return Product(tuple(flat))


def extension(kernel: GroupExpression, quotient: GroupExpression,
              split: bool | None) -> GroupExpression:
    if kernel.is_trivial:
        return quotient
    if quotient.is_trivial:
        return kernel
    return Extension(kernel, quotient, split)


def general_linear(n: int) -> GroupExpression:
    if n == 0:
        return Trivial()
    if n == 1:
        return Units()
    return GL(n)


# ---------------------------------------------------------------------------
# automorphism groups of f.g. R-modules


def finite_automorphism_count(orders: list) -> int:
    """Number of automorphisms of the finite group Z/n_1 + ... + Z/n_r.

    Brute force: a homomorphism sends generator i to an element whose order
    divides n_i; it is an automorphism iff it is surjective.
    """
    orders = [n for n in orders if n > 1]
    if not orders:
        return 1
    size = math.prod(orders)
    if size > BRUTE_FORCE_LIMIT:
        raise ValueError(f"group of order {size} is too large for enumeration")
    elements = list(itertools.product(*(range(n) for n in orders)))

    def annihilated_by(x, n):
        return all((n * xi) % m == 0 for xi, m in zip(x, orders))

    candidates = [[x for x in elements if annihilated_by(x, n)] for n in orders]
    count = 0
    for images in itertools.product(*candidates):
        image = set()
        for coeffs in elements:
            image.add(tuple(sum(c * img[k] for c, img in zip(coeffs, images)) % orders[k]
                            for k in range(len(orders))))
        if len(image) == size:
            count += 1
    return count


def aut_description(module: ModuleDescription, ring: LocalRing) -> GroupExpression:
    """aut(M) as a group expression; finite cases carry their order."""
    if module.is_zero:
        return Trivial()
    if not module.torsion:
        return general_linear(module.free_rank)
    if module.is_finite:
        return Aut(module, finite_automorphism_count(module.cyclic_orders))
    return Aut(module, math.inf)
