"""Exact arithmetic over subrings R = Z[S^-1] of the rationals.

Ring elements are plain :class:`fractions.Fraction` values; a :class:`LocalRing`
decides membership, units and the canonical (non-invertible) part of an
integer.  Matrices are lists of rows.  The Smith normal form is computed over
the integers and then localized by stripping the invertible prime factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from sympy import factorint, isprime, nextprime

from .errors import NonSUnitDenominator

Matrix = list  # list of rows of Fraction


@dataclass(frozen=True)
class LocalRing:
    """The ring Z[S^-1] for a finite set of primes S, or Q.

    >>> R = LocalRing.invert(3, 2)
    >>> R.inverted_primes, R.least_noninvertible
    ((2, 3), 5)
    """

    inverted_primes: tuple = ()
    rational: bool = False

    def __post_init__(self):
        primes = tuple(sorted(set(int(p) for p in self.inverted_primes)))
        for p in primes:
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
        if self.rational:
            primes = ()
        object.__setattr__(self, "inverted_primes", primes)

    @classmethod
    def invert(cls, *primes: int) -> "LocalRing":
        return cls(tuple(primes))

    @classmethod
    def integers(cls) -> "LocalRing":
        return cls(())

    @classmethod
    def rationals(cls) -> "LocalRing":
        return cls((), rational=True)

    @property
    def least_noninvertible(self):
        """Smallest prime that is not a unit, or ``math.inf`` for Q."""
        if self.rational:
            return math.inf
        p = 2
        while p in self.inverted_primes:
            p = nextprime(p)
        return p

    def __str__(self):
        if self.rational:
            return "Q"
        if not self.inverted_primes:
            return "Z"
        return "Z[" + ",".join(f"1/{p}" for p in self.inverted_primes) + "]"

    # -- integers --------------------------------------------------------

    def is_invertible_prime(self, p: int) -> bool:
        return self.rational or p in self.inverted_primes

    def unit_part(self, n: int) -> int:
        """Signed product of the invertible prime-power factors of ``n != 0``."""
        if n == 0:
            raise ZeroDivisionError("zero has no unit part")
        if self.rational:
            return n
        u = -1 if n < 0 else 1
        for p, k in factorint(abs(n)).items():
            if p in self.inverted_primes:
                u *= p ** k
        return u

    def canonical(self, n: int) -> int:
        """Positive non-invertible part of an integer (0 stays 0)."""
        if n == 0:
            return 0
        return n // self.unit_part(n)

    def is_s_unit_integer(self, n: int) -> bool:
        return n != 0 and self.canonical(n) == 1

    # -- elements --------------------------------------------------------

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.rational or self.is_s_unit_integer(x.denominator)

    def element(self, x) -> Fraction:
        """Coerce ``x`` to a ring element, rejecting non-members."""
        x = Fraction(x)
        if not self.contains(x):
            raise NonSUnitDenominator(
                f"{x} is not in {self}: denominator {x.denominator} is not a unit")
        return x

    def is_unit(self, x) -> bool:
        x = Fraction(x)
        if x == 0 or not self.contains(x):
            return False
        return self.is_s_unit_integer(x.numerator)

    def divides(self, a, b) -> bool:
        """True iff ``b = a*c`` for some ``c`` in R."""
        a, b = Fraction(a), Fraction(b)
        if a == 0:
            return b == 0
        return self.contains(b / a)

    def factorial_is_unit(self, n: int) -> bool:
        return self.is_unit(math.factorial(n))


def is_unit(r, ring: LocalRing) -> bool:
    return ring.is_unit(r)


# ---------------------------------------------------------------------------
# Module descriptions


@dataclass(frozen=True)
class ModuleDescription:
    """R^free_rank plus cyclic torsion summands R/p^k, stored as (p, k)."""

    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        tors = tuple(sorted((int(p), int(k)) for p, k in self.torsion if k > 0))
        object.__setattr__(self, "torsion", tors)

    @classmethod
    def from_orders(cls, free_rank: int, orders: Iterable[int], ring: LocalRing):
        """Build from cyclic orders, discarding factors that are units in R."""
        torsion = []
        for n in orders:
            n = ring.canonical(int(n))
            if n == 0:
                free_rank += 1
                continue
            for p, k in factorint(n).items():
                torsion.append((p, k))
        return cls(free_rank, tuple(torsion))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self):
        if self.free_rank:
            return math.inf
        return math.prod(p ** k for p, k in self.torsion)

    @property
    def cyclic_orders(self) -> list:
        return [p ** k for p, k in self.torsion]

    def __add__(self, other: "ModuleDescription") -> "ModuleDescription":
        return ModuleDescription(self.free_rank + other.free_rank,
                                 self.torsion + other.torsion)

    def __mul__(self, copies: int) -> "ModuleDescription":
        return ModuleDescription(self.free_rank * copies, self.torsion * copies)

    __rmul__ = __mul__

    def render(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("R")
        elif self.free_rank > 1:
            parts.append(f"R^{self.free_rank}")
        parts.extend(f"Z/{p ** k}" for p, k in self.torsion)
        return " ⊕ ".join(parts) if parts else "0"

    __str__ = render

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank,
                "torsion": [p ** k for p, k in self.torsion]}


def direct_sum(modules: Iterable[ModuleDescription]) -> ModuleDescription:
    return reduce(lambda a, b: a + b, modules, ModuleDescription())


# ---------------------------------------------------------------------------
# Dense exact matrices


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def to_fraction_matrix(A) -> Matrix:
    return [[Fraction(x) for x in row] for row in A]


def ncols(A: Matrix, default: int = 0) -> int:
    return len(A[0]) if A else default


def matmul(A: Matrix, B: Matrix, inner: int | None = None) -> Matrix:
    """Product A @ B; ``inner`` gives the shared dimension when it is zero."""
    n = ncols(B)
    if not A:
        return []
    if not B:
        return [[Fraction(0)] * n for _ in A]
    Bt = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col) if a), Fraction(0)) for col in Bt]
            for row in A]


def matvec(A: Matrix, x: Sequence) -> list:
    return [sum((a * b for a, b in zip(row, x) if a), Fraction(0)) for row in A]


def transpose(A: Matrix, rows: int = 0) -> Matrix:
    if not A:
        return [[] for _ in range(rows)]
    return [list(col) for col in zip(*A)]


def column(A: Matrix, j: int) -> list:
    return [row[j] for row in A]


def from_columns(cols: Sequence[Sequence], nrows: int) -> Matrix:
    if not cols:
        return [[] for _ in range(nrows)]
    return [[Fraction(c[i]) for c in cols] for i in range(nrows)]


def determinant(A: Matrix) -> Fraction:
    n = len(A)
    M = [list(map(Fraction, row)) for row in A]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] / M[c][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


def inverse(A: Matrix) -> Matrix:
    n = len(A)
    M = [list(map(Fraction, row)) + e for row, e in zip(A, identity(n))]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [x / p for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def rank(A: Matrix) -> int:
    M = [list(map(Fraction, row)) for row in A]
    r = 0
    for c in range(ncols(M)):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, len(M)):
            if M[i][c]:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return r


# ---------------------------------------------------------------------------
# Smith normal form


def _integer_snf(A: list) -> tuple:
    """U, D, V over Z with U*A*V = D, det U, det V = +-1, d_1 | d_2 | ..."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(row) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for M in (D, V):
            for row in M:
                row[dst] += q * row[src]

    def quotient(a, b):
        # nearest-integer quotient keeps remainders at most |b|/2
        q, r = divmod(a, b)
        if 2 * abs(r) > abs(b):
            q += 1
        return q

    for t in range(min(m, n)):
        while True:
            nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not nz:
                break
            _, i0, j0 = min(nz)
            swap_rows(t, i0)
            swap_cols(t, j0)
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -quotient(D[i][t], p))
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -quotient(D[t][j], p))
            if any(D[i][t] for i in range(t + 1, m)) or any(D[t][j] for j in range(t + 1, n)):
                continue  # a smaller remainder becomes the next pivot
            bad = next((i for i in range(t + 1, m)
                        if any(D[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def smith_normal_form(A: Matrix, ring: LocalRing, nrows: int | None = None,
                      ncols_: int | None = None) -> tuple:
    """Smith normal form over R: returns (U, D, V) with U*A*V = D.

    U and V are square with unit determinant in R, D is diagonal with
    d_1 | d_2 | ..., and each nonzero d_i is a positive product of
    non-invertible primes.  ``nrows``/``ncols_`` fix the shape of empty inputs.
    """
    m = len(A) if nrows is None else nrows
    n = (len(A[0]) if A else 0) if ncols_ is None else ncols_
    A = [[ring.element(x) for x in row] for row in A] if m and n else [[Fraction(0)] * n for _ in range(m)]
    scale = []
    for row in A:
        c = math.lcm(*(x.denominator for x in row)) if row else 1
        scale.append(c)
    Aint = [[int(x * c) for x in row] for row, c in zip(A, scale)]
    U0, D0, V0 = _integer_snf(Aint) if m and n else ([[int(i == j) for j in range(m)] for i in range(m)], Aint, [[int(i == j) for j in range(n)] for i in range(n)])
    rowfix = [Fraction(1)] * m
    D = zeros(m, n)
    for i in range(min(m, n)):
        d = D0[i][i]
        if d:
            u = ring.unit_part(d)
            rowfix[i] = Fraction(1, 1) / u
            D[i][i] = Fraction(d // u)
    U = [[rowfix[i] * Fraction(U0[i][j]) * scale[j] for j in range(m)] for i in range(m)]
    V = [[Fraction(x) for x in row] for row in V0]
    return U, D, V


def snf_diagonal(D: Matrix) -> list:
    return [D[i][i] for i in range(min(len(D), ncols(D)))]


def cokernel(A: Matrix, ring: LocalRing, target_rank: int | None = None) -> ModuleDescription:
    """R^t / column space of A as a module description."""
    t = len(A) if target_rank is None else target_rank
    if t == 0:
        return ModuleDescription()
    if not A or not A[0]:
        return ModuleDescription(t)
    _, D, _ = smith_normal_form(A, ring, nrows=t)
    diag = [d for d in snf_diagonal(D) if d != 0]
    return ModuleDescription.from_orders(t - len(diag), [int(d) for d in diag], ring)


def kernel_basis(A: Matrix, ring: LocalRing, ncols_: int) -> list:
    """A basis (list of column vectors) of the kernel of A : R^n -> R^m."""
    if ncols_ == 0:
        return []
    if not A:
        return [col for col in transpose(identity(ncols_))]
    _, D, V = smith_normal_form(A, ring, ncols_=ncols_)
    r = sum(1 for d in snf_diagonal(D) if d != 0)
    return [column(V, j) for j in range(r, ncols_)]


def solve(A: Matrix, b: Sequence, ring: LocalRing, ncols_: int):
    """Some x over R with A x = b, or None when no solution exists."""
    m = len(b)
    if ncols_ == 0:
        return [] if all(x == 0 for x in b) else None
    if m == 0:
        return [Fraction(0)] * ncols_
    U, D, V = smith_normal_form(A, ring, nrows=m, ncols_=ncols_)
    c = matvec(U, b)
    y = [Fraction(0)] * ncols_
    for i in range(m):
        d = D[i][i] if i < ncols_ else Fraction(0)
        if d == 0:
            if c[i] != 0:
                return None
        else:
            q = c[i] / d
            if not ring.contains(q):
                return None
            y[i] = q
    return matvec(V, y)


# ---------------------------------------------------------------------------
# Homology of a chain complex of free R-modules


@dataclass
class HomologyData:
    """H = ker(d_out) / im(d_in) with fixed generator representatives.

    ``representatives[i]`` is a cycle (chain-basis coordinates) whose class
    generates a cyclic summand of order ``orders[i]`` (0 means free).
    Class coordinates of a cycle are read off with :meth:`coordinates`.
    """

    ring: LocalRing
    dim: int
    module: ModuleDescription
    representatives: list
    orders: list
    _coord_map: Matrix = field(repr=False)
    _boundary_cols: Matrix = field(repr=False, default_factory=list)

    def coordinates(self, z: Sequence) -> list:
        """Coordinates of the class of the cycle ``z`` (torsion ones reduced)."""
        raw = matvec(self._coord_map, z)
        out = []
        for c, e in zip(raw, self.orders):
            out.append(_reduce_mod(c, e, self.ring) if e else c)
        return out

    def is_zero_class(self, z: Sequence) -> bool:
        return all(c == 0 for c in self.coordinates(z))

    @property
    def rank(self) -> int:
        return len(self.representatives)


def _reduce_mod(c: Fraction, e: int, ring: LocalRing) -> Fraction:
    """Canonical representative of c in R/eR with 0 <= rep < e."""
    # c = a/s with s an S-unit prime to e, so c = a * s^{-1} mod e
    return Fraction((c.numerator * pow(c.denominator, -1, e)) % e)


def chain_homology(d_out: Matrix, d_in: Matrix, dim: int, ring: LocalRing,
                   in_dim: int | None = None) -> HomologyData:
    """Homology at a free module of rank ``dim``.

    ``d_out`` is the matrix of C -> C_below (rows = rank below, may be []),
    ``d_in`` the matrix of C_above -> C (``dim`` rows, ``in_dim`` columns).
    """
    if dim == 0:
        return HomologyData(ring, 0, ModuleDescription(), [], [], [])
    K = kernel_basis(d_out, ring, dim) if d_out else transpose(identity(dim))
    z = len(K)
    if z == 0:
        return HomologyData(ring, dim, ModuleDescription(), [], [], [])
    # coordinates in the kernel basis: complete K to a unimodular basis
    Kmat = from_columns(K, dim)
    full = _complete_basis(K, dim, ring, d_out)
    left = inverse(full)[:z]
    in_dim = (ncols(d_in) if d_in else 0) if in_dim is None else in_dim
    X = matmul(left, d_in) if in_dim else [[] for _ in range(z)]
    U2, D2, V2 = smith_normal_form(X, ring, nrows=z, ncols_=in_dim)
    diag = snf_diagonal(D2) + [Fraction(0)] * z
    gens = matmul(Kmat, inverse(U2))
    coord_map = matmul(U2, left)
    reps, orders, rows = [], [], []
    for i in range(z):
        d = diag[i]
        if d != 0 and ring.is_unit(d):
            continue
        reps.append(column(gens, i))
        orders.append(int(d))
        rows.append(coord_map[i])
    module = ModuleDescription.from_orders(
        sum(1 for o in orders if o == 0), [o for o in orders if o], ring)
    # torsion first, then free, to match module rendering order
    perm = sorted(range(len(orders)), key=lambda i: (orders[i] == 0, i))
    return HomologyData(ring, dim, module, [reps[i] for i in perm],
                        [orders[i] for i in perm], [rows[i] for i in perm], d_in)


def _complete_basis(K: list, dim: int, ring: LocalRing, d_out) -> Matrix:
    """Square unimodular matrix whose first columns are the kernel basis K."""
    if not d_out:
        return identity(dim)
    _, D, V = smith_normal_form(d_out, ring, ncols_=dim)
    r = sum(1 for d in snf_diagonal(D) if d != 0)
    cols = [column(V, j) for j in range(r, dim)] + [column(V, j) for j in range(r)]
    return from_columns(cols, dim)


def span_quotient(big: Sequence, small: Sequence, dim: int, ring: LocalRing) -> ModuleDescription:
    """Module (span(big) + span(small)) / span(small) for lists of vectors in R^dim.

    With span(small) contained in span(big) this is span(big)/span(small).
    """
    vecs = list(big) + list(small)
    if not vecs:
        return ModuleDescription()
    basis = column_space_basis(vecs, dim, ring)
    if not basis:
        return ModuleDescription()
    B = from_columns(basis, dim)
    coords = []
    for v in small:
        x = solve(B, list(v), ring, len(basis))
        assert x is not None
        coords.append(x)
    if not coords:
        return ModuleDescription(len(basis))
    return cokernel(from_columns(coords, len(basis)), ring, len(basis))


def column_space_basis(vecs: Sequence, dim: int, ring: LocalRing) -> list:
    """A basis of the R-span of the given vectors."""
    if not vecs:
        return []
    A = from_columns(vecs, dim)
    U, D, _ = smith_normal_form(A, ring, nrows=dim, ncols_=len(vecs))
    Uinv = inverse(U)
    out = []
    for i, d in enumerate(snf_diagonal(D)):
        if d != 0:
            out.append([x * d for x in column(Uinv, i)])
    return out
