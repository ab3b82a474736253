"""Finite abelian groups in invariant-factor form.

An object is a divisibility chain ``d1 | d2 | ... | dk`` (each ``di >= 2``);
the empty chain is the zero group.  A morphism is an integer matrix with one
row per codomain factor and one column per domain factor, entries reduced
into ``[0, d_i)`` of the codomain.  Kernels, cokernels and pullbacks go
through Smith normal form so their objects come back in canonical form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd, prod
from typing import Iterator, Sequence

from .core import (
    CoequalizerData,
    CokernelData,
    ConcreteCategory,
    KernelData,
    Morphism,
    PullbackData,
)
from .errors import BudgetError, InputError
from .snf import Matrix, matmul, smith_decomposition

ELEMENT_BOUND = 64
HOM_BOUND = 16


@dataclass(frozen=True)
class AbGroup:
    factors: tuple[int, ...] = ()

    def __post_init__(self):
        for d in self.factors:
            if d < 2:
                raise InputError(f"invariant factor {d} must be >= 2")
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a:
                raise InputError(f"invariant factors {self.factors} do not form a divisibility chain")

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        return " ⊕ ".join(f"Z/{d}" for d in self.factors)


ZERO = AbGroup(())


def Z(n: int) -> AbGroup:
    return ZERO if n == 1 else AbGroup((n,))


def _strides(factors: tuple[int, ...]) -> tuple[int, ...]:
    out, s = [], 1
    for d in reversed(factors):
        out.append(s)
        s *= d
    return tuple(reversed(out))


@lru_cache(maxsize=None)
def _elements(factors: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.product(*(range(d) for d in factors)))


def index_of(factors: tuple[int, ...], x: Sequence[int]) -> int:
    return sum(xi * s for xi, s in zip(x, _strides(factors)))


@lru_cache(maxsize=None)
def _element_map(matrix, dom: tuple[int, ...], cod: tuple[int, ...]) -> tuple[int, ...]:
    strides = _strides(cod)
    # images of the domain generators as codomain indices, then extend additively
    cols = [[matrix[i][j] for i in range(len(cod))] for j in range(len(dom))]
    out = []
    for x in _elements(dom):
        y = [sum(col[i] * xj for col, xj in zip(cols, x)) % cod[i] for i in range(len(cod))]
        out.append(sum(yi * s for yi, s in zip(y, strides)))
    return tuple(out)


@lru_cache(maxsize=None)
def _element_orders(factors: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    for x in _elements(factors):
        o = 1
        for xi, d in zip(x, factors):
            o = o * (d // gcd(xi, d)) // gcd(o, d // gcd(xi, d))
        out.append(o)
    return tuple(out)


def hom_well_defined(M: Matrix, dom: AbGroup, cod: AbGroup) -> bool:
    """Whether ``M`` defines a homomorphism ``dom -> cod``."""
    if len(M) != cod.rank or any(len(row) != dom.rank for row in M):
        raise InputError(f"matrix shape does not match {dom} -> {cod}")
    return all(dj * M[i][j] % ci == 0 for i, ci in enumerate(cod.factors) for j, dj in enumerate(dom.factors))


def _reduce(M, cod: tuple[int, ...], ncols: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(M[i][j]) % c for j in range(ncols)) for i, c in enumerate(cod))


def subquotient(gens: Sequence[Sequence[int]], ambient: Sequence[int]):
    """Canonical form of the subgroup generated by ``gens`` inside ``⊕ Z/ambient``.

    ``ambient`` is any list of moduli (not necessarily a divisibility chain).
    Returns ``(factors, columns)`` where ``columns[j]`` is the ambient
    coordinate vector of the j-th canonical generator.
    """
    n = len(ambient)
    if n == 0:
        return (), []
    G = [[g[i] for g in gens] + [ambient[i] if k == i else 0 for k in range(n)] for i in range(n)]
    dec = smith_decomposition(G)
    s = dec.diagonal
    # lattice basis B = U^-1 diag(s);  R = B^-1 diag(ambient) = diag(s)^-1 U diag(ambient)
    B = [[dec.U_inv[i][j] * s[j] for j in range(n)] for i in range(n)]
    R = [[dec.U[i][j] * ambient[j] // s[i] for j in range(n)] for i in range(n)]
    dec2 = smith_decomposition(R)
    t = dec2.diagonal
    gensB = matmul(B, dec2.U_inv)
    factors, columns = [], []
    for j, tj in enumerate(t):
        if tj > 1:
            factors.append(tj)
            columns.append([gensB[i][j] % ambient[i] for i in range(n)])
    return tuple(factors), columns


def _kernel_lattice_gens(M: Matrix, dom: Sequence[int], cod: Sequence[int]) -> list[list[int]]:
    """Generators of ``{x : M x ≡ 0 mod cod}`` as integer vectors (dom coordinates)."""
    k, m = len(dom), len(cod)
    if m == 0:
        return [[int(i == j) for i in range(k)] for j in range(k)]
    N = [list(M[i]) + [cod[i] if c == i else 0 for c in range(m)] for i in range(m)]
    dec = smith_decomposition(N)
    rank = sum(1 for x in dec.diagonal if x)
    return [[dec.V[i][j] for i in range(k)] for j in range(rank, k + m)]


class FinAb(ConcreteCategory):
    """The category of finite abelian groups."""

    backend = "finab"

    def __init__(self, element_bound: int = ELEMENT_BOUND, hom_bound: int = HOM_BOUND):
        self.element_bound = element_bound
        self.hom_bound = hom_bound

    def __reduce__(self):
        return (FinAb, (self.element_bound, self.hom_bound))

    # -- construction ---------------------------------------------------------

    def hom(self, dom: AbGroup, cod: AbGroup, M) -> Morphism:
        M = [list(row) for row in M] if cod.rank else []
        if len(M) != cod.rank or any(len(row) != dom.rank for row in M):
            raise InputError(f"matrix shape does not match {dom} -> {cod}")
        if not hom_well_defined(M, dom, cod):
            raise InputError(f"matrix {M} is not a well-defined homomorphism {dom} -> {cod}")
        return Morphism(dom, cod, _reduce(M, cod.factors, dom.rank))

    def matrix(self, f: Morphism) -> tuple[tuple[int, ...], ...]:
        return f.data

    def identity(self, A: AbGroup) -> Morphism:
        return Morphism(A, A, tuple(tuple(int(i == j) for j in range(A.rank)) for i in range(A.rank)))

    def zero_object(self) -> AbGroup:
        return ZERO

    def zero_morphism(self, A: AbGroup, B: AbGroup) -> Morphism:
        return Morphism(A, B, tuple((0,) * A.rank for _ in range(B.rank)))

    def _compose(self, g: Morphism, f: Morphism) -> Morphism:
        A, C = f.dom, g.cod
        inner = f.cod.rank
        data = tuple(
            tuple(sum(g.data[i][l] * f.data[l][j] for l in range(inner)) % c for j in range(A.rank))
            for i, c in enumerate(C.factors)
        )
        return Morphism(A, C, data)

    def add(self, f: Morphism, g: Morphism) -> Morphism:
        return Morphism(f.dom, f.cod, _reduce(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(f.data, g.data)], f.cod.factors, f.dom.rank))

    def negate(self, f: Morphism) -> Morphism:
        return Morphism(f.dom, f.cod, _reduce([[-a for a in row] for row in f.data], f.cod.factors, f.dom.rank))

    # -- enumeration ----------------------------------------------------------

    def objects(self, bound: int | None = None) -> list[AbGroup]:
        if bound is None:
            raise BudgetError("FinAb has infinitely many objects; a size bound is required")
        out = [G for n in range(1, bound + 1) for G in groups_of_order(n)]
        return out

    def order(self, A: AbGroup) -> int:
        return A.order

    def elements(self, A: AbGroup) -> tuple[tuple[int, ...], ...]:
        return _elements(A.factors)

    def enumerate_elements(self, A: AbGroup, bound: int | None = None) -> Iterator[tuple[int, ...]]:
        bound = self.element_bound if bound is None else bound
        if A.order > bound:
            raise BudgetError(f"{A} has {A.order} elements, above the oracle bound {bound}")
        return iter(_elements(A.factors))

    def enumerate_homs(self, A: AbGroup, B: AbGroup, bound: int | None = None) -> Iterator[Morphism]:
        bound = self.hom_bound if bound is None else bound
        if A.order > bound or B.order > bound:
            raise BudgetError(f"hom enumeration {A} -> {B} exceeds the order bound {bound}")
        return self.homs(A, B)

    def hom_count(self, A: AbGroup, B: AbGroup) -> int:
        return prod(gcd(a, b) for a in A.factors for b in B.factors)

    def homs(self, A: AbGroup, B: AbGroup) -> Iterator[Morphism]:
        # entry (i, j) must be a multiple of c_i / gcd(c_i, d_j)
        ranges = [range(0, c, c // gcd(c, d)) for c in B.factors for d in A.factors]
        for entries in itertools.product(*ranges):
            data = tuple(tuple(entries[i * A.rank:(i + 1) * A.rank]) for i in range(B.rank))
            yield Morphism(A, B, data)

    def apply(self, f: Morphism) -> tuple[int, ...]:
        return _element_map(f.data, f.dom.factors, f.cod.factors)

    def element_order(self, A: AbGroup, x: int) -> int:
        return _element_orders(A.factors)[x]

    def generators(self, A: AbGroup) -> list[int]:
        return [index_of(A.factors, [int(i == j) for i in range(A.rank)]) for j in range(A.rank)]

    def extend(self, A: AbGroup, B: AbGroup, images) -> Morphism | None:
        els = _elements(B.factors)
        cols = [els[y] for y in images]
        for d, y in zip(A.factors, images):
            if d % self.element_order(B, y):
                return None
        return Morphism(A, B, tuple(tuple(col[i] for col in cols) for i in range(B.rank)))

    def from_map(self, A: AbGroup, B: AbGroup, images) -> Morphism:
        els = _elements(B.factors)
        cols = [els[images[g]] for g in self.generators(A)]
        return Morphism(A, B, tuple(tuple(col[i] for col in cols) for i in range(B.rank)))

    # -- limits and colimits --------------------------------------------------

    def _sub(self, gens, ambient_factors):
        factors, columns = subquotient(gens, ambient_factors)
        S = AbGroup(factors)
        incl = tuple(tuple(col[i] for col in columns) for i in range(len(ambient_factors)))
        return S, incl

    def kernel(self, f: Morphism) -> KernelData:
        A, B = f.dom, f.cod
        gens = _kernel_lattice_gens([list(r) for r in f.data], A.factors, B.factors)
        K, incl = self._sub(gens, A.factors)
        return KernelData(K, Morphism(K, A, incl))

    def image_object(self, f: Morphism):
        cols = [[f.data[i][j] for i in range(f.cod.rank)] for j in range(f.dom.rank)]
        I, incl = self._sub(cols, f.cod.factors)
        return KernelData(I, Morphism(I, f.cod, incl))

    def cokernel(self, f: Morphism) -> CokernelData:
        B = f.cod
        m = B.rank
        if m == 0:
            return CokernelData(ZERO, Morphism(B, ZERO, ()))
        N = [list(f.data[i]) + [B.factors[i] if c == i else 0 for c in range(m)] for i in range(m)]
        dec = smith_decomposition(N)
        s = dec.diagonal
        keep = [i for i in range(m) if s[i] > 1]
        Q = AbGroup(tuple(s[i] for i in keep))
        proj = tuple(tuple(dec.U[i][j] % s[i] for j in range(m)) for i in keep)
        return CokernelData(Q, Morphism(B, Q, proj))

    def coequalizer(self, f: Morphism, g: Morphism) -> CoequalizerData:
        c = self.cokernel(self.add(f, self.negate(g)))
        return CoequalizerData(c.obj, c.proj)

    def pullback(self, f: Morphism, g: Morphism) -> PullbackData:
        if f.cod != g.cod:
            raise InputError("pullback: legs must share a codomain")
        A, B, C = f.dom, g.dom, f.cod
        ambient = A.factors + B.factors
        M = [list(f.data[i]) + [-x for x in g.data[i]] for i in range(C.rank)]
        gens = _kernel_lattice_gens(M, ambient, C.factors)
        P, incl = self._sub(gens, ambient)
        p1 = Morphism(P, A, incl[:A.rank])
        p2 = Morphism(P, B, incl[A.rank:])
        return PullbackData(P, p1, p2, f, g)

    def direct_sum(self, A: AbGroup, B: AbGroup):
        """``(A⊕B, i1, i2, p1, p2)`` in canonical form."""
        pb = self.pullback(self.zero_morphism(A, ZERO), self.zero_morphism(B, ZERO))
        P = pb.obj
        i1 = self.pair_into_pullback(self.identity(A), self.zero_morphism(A, B), pb)
        i2 = self.pair_into_pullback(self.zero_morphism(B, A), self.identity(B), pb)
        return P, i1, i2, pb.p1, pb.p2

    def fast_flag(self, kind: str, f: Morphism) -> bool | None:
        # surjective = epi = regular epi = normal epi for abelian groups
        if kind in ("epi", "regular_epi", "normal_epi"):
            return self.is_epi(f)
        if kind in ("mono", "normal_mono"):
            return self.is_mono(f)
        if kind == "iso":
            return self.is_iso(f)
        return None

    # -- serialization --------------------------------------------------------

    def object_payload(self, A: AbGroup):
        return {"factors": list(A.factors)}

    def morphism_payload(self, f: Morphism):
        return {"matrix": [list(row) for row in f.data]}

    def parse_object(self, payload):
        if "factors" in payload:
            return AbGroup(tuple(int(x) for x in payload["factors"]))
        if "relations" in payload:
            return Presentation.from_payload(payload).group
        raise InputError("finab object needs 'factors' or 'relations'")

    def parse_morphism(self, dom: AbGroup, cod: AbGroup, payload) -> Morphism:
        if "matrix" not in payload:
            raise InputError("finab morphism needs 'matrix'")
        M = [[int(x) for x in row] for row in payload["matrix"]]
        return self.hom(dom, cod, M)


@lru_cache(maxsize=None)
def groups_of_order(n: int) -> tuple[AbGroup, ...]:
    """All abelian groups of order n, as invariant-factor chains, sorted."""
    if n == 1:
        return (ZERO,)
    out = []

    def rec(remaining: int, chain: tuple[int, ...]):
        # build chains from the largest factor down; each factor divides the previous one
        if remaining == 1:
            out.append(AbGroup(tuple(reversed(chain))))
            return
        limit = chain[-1] if chain else remaining
        for d in range(2, limit + 1):
            if remaining % d == 0 and (not chain or chain[-1] % d == 0):
                rec(remaining // d, chain + (d,))

    rec(n, ())
    valid = {G for G in out if G.order == n}
    return tuple(sorted(valid, key=lambda G: (len(G.factors), G.factors)))


class Presentation:
    """``Z^n / (column span of R)`` normalized to invariant factors."""

    def __init__(self, relations: Matrix, ngens: int):
        self.ngens = ngens
        cols = len(relations[0]) if relations else 0
        if ngens == 0:
            self.group, self.coords, self.keep, self.moduli = ZERO, [], [], []
            return
        R = relations if cols else [[] for _ in range(ngens)]
        dec = smith_decomposition(R, ncols=cols)
        diag = dec.diagonal + [0] * (ngens - len(dec.diagonal))
        if any(d == 0 for d in diag):
            raise InputError("presentation has a free part; only finite groups are supported")
        self.keep = [i for i, d in enumerate(diag) if d > 1]
        self.moduli = [diag[i] for i in self.keep]
        self.coords = dec.U
        self.U_inv = dec.U_inv
        self.group = AbGroup(tuple(self.moduli))

    @classmethod
    def from_payload(cls, payload) -> "Presentation":
        rel = [[int(x) for x in row] for row in payload["relations"]]
        ngens = int(payload.get("generators", len(rel)))
        return cls(rel, ngens)

    def canonical_vector(self, x: Sequence[int]) -> list[int]:
        """Canonical coordinates of the element with presentation coordinates ``x``."""
        y = [sum(self.coords[i][j] * x[j] for j in range(self.ngens)) for i in range(self.ngens)]
        return [y[i] % m for i, m in zip(self.keep, self.moduli)]

    def generator_vectors(self) -> list[list[int]]:
        """Presentation coordinates of the canonical generators."""
        return [[self.U_inv[r][i] for r in range(self.ngens)] for i in self.keep]


def hom_from_presentations(cat: FinAb, src: Presentation, tgt: Presentation, M: Matrix) -> Morphism:
    """Convert a matrix between presentation generators into canonical form."""
    cols = []
    for g in src.generator_vectors():
        image = [sum(M[i][j] * g[j] for j in range(src.ngens)) for i in range(tgt.ngens)]
        cols.append(tgt.canonical_vector(image))
    data = [[col[i] for col in cols] for i in range(tgt.group.rank)]
    return cat.hom(src.group, tgt.group, data)
