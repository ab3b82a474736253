"""Finite groups given by multiplication tables (identity at index 0)."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

from .core import (
    CoequalizerData,
    CokernelData,
    ConcreteCategory,
    KernelData,
    Morphism,
    PullbackData,
)
from .errors import InputError


class FinGroup:
    """A group table.  Equality is table equality; ``name`` is a label only."""

    __slots__ = ("table", "name", "_hash")

    def __init__(self, table: Sequence[Sequence[int]], name: str = ""):
        self.table = tuple(tuple(row) for row in table)
        self.name = name
        self._hash = hash(self.table)

    @classmethod
    def from_table(cls, table, name: str = "") -> "FinGroup":
        G = cls(table, name)
        validate_table(G.table)
        return G

    @property
    def order(self) -> int:
        return len(self.table)

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, FinGroup) and self._hash == other._hash and self.table == other.table)

    def __hash__(self) -> int:
        return self._hash

    def __reduce__(self):
        return (FinGroup, (self.table, self.name))

    def __repr__(self) -> str:
        return f"FinGroup({self.name or self.order})"

    def __str__(self) -> str:
        return self.name or f"<group of order {self.order}>"

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]


def validate_table(t: tuple[tuple[int, ...], ...]) -> None:
    n = len(t)
    if n == 0:
        raise InputError("group table is empty")
    for i, row in enumerate(t):
        if len(row) != n or sorted(row) != list(range(n)):
            raise InputError(f"group table row {i} is not a permutation of 0..{n - 1}")
    for a in range(n):
        if t[0][a] != a or t[a][0] != a:
            raise InputError("index 0 is not the identity")
    for a in range(n):
        for b in range(n):
            ab = t[a][b]
            for c in range(n):
                if t[ab][c] != t[a][t[b][c]]:
                    raise InputError(f"associativity fails at ({a}, {b}, {c})")


@lru_cache(maxsize=None)
def _inverses(G: FinGroup) -> tuple[int, ...]:
    return tuple(row.index(0) for row in G.table)


@lru_cache(maxsize=None)
def _orders(G: FinGroup) -> tuple[int, ...]:
    out = []
    for x in range(G.order):
        k, y = 1, x
        while y != 0:
            y = G.table[y][x]
            k += 1
        out.append(k)
    return tuple(out)


def generated_subgroup(G: FinGroup, gens: Iterable[int]) -> frozenset[int]:
    gens = list(gens)
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.table[x][g]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


@lru_cache(maxsize=None)
def canonical_generators(G: FinGroup) -> tuple[int, ...]:
    """Greedy generating set: repeatedly add the least element not yet generated."""
    gens: list[int] = []
    H = frozenset({0})
    for x in range(G.order):
        if x not in H:
            gens.append(x)
            H = generated_subgroup(G, gens)
    return tuple(gens)


def normal_closure(G: FinGroup, S: Iterable[int]) -> tuple[int, ...]:
    """Least normal subgroup containing ``S``, as a sorted index tuple."""
    t, inv = G.table, _inverses(G)
    gens = set(S)
    while True:
        N = generated_subgroup(G, gens)
        conj = {t[t[g][x]][inv[g]] for x in gens for g in range(G.order)}
        if conj <= N:
            return tuple(sorted(N))
        gens |= conj


def is_normal(G: FinGroup, N: Iterable[int]) -> bool:
    t, inv = G.table, _inverses(G)
    Ns = frozenset(N)
    return all(t[t[g][x]][inv[g]] in Ns for x in Ns for g in range(G.order))


def subgroup(G: FinGroup, elements: Iterable[int]):
    """Canonical subgroup object (ascending original indices) and inclusion map."""
    els = sorted(set(elements))
    pos = {g: i for i, g in enumerate(els)}
    try:
        table = [[pos[G.table[a][b]] for b in els] for a in els]
    except KeyError:
        raise InputError("subset is not closed under multiplication") from None
    return FinGroup(table), tuple(els)


def quotient(G: FinGroup, N: Iterable[int]):
    """Quotient by a normal subgroup; cosets are indexed by least representative."""
    Ns = sorted(set(N))
    if 0 not in Ns or not is_normal(G, Ns) or len(generated_subgroup(G, Ns)) != len(Ns):
        raise InputError("quotient requires a normal subgroup")
    coset = [-1] * G.order
    reps = []
    for g in range(G.order):
        if coset[g] < 0:
            for n in Ns:
                coset[G.table[g][n]] = len(reps)
            reps.append(g)
    table = [[coset[G.table[a][b]] for b in reps] for a in reps]
    return FinGroup(table), tuple(coset)


def direct_product_table(A: FinGroup, B: FinGroup, pairs: Sequence[tuple[int, int]]):
    pos = {p: i for i, p in enumerate(pairs)}
    ta, tb = A.table, B.table
    return [[pos[(ta[a1][a2], tb[b1][b2])] for (a2, b2) in pairs] for (a1, b1) in pairs]


@lru_cache(maxsize=None)
def library() -> tuple[FinGroup, ...]:
    raw = resources.files("relhom").joinpath("data/groups.json").read_text()
    doc = json.loads(raw)
    return tuple(FinGroup(g["table"], g["name"]) for g in doc["groups"])


def group(name: str) -> FinGroup:
    for G in library():
        if G.name == name:
            return G
    raise InputError(f"no bundled group named {name!r}")


@lru_cache(maxsize=None)
def _library_names() -> dict:
    return {G: G.name for G in library()}


class FinGrp(ConcreteCategory):
    """The category of finite groups, restricted to a group library for enumeration."""

    backend = "fingrp"

    def __init__(self, groups: Sequence[FinGroup] | None = None):
        self.groups = tuple(groups) if groups is not None else library()

    def __reduce__(self):
        return (FinGrp, (None if self.groups == library() else self.groups,))

    def hom(self, A: FinGroup, B: FinGroup, images: Sequence[int]) -> Morphism:
        images = tuple(int(x) for x in images)
        if len(images) != A.order or any(not 0 <= y < B.order for y in images):
            raise InputError(f"map of length {len(images)} does not fit {A} -> {B}")
        ta, tb = A.table, B.table
        for a in range(A.order):
            for b in range(A.order):
                if images[ta[a][b]] != tb[images[a]][images[b]]:
                    raise InputError(f"map is not a homomorphism at ({a}, {b})")
        return Morphism(A, B, images)

    def identity(self, A: FinGroup) -> Morphism:
        return Morphism(A, A, tuple(range(A.order)))

    def zero_object(self) -> FinGroup:
        return TRIVIAL

    def zero_morphism(self, A: FinGroup, B: FinGroup) -> Morphism:
        return Morphism(A, B, (0,) * A.order)

    def _compose(self, g: Morphism, f: Morphism) -> Morphism:
        gm = g.data
        return Morphism(f.dom, g.cod, tuple(gm[y] for y in f.data))

    def objects(self, bound: int | None = None) -> list[FinGroup]:
        gs = [G for G in self.groups if bound is None or G.order <= bound]
        return sorted(gs, key=lambda G: G.order)

    def order(self, A: FinGroup) -> int:
        return A.order

    def apply(self, f: Morphism) -> tuple[int, ...]:
        return f.data

    def element_order(self, A: FinGroup, x: int) -> int:
        return _orders(A)[x]

    def generators(self, A: FinGroup) -> list[int]:
        return list(canonical_generators(A))

    def extend(self, A: FinGroup, B: FinGroup, images) -> Morphism | None:
        gens = canonical_generators(A)
        ta, tb = A.table, B.table
        h = [-1] * A.order
        h[0] = 0
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                hx = h[x]
                for g, img in zip(gens, images):
                    y = ta[x][g]
                    val = tb[hx][img]
                    if h[y] < 0:
                        h[y] = val
                        nxt.append(y)
                    elif h[y] != val:
                        return None
            frontier = nxt
        return Morphism(A, B, tuple(h))

    def from_map(self, A, B, images) -> Morphism:
        return Morphism(A, B, tuple(images))

    def kernel(self, f: Morphism) -> KernelData:
        K, incl = subgroup(f.dom, self.kernel_set(f))
        return KernelData(K, Morphism(K, f.dom, incl))

    def cokernel(self, f: Morphism) -> CokernelData:
        N = normal_closure(f.cod, set(f.data))
        Q, proj = quotient(f.cod, N)
        return CokernelData(Q, Morphism(f.cod, Q, proj))

    def coequalizer(self, f: Morphism, g: Morphism) -> CoequalizerData:
        B = f.cod
        inv = _inverses(B)
        N = normal_closure(B, {B.table[x][inv[y]] for x, y in zip(f.data, g.data)})
        Q, proj = quotient(B, N)
        return CoequalizerData(Q, Morphism(B, Q, proj))

    def pullback(self, f: Morphism, g: Morphism) -> PullbackData:
        if f.cod != g.cod:
            raise InputError("pullback: legs must share a codomain")
        A, B = f.dom, g.dom
        by_value: dict[int, list[int]] = {}
        for b, c in enumerate(g.data):
            by_value.setdefault(c, []).append(b)
        pairs = [(a, b) for a, c in enumerate(f.data) for b in by_value.get(c, ())]
        P = FinGroup(direct_product_table(A, B, pairs))
        p1 = Morphism(P, A, tuple(a for a, _ in pairs))
        p2 = Morphism(P, B, tuple(b for _, b in pairs))
        return PullbackData(P, p1, p2, f, g)

    def fast_flag(self, kind: str, f: Morphism) -> bool | None:
        if kind in ("epi", "regular_epi", "normal_epi"):
            return self.is_epi(f)
        if kind == "mono":
            return self.is_mono(f)
        if kind == "normal_mono":
            return self.is_mono(f) and is_normal(f.cod, f.data)
        if kind == "iso":
            return self.is_iso(f)
        return None

    def object_payload(self, A: FinGroup):
        name = _library_names().get(A)
        if name is not None:
            return {"library": name}
        return {"table": [list(r) for r in A.table]}

    def morphism_payload(self, f: Morphism):
        return {"map": list(f.data)}

    def parse_object(self, payload):
        if "library" in payload:
            return group(payload["library"])
        if "table" in payload:
            return FinGroup.from_table(payload["table"], payload.get("name", ""))
        raise InputError("fingrp object needs 'library' or 'table'")

    def parse_morphism(self, dom, cod, payload) -> Morphism:
        if "map" not in payload:
            raise InputError("fingrp morphism needs 'map'")
        return self.hom(dom, cod, payload["map"])


TRIVIAL = FinGroup([[0]], "Z1")
