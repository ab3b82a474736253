"""Finite pointed sets.  Not protomodular: the source of counterexamples."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    CoequalizerData,
    CokernelData,
    ConcreteCategory,
    KernelData,
    Morphism,
    PullbackData,
)
from .errors import InputError


@dataclass(frozen=True)
class PointedSet:
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise InputError("a pointed set has at least its basepoint")

    def __str__(self) -> str:
        return f"*{self.size}"


POINT = PointedSet(1)


def _collapse(B: PointedSet, classes: list[int]):
    """Quotient by a partition given as class labels; basepoint class first,
    other classes in order of least member."""
    relabel: dict[int, int] = {classes[0]: 0}
    proj = []
    for x in range(B.size):
        c = classes[x]
        if c not in relabel:
            relabel[c] = len(relabel)
        proj.append(relabel[c])
    Q = PointedSet(len(relabel))
    return Q, Morphism(B, Q, tuple(proj))


class PSet(ConcreteCategory):
    backend = "pset"

    def hom(self, A: PointedSet, B: PointedSet, images) -> Morphism:
        images = tuple(int(x) for x in images)
        if len(images) != A.size or any(not 0 <= y < B.size for y in images):
            raise InputError(f"map {list(images)} does not fit {A} -> {B}")
        if images[0] != 0:
            raise InputError("pointed map must send the basepoint to the basepoint")
        return Morphism(A, B, images)

    def identity(self, A: PointedSet) -> Morphism:
        return Morphism(A, A, tuple(range(A.size)))

    def zero_object(self) -> PointedSet:
        return POINT

    def zero_morphism(self, A, B) -> Morphism:
        return Morphism(A, B, (0,) * A.size)

    def _compose(self, g: Morphism, f: Morphism) -> Morphism:
        return Morphism(f.dom, g.cod, tuple(g.data[y] for y in f.data))

    def objects(self, bound: int | None = None) -> list[PointedSet]:
        if bound is None:
            raise InputError("PointedSet enumeration needs a size bound")
        return [PointedSet(n) for n in range(1, bound + 1)]

    def order(self, A: PointedSet) -> int:
        return A.size

    def apply(self, f: Morphism):
        return f.data

    def generators(self, A: PointedSet) -> list[int]:
        return list(range(1, A.size))

    def extend(self, A, B, images) -> Morphism:
        return Morphism(A, B, (0,) + tuple(images))

    def homs(self, A, B):
        for images in itertools.product(range(B.size), repeat=A.size - 1):
            yield Morphism(A, B, (0,) + images)

    def from_map(self, A, B, images) -> Morphism:
        return Morphism(A, B, tuple(images))

    def kernel(self, f: Morphism) -> KernelData:
        fiber = tuple(x for x, y in enumerate(f.data) if y == 0)
        K = PointedSet(len(fiber))
        return KernelData(K, Morphism(K, f.dom, fiber))

    def cokernel(self, f: Morphism) -> CokernelData:
        image = set(f.data)
        Q, proj = _collapse(f.cod, [0 if x in image else x for x in range(f.cod.size)])
        return CokernelData(Q, proj)

    def coequalizer(self, f: Morphism, g: Morphism) -> CoequalizerData:
        parent = list(range(f.cod.size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in zip(f.data, g.data):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        Q, proj = _collapse(f.cod, [find(x) for x in range(f.cod.size)])
        return CoequalizerData(Q, proj)

    def pullback(self, f: Morphism, g: Morphism) -> PullbackData:
        if f.cod != g.cod:
            raise InputError("pullback: legs must share a codomain")
        pairs = [(a, b) for a in range(f.dom.size) for b in range(g.dom.size) if f.data[a] == g.data[b]]
        P = PointedSet(len(pairs))
        return PullbackData(
            P,
            Morphism(P, f.dom, tuple(a for a, _ in pairs)),
            Morphism(P, g.dom, tuple(b for _, b in pairs)),
            f,
            g,
        )

    def fast_flag(self, kind: str, f: Morphism) -> bool | None:
        if kind in ("epi", "regular_epi", "split_epi"):
            return self.is_epi(f)
        if kind == "normal_epi":
            # surjective, and injective away from the fiber over the basepoint
            off = [y for y in f.data if y != 0]
            return self.is_epi(f) and len(off) == len(set(off))
        if kind == "mono":
            return self.is_mono(f)
        if kind == "iso":
            return self.is_iso(f)
        return None

    def object_payload(self, A: PointedSet):
        return {"size": A.size}

    def morphism_payload(self, f: Morphism):
        return {"map": list(f.data)}

    def parse_object(self, payload):
        if "size" not in payload:
            raise InputError("pset object needs 'size'")
        return PointedSet(int(payload["size"]))

    def parse_morphism(self, dom, cod, payload) -> Morphism:
        if "map" not in payload:
            raise InputError("pset morphism needs 'map'")
        return self.hom(dom, cod, payload["map"])
