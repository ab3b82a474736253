"""Pointed-category contract and the generic constructions built on it.

A backend subclasses :class:`Category` (or :class:`ConcreteCategory` when its
objects have underlying finite sets of elements) and supplies identities,
composition, kernels, cokernels, pullbacks and coequalizers.  Everything else
in this module is written against that contract only.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, NamedTuple, Sequence

from .errors import (
    BudgetError,
    ComposabilityError,
    HypothesisError,
    InputError,
    LimitMissing,
)


@dataclass(frozen=True)
class Morphism:
    dom: Hashable
    cod: Hashable
    data: Hashable


@dataclass(frozen=True)
class KernelData:
    obj: Hashable
    incl: Morphism


@dataclass(frozen=True)
class CokernelData:
    obj: Hashable
    proj: Morphism


@dataclass(frozen=True)
class PullbackData:
    obj: Hashable
    p1: Morphism
    p2: Morphism
    f: Morphism
    g: Morphism


@dataclass(frozen=True)
class CoequalizerData:
    obj: Hashable
    proj: Morphism


@dataclass
class MorphismProfile:
    """Exact classification of one morphism.  ``None`` means undecided."""

    is_mono: bool
    is_epi: bool
    is_split_epi: bool | None
    is_regular_epi: bool | None
    is_normal_epi: bool | None
    is_iso: bool
    is_normal_mono: bool | None
    section: Morphism | None = None

    def as_dict(self) -> dict[str, bool | None]:
        return {
            "mono": self.is_mono,
            "epi": self.is_epi,
            "split_epi": self.is_split_epi,
            "regular_epi": self.is_regular_epi,
            "normal_epi": self.is_normal_epi,
            "iso": self.is_iso,
            "normal_mono": self.is_normal_mono,
        }


HOLDS = "holds"
HOLDS_BOUNDED = "holds-up-to-bound"
FAILS = "fails"
INAPPLICABLE = "inapplicable"
EXHAUSTED = "exhausted-budget"


@dataclass
class Verdict:
    status: str
    witness: Any = None
    instances_checked: int = 0
    inapplicable: int = 0
    bound: str = ""
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status in (HOLDS, HOLDS_BOUNDED)

    def __bool__(self) -> bool:
        return self.ok


def holds(detail: str = "") -> Verdict:
    return Verdict(HOLDS, detail=detail, instances_checked=1)


def fails(detail: str, witness: Any = None) -> Verdict:
    return Verdict(FAILS, witness=witness, detail=detail, instances_checked=1)


class Category(ABC):
    """Finite pointed category.

    Morphisms are :class:`Morphism` values whose ``data`` is canonical, so two
    parallel morphisms are equal iff they compare equal.
    """

    backend: str = "abstract"

    @abstractmethod
    def identity(self, A) -> Morphism: ...

    @abstractmethod
    def _compose(self, g: Morphism, f: Morphism) -> Morphism: ...

    @abstractmethod
    def zero_object(self): ...

    @abstractmethod
    def objects(self, bound: int | None = None) -> list: ...

    @abstractmethod
    def homs(self, A, B) -> Iterator[Morphism]: ...

    @abstractmethod
    def kernel(self, f: Morphism) -> KernelData: ...

    @abstractmethod
    def cokernel(self, f: Morphism) -> CokernelData: ...

    @abstractmethod
    def pullback(self, f: Morphism, g: Morphism) -> PullbackData: ...

    @abstractmethod
    def coequalizer(self, f: Morphism, g: Morphism) -> CoequalizerData: ...

    @abstractmethod
    def zero_morphism(self, A, B) -> Morphism: ...

    def size(self, A) -> int:
        return 1

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if f.cod != g.dom:
            raise ComposabilityError(f"cannot compose: cod(f)={f.cod!r} but dom(g)={g.dom!r}")
        return self._compose(g, f)

    def chain(self, *arrows: Morphism) -> Morphism:
        """``chain(h, g, f) == h∘g∘f``."""
        out = arrows[-1]
        for a in reversed(arrows[:-1]):
            out = self.compose(a, out)
        return out

    def is_zero(self, f: Morphism) -> bool:
        return f == self.zero_morphism(f.dom, f.cod)

    # Generic decision procedures by hom-set enumeration.  Concrete backends
    # override these with elementwise versions.

    def is_mono(self, f: Morphism) -> bool:
        for X in self.objects():
            seen: dict[Morphism, Morphism] = {}
            for h in self.homs(X, f.dom):
                fh = self.compose(f, h)
                if fh in seen:
                    return False
                seen[fh] = h
        return True

    def is_epi(self, f: Morphism) -> bool:
        for X in self.objects():
            seen: dict[Morphism, Morphism] = {}
            for h in self.homs(f.cod, X):
                hf = self.compose(h, f)
                if hf in seen:
                    return False
                seen[hf] = h
        return True

    def inverse(self, f: Morphism) -> Morphism | None:
        idA, idB = self.identity(f.dom), self.identity(f.cod)
        for g in self.homs(f.cod, f.dom):
            if self.compose(g, f) == idA and self.compose(f, g) == idB:
                return g
        return None

    def is_iso(self, f: Morphism) -> bool:
        return self.inverse(f) is not None

    def automorphisms(self, A) -> list[Morphism]:
        return [h for h in self.homs(A, A) if self.is_iso(h)]

    def solutions(self, p: Morphism, t: Morphism, budget: int | None = None) -> Iterator[Morphism]:
        """All ``w`` with ``p∘w == t``."""
        if p.cod != t.cod:
            raise ComposabilityError("solutions: p and t must share a codomain")
        for n, w in enumerate(self.homs(t.dom, p.dom)):
            if budget is not None and n >= budget:
                raise BudgetError(f"solution search exceeded budget {budget}")
            if self.compose(p, w) == t:
                yield w

    def lift_through_mono(self, m: Morphism, f: Morphism) -> Morphism | None:
        if m.cod != f.cod:
            raise ComposabilityError("lift_through_mono: cod(m) != cod(f)")
        if not self.is_mono(m):
            raise InputError("lift_through_mono: m is not a monomorphism")
        return next(self.solutions(m, f), None)

    def factor_through_epi(self, e: Morphism, f: Morphism) -> Morphism | None:
        if e.dom != f.dom:
            raise ComposabilityError("factor_through_epi: dom(e) != dom(f)")
        if not self.is_epi(e):
            raise InputError("factor_through_epi: e is not an epimorphism")
        for h in self.homs(e.cod, f.cod):
            if self.compose(h, e) == f:
                return h
        return None

    def pair_into_pullback(self, u: Morphism, v: Morphism, pb: PullbackData) -> Morphism:
        _check_pairing(self, u, v, pb)
        for t in self.homs(u.dom, pb.obj):
            if self.compose(pb.p1, t) == u and self.compose(pb.p2, t) == v:
                return t
        raise LimitMissing("pair_into_pullback: supplied cone does not factor")

    def fast_flag(self, kind: str, f: Morphism) -> bool | None:
        """Backend shortcut for a classify flag; ``None`` defers to classify."""
        return None

    # Serialization hooks used by the file formats.
    def object_payload(self, A) -> Any:
        raise NotImplementedError

    def morphism_payload(self, f: Morphism) -> Any:
        raise NotImplementedError

    def parse_object(self, payload: Any):
        raise NotImplementedError

    def parse_morphism(self, dom, cod, payload: Any) -> Morphism:
        raise NotImplementedError


def _check_pairing(cat: Category, u: Morphism, v: Morphism, pb: PullbackData) -> None:
    if u.dom != v.dom:
        raise ComposabilityError("pair_into_pullback: dom(u) != dom(v)")
    left, right = cat.compose(pb.f, u), cat.compose(pb.g, v)
    if left != right:
        raise HypothesisError(
            "pairing square does not commute",
            f"f∘u = {cat.morphism_payload(left)} but g∘v = {cat.morphism_payload(right)}",
        )


class ConcreteCategory(Category):
    """Category whose objects have finite underlying pointed sets.

    Elements of an object are the indices ``0..n-1``; index 0 is the
    basepoint (group identity).  Morphisms act on indices through
    :meth:`apply`.
    """

    @abstractmethod
    def order(self, A) -> int: ...

    @abstractmethod
    def apply(self, f: Morphism) -> tuple[int, ...]: ...

    @abstractmethod
    def from_map(self, A, B, images: Sequence[int]) -> Morphism:
        """Morphism with the given element map (trusted to be a homomorphism)."""

    @abstractmethod
    def generators(self, A) -> list[int]: ...

    @abstractmethod
    def extend(self, A, B, images: Sequence[int]) -> Morphism | None:
        """The morphism sending ``generators(A)`` to ``images``, if one exists."""

    def element_order(self, A, x: int) -> int | None:
        return None

    def size(self, A) -> int:
        return self.order(A)

    def is_mono(self, f: Morphism) -> bool:
        m = self.apply(f)
        return len(set(m)) == len(m)

    def is_epi(self, f: Morphism) -> bool:
        return len(set(self.apply(f))) == self.order(f.cod)

    def is_iso(self, f: Morphism) -> bool:
        return self.order(f.dom) == self.order(f.cod) and self.is_mono(f)

    def inverse(self, f: Morphism) -> Morphism | None:
        if not self.is_iso(f):
            return None
        inv = [0] * self.order(f.cod)
        for x, y in enumerate(self.apply(f)):
            inv[y] = x
        return self.from_map(f.cod, f.dom, inv)

    def image_set(self, f: Morphism) -> frozenset[int]:
        return frozenset(self.apply(f))

    def kernel_set(self, f: Morphism) -> frozenset[int]:
        return frozenset(x for x, y in enumerate(self.apply(f)) if y == 0)

    def _candidates(self, A, B, fiber: Iterable[int] | None = None) -> list[list[int]]:
        out = []
        for x in self.generators(A):
            pool = range(self.order(B)) if fiber is None else fiber
            ox = self.element_order(A, x)
            if ox is None:
                out.append(list(pool))
            else:
                out.append([y for y in pool if ox % self.element_order(B, y) == 0])
        return out

    def homs(self, A, B) -> Iterator[Morphism]:
        for images in itertools.product(*self._candidates(A, B)):
            h = self.extend(A, B, images)
            if h is not None:
                yield h

    def solutions(self, p: Morphism, t: Morphism, budget: int | None = None) -> Iterator[Morphism]:
        if p.cod != t.cod:
            raise ComposabilityError("solutions: p and t must share a codomain")
        X, A = t.dom, p.dom
        pm, tm = self.apply(p), self.apply(t)
        fibers: dict[int, list[int]] = {}
        for a, b in enumerate(pm):
            fibers.setdefault(b, []).append(a)
        cands = []
        for x in self.generators(X):
            pool = fibers.get(tm[x], [])
            ox = self.element_order(X, x)
            if ox is not None:
                pool = [y for y in pool if ox % self.element_order(A, y) == 0]
            cands.append(pool)
        for n, images in enumerate(itertools.product(*cands)):
            if budget is not None and n >= budget:
                raise BudgetError(f"solution search exceeded budget {budget}")
            w = self.extend(X, A, images)
            if w is not None:
                yield w

    def automorphisms(self, A) -> list[Morphism]:
        return [h for h in self.homs(A, A) if self.is_mono(h)]

    def lift_through_mono(self, m: Morphism, f: Morphism) -> Morphism | None:
        if m.cod != f.cod:
            raise ComposabilityError("lift_through_mono: cod(m) != cod(f)")
        if not self.is_mono(m):
            raise InputError("lift_through_mono: m is not a monomorphism")
        back = {y: x for x, y in enumerate(self.apply(m))}
        images = []
        for y in self.apply(f):
            if y not in back:
                return None
            images.append(back[y])
        return self.from_map(f.dom, m.dom, images)

    def factor_through_epi(self, e: Morphism, f: Morphism) -> Morphism | None:
        if e.dom != f.dom:
            raise ComposabilityError("factor_through_epi: dom(e) != dom(f)")
        if not self.is_epi(e):
            raise InputError("factor_through_epi: e is not an epimorphism")
        table: dict[int, int] = {}
        for b, c in zip(self.apply(e), self.apply(f)):
            if table.setdefault(b, c) != c:
                return None
        return self.from_map(e.cod, f.cod, [table[b] for b in range(self.order(e.cod))])

    def pair_into_pullback(self, u: Morphism, v: Morphism, pb: PullbackData) -> Morphism:
        _check_pairing(self, u, v, pb)
        lookup = {pair: y for y, pair in enumerate(zip(self.apply(pb.p1), self.apply(pb.p2)))}
        return self.from_map(u.dom, pb.obj, [lookup[pair] for pair in zip(self.apply(u), self.apply(v))])


# -- generic constructions ---------------------------------------------------


def kernel_pair(cat: Category, f: Morphism):
    """Pullback of ``f`` along itself: ``(R, r1, r2)``."""
    pb = cat.pullback(f, f)
    return pb.obj, pb.p1, pb.p2


def kernel_pair_comparison(cat: Category, q: Morphism, f: Morphism, h: Morphism) -> Morphism:
    """Given ``h∘q == f``, the map from the kernel pair of ``q`` to that of ``f``."""
    if cat.compose(h, q) != f:
        raise HypothesisError("kernel pair comparison", "h∘q != f")
    S = cat.pullback(q, q)
    R = cat.pullback(f, f)
    return cat.pair_into_pullback(S.p1, S.p2, R)


def coimage(cat: Category, f: Morphism):
    """``(q, c)`` with ``q = coker(ker f)`` and ``c∘q == f``."""
    k = cat.kernel(f)
    q = cat.cokernel(k.incl)
    c = cat.factor_through_epi(q.proj, f)
    return q.proj, c


def image(cat: Category, f: Morphism):
    """``(e, m)`` with ``m = ker(coker f)`` and ``m∘e == f``."""
    c = cat.cokernel(f)
    m = cat.kernel(c.proj)
    e = cat.lift_through_mono(m.incl, f)
    return e, m.incl


def is_normal_epi(cat: Category, f: Morphism) -> bool:
    q, c = coimage(cat, f)
    return c is not None and cat.is_iso(c)


def is_regular_epi(cat: Category, f: Morphism) -> bool:
    _, r1, r2 = kernel_pair(cat, f)
    q = cat.coequalizer(r1, r2)
    c = cat.factor_through_epi(q.proj, f)
    return c is not None and cat.is_iso(c)


def is_normal_mono(cat: Category, m: Morphism) -> bool:
    if not cat.is_mono(m):
        return False
    e, _ = image(cat, m)
    return e is not None and cat.is_iso(e)


def find_section(cat: Category, f: Morphism, budget: int | None = None) -> Morphism | None:
    return next(cat.solutions(f, cat.identity(f.cod), budget=budget), None)


def classify(cat: Category, f: Morphism, budget: int | None = None) -> MorphismProfile:
    """Decide every profile flag from its categorical definition."""

    def guarded(fn):
        try:
            return fn()
        except LimitMissing:
            return None

    section = None
    try:
        section = find_section(cat, f, budget)
        split = section is not None
    except BudgetError:
        split = None
    return MorphismProfile(
        is_mono=cat.is_mono(f),
        is_epi=cat.is_epi(f),
        is_split_epi=split,
        is_regular_epi=guarded(lambda: is_regular_epi(cat, f)),
        is_normal_epi=guarded(lambda: is_normal_epi(cat, f)),
        is_iso=cat.is_iso(f),
        is_normal_mono=guarded(lambda: is_normal_mono(cat, f)),
        section=section,
    )


def flag(cat: Category, kind: str, f: Morphism) -> bool | None:
    """One classify flag, using the backend shortcut when it has one."""
    fast = cat.fast_flag(kind, f)
    if fast is not None:
        return fast
    try:
        if kind == "iso":
            return cat.is_iso(f)
        if kind == "mono":
            return cat.is_mono(f)
        if kind == "epi":
            return cat.is_epi(f)
        if kind == "split_epi":
            try:
                return find_section(cat, f) is not None
            except BudgetError:
                return None
        if kind == "regular_epi":
            return is_regular_epi(cat, f)
        if kind == "normal_epi":
            return is_normal_epi(cat, f)
        if kind == "normal_mono":
            return is_normal_mono(cat, f)
    except LimitMissing:
        return None
    raise InputError(f"unknown morphism property {kind!r}")


def induced_kernel_map(cat: Category, f: Morphism, u: Morphism, v: Morphism, fp: Morphism) -> Morphism:
    """``Ker(u) -> Ker(v)`` for the square ``v∘f == fp∘u``."""
    _check_square(cat, f, u, v, fp)
    ku, kv = cat.kernel(u), cat.kernel(v)
    t = cat.lift_through_mono(kv.incl, cat.compose(f, ku.incl))
    if t is None:
        raise HypothesisError("induced kernel map", "f∘ker(u) does not factor through ker(v)")
    return t


def induced_cokernel_map(cat: Category, f: Morphism, u: Morphism, v: Morphism, fp: Morphism) -> Morphism:
    """``Coker(u) -> Coker(v)`` for the square ``v∘f == fp∘u``."""
    _check_square(cat, f, u, v, fp)
    cu, cv = cat.cokernel(u), cat.cokernel(v)
    t = cat.factor_through_epi(cu.proj, cat.compose(cv.proj, fp))
    if t is None:
        raise HypothesisError("induced cokernel map", "coker(v)∘f' does not factor through coker(u)")
    return t


def _check_square(cat: Category, f, u, v, fp) -> None:
    if cat.compose(v, f) != cat.compose(fp, u):
        raise HypothesisError("square does not commute", "v∘f != f'∘u")


# -- diagrams ------------------------------------------------------------------


class Arrow(NamedTuple):
    src: str
    tgt: str
    mor: Morphism


@dataclass
class Diagram:
    """Named objects and arrows plus equations between composite paths.

    A path is a list of arrow names read like a composite: ``["g", "f"]``
    means ``g∘f``.
    """

    objects: dict[str, Any] = field(default_factory=dict)
    arrows: dict[str, Arrow] = field(default_factory=dict)
    equations: list[tuple[list[str], list[str]]] = field(default_factory=list)
    shape: str = ""
    meta: dict[str, Any] = field(default_factory=dict)

    def add_object(self, name: str, obj) -> None:
        self.objects[name] = obj

    def add_arrow(self, name: str, src: str, tgt: str, mor: Morphism) -> None:
        self.arrows[name] = Arrow(src, tgt, mor)

    def __getitem__(self, name: str) -> Morphism:
        try:
            return self.arrows[name].mor
        except KeyError:
            raise InputError(f"diagram has no arrow named {name!r}") from None

    def obj(self, name: str):
        try:
            return self.objects[name]
        except KeyError:
            raise InputError(f"diagram has no object named {name!r}") from None

    def validate(self) -> None:
        for name, (src, tgt, mor) in self.arrows.items():
            for end, val in ((src, mor.dom), (tgt, mor.cod)):
                if end not in self.objects:
                    raise InputError(f"arrow {name!r} refers to unknown object {end!r}")
                if self.objects[end] != val:
                    raise InputError(f"arrow {name!r}: endpoint {end!r} does not match its payload")
        for lhs, rhs in self.equations:
            for path in (lhs, rhs):
                if not path:
                    raise InputError("empty path in equation")
                for name in path:
                    if name not in self.arrows:
                        raise InputError(f"equation refers to unknown arrow {name!r}")
                for a, b in zip(path, path[1:]):
                    if self.arrows[b].tgt != self.arrows[a].src:
                        raise InputError(f"path {'∘'.join(path)} is not composable")
            if self.arrows[lhs[-1]].src != self.arrows[rhs[-1]].src or self.arrows[lhs[0]].tgt != self.arrows[rhs[0]].tgt:
                raise InputError(f"equation {'∘'.join(lhs)} = {'∘'.join(rhs)} is between non-parallel paths")


def path_label(path: Sequence[str]) -> str:
    return "∘".join(path)


def evaluate_path(cat: Category, d: Diagram, path: Sequence[str]) -> Morphism:
    return cat.chain(*(d[name] for name in path))


def diagram_commutes(cat: Category, d: Diagram) -> Verdict:
    d.validate()
    for n, (lhs, rhs) in enumerate(d.equations):
        if evaluate_path(cat, d, lhs) != evaluate_path(cat, d, rhs):
            v = fails(f"equation {path_label(lhs)} = {path_label(rhs)} fails")
            v.instances_checked = n + 1
            return v
    return Verdict(HOLDS, instances_checked=len(d.equations))
