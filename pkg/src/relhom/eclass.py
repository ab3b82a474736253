"""Distinguished classes E of morphisms and their membership tests."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .core import FAILS, HOLDS, Category, Morphism, Verdict, fails, flag
from .errors import InputError, LimitMissing, PluginError

BUILTIN_KINDS = ("iso", "split_epi", "regular_epi", "normal_epi", "all")


class EClass:
    """A decidable class of morphisms of one category."""

    kind = "abstract"
    #: True when membership is unchanged by pre- and post-composition with isos.
    iso_invariant = True

    def member(self, cat: Category, f: Morphism) -> bool:
        raise NotImplementedError

    @property
    def selector(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"EClass({self.selector})"


@dataclass(frozen=True, repr=False)
class Builtin(EClass):
    name: str

    def __post_init__(self):
        if self.name not in BUILTIN_KINDS:
            raise InputError(f"unknown class {self.name!r}")

    @property
    def kind(self) -> str:
        return self.name

    @property
    def selector(self) -> str:
        return self.name

    def member(self, cat: Category, f: Morphism) -> bool:
        if self.name == "all":
            return True
        v = flag(cat, self.name, f)
        if v is None:
            raise LimitMissing(f"membership of {self.name} is undecided for this morphism")
        return v


ISO = Builtin("iso")
SPLIT_EPI = Builtin("split_epi")
REGULAR_EPI = Builtin("regular_epi")
NORMAL_EPI = Builtin("normal_epi")
ALL = Builtin("all")


@dataclass(frozen=True, repr=False)
class Explicit(EClass):
    """A listed set of arrows of a table category."""

    arrows: frozenset[str]
    source: str = ""
    kind = "explicit"
    iso_invariant = False

    @property
    def selector(self) -> str:
        if self.source:
            return f"explicit:{self.source}"
        return "explicit:{" + ",".join(sorted(self.arrows)) + "}"

    def member(self, cat: Category, f: Morphism) -> bool:
        if not hasattr(cat, "arrow_name"):
            raise InputError("explicit classes are only available on table categories")
        return cat.arrow_name(f) in self.arrows


# -- predicate plugins ------------------------------------------------------------


def _coprime_kernel(cat: Category, f: Morphism, arg: str | None) -> bool:
    """Surjections whose kernel order is prime to ``p``."""
    if arg is None:
        raise ValueError("coprime_kernel needs a prime argument, e.g. coprime_kernel:2")
    p = int(arg)
    if not cat.is_epi(f):
        return False
    return cat.size(cat.kernel(f).obj) % p != 0


def _surjective(cat: Category, f: Morphism, arg: str | None) -> bool:
    return cat.is_epi(f)


@dataclass(frozen=True)
class PredicateSpec:
    fn: Callable[[Category, Morphism, str | None], bool]
    backends: tuple[str, ...]
    iso_invariant: bool


PREDICATES: dict[str, PredicateSpec] = {
    "coprime_kernel": PredicateSpec(_coprime_kernel, ("finab",), True),
    "surjective": PredicateSpec(_surjective, ("finab", "fingrp", "pset"), True),
}


@dataclass(frozen=True, repr=False)
class Predicate(EClass):
    name: str
    arg: str | None = None
    kind = "predicate"

    def __post_init__(self):
        if self.name not in PREDICATES:
            raise InputError(f"unknown predicate plugin {self.name!r}")

    @property
    def iso_invariant(self) -> bool:  # type: ignore[override]
        return PREDICATES[self.name].iso_invariant

    @property
    def selector(self) -> str:
        return f"predicate:{self.name}" + (f":{self.arg}" if self.arg is not None else "")

    def member(self, cat: Category, f: Morphism) -> bool:
        spec = PREDICATES[self.name]
        if cat.backend not in spec.backends:
            raise InputError(f"predicate {self.name!r} is not defined on backend {cat.backend}")
        try:
            return bool(spec.fn(cat, f, self.arg))
        except (InputError, LimitMissing):
            raise
        except Exception as e:  # plugins are user code; report which one broke
            raise PluginError(self.name, e) from e


@dataclass(frozen=True, repr=False)
class Intersection(EClass):
    left: EClass
    right: EClass
    kind = "intersection"

    @property
    def iso_invariant(self) -> bool:  # type: ignore[override]
        return self.left.iso_invariant and self.right.iso_invariant

    @property
    def selector(self) -> str:
        return f"{self.left.selector}&{self.right.selector}"

    def member(self, cat: Category, f: Morphism) -> bool:
        return self.left.member(cat, f) and self.right.member(cat, f)


# -- functors and preimage classes -------------------------------------------------


@dataclass(frozen=True)
class FunctorDesc:
    """A functor given by object and morphism maps.  ``target`` is a category."""

    name: str
    source_backend: str
    target: Category
    on_objects: Callable
    on_morphisms: Callable

    def __call__(self, f: Morphism) -> Morphism:
        return self.on_morphisms(f)


def _forgetful_obj(G):
    from .pset import PointedSet

    return PointedSet(G.order)


def _forgetful_mor(f: Morphism) -> Morphism:
    from .pset import PointedSet

    return Morphism(PointedSet(f.dom.order), PointedSet(f.cod.order), f.data)


def _identity_obj(A):
    return A


def _identity_mor(f: Morphism) -> Morphism:
    return f


def builtin_functor(name: str, source: Category | None = None) -> FunctorDesc:
    from .pset import PSet

    if name in ("forgetful", "forgetful-fingrp-pset"):
        return FunctorDesc("forgetful", "fingrp", PSet(), _forgetful_obj, _forgetful_mor)
    if name == "identity":
        if source is None:
            raise InputError("identity functor needs its category")
        return FunctorDesc("identity", source.backend, source, _identity_obj, _identity_mor)
    raise InputError(f"unknown functor {name!r}")


def load_functor(ref: str, source: Category | None = None) -> FunctorDesc:
    p = Path(ref)
    if p.suffix == ".json" or p.exists():
        try:
            doc = json.loads(p.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"cannot read functor file {ref}: {e}") from None
        if doc.get("format-version") != "1" or doc.get("shape") != "functor":
            raise InputError(f"{ref}: expected a format-version 1 functor document")
        if "builtin" not in doc:
            raise InputError(f"{ref}: functor document needs 'builtin'")
        return builtin_functor(doc["builtin"], source)
    return builtin_functor(ref, source)


def validate_functor(F: FunctorDesc, source: Category, bound: int) -> Verdict:
    """Identity and composition laws on every morphism within ``bound``, plus
    preservation of the pullbacks among them."""
    objs = source.objects(bound)
    T = F.target
    checked = 0
    homs = {(A, B): list(source.homs(A, B)) for A in objs for B in objs}
    for A in objs:
        checked += 1
        if F(source.identity(A)) != T.identity(F.on_objects(A)):
            return fails(f"functor {F.name} does not preserve the identity of {A}")
    for (A, B), fs in homs.items():
        for f in fs:
            for C in objs:
                for g in homs[(B, C)]:
                    checked += 1
                    if F(source.compose(g, f)) != T.compose(F(g), F(f)):
                        return fails(f"functor {F.name} does not preserve a composite {A}->{B}->{C}")
    for (A, C), fs in homs.items():
        for f in fs:
            for B in objs:
                for g in homs[(B, C)]:
                    checked += 1
                    pb = source.pullback(f, g)
                    tb = T.pullback(F(f), F(g))
                    try:
                        t = T.pair_into_pullback(F(pb.p1), F(pb.p2), tb)
                    except LimitMissing:
                        return fails(f"functor {F.name} does not preserve a pullback over {C}")
                    if not T.is_iso(t):
                        return fails(f"functor {F.name} does not preserve a pullback over {C}")
    return Verdict(HOLDS, instances_checked=checked, bound=f"objects of size <= {bound}")


@dataclass(frozen=True, repr=False)
class Preimage(EClass):
    """``E ∩ F⁻¹(E′)``: members of ``source_class`` whose image lies in ``target_class``."""

    functor: FunctorDesc
    source_class: EClass
    target_class: EClass
    kind = "preimage"

    @property
    def iso_invariant(self) -> bool:  # type: ignore[override]
        return self.source_class.iso_invariant and self.target_class.iso_invariant

    @property
    def selector(self) -> str:
        return f"preimage:{self.functor.name}:{self.target_class.selector}:{self.source_class.selector}"

    def member(self, cat: Category, f: Morphism) -> bool:
        return self.source_class.member(cat, f) and self.target_class.member(self.functor.target, self.functor(f))


def preimage_class(F: FunctorDesc, E: EClass, E_target: EClass) -> Preimage:
    return Preimage(F, E, E_target)


# -- parsing and validation --------------------------------------------------------


def parse_class(sel: str, cat: Category | None = None) -> EClass:
    """Parse a ``--class`` selector.

    ``iso | split_epi | regular_epi | normal_epi | all | explicit:<file> |
    predicate:<name>[:<arg>] | preimage:<functor>:<class>[:<source-class>] |
    <sel>&<sel>``
    """
    if "&" in sel:
        left, right = sel.split("&", 1)
        return Intersection(parse_class(left, cat), parse_class(right, cat))
    if sel in BUILTIN_KINDS:
        return Builtin(sel)
    head, _, rest = sel.partition(":")
    if head == "explicit":
        if rest.startswith("{") and rest.endswith("}"):
            names = [s for s in rest[1:-1].split(",") if s]
            return Explicit(frozenset(names))
        try:
            doc = json.loads(Path(rest).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"cannot read explicit class file {rest!r}: {e}") from None
        arrows = doc.get("arrows") if isinstance(doc, dict) else doc
        if not isinstance(arrows, list):
            raise InputError(f"{rest}: explicit class file needs an 'arrows' list")
        return Explicit(frozenset(str(a) for a in arrows), source=rest)
    if head == "predicate":
        name, _, arg = rest.partition(":")
        return Predicate(name, arg or None)
    if head == "preimage":
        parts = rest.split(":")
        if len(parts) < 2:
            raise InputError("preimage selector is preimage:<functor>:<target-class>[:<source-class>]")
        F = load_functor(parts[0], cat)
        target = parse_class(parts[1], F.target)
        source = parse_class(parts[2], cat) if len(parts) > 2 else REGULAR_EPI
        return Preimage(F, source, target)
    raise InputError(f"unknown class selector {sel!r}")


def isomorphisms(cat: Category, bound: int | None) -> list[Morphism]:
    out = []
    objs = cat.objects(bound)
    for A in objs:
        for B in objs:
            if A == B:
                out.extend(cat.automorphisms(A))
            elif cat.size(A) == cat.size(B):
                out.extend(f for f in cat.homs(A, B) if cat.is_iso(f))
    return out


def validate_class(E: EClass, cat: Category, bound: int | None = None) -> Verdict:
    """Check that ``E`` contains every isomorphism (within ``bound``)."""
    if isinstance(E, Builtin):
        return Verdict(HOLDS, detail="builtin class contains all isomorphisms")
    isos = isomorphisms(cat, bound)
    for f in isos:
        if not E.member(cat, f):
            name = cat.arrow_name(f) if hasattr(cat, "arrow_name") else repr(cat.morphism_payload(f))
            return fails(f"class {E.selector} misses the isomorphism {name}")
    return Verdict(HOLDS, instances_checked=len(isos))
