"""Checkers for the relative homological axioms over a bounded category.

Each checker walks the configurations quantified by its axiom in a fixed
nested order and keeps the least failing configuration, keyed by total
object size and then by position in the enumeration.  When the class E is
invariant under isomorphisms, morphisms whose domain automorphisms relate
them are visited once per orbit; the orbit representative is always the
earliest member, so the least witness is unaffected.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .core import (
    EXHAUSTED,
    FAILS,
    HOLDS,
    HOLDS_BOUNDED,
    INAPPLICABLE,
    Category,
    Diagram,
    Morphism,
    Verdict,
    diagram_commutes,
    flag,
    image,
    is_normal_epi,
    is_normal_mono,
    is_regular_epi,
)
from .eclass import EClass
from .errors import BudgetError, EngineInconsistency, HypothesisError, InputError, LimitMissing


class AxiomId(enum.Enum):
    A2_1a = "a"
    A2_1b = "b"
    A2_1c = "c"
    A2_1d = "d"
    A2_1e = "e"
    A2_1f = "f"
    A2_1g = "g"
    C2_2a = "2a"
    C2_2b = "2b"
    C2_2c = "2c"
    C2_2d = "2d"

    @property
    def label(self) -> str:
        return self.value


ALL_AXIOMS = tuple(AxiomId)
WEAK_AXIOMS = (AxiomId.A2_1a, AxiomId.A2_1b, AxiomId.A2_1c, AxiomId.A2_1d, AxiomId.A2_1e)

DESCRIPTIONS = {
    AxiomId.A2_1a: "E is stable under pullback",
    AxiomId.A2_1b: "members of E are normal epimorphisms",
    AxiomId.A2_1c: "E-short-five lemma",
    AxiomId.A2_1d: "E is closed under composition",
    AxiomId.A2_1e: "f in E and gf in E imply g in E",
    AxiomId.A2_1f: "(E, mono) factorization exists for composites e∘m",
    AxiomId.A2_1g: "comparison of E-extensions over an E-map of kernels is in E",
    AxiomId.C2_2a: "members of E are regular epimorphisms",
    AxiomId.C2_2b: "coker(ker f) is in E for f in E",
    AxiomId.C2_2c: "relative Hofmann axiom",
    AxiomId.C2_2d: "(E, mono) factorization over a common kernel",
}


def parse_axiom(s: str) -> AxiomId:
    s = s.strip()
    for a in AxiomId:
        if s in (a.value, a.name, a.name.lower()):
            return a
    raise InputError(f"unknown axiom id {s!r} (use a..g, 2a..2d or all)")


def parse_axioms(s: str) -> list[AxiomId]:
    if s.strip() == "all":
        return list(ALL_AXIOMS)
    return [parse_axiom(p) for p in s.split(",") if p.strip()]


@dataclass
class Witness:
    axiom: AxiomId
    diagram: Diagram
    detail: str
    bound: int | None = None


# -- shared predicates ------------------------------------------------------------


def is_kernel_of(cat: Category, k: Morphism, f: Morphism) -> bool:
    if k.cod != f.dom or not cat.is_zero(cat.compose(f, k)):
        return False
    can = cat.kernel(f)
    t = cat.lift_through_mono(can.incl, k)
    return t is not None and cat.is_iso(t)


def is_pullback_of(cat: Category, p1: Morphism, p2: Morphism, f: Morphism, g: Morphism) -> bool:
    if cat.compose(f, p1) != cat.compose(g, p2):
        return False
    pb = cat.pullback(f, g)
    t = cat.pair_into_pullback(p1, p2, pb)
    return cat.is_iso(t)


def bound_label(cat: Category, bound: int | None) -> str:
    if cat.backend == "tablecat" or bound is None:
        return "all objects"
    return f"objects of size <= {bound}"


# -- context -----------------------------------------------------------------------


class Context:
    """Memoized view of a bounded category together with a class E."""

    def __init__(self, cat: Category, E: EClass, bound: int | None):
        self.cat, self.E, self.bound = cat, E, bound
        self.objs = cat.objects(bound)
        self.reduce = E.iso_invariant
        self._homs: dict = {}
        self._member: dict = {}
        self._auts: dict = {}
        self._reps: dict = {}
        self._kernel: dict = {}
        self._fact: dict = {}
        self._isos_into: dict = {}

    def homs(self, A, B) -> list[Morphism]:
        key = (A, B)
        if key not in self._homs:
            self._homs[key] = list(self.cat.homs(A, B))
        return self._homs[key]

    def member(self, f: Morphism) -> bool:
        if f not in self._member:
            self._member[f] = self.E.member(self.cat, f)
        return self._member[f]

    def members(self, A, B) -> list[Morphism]:
        return [f for f in self.homs(A, B) if self.member(f)]

    def automorphisms(self, A) -> list[Morphism]:
        if A not in self._auts:
            self._auts[A] = self.cat.automorphisms(A)
        return self._auts[A]

    def representatives(self, A, B, fs: Sequence[Morphism] | None = None) -> list[tuple[int, Morphism]]:
        """``(index, f)`` pairs for ``f`` in ``homs(A, B)``, one per orbit under
        precomposition with automorphisms of ``A`` when reduction applies."""
        hs = self.homs(A, B)
        idx = {f: i for i, f in enumerate(hs)}
        pool = hs if fs is None else fs
        if not self.reduce:
            return [(idx[f], f) for f in pool]
        key = (A, B)
        if key not in self._reps:
            auts = self.automorphisms(A)
            seen: set = set()
            reps = set()
            for f in hs:
                if f in seen:
                    continue
                orbit = {self.cat.compose(f, a) for a in auts}
                seen |= orbit
                reps.add(min(orbit, key=idx.__getitem__))
            self._reps[key] = reps
        reps = self._reps[key]
        return [(idx[f], f) for f in pool if f in reps]

    def kernel(self, f: Morphism):
        if f not in self._kernel:
            self._kernel[f] = self.cat.kernel(f)
        return self._kernel[f]

    def isos_into(self, K) -> list[Morphism]:
        """Every isomorphism ``X -> K`` with ``X`` among the bounded objects."""
        if K not in self._isos_into:
            out = []
            for X in self.objs:
                if self.cat.size(X) == self.cat.size(K):
                    out.extend(a for a in self.homs(X, K) if self.cat.is_iso(a))
            if not out:
                out = list(self.automorphisms(K))
            self._isos_into[K] = out
        return self._isos_into[K]

    def factorization(self, f: Morphism):
        """An ``(e, m)`` with ``m∘e == f``, ``e`` in E and ``m`` mono, or ``None``.

        Candidates for the middle object are the image of ``f`` first, then
        every bounded object.
        """
        if f in self._fact:
            return self._fact[f]
        cat = self.cat
        middles = []
        try:
            middles.append(image(cat, f)[1].dom)
        except LimitMissing:
            pass
        for I in self.objs:
            if I not in middles:
                middles.append(I)
        found = None
        for I in middles:
            for e in self.homs(f.dom, I) if I in self.objs else cat.homs(f.dom, I):
                if not self.member(e):
                    continue
                for m in _right_factors(cat, e, f, self):
                    if cat.is_mono(m):
                        found = (e, m)
                        break
                if found:
                    break
            if found:
                break
        self._fact[f] = found
        return found


def _right_factors(cat: Category, e: Morphism, f: Morphism, ctx: Context | None = None):
    """All ``h`` with ``h∘e == f``."""
    if cat.is_epi(e) and hasattr(cat, "apply"):
        h = cat.factor_through_epi(e, f)
        if h is not None:
            yield h
        return
    pool = ctx.homs(e.cod, f.cod) if ctx is not None and e.cod in ctx.objs and f.cod in ctx.objs else cat.homs(e.cod, f.cod)
    for h in pool:
        if cat.compose(h, e) == f:
            yield h


# -- tally -------------------------------------------------------------------------


class Tally:
    def __init__(self):
        self.checked = 0
        self.inapplicable = 0
        self.best = None  # (key, builder)

    def ok(self):
        self.checked += 1

    def skip(self):
        self.inapplicable += 1

    def fail(self, key, builder: Callable[[], Witness]):
        self.checked += 1
        if self.best is None or key < self.best[0]:
            self.best = (key, builder)

    def guard(self, fn: Callable[[], None]):
        try:
            fn()
        except LimitMissing:
            self.skip()


def _sizes(cat, *objs) -> int:
    return sum(cat.size(o) for o in objs)


def _diagram(shape: str, objects: dict, arrows: Iterable[tuple[str, str, str, Morphism]], equations=()) -> Diagram:
    d = Diagram(shape=shape)
    for name, obj in objects.items():
        d.add_object(name, obj)
    for name, src, tgt, mor in arrows:
        d.add_arrow(name, src, tgt, mor)
    d.equations = [(list(l), list(r)) for l, r in equations]
    return d


# -- per-axiom enumerators ---------------------------------------------------------


def _check_a(ctx: Context, t: Tally):
    cat = ctx.cat
    for ci, C in enumerate(ctx.objs):
        for ai, A in enumerate(ctx.objs):
            for fi, f in ctx.representatives(A, C, ctx.members(A, C)):
                for bi, B in enumerate(ctx.objs):
                    for gi, g in ctx.representatives(B, C):
                        def one(f=f, g=g, A=A, B=B, C=C, key=(ci, ai, fi, bi, gi)):
                            pb = cat.pullback(f, g)
                            if ctx.member(pb.p2):
                                t.ok()
                                return

                            def build():
                                d = _diagram(
                                    "pullback",
                                    {"A": A, "B": B, "C": C, "P": pb.obj},
                                    [("f", "A", "C", f), ("g", "B", "C", g), ("p1", "P", "A", pb.p1), ("p2", "P", "B", pb.p2)],
                                    [(["f", "p1"], ["g", "p2"])],
                                )
                                return Witness(AxiomId.A2_1a, d, "the pullback p2 of f along g is not in E")

                            t.fail((_sizes(cat, A, B, C), key), build)

                        t.guard(one)


def _single_member_check(axiom: AxiomId, test: Callable[[Context, Morphism], bool], detail: str):
    def check(ctx: Context, t: Tally):
        cat = ctx.cat
        for ai, A in enumerate(ctx.objs):
            for bi, B in enumerate(ctx.objs):
                for fi, f in ctx.representatives(A, B, ctx.members(A, B)):
                    def one(f=f, A=A, B=B, key=(ai, bi, fi)):
                        if test(ctx, f):
                            t.ok()
                            return

                        def build():
                            d = _diagram("arrow", {"A": A, "B": B}, [("f", "A", "B", f)])
                            return Witness(axiom, d, detail)

                        t.fail((_sizes(cat, A, B), key), build)

                    t.guard(one)

    return check


def _normal_epi(ctx: Context, f: Morphism) -> bool:
    v = flag(ctx.cat, "normal_epi", f)
    if v is None:
        raise LimitMissing("normal epi undecided")
    return v


def _regular_epi(ctx: Context, f: Morphism) -> bool:
    v = flag(ctx.cat, "regular_epi", f)
    if v is None:
        raise LimitMissing("regular epi undecided")
    return v


def coker_ker_in_class(ctx: Context, f: Morphism) -> bool:
    """Some cokernel of ``ker f`` lies in E (any representative will do)."""
    cat = ctx.cat
    q = cat.cokernel(ctx.kernel(f).incl).proj
    if ctx.member(q):
        return True
    if ctx.reduce:
        return False
    Q = q.cod
    for Y in ctx.objs:
        if cat.size(Y) != cat.size(Q):
            continue
        for a in cat.homs(Q, Y):
            if cat.is_iso(a) and ctx.member(cat.compose(a, q)):
                return True
    return False


_check_b = _single_member_check(AxiomId.A2_1b, _normal_epi, "f is in E but is not a normal epimorphism")
_check_2a = _single_member_check(AxiomId.C2_2a, _regular_epi, "f is in E but is not a regular epimorphism")
_check_2b = _single_member_check(AxiomId.C2_2b, coker_ker_in_class, "f is in E but no cokernel of ker(f) is in E")


def _extension_pairs(ctx: Context):
    """``(key, B, f', f, w)`` with ``f, f'`` in E over ``B`` and ``f'∘w == f``."""
    cat = ctx.cat
    for bi, B in enumerate(ctx.objs):
        for a2i, A2 in enumerate(ctx.objs):
            for fpi, fp in ctx.representatives(A2, B, ctx.members(A2, B)):
                for a1i, A1 in enumerate(ctx.objs):
                    for fi, f in ctx.representatives(A1, B, ctx.members(A1, B)):
                        for wi, w in enumerate(cat.solutions(fp, f)):
                            yield (bi, a2i, fpi, a1i, fi, wi), B, fp, f, w


def _check_c(ctx: Context, t: Tally):
    cat = ctx.cat
    for key, B, fp, f, w in _extension_pairs(ctx):
        def one(key=key, B=B, fp=fp, f=f, w=w):
            k1, k2 = ctx.kernel(f), ctx.kernel(fp)
            tk = cat.lift_through_mono(k2.incl, cat.compose(w, k1.incl))
            if tk is None or not cat.is_iso(tk):
                return  # kernels do not match: not a configuration of this axiom
            if cat.is_iso(w):
                t.ok()
                return

            def build():
                kp = cat.compose(k2.incl, tk)
                d = _diagram(
                    "short5",
                    {"K": k1.obj, "A": f.dom, "A'": fp.dom, "B": B},
                    [("k", "K", "A", k1.incl), ("f", "A", "B", f), ("k'", "K", "A'", kp),
                     ("f'", "A'", "B", fp), ("w", "A", "A'", w)],
                    [(["f'", "w"], ["f"]), (["w", "k"], ["k'"])],
                )
                return Witness(AxiomId.A2_1c, d, _short_five_failure(cat, w))

            t.fail((_sizes(cat, k1.obj, f.dom, fp.dom, B), key), build)

        t.guard(one)


def _check_d(ctx: Context, t: Tally):
    cat = ctx.cat
    for ai, A in enumerate(ctx.objs):
        for bi, B in enumerate(ctx.objs):
            for fi, f in ctx.representatives(A, B, ctx.members(A, B)):
                for ci, C in enumerate(ctx.objs):
                    for gi, g in enumerate(ctx.homs(B, C)):
                        if not ctx.member(g):
                            continue

                        def one(f=f, g=g, A=A, B=B, C=C, key=(ai, bi, fi, ci, gi)):
                            if ctx.member(cat.compose(g, f)):
                                t.ok()
                                return

                            def build():
                                d = _diagram("composite", {"A": A, "B": B, "C": C}, [("f", "A", "B", f), ("g", "B", "C", g)])
                                return Witness(AxiomId.A2_1d, d, "f and g are in E but g∘f is not")

                            t.fail((_sizes(cat, A, B, C), key), build)

                        t.guard(one)


def _check_e(ctx: Context, t: Tally):
    cat = ctx.cat
    for ai, A in enumerate(ctx.objs):
        for bi, B in enumerate(ctx.objs):
            for fi, f in ctx.representatives(A, B, ctx.members(A, B)):
                for ci, C in enumerate(ctx.objs):
                    for gi, g in enumerate(ctx.homs(B, C)):
                        def one(f=f, g=g, A=A, B=B, C=C, key=(ai, bi, fi, ci, gi)):
                            if not ctx.member(cat.compose(g, f)):
                                return
                            if ctx.member(g):
                                t.ok()
                                return

                            def build():
                                d = _diagram("composite", {"A": A, "B": B, "C": C}, [("f", "A", "B", f), ("g", "B", "C", g)])
                                return Witness(AxiomId.A2_1e, d, "f and g∘f are in E but g is not")

                            t.fail((_sizes(cat, A, B, C), key), build)

                        t.guard(one)


def _check_f(ctx: Context, t: Tally):
    cat = ctx.cat
    for yi, Y in enumerate(ctx.objs):
        for mi_, M in enumerate(ctx.objs):
            for ei, e in enumerate(ctx.members(M, Y)):
                for xi, X in enumerate(ctx.objs):
                    for mi, m in ctx.representatives(X, M):
                        if not cat.is_mono(m):
                            continue

                        def one(e=e, m=m, X=X, M=M, Y=Y, key=(yi, mi_, ei, xi, mi)):
                            if ctx.factorization(cat.compose(e, m)) is not None:
                                t.ok()
                                return

                            def build():
                                d = _diagram("factor", {"X": X, "M": M, "Y": Y}, [("m", "X", "M", m), ("e", "M", "Y", e)])
                                return Witness(AxiomId.A2_1f, d, "e∘m has no (E, mono) factorization within the bound", ctx.bound)

                            t.fail((_sizes(cat, X, M, Y), key), build)

                        t.guard(one)


def _check_g(ctx: Context, t: Tally):
    cat = ctx.cat
    for key, B, fp, f, w in _extension_pairs(ctx):
        def one(key=key, B=B, fp=fp, f=f, w=w):
            k1, k2 = ctx.kernel(f), ctx.kernel(fp)
            tk = cat.lift_through_mono(k2.incl, cat.compose(w, k1.incl))
            if tk is None:
                raise EngineInconsistency("induced kernel map must exist")
            if ctx.reduce:
                choices = [(cat.identity(k1.obj), cat.identity(k2.obj))] if ctx.member(tk) else []
            else:
                choices = []
                for a in ctx.isos_into(k1.obj):
                    for b in ctx.isos_into(k2.obj):
                        u = cat.chain(cat.inverse(b), tk, a)
                        if ctx.member(u):
                            choices.append((a, b))
            if not choices:
                return
            if ctx.member(w):
                t.ok()
                return
            a, b = choices[0]

            def build():
                k = cat.compose(k1.incl, a)
                kp = cat.compose(k2.incl, b)
                u = cat.chain(cat.inverse(b), tk, a)
                d = _diagram(
                    "extension",
                    {"K": k.dom, "A": f.dom, "B": B, "K'": kp.dom, "A'": fp.dom},
                    [("k", "K", "A", k), ("f", "A", "B", f), ("k'", "K'", "A'", kp),
                     ("f'", "A'", "B", fp), ("u", "K", "K'", u), ("w", "A", "A'", w)],
                    [(["f'", "w"], ["f"]), (["w", "k"], ["k'", "u"])],
                )
                return Witness(AxiomId.A2_1g, d, "f, f' and u are in E but w is not")

            t.fail((_sizes(cat, k1.obj, f.dom, fp.dom, B), key), build)

        t.guard(one)


def _check_2c(ctx: Context, t: Tally):
    cat = ctx.cat
    for b2i, B2 in enumerate(ctx.objs):
        for a2i, A2 in enumerate(ctx.objs):
            for fpi, fp in ctx.representatives(A2, B2, ctx.members(A2, B2)):
                kfp = None
                for bi, B in enumerate(ctx.objs):
                    for vi, v in enumerate(ctx.homs(B, B2)):
                        try:
                            if not (cat.is_mono(v) and _flag(cat, "normal_mono", v)):
                                continue
                        except LimitMissing:
                            t.skip()
                            continue
                        for ai, A in enumerate(ctx.objs):
                            for fi, f in ctx.representatives(A, B, ctx.members(A, B)):
                                target = cat.compose(v, f)
                                for wi, w in enumerate(cat.solutions(fp, target)):
                                    if not cat.is_mono(w):
                                        continue

                                    def one(fp=fp, v=v, f=f, w=w, key=(b2i, a2i, fpi, bi, vi, ai, fi, wi)):
                                        kf = ctx.kernel(fp).incl
                                        if cat.lift_through_mono(w, kf) is None:
                                            return
                                        if _flag(cat, "normal_mono", w):
                                            t.ok()
                                            return

                                        def build():
                                            d = _diagram(
                                                "square",
                                                {"A": f.dom, "B": f.cod, "A'": fp.dom, "B'": fp.cod},
                                                [("f", "A", "B", f), ("w", "A", "A'", w), ("v", "B", "B'", v), ("f'", "A'", "B'", fp)],
                                                [(["v", "f"], ["f'", "w"])],
                                            )
                                            return Witness(AxiomId.C2_2c, d, "w is not a normal monomorphism")

                                        t.fail((_sizes(cat, f.dom, f.cod, fp.dom, fp.cod), key), build)

                                    t.guard(one)


def _flag(cat, kind, f) -> bool:
    v = flag(cat, kind, f)
    if v is None:
        raise LimitMissing(f"{kind} undecided")
    return v


def _check_2d(ctx: Context, t: Tally):
    cat = ctx.cat
    for ci, C in enumerate(ctx.objs):
        for bi, B in enumerate(ctx.objs):
            for e2i, e2 in ctx.representatives(B, C, ctx.members(B, C)):
                for ai, A in enumerate(ctx.objs):
                    for e1i, e1 in ctx.representatives(A, C, ctx.members(A, C)):
                        for fi, f in enumerate(cat.solutions(e2, e1)):
                            def one(e1=e1, e2=e2, f=f, key=(ci, bi, e2i, ai, e1i, fi)):
                                k1, k2 = ctx.kernel(e1), ctx.kernel(e2)
                                tk = cat.lift_through_mono(k2.incl, cat.compose(f, k1.incl))
                                if tk is None or not cat.is_iso(tk):
                                    return
                                if ctx.factorization(f) is not None:
                                    t.ok()
                                    return

                                def build():
                                    d = _diagram(
                                        "triangle",
                                        {"A": e1.dom, "B": e2.dom, "C": C},
                                        [("f", "A", "B", f), ("e1", "A", "C", e1), ("e2", "B", "C", e2)],
                                        [(["e2", "f"], ["e1"])],
                                    )
                                    return Witness(AxiomId.C2_2d, d, "f has no (E, mono) factorization within the bound", ctx.bound)

                                t.fail((_sizes(cat, e1.dom, e2.dom, C), key), build)

                            t.guard(one)


CHECKERS = {
    AxiomId.A2_1a: _check_a,
    AxiomId.A2_1b: _check_b,
    AxiomId.A2_1c: _check_c,
    AxiomId.A2_1d: _check_d,
    AxiomId.A2_1e: _check_e,
    AxiomId.A2_1f: _check_f,
    AxiomId.A2_1g: _check_g,
    AxiomId.C2_2a: _check_2a,
    AxiomId.C2_2b: _check_2b,
    AxiomId.C2_2c: _check_2c,
    AxiomId.C2_2d: _check_2d,
}


def check_axiom(cat: Category, E: EClass, axiom: AxiomId, bound: int | None, ctx: Context | None = None) -> Verdict:
    """Enumerate the configurations of ``axiom`` within ``bound``."""
    ctx = ctx or Context(cat, E, bound)
    t = Tally()
    label = bound_label(cat, bound)
    try:
        CHECKERS[axiom](ctx, t)
    except BudgetError as e:
        return Verdict(EXHAUSTED, instances_checked=t.checked, inapplicable=t.inapplicable, bound=label, detail=str(e))
    if t.best is not None:
        w = t.best[1]()
        # a witness that does not reproduce in isolation is an engine bug
        again = check_instance(cat, E, w)
        if again.status != FAILS:
            raise EngineInconsistency(f"witness for {axiom.value} does not re-check: {again.detail}")
        return Verdict(FAILS, witness=w, instances_checked=t.checked, inapplicable=t.inapplicable, bound=label, detail=w.detail)
    if t.checked == 0 and t.inapplicable > 0:
        return Verdict(INAPPLICABLE, instances_checked=0, inapplicable=t.inapplicable, bound=label,
                       detail="every configuration needed a missing limit")
    exact = cat.backend == "tablecat"
    return Verdict(HOLDS if exact else HOLDS_BOUNDED, instances_checked=t.checked, inapplicable=t.inapplicable, bound=label)


def check_axioms(cat: Category, E: EClass, axioms: Sequence[AxiomId], bound: int | None, jobs: int = 1) -> dict[AxiomId, Verdict]:
    if jobs > 1 and len(axioms) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_check_one, [(cat, E, a, bound) for a in axioms]))
        return dict(zip(axioms, results))
    ctx = Context(cat, E, bound)
    return {a: check_axiom(cat, E, a, bound, ctx) for a in axioms}


def _check_one(args):
    cat, E, a, bound = args
    return check_axiom(cat, E, a, bound)


def search_counterexample(cat: Category, E: EClass, axiom: AxiomId, bound: int | None) -> Witness | None:
    v = check_axiom(cat, E, axiom, bound)
    return v.witness if v.status == FAILS else None


# -- single instances ----------------------------------------------------------------


def _require(cond: bool, clause: str, detail: str = "") -> None:
    if not cond:
        raise HypothesisError(clause, detail)


def _require_commutes(cat: Category, d: Diagram) -> None:
    v = diagram_commutes(cat, d)
    if not v.ok:
        raise HypothesisError("diagram does not commute", v.detail)


def check_short_five_instance(cat: Category, E: EClass, d: Diagram) -> Verdict:
    d.validate()
    k, f, kp, fp, w = d["k"], d["f"], d["k'"], d["f'"], d["w"]
    _require(k.dom == kp.dom, "k and k' must share their domain K")
    _require(f.cod == fp.cod, "f and f' must share their codomain B")
    _require(cat.compose(fp, w) == f, "f'∘w = f")
    _require(cat.compose(w, k) == kp, "w∘k = k'")
    _require(is_kernel_of(cat, k, f), "k = ker(f)")
    _require(is_kernel_of(cat, kp, fp), "k' = ker(f')")
    _require(E.member(cat, f), "f in E")
    _require(E.member(cat, fp), "f' in E")
    if cat.is_iso(w):
        return Verdict(HOLDS, instances_checked=1)
    return Verdict(FAILS, instances_checked=1, detail=_short_five_failure(cat, w))


def _short_five_failure(cat: Category, w: Morphism) -> str:
    return "w is not injective" if not cat.is_mono(w) else "w is not an isomorphism"


def check_instance(cat: Category, E: EClass, w: Witness) -> Verdict:
    """Re-check one configuration of an axiom in isolation.

    Raises :class:`HypothesisError` when the diagram is not a configuration
    of the axiom at all.
    """
    d, ax = w.diagram, w.axiom
    d.validate()
    _require_commutes(cat, d)

    def result(ok: bool, detail: str) -> Verdict:
        return Verdict(HOLDS if ok else FAILS, instances_checked=1, detail="" if ok else detail)

    if ax is AxiomId.A2_1a:
        f, g, p1, p2 = d["f"], d["g"], d["p1"], d["p2"]
        _require(E.member(cat, f), "f in E")
        _require(is_pullback_of(cat, p1, p2, f, g), "(P, p1, p2) is a pullback of f and g")
        return result(E.member(cat, p2), "the pullback p2 of f along g is not in E")
    if ax in (AxiomId.A2_1b, AxiomId.C2_2a, AxiomId.C2_2b):
        f = d["f"]
        _require(E.member(cat, f), "f in E")
        if ax is AxiomId.A2_1b:
            return result(is_normal_epi(cat, f), "f is in E but is not a normal epimorphism")
        if ax is AxiomId.C2_2a:
            return result(is_regular_epi(cat, f), "f is in E but is not a regular epimorphism")
        ctx = Context(cat, E, w.bound)
        return result(coker_ker_in_class(ctx, f), "f is in E but no cokernel of ker(f) is in E")
    if ax is AxiomId.A2_1c:
        return check_short_five_instance(cat, E, d)
    if ax in (AxiomId.A2_1d, AxiomId.A2_1e):
        f, g = d["f"], d["g"]
        _require(E.member(cat, f), "f in E")
        gf = cat.compose(g, f)
        if ax is AxiomId.A2_1d:
            _require(E.member(cat, g), "g in E")
            return result(E.member(cat, gf), "f and g are in E but g∘f is not")
        _require(E.member(cat, gf), "g∘f in E")
        return result(E.member(cat, g), "f and g∘f are in E but g is not")
    if ax is AxiomId.A2_1f:
        m, e = d["m"], d["e"]
        _require(cat.is_mono(m), "m is a monomorphism")
        _require(E.member(cat, e), "e in E")
        ctx = Context(cat, E, w.bound)
        return result(ctx.factorization(cat.compose(e, m)) is not None,
                      "e∘m has no (E, mono) factorization within the bound")
    if ax is AxiomId.A2_1g:
        k, f, kp, fp, u, ww = d["k"], d["f"], d["k'"], d["f'"], d["u"], d["w"]
        _require(is_kernel_of(cat, k, f), "k = ker(f)")
        _require(is_kernel_of(cat, kp, fp), "k' = ker(f')")
        for name in ("f", "f'", "u"):
            _require(E.member(cat, d[name]), f"{name} in E")
        return result(E.member(cat, ww), "f, f' and u are in E but w is not")
    if ax is AxiomId.C2_2c:
        f, ww, v, fp = d["f"], d["w"], d["v"], d["f'"]
        _require(E.member(cat, f), "f in E")
        _require(E.member(cat, fp), "f' in E")
        _require(cat.is_mono(ww), "w is a monomorphism")
        _require(is_normal_mono(cat, v), "v is a normal monomorphism")
        _require(cat.lift_through_mono(ww, cat.kernel(fp).incl) is not None, "ker(f') <= w")
        return result(is_normal_mono(cat, ww), "w is not a normal monomorphism")
    if ax is AxiomId.C2_2d:
        f, e1, e2 = d["f"], d["e1"], d["e2"]
        _require(E.member(cat, e1), "e1 in E")
        _require(E.member(cat, e2), "e2 in E")
        k1, k2 = cat.kernel(e1), cat.kernel(e2)
        tk = cat.lift_through_mono(k2.incl, cat.compose(f, k1.incl))
        _require(tk is not None and cat.is_iso(tk), "Ker(e1) = Ker(e2) via the induced map")
        ctx = Context(cat, E, w.bound)
        return result(ctx.factorization(f) is not None, "f has no (E, mono) factorization within the bound")
    raise InputError(f"unknown axiom {ax}")


# -- implications ---------------------------------------------------------------------


class Theorem(enum.Enum):
    T2_3i = "T2_3i"
    T2_3ii = "T2_3ii"
    T2_4i = "T2_4i"
    T2_4ii = "T2_4ii"
    T2_4iii = "T2_4iii"
    C2_5 = "C2_5"
    RemarkGimpliesC = "RemarkGimpliesC"


A = AxiomId
IMPLICATIONS = {
    Theorem.T2_3i: ({A.A2_1b}, {A.C2_2a, A.C2_2b}),
    Theorem.T2_3ii: ({A.A2_1a, A.A2_1c, A.C2_2a, A.C2_2b}, {A.A2_1b}),
    Theorem.T2_4i: ({A.A2_1a, A.A2_1c}, {A.C2_2c}),
    Theorem.T2_4ii: ({A.A2_1c}, {A.C2_2d}),
    Theorem.T2_4iii: ({A.A2_1b, A.C2_2c, A.C2_2d}, {A.A2_1c}),
    # the remark's argument also uses that members of E are normal epis
    Theorem.RemarkGimpliesC: ({A.A2_1b, A.A2_1g}, {A.A2_1c}),
}
EQUIVALENCE = (
    {A.A2_1a, A.A2_1b, A.A2_1c, A.A2_1d, A.A2_1e},
    {A.A2_1a, A.A2_1c, A.A2_1d, A.A2_1e, A.C2_2a, A.C2_2b},
    {A.A2_1a, A.A2_1b, A.A2_1d, A.A2_1e, A.C2_2c, A.C2_2d},
)


@dataclass
class CorpusEntry:
    label: str
    cat: Category
    E: EClass
    bound: int | None


@dataclass
class TheoremTally:
    theorem: Theorem
    entries: int = 0
    antecedent_held: int = 0
    violations: list[str] = field(default_factory=list)


def entry_verdicts(entry: CorpusEntry) -> dict[AxiomId, bool]:
    vs = check_axioms(entry.cat, entry.E, ALL_AXIOMS, entry.bound)
    return {a: v.ok for a, v in vs.items()}


def verify_implication(corpus: Iterable[CorpusEntry], theorems: Sequence[Theorem] = tuple(Theorem), jobs: int = 1):
    """Tally each theorem over the corpus.  Returns ``{theorem: TheoremTally}``."""
    entries = list(corpus)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(entry_verdicts, entries))
    else:
        results = [entry_verdicts(e) for e in entries]
    out = {th: TheoremTally(th) for th in theorems}
    for entry, ok in zip(entries, results):
        for th in theorems:
            tt = out[th]
            tt.entries += 1
            if th is Theorem.C2_5:
                vals = [all(ok[a] for a in s) for s in EQUIVALENCE]
                if any(vals):
                    tt.antecedent_held += 1
                if len(set(vals)) > 1:
                    tt.violations.append(f"{entry.label}: conditions (i),(ii),(iii) evaluate to {vals}")
                continue
            ante, cons = IMPLICATIONS[th]
            if all(ok[a] for a in ante):
                tt.antecedent_held += 1
                bad = sorted(a.value for a in cons if not ok[a])
                if bad:
                    tt.violations.append(f"{entry.label}: consequent {','.join(bad)} fails")
    return out
