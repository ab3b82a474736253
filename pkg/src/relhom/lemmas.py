"""E-exact sequences and the relative snake and 3×3 lemmas."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .axioms import is_kernel_of
from .core import (
    FAILS,
    HOLDS,
    Category,
    Morphism,
    Verdict,
    coimage,
    fails,
    induced_cokernel_map,
    induced_kernel_map,
)
from .eclass import EClass
from .errors import EngineInconsistency, HypothesisError, InputError, LimitMissing


@dataclass
class SequenceSpec:
    """Composable arrows ``A_0 -> A_1 -> ... -> A_n``."""

    arrows: list[Morphism]
    names: list[str] | None = None

    def __post_init__(self):
        if not self.arrows:
            raise InputError("a sequence needs at least one arrow")
        for a, b in zip(self.arrows, self.arrows[1:]):
            if a.cod != b.dom:
                raise InputError("sequence arrows are not composable")
        if self.names is None:
            self.names = [f"A{i}" for i in range(len(self.arrows) + 1)]

    @property
    def objects(self) -> list:
        return [self.arrows[0].dom] + [a.cod for a in self.arrows]

    @classmethod
    def short(cls, cat: Category, f: Morphism, g: Morphism) -> "SequenceSpec":
        Z = cat.zero_object()
        return cls([cat.zero_morphism(Z, f.dom), f, g, cat.zero_morphism(g.cod, Z)], ["0", "A", "B", "C", "0"])


def _member_up_to_iso(cat: Category, E: EClass, e: Morphism) -> bool:
    """``e`` in E, or, for classes not closed under isomorphism, some
    ``α⁻¹∘e`` with ``α`` an isomorphism onto ``cod(e)``."""
    if E.member(cat, e):
        return True
    if E.iso_invariant:
        return False
    K = e.cod
    for X in cat.objects(None if cat.backend == "tablecat" else cat.size(K)):
        for a in cat.homs(X, K):
            inv = cat.inverse(a)
            if inv is not None and E.member(cat, cat.compose(inv, e)):
                return True
    return False


def is_e_exact_at(cat: Category, seq: SequenceSpec, i: int, E: EClass) -> Verdict:
    """Exactness at the ``i``-th object (``0 < i < len(arrows)``)."""
    if not 0 < i < len(seq.arrows):
        raise InputError(f"position {i} is not interior to a sequence of {len(seq.arrows)} arrows")
    before, after = seq.arrows[i - 1], seq.arrows[i]
    node = seq.names[i]
    m = cat.kernel(after).incl
    e = cat.lift_through_mono(m, before)
    if e is None:
        return fails(f"not exact at {node}: the incoming arrow does not factor through the kernel of the outgoing one")
    if not _member_up_to_iso(cat, E, e):
        return fails(f"not exact at {node}: the corestriction onto the kernel is not in E")
    return Verdict(HOLDS, instances_checked=1, detail=f"exact at {node}")


def is_e_exact(cat: Category, seq: SequenceSpec, E: EClass) -> dict[str, Verdict]:
    return {seq.names[i]: is_e_exact_at(cat, seq, i, E) for i in range(1, len(seq.arrows))}


def is_short_e_exact(cat: Category, f: Morphism, g: Morphism, E: EClass) -> Verdict:
    if f.cod != g.dom:
        raise InputError("cod(f) must equal dom(g)")
    if not is_kernel_of(cat, f, g):
        return fails("f is not a kernel of g")
    if not _member_up_to_iso(cat, E, g):
        return fails("g is not in E")
    return Verdict(HOLDS, instances_checked=1)


def _column(cat: Category, u: Morphism, name: str) -> SequenceSpec:
    Z = cat.zero_object()
    k, c = cat.kernel(u), cat.cokernel(u)
    return SequenceSpec(
        [cat.zero_morphism(Z, k.obj), k.incl, u, c.proj, cat.zero_morphism(c.obj, Z)],
        ["0", f"Ker({name})", "dom", "cod", f"Coker({name})", "0"],
    )


def _require_exact(cat, seq: SequenceSpec, E: EClass, positions: Sequence[int], label: str, rename=None) -> None:
    for i in positions:
        v = is_e_exact_at(cat, seq, i, E)
        if not v.ok:
            node = rename.get(seq.names[i], seq.names[i]) if rename else seq.names[i]
            raise HypothesisError(f"{label} not E-exact at {node}", v.detail)


# -- snake -------------------------------------------------------------------------------


@dataclass
class SnakeInput:
    """The two middle rows ``A -f-> B -g-> C -> 0`` and ``0 -> A' -f'-> B' -g'-> C'``
    with vertical maps ``u, v, w``."""

    f: Morphism
    g: Morphism
    fp: Morphism
    gp: Morphism
    u: Morphism
    v: Morphism
    w: Morphism


SIX_TERM_NAMES = ["Ker(u)", "Ker(v)", "Ker(w)", "Coker(u)", "Coker(v)", "Coker(w)"]


@dataclass
class SnakeResult:
    d: Morphism
    six_term: SequenceSpec
    exactness: dict[str, Verdict]
    hypotheses: list[tuple[str, bool]]
    side_conditions: dict[str, bool]
    mode: str
    P: object = None
    pi1: Morphism | None = None
    pi2: Morphism | None = None
    phi: Morphism | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return all(v.ok for v in self.exactness.values())


def _commute_check(cat: Category, s: SnakeInput) -> None:
    if cat.compose(s.fp, s.u) != cat.compose(s.v, s.f):
        raise HypothesisError("grid does not commute", "equation f'∘u = v∘f fails")
    if cat.compose(s.gp, s.v) != cat.compose(s.w, s.g):
        raise HypothesisError("grid does not commute", "equation g'∘v = w∘g fails")


def _shape_check(s: SnakeInput) -> None:
    pairs = [
        ("f", s.f, "g", s.g), ("f'", s.fp, "g'", s.gp),
    ]
    for n1, a, n2, b in pairs:
        if a.cod != b.dom:
            raise InputError(f"cod({n1}) must equal dom({n2})")
    ends = [("u", s.u, s.f.dom, s.fp.dom), ("v", s.v, s.f.cod, s.fp.cod), ("w", s.w, s.g.cod, s.gp.cod)]
    for n, a, dom, cod in ends:
        if a.dom != dom or a.cod != cod:
            raise InputError(f"{n} does not connect the rows")


def _g_split(cat: Category, s: SnakeInput):
    """``(g1', g2')`` with ``g1' = coker(f')`` and ``g2'∘g1' = g'``."""
    g1 = cat.cokernel(s.fp).proj
    g2 = cat.factor_through_epi(g1, s.gp)
    if g2 is None:
        raise HypothesisError("third row", "g' does not factor through coker(f')")
    return g1, g2


def _normal_epi_mono_factorization(cat: Category, E: EClass, h: Morphism) -> bool:
    """``h = m∘e`` with ``e`` a normal epi in E and ``m`` mono.  Such a
    factorization is unique up to isomorphism, with ``e = coker(ker h)``."""
    q, c = coimage(cat, h)
    return c is not None and cat.is_mono(c) and _member_up_to_iso(cat, E, q)


def check_snake_side_conditions(cat: Category, s: SnakeInput, E: EClass, d: Morphism | None = None) -> dict[str, bool]:
    """The three extra conditions needed in the weakly homological case."""
    out: dict[str, bool] = {}
    g1, g2 = _g_split(cat, s)
    cw = cat.cokernel(s.w).proj
    out["(b) coker(w)∘g2' in E"] = _member_up_to_iso(cat, E, cat.compose(cw, g2))
    cv = cat.cokernel(s.v).proj
    out["coker(v)∘f' and coker(w)∘g2' have (normal epi in E, mono) factorizations"] = (
        _normal_epi_mono_factorization(cat, E, cat.compose(cv, s.fp))
        and _normal_epi_mono_factorization(cat, E, cat.compose(cw, g2))
    )
    key = "<phi, pi2> into A'×_Coker(u) Ker(w) is in E"
    try:
        d0, P, pi1, pi2, phi = _construct(cat, s)
        d = d0 if d is None else d
        cu = cat.cokernel(s.u).proj
        Q = cat.pullback(cu, d)
        pair = cat.pair_into_pullback(phi, pi2, Q)
        out[key] = _member_up_to_iso(cat, E, pair)
    except (HypothesisError, EngineInconsistency):
        out[key] = False
    return out


def _construct(cat: Category, s: SnakeInput):
    """``(d, P, π1, π2, φ)``."""
    kw = cat.kernel(s.w)
    pb = cat.pullback(s.g, kw.incl)
    pi1, pi2 = pb.p1, pb.p2
    vpi1 = cat.compose(s.v, pi1)
    if not cat.is_zero(cat.compose(s.gp, vpi1)):
        raise EngineInconsistency("g'∘v∘π1 should vanish")
    if not cat.is_mono(s.fp):
        raise HypothesisError("third row", "f' is not a monomorphism")
    phi = cat.lift_through_mono(s.fp, vpi1)
    if phi is None:
        raise EngineInconsistency("v∘π1 does not lift through f' although the hypotheses hold")
    if not cat.is_epi(pi2):
        raise EngineInconsistency("π2 is not an epimorphism although the hypotheses hold")
    cu = cat.cokernel(s.u).proj
    d = cat.factor_through_epi(pi2, cat.compose(cu, phi))
    if d is None:
        raise EngineInconsistency("coker(u)∘φ does not factor through π2")
    return d, pb.obj, pi1, pi2, phi


def snake_hypotheses(cat: Category, s: SnakeInput, E: EClass) -> list[tuple[str, bool]]:
    """Check every hypothesis, raising on the first failure; returns the report."""
    _shape_check(s)
    _commute_check(cat, s)
    report: list[tuple[str, bool]] = [("grid commutes", True)]
    for name, arrow in (("u", s.u), ("v", s.v), ("w", s.w)):
        col = _column(cat, arrow, name)
        _require_exact(cat, col, E, range(1, 5), f"column {name}",
                       {"dom": {"u": "A", "v": "B", "w": "C"}[name], "cod": {"u": "A'", "v": "B'", "w": "C'"}[name]})
        report.append((f"column {name} E-exact", True))
    Z = cat.zero_object()
    row2 = SequenceSpec([s.f, s.g, cat.zero_morphism(s.g.cod, Z)], ["A", "B", "C", "0"])
    _require_exact(cat, row2, E, (1, 2), "second row")
    report.append(("second row E-exact at B and C", True))
    row3 = SequenceSpec([cat.zero_morphism(Z, s.fp.dom), s.fp, s.gp], ["0", "A'", "B'", "C'"])
    _require_exact(cat, row3, E, (1, 2), "third row")
    report.append(("third row E-exact at A' and B'", True))
    if _member_up_to_iso(cat, E, s.gp):
        report.append(("g' in E", True))
        return report
    report.append(("g' in E", False))
    g1, g2 = _g_split(cat, s)
    if not (_member_up_to_iso(cat, E, g1) and cat.is_mono(g2)):
        raise HypothesisError("condition (a)", "coker(f') is not in E or g2' is not a monomorphism")
    report.append(("(a) coker(f') in E and g2' mono", True))
    cw = cat.cokernel(s.w).proj
    if not _member_up_to_iso(cat, E, cat.compose(cw, g2)):
        raise HypothesisError("condition (b)", "coker(w)∘g2' is not in E")
    report.append(("(b) coker(w)∘g2' in E", True))
    return report


def snake(cat: Category, s: SnakeInput, E: EClass, mode: str = "homological") -> SnakeResult:
    if mode not in ("homological", "weak"):
        raise InputError(f"unknown snake mode {mode!r}")
    hyps = snake_hypotheses(cat, s, E)
    d, P, pi1, pi2, phi = _construct(cat, s)
    k1 = induced_kernel_map(cat, s.f, s.u, s.v, s.fp)
    k2 = induced_kernel_map(cat, s.g, s.v, s.w, s.gp)
    c1 = induced_cokernel_map(cat, s.f, s.u, s.v, s.fp)
    c2 = induced_cokernel_map(cat, s.g, s.v, s.w, s.gp)
    six = SequenceSpec([k1, k2, d, c1, c2], list(SIX_TERM_NAMES))
    exactness = {six.names[i]: is_e_exact_at(cat, six, i, E) for i in range(1, 5)}
    side = check_snake_side_conditions(cat, s, E, d)
    notes = ["naturality of d is not checked"]
    if mode == "weak" and not all(side.values()):
        notes.append("some side conditions fail: exactness of the six-term sequence is not guaranteed")
    return SnakeResult(d, six, exactness, hyps, side, mode, P, pi1, pi2, phi, notes)


# -- 3×3 ------------------------------------------------------------------------------


@dataclass
class GridInput:
    """Rows ``(f, g)``, ``(f', g')``, ``(f'', g'')``; columns ``(u, u')``,
    ``(v, v')``, ``(w, w')``."""

    f: Morphism
    g: Morphism
    fp: Morphism
    gp: Morphism
    fpp: Morphism
    gpp: Morphism
    u: Morphism
    up: Morphism
    v: Morphism
    vp: Morphism
    w: Morphism
    wp: Morphism


@dataclass
class GridResult:
    verdict: Verdict
    first_row: Verdict
    last_row: Verdict
    pairing_in_E: bool
    hypotheses: list[tuple[str, bool]]


GRID_SQUARES = (
    ("f'∘u = v∘f", "fp", "u", "v", "f"),
    ("g'∘v = w∘g", "gp", "v", "w", "g"),
    ("f''∘u' = v'∘f'", "fpp", "up", "vp", "fp"),
    ("g''∘v' = w'∘g'", "gpp", "vp", "wp", "gp"),
)


def grid_hypotheses(cat: Category, G: GridInput, E: EClass) -> list[tuple[str, bool]]:
    for label, a, b, c, d in GRID_SQUARES:
        x, y, z, t = (getattr(G, n) for n in (a, b, c, d))
        if x.dom != y.cod or z.dom != t.cod:
            raise InputError(f"square {label} is not well formed")
        if cat.compose(x, y) != cat.compose(z, t):
            raise HypothesisError("grid does not commute", f"square {label} fails")
    report = [("grid commutes", True)]
    for name, a, b in (("left column", G.u, G.up), ("middle column", G.v, G.vp), ("right column", G.w, G.wp),
                       ("middle row", G.fp, G.gp)):
        v = is_short_e_exact(cat, a, b, E)
        if not v.ok:
            raise HypothesisError(f"{name} not E-exact", v.detail)
        report.append((f"{name} E-exact", True))
    return report


def pairing_condition(cat: Category, G: GridInput, E: EClass) -> bool:
    """``<v', g'>: B' -> B''×_C'' C'`` lies in E."""
    pb = cat.pullback(G.gpp, G.wp)
    t = cat.pair_into_pullback(G.vp, G.gp, pb)
    return _member_up_to_iso(cat, E, t)


def three_by_three(cat: Category, G: GridInput, E: EClass, direction: str = "both") -> GridResult:
    if direction not in ("both", "first-from-last", "last-from-first"):
        raise InputError(f"unknown direction {direction!r}")
    hyps = grid_hypotheses(cat, G, E)
    first = is_short_e_exact(cat, G.f, G.g, E)
    last = is_short_e_exact(cat, G.fpp, G.gpp, E)
    try:
        cond = pairing_condition(cat, G, E)
    except LimitMissing:
        cond = False
    bad = []
    if direction in ("both", "first-from-last") and last.ok and not first.ok:
        bad.append("last row is E-exact but the first row is not: " + first.detail)
    if direction in ("both", "last-from-first") and first.ok and not last.ok:
        bad.append("first row is E-exact but the last row is not: " + last.detail)
    verdict = fails("; ".join(bad)) if bad else Verdict(HOLDS, instances_checked=1)
    return GridResult(verdict, first, last, cond, hyps)
