"""Explicitly tabulated finite pointed categories.

Objects are indices into ``names``; a morphism's ``data`` is its arrow index.
Limits and colimits are found by exhaustive cone comparison and may be
missing, in which case :class:`LimitMissing` is raised.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterator, Sequence

from .core import (
    FAILS,
    HOLDS,
    Category,
    CoequalizerData,
    CokernelData,
    KernelData,
    Morphism,
    PullbackData,
    Verdict,
    fails,
)
from .errors import BudgetError, InputError, LimitMissing

ENUMERATION_BUDGET = 6


@dataclass(frozen=True)
class Table:
    """Raw category data.  ``compose`` maps ``(g, f)`` to ``g∘f`` by arrow index."""

    names: tuple[str, ...]
    arrows: tuple[tuple[str, int, int], ...]
    identities: tuple[int, ...]
    compose: tuple[tuple[tuple[int, int], int], ...]
    zero: int | None
    label: str = ""


def validate(table: Table) -> Verdict:
    """Check identities, composition closure, associativity and the zero object."""
    n = len(table.names)
    arrows = table.arrows
    comp = dict(table.compose)
    if n == 0:
        return fails("category has no objects")
    for x, i in enumerate(table.identities):
        if not 0 <= i < len(arrows) or arrows[i][1:] != (x, x):
            return fails(f"identity of {table.names[x]} is not an endomorphism of it")
    for (g, f), h in comp.items():
        if arrows[f][2] != arrows[g][1]:
            return fails(f"composite {arrows[g][0]}∘{arrows[f][0]} given for a non-composable pair")
        if arrows[h][1:] != (arrows[f][1], arrows[g][2]):
            return fails(f"composite {arrows[g][0]}∘{arrows[f][0]} = {arrows[h][0]} has the wrong type")
    for g, (gn, gd, gc) in enumerate(arrows):
        for f, (fn, fd, fc) in enumerate(arrows):
            if fc == gd and (g, f) not in comp:
                return fails(f"composite {gn}∘{fn} is not defined")
    for f, (fn, fd, fc) in enumerate(arrows):
        if comp[(table.identities[fc], f)] != f or comp[(f, table.identities[fd])] != f:
            return fails(f"identity law fails for {fn}")
    for h, (hn, hd, hc) in enumerate(arrows):
        for g, (gn, gd, gc) in enumerate(arrows):
            if gc != hd:
                continue
            for f, (fn, fd, fc) in enumerate(arrows):
                if fc != gd:
                    continue
                if comp[(h, comp[(g, f)])] != comp[(comp[(h, g)], f)]:
                    return fails(f"associativity fails for ({hn}, {gn}, {fn})")
    homsize = [[0] * n for _ in range(n)]
    for _, d, c in arrows:
        homsize[d][c] += 1
    zeros = [z for z in range(n) if all(homsize[z][x] == 1 and homsize[x][z] == 1 for x in range(n))]
    if table.zero is None:
        if not zeros:
            return fails("no zero object")
    elif table.zero not in zeros:
        return fails(f"no zero object ({table.names[table.zero]} is not one)")
    return Verdict(HOLDS, instances_checked=1)


class TableCat(Category):
    backend = "tablecat"

    def __init__(self, table: Table, check: bool = True):
        if check:
            v = validate(table)
            if v.status == FAILS:
                raise InputError(f"invalid category table: {v.detail}")
        self.table = table
        self.names = table.names
        self._comp = dict(table.compose)
        zero = table.zero
        if zero is None:
            zero = next(z for z in range(len(table.names)) if self._is_zero_object(z))
        self.zero = zero
        self._homs: dict[tuple[int, int], list[Morphism]] = {}
        for i, (_, d, c) in enumerate(table.arrows):
            self._homs.setdefault((d, c), []).append(Morphism(d, c, i))
        self._limit_cache: dict = {}

    def __reduce__(self):
        return (TableCat, (self.table, False))

    def _is_zero_object(self, z: int) -> bool:
        n = len(self.table.names)
        cnt = {}
        for _, d, c in self.table.arrows:
            cnt[(d, c)] = cnt.get((d, c), 0) + 1
        return all(cnt.get((z, x), 0) == 1 and cnt.get((x, z), 0) == 1 for x in range(n))

    @property
    def label(self) -> str:
        return self.table.label

    def arrow(self, name: str) -> Morphism:
        for i, (n, d, c) in enumerate(self.table.arrows):
            if n == name:
                return Morphism(d, c, i)
        raise InputError(f"category has no arrow named {name!r}")

    def arrow_name(self, f: Morphism) -> str:
        return self.table.arrows[f.data][0]

    def object_named(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"category has no object named {name!r}") from None

    def all_morphisms(self) -> list[Morphism]:
        return [Morphism(d, c, i) for i, (_, d, c) in enumerate(self.table.arrows)]

    # -- contract ---------------------------------------------------------------

    def identity(self, A: int) -> Morphism:
        return Morphism(A, A, self.table.identities[A])

    def _compose(self, g: Morphism, f: Morphism) -> Morphism:
        return Morphism(f.dom, g.cod, self._comp[(g.data, f.data)])

    def zero_object(self) -> int:
        return self.zero

    def objects(self, bound: int | None = None) -> list[int]:
        return list(range(len(self.names)))

    def homs(self, A, B) -> Iterator[Morphism]:
        return iter(self._homs.get((A, B), ()))

    def zero_morphism(self, A, B) -> Morphism:
        to_zero = self._homs[(A, self.zero)][0]
        from_zero = self._homs[(self.zero, B)][0]
        return self._compose(from_zero, to_zero)

    @cached_property
    def op(self) -> "TableCat":
        t = self.table
        arrows = tuple((n, c, d) for n, d, c in t.arrows)
        comp = tuple(((f, g), h) for (g, f), h in t.compose)
        return TableCat(Table(t.names, arrows, t.identities, comp, self.zero, t.label + "^op"), check=False)

    def find_limit(self, vertices: Sequence[int], edges: Sequence[tuple[Morphism, int, int]]):
        """Limit of a finite diagram, or ``None``.

        ``vertices`` lists the objects of the diagram; ``edges`` are
        ``(arrow, i, j)`` with ``arrow: vertices[i] -> vertices[j]``.  The
        chosen limit is the least apex index, then least legs.
        """
        key = (tuple(vertices), tuple(edges))
        if key in self._limit_cache:
            return self._limit_cache[key]
        cones = []
        for X in self.objects():
            for legs in itertools.product(*(list(self.homs(X, v)) for v in vertices)):
                if all(self.compose(e, legs[i]) == legs[j] for e, i, j in edges):
                    cones.append((X, legs))
        result = None
        for L, llegs in cones:
            unique = True
            for X, xlegs in cones:
                count = sum(
                    1
                    for t in self.homs(X, L)
                    if all(self.compose(l, t) == x for l, x in zip(llegs, xlegs))
                )
                if count != 1:
                    unique = False
                    break
            if unique:
                result = (L, llegs)
                break
        self._limit_cache[key] = result
        return result

    def pullback(self, f: Morphism, g: Morphism) -> PullbackData:
        if f.cod != g.cod:
            raise InputError("pullback: legs must share a codomain")
        lim = self.find_limit([f.dom, g.dom, f.cod], [(f, 0, 2), (g, 1, 2)])
        if lim is None:
            raise LimitMissing(f"no pullback of {self.arrow_name(f)} and {self.arrow_name(g)}")
        P, (p1, p2, _) = lim
        return PullbackData(P, p1, p2, f, g)

    def kernel(self, f: Morphism) -> KernelData:
        from_zero = self._homs[(self.zero, f.cod)][0]
        try:
            pb = self.pullback(f, from_zero)
        except LimitMissing:
            raise LimitMissing(f"no kernel of {self.arrow_name(f)}") from None
        return KernelData(pb.obj, pb.p1)

    def equalizer(self, f: Morphism, g: Morphism):
        lim = self.find_limit([f.dom, f.cod], [(f, 0, 1), (g, 0, 1)])
        if lim is None:
            raise LimitMissing(f"no equalizer of {self.arrow_name(f)} and {self.arrow_name(g)}")
        E, (e, _) = lim
        return E, e

    def cokernel(self, f: Morphism) -> CokernelData:
        op = self.op
        try:
            k = op.kernel(Morphism(f.cod, f.dom, f.data))
        except LimitMissing:
            raise LimitMissing(f"no cokernel of {self.arrow_name(f)}") from None
        return CokernelData(k.obj, Morphism(f.cod, k.obj, k.incl.data))

    def coequalizer(self, f: Morphism, g: Morphism) -> CoequalizerData:
        op = self.op
        try:
            Q, q = op.equalizer(Morphism(f.cod, f.dom, f.data), Morphism(g.cod, g.dom, g.data))
        except LimitMissing:
            raise LimitMissing(f"no coequalizer of {self.arrow_name(f)} and {self.arrow_name(g)}") from None
        return CoequalizerData(Q, Morphism(f.cod, Q, q.data))

    def has_standing_limits(self) -> bool:
        """Finite limits (pullbacks suffice with the zero object) and cokernels."""
        mors = self.all_morphisms()
        try:
            for f in mors:
                self.cokernel(f)
                for g in mors:
                    if g.cod == f.cod:
                        self.pullback(f, g)
        except LimitMissing:
            return False
        return True

    # -- serialization ----------------------------------------------------------

    def object_payload(self, A: int):
        return {"name": self.names[A]}

    def morphism_payload(self, f: Morphism):
        return {"arrow": self.arrow_name(f)}

    def parse_object(self, payload):
        if "name" not in payload:
            raise InputError("tablecat object needs 'name'")
        return self.object_named(payload["name"])

    def parse_morphism(self, dom, cod, payload) -> Morphism:
        if "arrow" not in payload:
            raise InputError("tablecat morphism needs 'arrow'")
        f = self.arrow(payload["arrow"])
        if (f.dom, f.cod) != (dom, cod):
            raise InputError(f"arrow {payload['arrow']!r} does not have the declared endpoints")
        return f


# -- file format ----------------------------------------------------------------


def table_from_document(doc: dict) -> Table:
    try:
        names = tuple(str(x) for x in doc["objects"])
        idx = {n: i for i, n in enumerate(names)}
        arrows = []
        for a in doc["arrows"]:
            arrows.append((str(a["name"]), idx[a["dom"]], idx[a["cod"]]))
        aidx = {a[0]: i for i, a in enumerate(arrows)}
        if len(aidx) != len(arrows):
            raise InputError("duplicate arrow names")
        ids = tuple(aidx[doc["identities"][n]] for n in names)
        comp: dict[tuple[int, int], int] = {}
        for g, f, h in doc.get("compose", []):
            comp[(aidx[g], aidx[f])] = aidx[h]
        # composites with identities may be omitted
        for i, (_, d, c) in enumerate(arrows):
            comp.setdefault((ids[c], i), i)
            comp.setdefault((i, ids[d]), i)
        zero = idx[doc["zero"]] if doc.get("zero") is not None else None
    except KeyError as e:
        raise InputError(f"category table refers to unknown or missing entry {e}") from None
    return Table(names, tuple(arrows), ids, tuple(sorted(comp.items())), zero, str(doc.get("name", "")))


def table_to_document(t: Table) -> dict:
    names = t.names
    ids = set(t.identities)
    return {
        "format-version": "1",
        "shape": "category-table",
        "name": t.label,
        "objects": list(names),
        "arrows": [{"name": n, "dom": names[d], "cod": names[c]} for n, d, c in t.arrows],
        "identities": {names[x]: t.arrows[i][0] for x, i in enumerate(t.identities)},
        "compose": [
            [t.arrows[g][0], t.arrows[f][0], t.arrows[h][0]]
            for (g, f), h in t.compose
            if g not in ids and f not in ids
        ],
        "zero": None if t.zero is None else names[t.zero],
    }


BUNDLED = ("trivial", "two_zero", "point_and_x", "idempotent", "involution", "nilpotent")


def bundled(name: str) -> TableCat:
    try:
        raw = resources.files("relhom").joinpath(f"data/categories/{name}.json").read_text()
    except FileNotFoundError:
        raise InputError(f"no bundled category named {name!r}") from None
    return TableCat(table_from_document(json.loads(raw)))


def load(ref: str | Path) -> TableCat:
    """A bundled category name or a path to a table file."""
    p = Path(ref)
    if p.suffix == ".json" or p.exists():
        doc = json.loads(p.read_text())
        return TableCat(table_from_document(doc))
    return bundled(str(ref))


# -- enumeration ------------------------------------------------------------------


def _object_layouts(max_morphisms: int):
    """Yield ``(n, zero_flags)`` with object 0 the designated zero."""
    n = 1
    while n * n <= max_morphisms:
        for flags in itertools.product((False, True), repeat=n - 1):
            # zero objects first after the designated one keeps layouts distinct up to relabeling
            if list(flags) != sorted(flags, reverse=True):
                continue
            yield n, (True,) + flags
        n += 1


def _hom_layout(n: int, zflags: tuple[bool, ...], extras: dict[tuple[int, int], int]):
    """Arrow list for a layout: per hom-set, identity (if endo), zero, then extras."""
    arrows = []
    ids = [0] * n
    zeros = {}
    ext = {}
    for x in range(n):
        for y in range(n):
            if x == y:
                ids[x] = len(arrows)
                arrows.append(("id", x, y))
                if zflags[x]:
                    zeros[(x, y)] = ids[x]
                    continue
            zeros[(x, y)] = len(arrows)
            arrows.append(("zero", x, y))
            if zflags[x] or zflags[y]:
                continue
            for k in range(extras.get((x, y), 0)):
                ext.setdefault((x, y), []).append(len(arrows))
                arrows.append(("extra", x, y))
    return arrows, ids, zeros, ext


def _canonical_key(n, arrows, comp):
    """Lexicographically least encoding under object and extra-arrow relabeling."""
    best = None
    homs: dict[tuple[int, int], list[int]] = {}
    for i, (_, d, c) in enumerate(arrows):
        homs.setdefault((d, c), []).append(i)
    zero_objs = [x for x in range(n) if all(len(homs[(x, y)]) == 1 and len(homs[(y, x)]) == 1 for y in range(n))]
    for perm in itertools.permutations(range(n)):
        if perm[0] not in zero_objs:
            continue
        inv = {p: i for i, p in enumerate(perm)}
        # per hom-set, the non-forced arrows can be permuted freely
        pairs = [(perm[a], perm[b]) for a in range(n) for b in range(n)]
        choices = []
        for (x, y) in pairs:
            hs = homs[(x, y)]
            fixed = [h for h in hs if arrows[h][0] != "extra"]
            free = [h for h in hs if arrows[h][0] == "extra"]
            choices.append([fixed + list(p) for p in itertools.permutations(free)])
        for combo in itertools.product(*choices):
            order = [h for hs in combo for h in hs]
            pos = {h: i for i, h in enumerate(order)}
            shape = tuple(len(hs) for hs in combo)
            enc = tuple(sorted((pos[g], pos[f], pos[h]) for (g, f), h in comp.items()))
            key = (shape, enc)
            if best is None or key < best[0]:
                best = (key, order, perm)
    return best


def enumerate_categories(max_morphisms: int, budget: int = ENUMERATION_BUDGET) -> Iterator[TableCat]:
    """All pointed categories with at most ``max_morphisms`` arrows, one per
    isomorphism class, in a deterministic order."""
    if max_morphisms > budget:
        raise BudgetError(f"category enumeration beyond {budget} morphisms needs a larger budget")
    found: dict = {}
    for n, zflags in _object_layouts(max_morphisms):
        base, ids0, zeros0, _ = _hom_layout(n, zflags, {})
        spare = max_morphisms - len(base)
        if spare < 0:
            continue
        slots = [(x, y) for x in range(n) for y in range(n) if not zflags[x] and not zflags[y]]
        for total in range(spare + 1):
            for dist in _distributions(total, len(slots)):
                extras = {s: k for s, k in zip(slots, dist) if k}
                arrows, ids, zeros, ext = _hom_layout(n, zflags, extras)
                for comp in _compositions(n, arrows, ids, zeros):
                    key = _canonical_key(n, arrows, comp)
                    if key[0] in found:
                        continue
                    t = _build_table(n, arrows, ids, comp, key[1], key[2])
                    if validate(t).status != FAILS:
                        found[key[0]] = t
    ordered = sorted(found.items(), key=lambda kv: (len(kv[1].arrows), len(kv[1].names), kv[0]))
    for k, (_, t) in enumerate(ordered):
        yield TableCat(Table(t.names, t.arrows, t.identities, t.compose, t.zero, f"enum{max_morphisms}-{k}"))


def _distributions(total: int, slots: int):
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _distributions(total - first, slots - 1):
            yield (first,) + rest


def _compositions(n, arrows, ids, zeros):
    """All composition tables consistent with identities and zero morphisms."""
    comp: dict[tuple[int, int], int] = {}
    free = []
    for g, (gk, gd, gc) in enumerate(arrows):
        for f, (fk, fd, fc) in enumerate(arrows):
            if fc != gd:
                continue
            if g == ids[gd]:
                comp[(g, f)] = f
            elif f == ids[fd]:
                comp[(g, f)] = g
            elif gk == "zero" or fk == "zero" or (zeros.get((fd, fc)) == f) or (zeros.get((gd, gc)) == g):
                comp[(g, f)] = zeros[(fd, gc)]
            else:
                targets = [h for h, (_, hd, hc) in enumerate(arrows) if hd == fd and hc == gc]
                free.append(((g, f), targets))
    for choice in itertools.product(*(t for _, t in free)):
        full = dict(comp)
        for (key, _), h in zip(free, choice):
            full[key] = h
        if _associative(arrows, full):
            yield full


def _associative(arrows, comp) -> bool:
    for (g, f), gf in comp.items():
        for h, (_, hd, hc) in enumerate(arrows):
            if hd != arrows[g][2]:
                continue
            if comp[(h, gf)] != comp[(comp[(h, g)], f)]:
                return False
    return True


def _build_table(n, arrows, ids, comp, order, perm) -> Table:
    # perm[i] is the old object placed at position i; order lists old arrow indices in new order
    new_obj = {old: i for i, old in enumerate(perm)}
    names = tuple("0" if i == 0 else f"X{i}" for i in range(n))
    pos = {old: i for i, old in enumerate(order)}
    counters: dict[tuple[int, int], int] = {}
    new_arrows = []
    for old in order:
        kind, d, c = arrows[old]
        nd, nc = new_obj[d], new_obj[c]
        if old == ids[d] and d == c:
            name = f"1_{names[nd]}"
        elif kind == "zero":
            name = f"0_{names[nd]}_{names[nc]}"
        else:
            k = counters.get((nd, nc), 0)
            counters[(nd, nc)] = k + 1
            name = f"e{k}_{names[nd]}_{names[nc]}"
        new_arrows.append((name, nd, nc))
    new_ids = tuple(pos[ids[perm[i]]] for i in range(n))
    new_comp = tuple(sorted(((pos[g], pos[f]), pos[h]) for (g, f), h in comp.items()))
    return Table(names, tuple(new_arrows), new_ids, new_comp, 0)


def isomorphic(a: TableCat, b: TableCat) -> bool:
    """Exhaustive search for an isomorphism of categories."""
    n = len(a.names)
    if n != len(b.names) or len(a.table.arrows) != len(b.table.arrows):
        return False
    for perm in itertools.permutations(range(n)):
        hom_maps = []
        ok = True
        for x in range(n):
            for y in range(n):
                ha, hb = list(a.homs(x, y)), list(b.homs(perm[x], perm[y]))
                if len(ha) != len(hb):
                    ok = False
                    break
                hom_maps.append((ha, hb))
            if not ok:
                break
        if not ok:
            continue
        for combo in itertools.product(*(itertools.permutations(hb) for _, hb in hom_maps)):
            F = {}
            for (ha, _), hb in zip(hom_maps, combo):
                F.update({f.data: g for f, g in zip(ha, hb)})
            if all(F[a.compose(g, f).data] == b.compose(F[g.data], F[f.data])
                   for g in a.all_morphisms() for f in a.all_morphisms() if f.cod == g.dom):
                return True
    return False
