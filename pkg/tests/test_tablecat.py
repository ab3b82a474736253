from __future__ import annotations

import itertools
import json
from pathlib import Path

import pytest

from relhom import tablecat
from relhom.errors import BudgetError, InputError, LimitMissing
from relhom.tablecat import BUNDLED, Table, TableCat, bundled, enumerate_categories, isomorphic, validate

DATA = Path(tablecat.__file__).parent / "data" / "categories"


def test_bundled_tables_validate():
    for name in BUNDLED:
        assert validate(bundled(name).table).ok


def test_trivial_and_missing_zero():
    assert validate(bundled("trivial").table).ok
    # one object with an idempotent e: no zero object once e != id
    t = Table(names=("X",), arrows=(("1", 0, 0), ("e", 0, 0)), identities=(0,),
              compose=(((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 1)),
              zero=None, label="no-zero")
    v = validate(t)
    assert not v.ok and "no zero object" in v.detail


def test_broken_associativity_names_triple():
    doc = json.loads((DATA / "broken_assoc.json").read_text())
    t = tablecat.table_from_document(doc)
    v = validate(t)
    assert not v.ok and "associativity fails for" in v.detail
    with pytest.raises(InputError):
        tablecat.load(str(DATA / "broken_assoc.json"))


def test_limits_in_trivial_and_two_zero():
    for name in ("trivial", "two_zero"):
        c = bundled(name)
        assert c.has_standing_limits()
        for f, g in itertools.product(c.all_morphisms(), repeat=2):
            if f.cod == g.cod:
                pb = c.pullback(f, g)
                assert c.compose(f, pb.p1) == c.compose(g, pb.p2)


def test_pullback_along_identity_and_missing_limits():
    c = bundled("idempotent")
    e = c.arrow("e0_X1_X1")
    pb = c.pullback(e, c.identity(e.cod))
    assert c.is_iso(pb.p1)
    assert not c.has_standing_limits()
    missing = 0
    mors = c.all_morphisms()
    for f, g in itertools.product(mors, repeat=2):
        if f.cod == g.cod:
            try:
                c.pullback(f, g)
            except LimitMissing:
                missing += 1
    assert missing > 0


def test_enumeration_counts_and_validity():
    counts = {m: len(list(enumerate_categories(m))) for m in range(1, 7)}
    assert counts == {1: 1, 2: 1, 3: 1, 4: 2, 5: 3, 6: 6}
    cats = list(enumerate_categories(6))
    for c in cats:
        assert validate(c.table).ok
    for a, b in itertools.combinations(cats, 2):
        assert not isomorphic(a, b)


def test_single_morphism_enumeration_is_trivial():
    (c,) = enumerate_categories(1)
    assert isomorphic(c, bundled("trivial"))


def test_bundled_categories_appear_in_enumeration():
    cats = list(enumerate_categories(6))
    for name in BUNDLED:
        b = bundled(name)
        if len(b.all_morphisms()) <= 6:
            assert any(isomorphic(b, c) for c in cats), name


def test_enumeration_budget():
    with pytest.raises(BudgetError):
        list(enumerate_categories(7))


def test_op_swaps_directions():
    c = bundled("point_and_x")
    for f in c.all_morphisms():
        g = c.op.arrow(c.arrow_name(f))
        assert (g.dom, g.cod) == (f.cod, f.dom)


def test_document_round_trip():
    for name in BUNDLED:
        t = bundled(name).table
        again = tablecat.table_from_document(tablecat.table_to_document(t))
        assert TableCat(again).all_morphisms() == bundled(name).all_morphisms()
