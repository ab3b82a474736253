from __future__ import annotations

import itertools
import json

import pytest

from relhom.core import find_section
from relhom.eclass import (
    ALL,
    ISO,
    NORMAL_EPI,
    REGULAR_EPI,
    SPLIT_EPI,
    Explicit,
    Intersection,
    Predicate,
    builtin_functor,
    load_functor,
    parse_class,
    preimage_class,
    validate_class,
    validate_functor,
)
from relhom.errors import InputError, PluginError
from relhom.finab import Z
from relhom.pset import PointedSet
from relhom.tablecat import bundled


def test_builtin_membership(pset, finab):
    assert ISO.member(finab, finab.identity(Z(4)))
    collapse = pset.hom(PointedSet(3), PointedSet(2), [0, 1, 1])
    assert not NORMAL_EPI.member(pset, collapse)
    assert SPLIT_EPI.member(pset, collapse)
    assert ALL.member(finab, finab.zero_morphism(Z(2), Z(2)))


def test_parse_selectors(finab):
    assert parse_class("regular_epi").selector == "regular_epi"
    E = parse_class("regular_epi&predicate:coprime_kernel:2", finab)
    assert isinstance(E, Intersection)
    m = finab.hom(Z(6), Z(2), [[1]])   # kernel Z/3
    m4 = finab.hom(Z(4), Z(2), [[1]])  # kernel Z/2
    assert E.member(finab, m) and not E.member(finab, m4)
    with pytest.raises(InputError):
        parse_class("epi-ish")


def test_identity_functor_preimage_of_all_is_identity(finab):
    F = builtin_functor("identity", finab)
    P = preimage_class(F, REGULAR_EPI, ALL)
    for A, B in itertools.product(finab.objects(6), repeat=2):
        for f in finab.homs(A, B):
            assert P.member(finab, f) == REGULAR_EPI.member(finab, f)


def test_forgetful_preimage_of_split_epis(fingrp):
    E = parse_class("preimage:forgetful:split_epi", fingrp)
    F = builtin_functor("forgetful")
    for A, B in itertools.product(fingrp.objects(8), repeat=2):
        for f in fingrp.homs(A, B):
            surj = set(fingrp.apply(f)) == set(range(B.order))
            # exhaustive section search on the underlying pointed set
            has_section = find_section(F.target, F(f)) is not None
            assert has_section == surj
            assert E.member(fingrp, f) == surj


def test_functor_validation(fingrp):
    F = builtin_functor("forgetful")
    v = validate_functor(F, fingrp, 6)
    assert v.ok


def test_functor_file(tmp_path, fingrp):
    p = tmp_path / "u.json"
    p.write_text(json.dumps({"format-version": "1", "shape": "functor", "builtin": "forgetful"}))
    assert load_functor(str(p), fingrp).name == "forgetful"
    p.write_text(json.dumps({"format-version": "1", "shape": "sequence"}))
    with pytest.raises(InputError):
        load_functor(str(p), fingrp)


def test_validate_class():
    c = bundled("two_zero")
    every = Explicit(frozenset(c.arrow_name(f) for f in c.all_morphisms()))
    assert validate_class(every, c).ok
    assert validate_class(ISO, c).ok
    missing = Explicit(frozenset(n for n in every.arrows if n != "1_0"))
    v = validate_class(missing, c)
    assert not v.ok and "1_0" in v.detail


def test_explicit_only_on_tables(finab):
    with pytest.raises(InputError):
        Explicit(frozenset({"x"})).member(finab, finab.identity(Z(2)))


def test_predicate_errors(finab, pset):
    with pytest.raises(PluginError):
        Predicate("coprime_kernel", None).member(finab, finab.identity(Z(2)))
    with pytest.raises((PluginError, InputError)):
        Predicate("coprime_kernel", "2").member(pset, pset.identity(PointedSet(2)))
    with pytest.raises((PluginError, InputError)):
        Predicate("no_such_plugin", None)
