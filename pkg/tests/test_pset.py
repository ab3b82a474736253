from __future__ import annotations

import itertools

from oracles import pset_homs, pset_mono, pset_normal_epi, pset_surjective
from relhom.core import classify
from relhom.pset import PointedSet


def test_collapse_profile(pset):
    f = pset.hom(PointedSet(3), PointedSet(2), [0, 1, 1])
    p = classify(pset, f)
    assert p.is_epi and p.is_split_epi and p.is_regular_epi
    assert not p.is_normal_epi and not p.is_mono
    assert pset.kernel(f).obj.size == 1
    assert pset.cokernel(f).obj.size == 1
    assert pset.kernel(pset.identity(PointedSet(3))).obj.size == 1


def test_homs_are_all_pointed_maps(pset):
    for n, m in itertools.product(range(1, 5), repeat=2):
        assert {pset.apply(f) for f in pset.homs(PointedSet(n), PointedSet(m))} == set(pset_homs(n, m))


def test_classify_against_oracle(pset):
    for n, m in itertools.product(range(1, 5), repeat=2):
        for f in pset.homs(PointedSet(n), PointedSet(m)):
            imgs = pset.apply(f)
            p = classify(pset, f)
            assert p.is_mono == pset_mono(imgs)
            assert p.is_epi == pset_surjective(imgs, m)
            # finite surjections of pointed sets split and are regular
            assert p.is_split_epi == p.is_regular_epi == pset_surjective(imgs, m)
            assert p.is_normal_epi == pset_normal_epi(imgs, m)


def test_kernel_cokernel_universal(pset):
    objs = [PointedSet(k) for k in range(1, 5)]
    for A, B in itertools.product(objs, repeat=2):
        for f in pset.homs(A, B):
            k, q = pset.kernel(f), pset.cokernel(f)
            for X in objs:
                cone = [pset.compose(k.incl, t) for t in pset.homs(X, k.obj)]
                killing = {h for h in pset.homs(X, A) if pset.is_zero(pset.compose(f, h))}
                assert len(cone) == len(set(cone)) and set(cone) == killing
                cocone = [pset.compose(t, q.proj) for t in pset.homs(q.obj, X)]
                cokilling = {h for h in pset.homs(B, X) if pset.is_zero(pset.compose(h, f))}
                assert len(cocone) == len(set(cocone)) and set(cocone) == cokilling


def test_pullback_universal(pset):
    objs = [PointedSet(k) for k in range(1, 4)]
    for A, B, C in itertools.product(objs, repeat=3):
        for f, g in itertools.product(list(pset.homs(A, C)), list(pset.homs(B, C))):
            pb = pset.pullback(f, g)
            for X in objs:
                cone = [(pset.compose(pb.p1, t), pset.compose(pb.p2, t)) for t in pset.homs(X, pb.obj)]
                commuting = {(a, b) for a in pset.homs(X, A) for b in pset.homs(X, B)
                             if pset.compose(f, a) == pset.compose(g, b)}
                assert len(cone) == len(set(cone)) and set(cone) == commuting


def test_composition_pointwise(pset):
    inc = pset.hom(PointedSet(2), PointedSet(3), [0, 2])
    col = pset.hom(PointedSet(3), PointedSet(2), [0, 1, 1])
    assert pset.apply(pset.compose(col, inc)) == (0, 1)
