from __future__ import annotations

import random

import pytest

from conftest import SAMPLES, confirm_grid, confirm_snake
from relhom.core import Diagram, diagram_commutes, induced_cokernel_map, induced_kernel_map
from relhom.eclass import ALL, ISO, REGULAR_EPI
from relhom.errors import HypothesisError
from relhom.finab import ZERO, Z
from relhom.lemmas import (
    GridInput,
    SequenceSpec,
    SnakeInput,
    check_snake_side_conditions,
    is_e_exact,
    is_e_exact_at,
    is_short_e_exact,
    snake,
    three_by_three,
)
from relhom.random_instances import random_grid, random_snake
from relhom.serialize import grid_from_document, read_document, snake_from_document


def worked(finab, w=None, v=None):
    x2 = finab.hom(Z(2), Z(4), [[2]])
    m2 = finab.hom(Z(4), Z(2), [[1]])
    z = finab.zero_morphism(Z(2), Z(2))
    v = v if v is not None else finab.hom(Z(4), Z(4), [[2]])
    return SnakeInput(x2, m2, x2, m2, z, v, z if w is None else w)


def test_worked_snake(finab):
    s = worked(finab)
    r = snake(finab, s, REGULAR_EPI)
    assert finab.matrix(r.d) == ((1,),) and r.d.dom == Z(2) == r.d.cod
    k1, k2, d, c1, c2 = r.six_term.arrows
    assert finab.is_iso(k1) and finab.is_zero(k2) and finab.is_zero(c1) and finab.is_iso(c2)
    for m in r.six_term.arrows:
        assert m.dom == Z(2) and m.cod == Z(2)
    assert r.exact and all(r.side_conditions.values())
    exact = confirm_snake(finab, s, r)
    assert all(exact.values())
    # d∘π2 = coker(u)∘φ, and d is the only morphism doing so
    cu = finab.cokernel(s.u).proj
    target = finab.compose(cu, r.phi)
    assert finab.compose(r.d, r.pi2) == target
    assert [t for t in finab.homs(r.d.dom, r.d.cod) if finab.compose(t, r.pi2) == target] == [r.d]


def test_worked_snake_sample_file(finab):
    cat, _, s = snake_from_document(read_document(SAMPLES / "snake_worked.json"))
    assert s == worked(finab)


def test_broken_commutativity(finab):
    with pytest.raises(HypothesisError) as e:
        snake(finab, worked(finab, w=finab.identity(Z(2))), REGULAR_EPI)
    assert "g'∘v = w∘g" in str(e.value)


def test_diagram_commutes_reports_first_equation(finab):
    s = worked(finab, v=finab.identity(Z(4)))
    d = Diagram(shape="snake")
    for n, o in (("A", Z(2)), ("B", Z(4)), ("C", Z(2)), ("A'", Z(2)), ("B'", Z(4)), ("C'", Z(2))):
        d.add_object(n, o)
    for name, m, a, b in (("f", s.f, "A", "B"), ("g", s.g, "B", "C"), ("f'", s.fp, "A'", "B'"),
                          ("g'", s.gp, "B'", "C'"), ("u", s.u, "A", "A'"), ("v", s.v, "B", "B'"), ("w", s.w, "C", "C'")):
        d.add_arrow(name, a, b, m)
    assert diagram_commutes(finab, d).ok
    d.equations = [(["f'", "u"], ["v", "f"]), (["g'", "v"], ["w", "g"])]
    v = diagram_commutes(finab, d)
    assert not v.ok and "f'∘u = v∘f" in v.detail
    d.arrows["v"] = d.arrows["v"]._replace(mor=finab.hom(Z(4), Z(4), [[2]]))
    assert diagram_commutes(finab, d).ok


def test_zero_snake(finab):
    z = finab.identity(ZERO)
    r = snake(finab, SnakeInput(z, z, z, z, z, z, z), REGULAR_EPI)
    assert finab.is_zero(r.d) and r.exact
    assert all(check_snake_side_conditions(finab, SnakeInput(z, z, z, z, z, z, z), REGULAR_EPI).values())


def test_iso_class_on_worked_instance(finab):
    s = worked(finab)
    side = check_snake_side_conditions(finab, s, ISO)
    assert not all(side.values())
    with pytest.raises(HypothesisError):
        snake(finab, s, ISO)


def test_induced_maps(finab):
    u = finab.hom(Z(4), Z(2), [[1]])
    k = induced_kernel_map(finab, finab.identity(Z(4)), u, u, finab.identity(Z(2)))
    assert k == finab.identity(finab.kernel(u).obj)
    v = finab.zero_morphism(Z(4), Z(3))
    c = induced_cokernel_map(finab, finab.zero_morphism(Z(4), Z(4)), u, v, finab.zero_morphism(Z(2), Z(3)))
    assert finab.is_zero(c)
    s = worked(finab)
    assert finab.is_iso(induced_kernel_map(finab, s.f, s.u, s.v, s.fp))


def test_sequence_exactness(finab):
    x2 = finab.hom(Z(2), Z(4), [[2]])
    m2 = finab.hom(Z(4), Z(2), [[1]])
    seq = SequenceSpec.short(finab, x2, m2)
    assert all(v.ok for v in is_e_exact(finab, seq, REGULAR_EPI).values())
    idseq = SequenceSpec([finab.identity(Z(2)), finab.identity(Z(2))])
    assert not is_e_exact_at(finab, idseq, 1, REGULAR_EPI).ok
    to0 = SequenceSpec([finab.identity(Z(4)), finab.zero_morphism(Z(4), ZERO)])
    assert is_e_exact_at(finab, to0, 1, ISO).ok
    assert is_short_e_exact(finab, x2, m2, REGULAR_EPI).ok
    assert is_short_e_exact(finab, finab.identity(Z(3)), finab.zero_morphism(Z(3), ZERO), ALL).ok
    assert not is_short_e_exact(finab, finab.zero_morphism(Z(2), Z(2)), finab.identity(Z(2)), ALL).ok


def test_exactness_matches_elementwise_definition(finab, pset):
    from conftest import as_oracle

    rng = random.Random(3)
    objs = finab.objects(8)
    for _ in range(300):
        A, B, C = (rng.choice(objs) for _ in range(3))
        f = rng.choice(list(finab.homs(A, B)))
        g = rng.choice(list(finab.homs(B, C)))
        ok = is_e_exact_at(finab, SequenceSpec([f, g]), 1, REGULAR_EPI).ok
        assert ok == (as_oracle(finab, f).image() == as_oracle(finab, g).kernel())
    from relhom.eclass import NORMAL_EPI
    from relhom.pset import PointedSet

    for n in range(1, 4):
        for m in range(1, 4):
            for k in range(1, 4):
                for f in pset.homs(PointedSet(n), PointedSet(m)):
                    for g in pset.homs(PointedSet(m), PointedSet(k)):
                        fa, ga = pset.apply(f), pset.apply(g)
                        img = set(fa)
                        ker = {y for y in range(m) if ga[y] == 0}
                        # the corestriction onto the kernel must be a normal epi: onto, and
                        # injective away from the base point fibre
                        off = [y for y in fa if y != 0]
                        want = img == ker and len(off) == len(set(off))
                        assert is_e_exact_at(pset, SequenceSpec([f, g]), 1, NORMAL_EPI).ok == want


def test_split_grid(finab):
    cat, _, G = grid_from_document(read_document(SAMPLES / "grid_split.json"))
    r = three_by_three(cat, G, REGULAR_EPI)
    assert r.verdict.ok and r.first_row.ok and r.last_row.ok and r.pairing_in_E
    assert confirm_grid(cat, G, r) == (True, True)


def test_broken_grid_names_square(finab):
    cat, _, G = grid_from_document(read_document(SAMPLES / "grid_broken.json"))
    with pytest.raises(HypothesisError) as e:
        three_by_three(cat, G, REGULAR_EPI)
    assert "g''∘v' = w'∘g'" in str(e.value)


def test_zero_grid(finab):
    z = finab.identity(ZERO)
    r = three_by_three(finab, GridInput(*([z] * 12)), REGULAR_EPI)
    assert r.verdict.ok and r.pairing_in_E


def test_random_snakes_agree_with_chase(finab):
    rng = random.Random(11)
    for _ in range(40):
        s = random_snake(rng, finab)
        r = snake(finab, s, REGULAR_EPI)
        assert all(confirm_snake(finab, s, r).values())
        # homological mode implies the weak-mode side conditions
        assert all(r.side_conditions.values())


def test_random_grids_agree_with_row_oracle(finab):
    rng = random.Random(12)
    for _ in range(30):
        G = random_grid(rng, finab)
        r = three_by_three(finab, G, REGULAR_EPI)
        first, last = confirm_grid(finab, G, r)
        assert first == last and r.verdict.ok


def test_chase_oracle_rejects_a_wrong_connecting_map(finab):
    import dataclasses

    s = worked(finab)
    r = snake(finab, s, REGULAR_EPI)
    bad = dataclasses.replace(r, d=finab.zero_morphism(r.d.dom, r.d.cod))
    with pytest.raises(AssertionError):
        confirm_snake(finab, s, bad)
