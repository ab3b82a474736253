"""Seeded random snake and 3×3 instances over finite abelian groups.

Instances are built so that every hypothesis of the lemma holds for the
class of regular epimorphisms; the seed comes from ``RELHOM_SEED`` unless
given explicitly.
"""

from __future__ import annotations

import os
import random

from .core import Morphism
from .finab import ZERO, AbGroup, FinAb, _elements
from .lemmas import GridInput, SnakeInput

DEFAULT_SEED = 20240611


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get("RELHOM_SEED")
    return int(raw) if raw not in (None, "") else default


def subgroup(cat: FinAb, G: AbGroup, elements: list[int]):
    """Subgroup generated by element indices, as ``(S, inclusion)``."""
    if G.rank == 0 or not elements:
        return ZERO, cat.zero_morphism(ZERO, G)
    els = _elements(G.factors)
    exp = G.factors[-1]
    F = AbGroup((exp,) * len(elements))
    M = [[els[x][i] for x in elements] for i in range(G.rank)]
    k = cat.image_object(cat.hom(F, G, M))
    return k.obj, k.incl


def random_elements(rng: random.Random, cat: FinAb, G: AbGroup, k: int) -> list[int]:
    n = cat.order(G)
    return [rng.randrange(n) for _ in range(k)]


def random_subgroup_of(rng, cat: FinAb, m: Morphism, k: int | None = None):
    """Random subgroup of the image of the mono ``m``, included into ``cod(m)``."""
    S = m.dom
    k = rng.randint(0, 2) if k is None else k
    T, incl = subgroup(cat, S, random_elements(rng, cat, S, k))
    return T, cat.compose(m, incl)


def random_group(rng: random.Random, cat: FinAb, max_order: int, min_order: int = 1) -> AbGroup:
    pool = [G for G in cat.objects(max_order) if G.order >= min_order]
    return rng.choice(pool)


def random_hom(rng: random.Random, cat: FinAb, A: AbGroup, B: AbGroup) -> Morphism:
    images = []
    for x in cat.generators(A):
        ox = cat.element_order(A, x)
        pool = [y for y in range(cat.order(B)) if ox % cat.element_order(B, y) == 0]
        images.append(rng.choice(pool))
    h = cat.extend(A, B, images)
    assert h is not None
    return h


def _intersection(cat: FinAb, m1: Morphism, m2: Morphism):
    pb = cat.pullback(m1, m2)
    return pb.obj, cat.compose(m1, pb.p1)


def random_snake(rng: random.Random, cat: FinAb | None = None, max_order: int = 16) -> SnakeInput:
    cat = cat or FinAb()
    Bp = random_group(rng, cat, max_order)
    Ap, fp = random_subgroup_of(rng, cat, cat.identity(Bp))
    gp = cat.cokernel(fp).proj
    B = random_group(rng, cat, max_order)
    v = random_hom(rng, cat, B, Bp)
    # N must be killed by g'∘v so that w exists
    ker = cat.kernel(cat.compose(gp, v)).incl
    N, n_incl = random_subgroup_of(rng, cat, ker)
    g = cat.cokernel(n_incl).proj
    C = g.cod
    if N.order * 2 <= max_order and rng.random() < 0.4:
        # a summand that f sends to zero: the second row need not start with 0
        A, i1, _, p1, p2 = cat.direct_sum(N, AbGroup((2,)))
        f = cat.compose(n_incl, p1)
    else:
        A, f = N, n_incl
    u = cat.lift_through_mono(fp, cat.compose(v, f))
    w = cat.factor_through_epi(g, cat.compose(gp, v))
    assert u is not None and w is not None
    return SnakeInput(f, g, fp, gp, u, v, w)


def random_grid(rng: random.Random, cat: FinAb | None = None, max_order: int = 16) -> GridInput:
    cat = cat or FinAb()
    Bp = random_group(rng, cat, max_order)
    idB = cat.identity(Bp)
    Ap, fp = random_subgroup_of(rng, cat, idB)
    gp = cat.cokernel(fp).proj
    B, v = random_subgroup_of(rng, cat, idB)
    vp = cat.cokernel(v).proj
    _, meet = _intersection(cat, fp, v)
    if rng.random() < 0.6:
        A_in_Bp = meet
    else:
        _, A_in_Bp = random_subgroup_of(rng, cat, meet)
    A = A_in_Bp.dom
    u = cat.lift_through_mono(fp, A_in_Bp)
    f = cat.lift_through_mono(v, A_in_Bp)
    up = cat.cokernel(u).proj
    # C sits between the image of B in C' and C'
    img = cat.image_object(cat.compose(gp, v)).incl
    Cp = gp.cod
    if rng.random() < 0.6:
        w = img
    else:
        extra = random_elements(rng, cat, Cp, rng.randint(1, 2))
        base = [y for y in set(cat.apply(img))]
        _, w = subgroup(cat, Cp, sorted(base) + extra)
    g = cat.lift_through_mono(w, cat.compose(gp, v))
    wp = cat.cokernel(w).proj
    fpp = cat.factor_through_epi(up, cat.compose(vp, fp))
    gpp = cat.factor_through_epi(vp, cat.compose(wp, gp))
    assert None not in (u, f, g, fpp, gpp)
    return GridInput(f, g, fp, gp, fpp, gpp, u, up, v, vp, w, wp)
