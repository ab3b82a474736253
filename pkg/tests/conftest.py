from __future__ import annotations

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
SAMPLES = ROOT / "samples"
GOLDEN = Path(__file__).resolve().parent / "golden"

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture
def finab():
    from relhom.finab import FinAb

    return FinAb()


@pytest.fixture
def fingrp():
    from relhom.fingrp import FinGrp

    return FinGrp()


@pytest.fixture
def pset():
    from relhom.pset import PSet

    return PSet()


def as_oracle(cat, f):
    """Engine FinAb morphism -> oracle Hom."""
    from oracles import hom_from_json
    from relhom.serialize import morphism_json

    return hom_from_json(morphism_json(cat, f))


def confirm_snake(cat, s, r):
    """Compare a snake result with the element chase.  Returns the oracle's
    per-node exactness after asserting that d and the engine's per-node
    verdicts agree with it."""
    from oracles import is_cokernel_projection, is_kernel_inclusion, snake_chase

    o = {n: as_oracle(cat, getattr(s, n)) for n in ("f", "g", "fp", "gp", "u", "v", "w")}
    _, d, exact, _ = snake_chase(o["f"], o["g"], o["fp"], o["gp"], o["u"], o["v"], o["w"])
    kw = as_oracle(cat, cat.kernel(s.w).incl)
    qu = as_oracle(cat, cat.cokernel(s.u).proj)
    assert is_kernel_inclusion(kw, o["w"])
    assert is_cokernel_projection(qu, o["u"])
    de = as_oracle(cat, r.d)
    assert de.dom == kw.dom and de.cod == qu.cod
    for x in kw.dom.elements:
        assert {qu(a) for a in d[kw(x)]} == {de(x)}
    for node, ok in exact.items():
        assert r.exactness[node].ok == ok, node
    return exact


def confirm_grid(cat, G, r):
    from oracles import row_exact

    first = row_exact(as_oracle(cat, G.f), as_oracle(cat, G.g))
    last = row_exact(as_oracle(cat, G.fpp), as_oracle(cat, G.gpp))
    assert r.first_row.ok == first and r.last_row.ok == last
    return first, last


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
