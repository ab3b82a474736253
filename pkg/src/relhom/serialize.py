"""JSON documents: diagrams, witnesses and reports.

Every document carries ``"format-version": "1"``.  Objects and morphisms use
the backend payloads (``factors``/``matrix`` for finab, ``library``/``table``
and ``map`` for fingrp, ``size``/``map`` for pset, ``name``/``arrow`` for
tablecat).  Reports are built with a fixed key order and contain no floats.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from . import __version__
from .axioms import AxiomId, Witness, parse_axiom
from .core import Category, Diagram, Morphism, Verdict
from .eclass import EClass, parse_class
from .errors import InputError
from .lemmas import GridInput, GridResult, SequenceSpec, SnakeInput, SnakeResult

FORMAT_VERSION = "1"
BACKENDS = ("finab", "fingrp", "pset", "tablecat")
_INT64 = 2**63


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _int(x: int):
    # exact integers beyond 64 bits travel as decimal strings
    return x if -_INT64 <= x < _INT64 else str(x)


def _ints(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return _int(obj)
    if isinstance(obj, list):
        return [_ints(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _ints(v) for k, v in obj.items()}
    return obj


def read_document(path: str | Path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    if doc.get("format-version") != FORMAT_VERSION:
        raise InputError(f"{path}: field 'format-version' must be \"1\"")
    return doc


def make_category(backend: str, category: Any = None) -> Category:
    if backend == "finab":
        from .finab import FinAb

        return FinAb()
    if backend == "fingrp":
        from .fingrp import FinGrp

        return FinGrp()
    if backend == "pset":
        from .pset import PSet

        return PSet()
    if backend == "tablecat":
        from . import tablecat

        if category is None:
            return tablecat.bundled("trivial")
        if isinstance(category, dict):
            return tablecat.TableCat(tablecat.table_from_document(category))
        return tablecat.load(str(category))
    raise InputError(f"unknown backend {backend!r} (expected one of {', '.join(BACKENDS)})")


def category_field(cat: Category):
    if cat.backend != "tablecat":
        return None
    from .tablecat import table_to_document

    return table_to_document(cat.table)


# -- diagrams ---------------------------------------------------------------------


def diagram_to_document(cat: Category, d: Diagram, shape: str | None = None) -> dict:
    doc: dict[str, Any] = {"format-version": FORMAT_VERSION, "backend": cat.backend, "shape": shape or d.shape}
    cf = category_field(cat)
    if cf is not None:
        doc["category"] = cf
    doc["objects"] = {name: _ints(cat.object_payload(obj)) for name, obj in d.objects.items()}
    morphisms = {}
    for name, (src, tgt, mor) in d.arrows.items():
        entry = {"dom": src, "cod": tgt}
        entry.update(_ints(cat.morphism_payload(mor)))
        morphisms[name] = entry
    doc["morphisms"] = morphisms
    if d.equations:
        doc["equations"] = [[list(l), list(r)] for l, r in d.equations]
    return doc


def document_to_diagram(doc: dict, where: str = "document") -> tuple[Category, Diagram]:
    backend = doc.get("backend")
    if backend is None:
        raise InputError(f"{where}: missing field 'backend'")
    cat = make_category(backend, doc.get("category"))
    d = Diagram(shape=str(doc.get("shape", "")))
    objs = doc.get("objects")
    mors = doc.get("morphisms")
    if not isinstance(objs, dict) or not isinstance(mors, dict):
        raise InputError(f"{where}: fields 'objects' and 'morphisms' must be objects")
    for name, payload in objs.items():
        try:
            d.add_object(name, cat.parse_object(payload))
        except InputError as e:
            raise InputError(f"{where}: objects.{name}: {e}") from None
    for name, entry in mors.items():
        try:
            src, tgt = entry["dom"], entry["cod"]
        except (KeyError, TypeError):
            raise InputError(f"{where}: morphisms.{name}: needs 'dom' and 'cod'") from None
        for end in (src, tgt):
            if end not in d.objects:
                raise InputError(f"{where}: morphisms.{name}: unknown object {end!r}")
        try:
            mor = cat.parse_morphism(d.objects[src], d.objects[tgt], entry)
        except InputError as e:
            raise InputError(f"{where}: morphisms.{name}: {e}") from None
        d.add_arrow(name, src, tgt, mor)
    for i, eq in enumerate(doc.get("equations", [])):
        if not (isinstance(eq, list) and len(eq) == 2):
            raise InputError(f"{where}: equations[{i}] must be a pair of paths")
        d.equations.append((list(eq[0]), list(eq[1])))
    d.validate()
    return cat, d


def _need(d: Diagram, names, where: str) -> list[Morphism]:
    missing = [n for n in names if n not in d.arrows]
    if missing:
        raise InputError(f"{where}: missing morphisms {', '.join(missing)}")
    return [d[n] for n in names]


SNAKE_ARROWS = ("f", "g", "f'", "g'", "u", "v", "w")
GRID_ARROWS = ("f", "g", "f'", "g'", "f''", "g''", "u", "u'", "v", "v'", "w", "w'")


def snake_from_document(doc: dict, where: str = "input"):
    cat, d = document_to_diagram(doc, where)
    return cat, d, SnakeInput(*_need(d, SNAKE_ARROWS, where))


def grid_from_document(doc: dict, where: str = "input"):
    cat, d = document_to_diagram(doc, where)
    f, g, fp, gp, fpp, gpp, u, up, v, vp, w, wp = _need(d, GRID_ARROWS, where)
    return cat, d, GridInput(f, g, fp, gp, fpp, gpp, u, up, v, vp, w, wp)


def sequence_from_document(doc: dict, where: str = "input"):
    cat, d = document_to_diagram(doc, where)
    names = doc.get("sequence")
    if not isinstance(names, list) or not names:
        raise InputError(f"{where}: field 'sequence' must list morphism names in order")
    arrows = _need(d, names, where)
    objects = [d.arrows[names[0]].src] + [d.arrows[n].tgt for n in names]
    return cat, d, SequenceSpec(arrows, objects)


def snake_document(cat: Category, s: SnakeInput, E: EClass, names: dict | None = None) -> dict:
    n = names or {"A": s.f.dom, "B": s.f.cod, "C": s.g.cod, "A'": s.fp.dom, "B'": s.fp.cod, "C'": s.gp.cod}
    d = Diagram(shape="snake")
    # objects may coincide; each name still gets its own entry
    for k, obj in n.items():
        d.add_object(k, obj)
    for name, mor, src, tgt in (("f", s.f, "A", "B"), ("g", s.g, "B", "C"), ("f'", s.fp, "A'", "B'"),
                                ("g'", s.gp, "B'", "C'"), ("u", s.u, "A", "A'"), ("v", s.v, "B", "B'"),
                                ("w", s.w, "C", "C'")):
        d.add_arrow(name, src, tgt, mor)
    d.equations = [(["f'", "u"], ["v", "f"]), (["g'", "v"], ["w", "g"])]
    doc = diagram_to_document(cat, d)
    doc["class"] = E.selector
    return doc


def grid_document(cat: Category, G: GridInput, E: EClass) -> dict:
    d = Diagram(shape="grid")
    objs = {"A": G.f.dom, "B": G.f.cod, "C": G.g.cod, "A'": G.fp.dom, "B'": G.fp.cod, "C'": G.gp.cod,
            "A''": G.fpp.dom, "B''": G.fpp.cod, "C''": G.gpp.cod}
    for k, obj in objs.items():
        d.add_object(k, obj)
    for name, mor, src, tgt in (("f", G.f, "A", "B"), ("g", G.g, "B", "C"), ("f'", G.fp, "A'", "B'"),
                                ("g'", G.gp, "B'", "C'"), ("f''", G.fpp, "A''", "B''"), ("g''", G.gpp, "B''", "C''"),
                                ("u", G.u, "A", "A'"), ("u'", G.up, "A'", "A''"), ("v", G.v, "B", "B'"),
                                ("v'", G.vp, "B'", "B''"), ("w", G.w, "C", "C'"), ("w'", G.wp, "C'", "C''")):
        d.add_arrow(name, src, tgt, mor)
    doc = diagram_to_document(cat, d)
    doc["class"] = E.selector
    return doc


# -- witnesses ----------------------------------------------------------------------


def witness_document(cat: Category, E: EClass, w: Witness, verdict: str = "fails") -> dict:
    doc = diagram_to_document(cat, w.diagram, shape="witness")
    out: dict[str, Any] = {
        "format-version": FORMAT_VERSION,
        "backend": doc["backend"],
        "shape": "witness",
        "axiom": w.axiom.value,
        "class": E.selector,
        "bound": w.bound,
        "diagram-shape": w.diagram.shape,
        "verdict": verdict,
        "detail": w.detail,
    }
    if "category" in doc:
        out["category"] = doc["category"]
    out["objects"] = doc["objects"]
    out["morphisms"] = doc["morphisms"]
    if "equations" in doc:
        out["equations"] = doc["equations"]
    return out


def witness_from_document(doc: dict, where: str = "witness"):
    if doc.get("shape") != "witness":
        raise InputError(f"{where}: field 'shape' must be \"witness\"")
    cat, d = document_to_diagram(doc, where)
    d.shape = str(doc.get("diagram-shape", ""))
    if "axiom" not in doc or "class" not in doc:
        raise InputError(f"{where}: a witness needs 'axiom' and 'class'")
    E = parse_class(doc["class"], cat)
    w = Witness(parse_axiom(doc["axiom"]), d, str(doc.get("detail", "")), doc.get("bound"))
    return cat, E, w


# -- reports -------------------------------------------------------------------------------


def verdict_json(v: Verdict) -> dict:
    out: dict[str, Any] = {"status": v.status, "instances-checked": v.instances_checked}
    if v.inapplicable:
        out["inapplicable"] = v.inapplicable
    if v.bound:
        out["bound"] = v.bound
    if v.detail:
        out["detail"] = v.detail
    return out


def report(command: list[str], body: dict) -> dict:
    out: dict[str, Any] = {"format-version": FORMAT_VERSION, "engine-version": __version__, "command": command}
    out.update(body)
    return out


def morphism_json(cat: Category, f: Morphism) -> dict:
    return {
        "dom": _ints(cat.object_payload(f.dom)),
        "cod": _ints(cat.object_payload(f.cod)),
        **_ints(cat.morphism_payload(f)),
    }


def snake_result_json(cat: Category, r: SnakeResult) -> dict:
    return {
        "mode": r.mode,
        "hypotheses": [{"clause": c, "holds": ok} for c, ok in r.hypotheses],
        "d": morphism_json(cat, r.d),
        "six-term": [
            {"from": r.six_term.names[i], "to": r.six_term.names[i + 1], "morphism": morphism_json(cat, a)}
            for i, a in enumerate(r.six_term.arrows)
        ],
        "exactness": {node: verdict_json(v) for node, v in r.exactness.items()},
        "side-conditions": dict(r.side_conditions),
        "exact": r.exact,
        "notes": list(r.notes),
    }


def grid_result_json(cat: Category, r: GridResult) -> dict:
    return {
        "hypotheses": [{"clause": c, "holds": ok} for c, ok in r.hypotheses],
        "first-row": verdict_json(r.first_row),
        "last-row": verdict_json(r.last_row),
        "pairing-in-E": r.pairing_in_E,
        "verdict": verdict_json(r.verdict),
    }
