"""Command-line front end.

Exit codes: 0 the verdicts match the expectation, 1 they do not, 2 input
error, 3 hypothesis, budget or engine error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from pathlib import Path

from . import __version__
from .axioms import (
    ALL_AXIOMS,
    CorpusEntry,
    Theorem,
    check_axioms,
    check_instance,
    parse_axiom,
    parse_axioms,
    verify_implication,
)
from .core import EXHAUSTED, FAILS, Category
from .eclass import BUILTIN_KINDS, Builtin, Explicit, parse_class, validate_class
from .errors import (
    BudgetError,
    EngineInconsistency,
    HypothesisError,
    InputError,
    LimitMissing,
    PluginError,
    RelhomError,
)
from .lemmas import is_e_exact_at, snake, three_by_three
from .serialize import (
    BACKENDS,
    dumps,
    grid_from_document,
    grid_result_json,
    make_category,
    read_document,
    report,
    sequence_from_document,
    snake_from_document,
    snake_result_json,
    verdict_json,
    witness_document,
    witness_from_document,
)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_ENGINE = 0, 1, 2, 3

DEFAULT_SIZE = {"finab": 8, "fingrp": 12, "pset": 3, "tablecat": None}


def _category(args) -> Category:
    return make_category(args.backend, getattr(args, "category", None))


def _bound(args, cat: Category):
    if cat.backend == "tablecat":
        return None
    return args.max_size if args.max_size is not None else DEFAULT_SIZE[cat.backend]


def _class(sel: str, cat: Category, bound):
    E = parse_class(sel, cat)
    v = validate_class(E, cat, bound)
    if not v.ok:
        raise InputError(f"class {sel}: {v.detail}")
    return E


def _emit(args, body: dict, lines: list[str], started: float) -> None:
    if getattr(args, "timing", False):
        ms = int((time.perf_counter() - started) * 1000)
        body["wall-time-ms"] = ms
        lines.append(f"wall time: {ms} ms")
    if args.json:
        sys.stdout.write(dumps(report(sys.argv[1:] if args.echo is None else args.echo, body)))
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _compact(payload) -> str:
    return json.dumps(payload, separators=(",", ":"))


def _witness_lines(cat: Category, w, indent: str) -> list[str]:
    d = w.diagram
    out = [f"{indent}{name} = {_compact(cat.object_payload(obj))}" for name, obj in d.objects.items()]
    out += [f"{indent}{name}: {src} -> {tgt} {_compact(cat.morphism_payload(mor))}" for name, (src, tgt, mor) in d.arrows.items()]
    return out


def _write(path: str | Path, doc: dict) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


# -- subcommands ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    started = time.perf_counter()
    cat = _category(args)
    bound = _bound(args, cat)
    E = _class(args.cls, cat, bound)
    axioms = parse_axioms(args.axioms)
    verdicts = check_axioms(cat, E, axioms, bound, jobs=args.jobs)
    expect_fail = args.expect == "fails"
    lines, results = [], {}
    code = EXIT_OK
    for ax in axioms:
        v = verdicts[ax]
        entry = verdict_json(v)
        if v.status == FAILS:
            wdoc = witness_document(cat, E, v.witness)
            entry["witness"] = wdoc
            if args.witness_dir:
                out = Path(args.witness_dir)
                out.mkdir(parents=True, exist_ok=True)
                wpath = out / f"witness-{cat.backend}-{ax.value}.json"
                _write(wpath, wdoc)
                entry["witness-file"] = str(wpath)
        results[ax.value] = entry
        line = f"{ax.value:<3} {v.status:<18} {v.instances_checked} configurations, {v.bound}"
        if v.detail:
            line += f": {v.detail}"
        lines.append(line)
        if v.status == FAILS:
            lines += _witness_lines(cat, v.witness, "      ")
        if v.status == EXHAUSTED:
            code = EXIT_ENGINE
        elif (v.status == FAILS) != expect_fail or (not expect_fail and not v.ok):
            code = max(code, EXIT_MISMATCH)
    body = {"backend": cat.backend, "class": E.selector, "bound": verdicts[axioms[0]].bound if axioms else "",
            "expect": args.expect, "verdicts": results, "matches-expectation": code == EXIT_OK}
    lines.append("all verdicts match the expectation" if code == EXIT_OK else "verdicts do not match the expectation")
    _emit(args, body, lines, started)
    return code


def cmd_search(args) -> int:
    started = time.perf_counter()
    cat = _category(args)
    bound = _bound(args, cat)
    E = _class(args.cls, cat, bound)
    ax = parse_axiom(args.axiom)
    v = check_axioms(cat, E, [ax], bound)[ax]
    if v.status == EXHAUSTED:
        raise BudgetError(v.detail)
    body = {"backend": cat.backend, "class": E.selector, "axiom": ax.value, "bound": v.bound}
    if v.status == FAILS:
        wdoc = witness_document(cat, E, v.witness)
        body["witness"] = wdoc
        lines = [f"least witness for {ax.value} ({v.detail}):"]
        lines += _witness_lines(cat, v.witness, "  ")
        if args.witness_out:
            _write(args.witness_out, wdoc)
            lines.append(f"witness written to {args.witness_out}")
    else:
        body["witness"] = None
        lines = [f"none up to bound ({v.bound}, {v.instances_checked} configurations)"]
    _emit(args, body, lines, started)
    return EXIT_OK


def cmd_recheck(args) -> int:
    started = time.perf_counter()
    doc = read_document(args.input)
    cat, E, w = witness_from_document(doc, args.input)
    v = check_instance(cat, E, w)
    recorded = doc.get("verdict", "fails")
    same = v.status == recorded
    body = {"axiom": w.axiom.value, "class": E.selector, "recorded": recorded, "verdict": verdict_json(v), "reproduced": same}
    lines = [f"{w.axiom.value}: {v.status}" + (f" ({v.detail})" if v.detail else ""),
             "verdict reproduced" if same else f"verdict differs from the recorded {recorded!r}"]
    _emit(args, body, lines, started)
    return EXIT_OK if same else EXIT_MISMATCH


def cmd_snake(args) -> int:
    started = time.perf_counter()
    doc = read_document(args.input)
    cat, _, s = snake_from_document(doc, args.input)
    E = _class(args.cls or doc.get("class", "regular_epi"), cat, _lemma_bound(cat))
    r = snake(cat, s, E, args.mode)
    body = {"backend": cat.backend, "class": E.selector, "snake": snake_result_json(cat, r)}
    lines = ["hypotheses:"] + [f"  {c}: {'yes' if ok else 'no'}" for c, ok in r.hypotheses]
    lines.append(f"d = {_compact(cat.morphism_payload(r.d))}")
    lines.append("six-term sequence:")
    for i, a in enumerate(r.six_term.arrows):
        lines.append(f"  {r.six_term.names[i]} -> {r.six_term.names[i + 1]}: {_compact(cat.morphism_payload(a))}")
    for node, v in r.exactness.items():
        lines.append(f"  E-exact at {node}: {'yes' if v.ok else 'no: ' + v.detail}")
    lines.append("side conditions:")
    lines += [f"  {c}: {'yes' if ok else 'no'}" for c, ok in r.side_conditions.items()]
    lines += [f"note: {n}" for n in r.notes]
    _emit(args, body, lines, started)
    return EXIT_OK if r.exact else EXIT_MISMATCH


def _lemma_bound(cat: Category):
    # isomorphism checks for explicit classes only need small objects
    return None if cat.backend == "tablecat" else DEFAULT_SIZE[cat.backend]


def cmd_grid(args) -> int:
    started = time.perf_counter()
    doc = read_document(args.input)
    cat, _, G = grid_from_document(doc, args.input)
    E = _class(args.cls or doc.get("class", "regular_epi"), cat, _lemma_bound(cat))
    r = three_by_three(cat, G, E, args.direction)
    body = {"backend": cat.backend, "class": E.selector, "direction": args.direction, "grid": grid_result_json(cat, r)}
    lines = ["hypotheses:"] + [f"  {c}: {'yes' if ok else 'no'}" for c, ok in r.hypotheses]
    lines.append(f"first row E-exact: {'yes' if r.first_row.ok else 'no (' + r.first_row.detail + ')'}")
    lines.append(f"last row E-exact: {'yes' if r.last_row.ok else 'no (' + r.last_row.detail + ')'}")
    lines.append(f"<v',g'> in E: {'yes' if r.pairing_in_E else 'no'}")
    lines.append(f"verdict: {r.verdict.status}" + (f" ({r.verdict.detail})" if r.verdict.detail else ""))
    _emit(args, body, lines, started)
    return EXIT_OK if r.verdict.ok else EXIT_MISMATCH


def cmd_exact(args) -> int:
    started = time.perf_counter()
    doc = read_document(args.input)
    cat, _, seq = sequence_from_document(doc, args.input)
    E = _class(args.cls or doc.get("class", "regular_epi"), cat, _lemma_bound(cat))
    nodes = {}
    lines = []
    all_ok = True
    for i in range(1, len(seq.arrows)):
        v = is_e_exact_at(cat, seq, i, E)
        nodes[seq.names[i]] = verdict_json(v)
        all_ok &= v.ok
        lines.append(f"E-exact at {seq.names[i]}: {'yes' if v.ok else 'no: ' + v.detail}")
    body = {"backend": cat.backend, "class": E.selector, "nodes": nodes, "exact": all_ok}
    _emit(args, body, lines, started)
    want = args.expect != "fails"
    return EXIT_OK if all_ok == want else EXIT_MISMATCH


def cmd_compare(args) -> int:
    started = time.perf_counter()
    cat = _category(args)
    bound = _bound(args, cat)
    E1 = parse_class(args.cls, cat)
    E2 = parse_class(args.other, cat)
    objs = cat.objects(bound)
    total, diffs = 0, []
    for A, B in itertools.product(objs, objs):
        for f in cat.homs(A, B):
            total += 1
            a, b = E1.member(cat, f), E2.member(cat, f)
            if a != b:
                diffs.append((A, B, f, a, b))
    same = not diffs
    body = {"backend": cat.backend, "class": E1.selector, "other": E2.selector,
            "morphisms-compared": total, "differences": len(diffs), "equal": same}
    lines = [f"compared {total} morphisms: " + ("classes agree" if same else f"{len(diffs)} differences")]
    for A, B, f, a, b in diffs[:5]:
        lines.append(f"  {A} -> {B} {_compact(cat.morphism_payload(f))}: {E1.selector}={a} {E2.selector}={b}")
    _emit(args, body, lines, started)
    want = args.expect != "differ"
    return EXIT_OK if same == want else EXIT_MISMATCH


def explicit_classes(cat) -> list[Explicit]:
    """Every arrow set of a table category that contains all isomorphisms."""
    mors = cat.all_morphisms()
    isos = [f for f in mors if cat.is_iso(f)]
    rest = [f for f in mors if f not in isos]
    base = {cat.arrow_name(f) for f in isos}
    out = []
    for r in range(len(rest) + 1):
        for extra in itertools.combinations(rest, r):
            out.append(Explicit(frozenset(base | {cat.arrow_name(f) for f in extra})))
    return out


def theorem_corpus(kind: str, max_morphisms: int, budget: int):
    """``(entries, notes)`` for verify-theorems."""
    from . import tablecat

    entries, notes = [], []
    if kind in ("tablecat", "all"):
        cats = list(tablecat.enumerate_categories(max_morphisms, budget))
        kept = [c for c in cats if c.has_standing_limits()]
        notes.append(f"{len(cats)} categories with at most {max_morphisms} morphisms; "
                     f"{len(kept)} have finite limits and cokernels")
        for c in kept:
            for E in explicit_classes(c):
                entries.append(CorpusEntry(f"{c.label}/{E.selector}", c, E, None))
    if kind in ("backends", "all"):
        for backend, bound in (("finab", 4), ("fingrp", 6), ("pset", 3)):
            cat = make_category(backend)
            for sel in BUILTIN_KINDS:
                entries.append(CorpusEntry(f"{backend}<={bound}/{sel}", cat, Builtin(sel), bound))
    return entries, notes


def cmd_verify(args) -> int:
    started = time.perf_counter()
    entries, notes = theorem_corpus(args.corpus, args.max_morphisms, args.budget)
    tallies = verify_implication(entries, tuple(Theorem), jobs=args.jobs)
    violations = sum(len(t.violations) for t in tallies.values())
    theorems = {}
    lines = list(notes) + [f"corpus entries: {len(entries)}"]
    for th, t in tallies.items():
        theorems[th.value] = {"entries": t.entries, "antecedent-held": t.antecedent_held,
                              "violations": list(t.violations)}
        lines.append(f"{th.value:<16} antecedent held in {t.antecedent_held}/{t.entries}, violations: {len(t.violations)}")
        lines += [f"  {v}" for v in t.violations]
    body = {"corpus": args.corpus, "max-morphisms": args.max_morphisms, "notes": notes,
            "entries": [e.label for e in entries], "theorems": theorems, "violations": violations}
    lines.append("zero violations" if violations == 0 else f"{violations} violations")
    _emit(args, body, lines, started)
    return EXIT_OK if violations == 0 else EXIT_MISMATCH


# -- entry point --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relhom", description="Check relative homological axioms and lemmas on finite categories.")
    p.add_argument("--version", action="version", version=f"relhom {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, backend=True):
        sp.add_argument("--json", action="store_true", help="machine-readable report on stdout")
        sp.add_argument("--timing", action="store_true", help="include wall time (makes reports non-reproducible)")
        sp.set_defaults(echo=None)
        if backend:
            sp.add_argument("--backend", required=True, choices=BACKENDS)
            sp.add_argument("--category", help="tablecat: bundled name or table file (default: trivial)")
            sp.add_argument("--max-size", type=int, help="largest object size enumerated")

    sp = sub.add_parser("check", help="check axioms for a class")
    common(sp)
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--axioms", default="all", help="comma list of a..g, 2a..2d, or all")
    sp.add_argument("--expect", choices=("holds", "fails"), default="holds")
    sp.add_argument("--witness-dir", help="write one witness file per failing axiom here")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("search", help="least counterexample to one axiom")
    common(sp)
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--axiom", required=True)
    sp.add_argument("--witness-out")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("recheck", help="re-check a witness file in isolation")
    common(sp, backend=False)
    sp.add_argument("--input", required=True)
    sp.set_defaults(func=cmd_recheck)

    sp = sub.add_parser("snake", help="run the relative snake lemma on a diagram file")
    common(sp, backend=False)
    sp.add_argument("--input", required=True)
    sp.add_argument("--mode", choices=("homological", "weak"), default="homological")
    sp.add_argument("--class", dest="cls")
    sp.set_defaults(func=cmd_snake)

    sp = sub.add_parser("3x3", help="run the relative 3x3 lemma on a grid file")
    common(sp, backend=False)
    sp.add_argument("--input", required=True)
    sp.add_argument("--direction", choices=("both", "first-from-last", "last-from-first"), default="both")
    sp.add_argument("--class", dest="cls")
    sp.set_defaults(func=cmd_grid)

    sp = sub.add_parser("exact", help="E-exactness of a sequence file")
    common(sp, backend=False)
    sp.add_argument("--input", required=True)
    sp.add_argument("--class", dest="cls")
    sp.add_argument("--expect", choices=("holds", "fails"), default="holds")
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("compare", help="compare two classes extensionally")
    common(sp)
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--other", required=True)
    sp.add_argument("--expect", choices=("equal", "differ"), default="equal")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("verify-theorems", help="check the implications between axioms over a corpus")
    common(sp, backend=False)
    sp.add_argument("--corpus", choices=("tablecat", "backends", "all"), default="tablecat")
    sp.add_argument("--max-morphisms", type=int, default=6)
    sp.add_argument("--budget", type=int, default=6, help="largest morphism count enumeration may reach")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.echo = list(argv) if argv is not None else None
    try:
        return args.func(args)
    except (HypothesisError, BudgetError, EngineInconsistency, LimitMissing, PluginError) as e:
        print(f"relhom: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ENGINE
    except InputError as e:
        print(f"relhom: input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except RelhomError as e:
        print(f"relhom: {e}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
