"""Regenerate src/relhom/data/groups.json (the bundled group library).

Elements are listed with the identity first; permutation groups are sorted
lexicographically by image tuple.
"""

import itertools
import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "relhom" / "data" / "groups.json"


def table_from(elements, mul):
    idx = {e: i for i, e in enumerate(elements)}
    return [[idx[mul(a, b)] for b in elements] for a in elements]


def cyclic(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def perm_group(gens, degree):
    def mul(p, q):  # p after q
        return tuple(p[q[i]] for i in range(degree))

    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return table_from(sorted(seen), mul)


def dihedral(n):
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return perm_group([rot, ref], n)


def quaternion():
    # (sign, unit) with units 1, i, j, k
    prod = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elements = [(s, u) for u in "1ijk" for s in (1, -1)]

    def mul(a, b):
        s, u = prod[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    return table_from(elements, mul)


def klein():
    elements = list(itertools.product(range(2), repeat=2))
    return table_from(elements, lambda a, b: ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2))


def main():
    groups = [{"name": f"Z{n}", "table": cyclic(n)} for n in range(1, 13)]
    groups += [
        {"name": "V4", "table": klein()},
        {"name": "S3", "table": perm_group([(1, 2, 0), (1, 0, 2)], 3)},
        {"name": "D4", "table": dihedral(4)},
        {"name": "Q8", "table": quaternion()},
        {"name": "D5", "table": dihedral(5)},
        {"name": "D6", "table": dihedral(6)},
        {"name": "A4", "table": perm_group([(1, 2, 0, 3), (1, 0, 3, 2)], 4)},
    ]
    doc = {"format-version": "1", "groups": groups}
    OUT.write_text(json.dumps(doc, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main()
