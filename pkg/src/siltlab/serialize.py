"""JSON schemas for complexes, silting objects and poset dumps.

Every artifact carries the versioned header ``"schema": "siltlab/1"``
and round-trips to an equal in-memory value; rational coefficients are
written as exact strings.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import Algebra, algebra_from_dict, algebra_to_dict
from .errors import MalformedSpec
from .homotopy import Category, Complex

SCHEMA = "siltlab/1"


def _coeff_str(c: Fraction) -> str:
    return str(c)


def _coeff_parse(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, TypeError) as exc:
        raise MalformedSpec(f"bad coefficient {s!r}: {exc}")


def complex_to_dict(X: Complex) -> dict:
    alg = X.algebra
    terms = {str(d): [str(v) for v in t] for d, t in sorted(X.terms.items())}
    diff = {}
    for d, m in sorted(X.diff.items()):
        diff[str(d)] = [
            [
                [[_coeff_str(c), alg.path_label(p)] for p, c in sorted(entry.items(), key=str)]
                for entry in row
            ]
            for row in m
        ]
    return {"terms": terms, "diff": diff}


def complex_from_dict(alg: Algebra, data: dict) -> Complex:
    try:
        terms = {
            int(d): tuple(_vertex(alg, v) for v in vs)
            for d, vs in data["terms"].items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedSpec(f"bad complex document: {exc}")
    diff = {}
    for d, rows in data.get("diff", {}).items():
        diff[int(d)] = [
            [
                _entry_from_list(alg, entry)
                for entry in row
            ]
            for row in rows
        ]
    return Complex(alg, terms, diff)


def _vertex(alg, v):
    if v in alg.vertex_index:
        return v
    try:
        iv = int(v)
    except (TypeError, ValueError):
        raise MalformedSpec(f"unknown vertex {v!r}")
    if iv in alg.vertex_index:
        return iv
    raise MalformedSpec(f"unknown vertex {v!r}")


def _entry_from_list(alg, entry):
    combo = {}
    for item in entry:
        if len(item) != 2:
            raise MalformedSpec(f"bad path term {item!r}")
        c = _coeff_parse(item[0])
        p = alg.path_from_label(item[1])
        if c:
            combo[p] = combo.get(p, Fraction(0)) + c
    return combo


def silting_list_to_dict(cat: Category, objects) -> dict:
    used = sorted({i for ids in objects for i in ids})
    return {
        "schema": SCHEMA,
        "kind": "silting-list",
        "silting_criterion": (
            "presilting + full rank + unimodular split K-theory matrix; "
            "complete for derived-discrete and Dynkin-A inputs, heuristic beyond"
        ),
        "algebra": algebra_to_dict(cat.algebra),
        "objects": [{"ids": list(ids)} for ids in objects],
        "registry": {str(i): complex_to_dict(cat.complex_of(i)) for i in used},
    }


def silting_list_from_dict(data: dict):
    """Rebuild (category, objects) from a silting-list document."""
    alg = algebra_from_dict(data["algebra"])
    cat = Category(alg)
    remap = _intern_registry(cat, alg, data.get("registry", {}))
    objects = [
        tuple(sorted(remap[int(i)] for i in entry["ids"]))
        for entry in data["objects"]
    ]
    return cat, objects


def _intern_registry(cat: Category, alg: Algebra, registry: dict) -> dict:
    remap = {}
    for key in sorted(registry, key=int):
        X = complex_from_dict(alg, registry[key])
        ids = cat.register(X)
        if len(ids) != 1:
            raise MalformedSpec(f"registry entry {key} is not indecomposable")
        remap[int(key)] = ids[0]
    return remap


def poset_payload_from_dict(data: dict):
    """Rebuild (category, pairs-by-key, structural data) from a poset dump."""
    from .silting import SiltingPair

    alg = algebra_from_dict(data["algebra"])
    cat = Category(alg)
    remap = _intern_registry(cat, alg, data.get("registry", {}))
    pairs = {}
    for node in data["nodes"]:
        if "ambient" in node:
            pairs[node["key"]] = SiltingPair.of(
                tuple(remap[int(i)] for i in node["ambient"]),
                tuple(remap[int(i)] for i in node["sub"]),
            )
    return cat, pairs


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
