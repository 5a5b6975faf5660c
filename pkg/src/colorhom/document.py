"""JSON algebra documents: loading, validation and canonical rendering.

Document layout::

    {
      "group": {"free_rank": 0, "torsion": [2]},
      "bicharacter": {"exponent_matrix": [[1]]},
      "basis": [{"name": "e1", "degree": [0]}, {"name": "e2", "degree": [1]}],
      "products": [
        {"name": "mu", "entries": [["e1", "e1", {"e1": "-1"}], ...]},
        {"name": "br", "skew_complete": true, "entries": [...]}
      ],
      "alpha": [["1", "0"], ["0", "-1"]],
      "maps": {"R": [["-1", "0"], ["0", "-1"]]},
      "expect": [{"suite": "hom-associative-color", "bind": {"mu": "mu"}}],
      "parameters": {"lambda": "1"},
      "description": "...",
      "provenance": {...}
    }

Matrices are square lists of rows; entry ``[i][j]`` is the coefficient of
basis element ``i`` in the image of basis element ``j``.  Coefficients are
integers or strings of exact rationals; floats are rejected.  Multiplicative
gradings such as ``{-1, +1}`` are written additively (``-1`` becomes ``1``
in ``Z_2``).  A ``skew_complete`` product lists only entries with the left
index not after the right one; the rest is filled in by
``y*x = -eps(y, x) x*y``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .algebra import (GradedSpace, HomAlgebra, LinearMap, Product, Vector, format_scalar,
                      to_scalar)
from .grading import Bicharacter, GradingGroup, StructureError

TOP_KEYS = {"group", "bicharacter", "basis", "products", "alpha", "maps",
            "expect", "parameters", "description", "provenance"}
META_KEYS = ("expect", "parameters", "description", "provenance")


def _require(doc: dict, key: str):
    if key not in doc:
        raise StructureError(f"document is missing {key!r}")
    return doc[key]


def _matrix(space: GradedSpace, rows: Any, what: str) -> LinearMap:
    if not isinstance(rows, list) or len(rows) != space.dim or any(
            not isinstance(r, list) or len(r) != space.dim for r in rows):
        raise StructureError(f"{what} must be a {space.dim}x{space.dim} matrix")
    return LinearMap.from_matrix([[to_scalar(c) for c in r] for r in rows])


def _vector(space: GradedSpace, obj: Any, what: str) -> Vector:
    if not isinstance(obj, dict):
        raise StructureError(f"{what}: expected an object mapping basis names to coefficients")
    return Vector((space.index(n), to_scalar(c)) for n, c in obj.items())


def _product(space: GradedSpace, eps: Bicharacter, spec: dict) -> Product:
    name = _require(spec, "name")
    if not isinstance(name, str) or not name.isidentifier():
        raise StructureError(f"bad product name {name!r}")
    skew = bool(spec.get("skew_complete", False))
    table: dict[tuple[int, int], Vector] = {}
    for entry in spec.get("entries", []):
        if not isinstance(entry, list) or len(entry) != 3:
            raise StructureError(f"product {name!r}: entries are [left, right, value] triples")
        i, j = space.index(entry[0]), space.index(entry[1])
        if (i, j) in table:
            raise StructureError(f"product {name!r}: duplicate entry {entry[0]}*{entry[1]}")
        if skew and i > j:
            raise StructureError(
                f"product {name!r} is skew_complete; give {entry[1]}*{entry[0]} instead")
        table[(i, j)] = _vector(space, entry[2], f"product {name!r} entry")
    if skew:
        for (i, j), v in list(table.items()):
            if i < j:
                sign = eps(space.degree(j), space.degree(i))
                table[(j, i)] = v.scale(-sign)
    return Product(name, table)


def algebra_from_dict(doc: dict) -> HomAlgebra:
    if not isinstance(doc, dict):
        raise StructureError("algebra document must be a JSON object")
    unknown = set(doc) - TOP_KEYS
    if unknown:
        raise StructureError(f"unknown document keys: {sorted(unknown)}")
    g = _require(doc, "group")
    group = GradingGroup(int(g.get("free_rank", 0)), tuple(g.get("torsion", ())))
    b = doc.get("bicharacter")
    eps = (Bicharacter(tuple(tuple(r) for r in b["exponent_matrix"]))
           if b is not None else Bicharacter.trivial(group.rank))
    basis = []
    for item in _require(doc, "basis"):
        basis.append((item["name"], group.degree(item["degree"])))
    space = GradedSpace(group, tuple(basis))
    if space.dim == 0:
        raise StructureError("algebra must have positive dimension")
    products = [_product(space, eps, p) for p in doc.get("products", [])]
    alpha = (_matrix(space, doc["alpha"], "alpha") if "alpha" in doc
             else LinearMap.identity(space.dim))
    maps = {k: _matrix(space, v, f"map {k!r}") for k, v in doc.get("maps", {}).items()}
    meta = {k: doc[k] for k in META_KEYS if k in doc}
    return HomAlgebra(space, tuple(products), alpha, eps, maps, meta)


def load_algebra(source: str | Path | dict) -> HomAlgebra:
    """Load from a dict, a JSON string, or a path to a JSON file."""
    if isinstance(source, dict):
        return algebra_from_dict(source)
    if isinstance(source, Path) or (isinstance(source, str)
                                    and not source.lstrip().startswith("{")):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"invalid JSON: {exc}") from exc
    return algebra_from_dict(doc)


def matrix_to_json(m: LinearMap) -> list[list[str]]:
    return [[format_scalar(c) for c in row] for row in m.matrix()]


def algebra_to_dict(alg: HomAlgebra) -> dict:
    sp = alg.space
    doc: dict[str, Any] = {
        "group": sp.group.to_json(),
        "bicharacter": alg.eps.to_json(),
        "basis": [{"name": n, "degree": list(d)} for n, d in sp.basis],
        "products": [
            {"name": p.name,
             "entries": [[sp.name(i), sp.name(j), sp.render(v)]
                         for (i, j), v in sorted(p.table.items())]}
            for p in alg.products
        ],
        "alpha": matrix_to_json(alg.alpha),
    }
    if alg.maps:
        doc["maps"] = {k: matrix_to_json(m) for k, m in alg.maps.items()}
    for k in META_KEYS:
        if k in alg.meta:
            doc[k] = alg.meta[k]
    return doc


def render_algebra(alg: HomAlgebra, indent: int | None = 2) -> str:
    """Canonical JSON text: sorted keys, reduced fractions, ordered entries."""
    return json.dumps(algebra_to_dict(alg), sort_keys=True, indent=indent,
                      ensure_ascii=False) + "\n"


def save_algebra(alg: HomAlgebra, path: str | Path) -> None:
    Path(path).write_text(render_algebra(alg), encoding="utf-8")
