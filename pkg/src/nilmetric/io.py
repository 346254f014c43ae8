"""JSON input/output for algebras, data sets and lattices; CSV for geodesics.

All indices in files are 1-based.  Rationals are written as strings
``"p/q"`` (or ``"p"``); integers are also accepted on input.
"""

from __future__ import annotations

import csv
import hashlib
import io as _io
import json
from pathlib import Path
from typing import Any

import jsonschema

from .construct import DataSet
from .errors import SchemaError
from .exactlin import RatMatrix, SymmetricForm, format_rat, rat
from .group import LatticeSpec
from .metgeo import GeodesicSample, MetricNilLieAlgebra
from .nilalg import NilLieAlgebra, from_structure_constants

RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*[1-9]\d*)?\s*$"},
    ]
}
MATRIX = {"type": "array", "items": {"type": "array", "items": RATIONAL}}
BRACKETS = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["i", "j", "coeffs"],
        "additionalProperties": False,
        "properties": {
            "i": {"type": "integer", "minimum": 1},
            "j": {"type": "integer", "minimum": 1},
            "coeffs": {
                "type": "object",
                "patternProperties": {r"^[1-9]\d*$": RATIONAL},
                "additionalProperties": False,
            },
        },
    },
}
_ALG_PROPS = {
    "kind": {"type": "string"},
    "name": {"type": "string"},
    "dim": {"type": "integer", "minimum": 1},
    "basis": {"type": "array", "items": {"type": "string"}},
    "brackets": BRACKETS,
}
ALGEBRA_SCHEMA = {
    "type": "object",
    "required": ["dim", "brackets", "metric"],
    "additionalProperties": False,
    "properties": {**_ALG_PROPS, "kind": {"const": "algebra"}, "metric": MATRIX},
}
DATASET_SCHEMA = {
    "type": "object",
    "required": ["dim", "brackets", "metric_g", "rep", "metric_V"],
    "additionalProperties": False,
    "properties": {
        **_ALG_PROPS,
        "kind": {"const": "dataset"},
        "metric_g": MATRIX,
        "rep": {"type": "array", "items": MATRIX},
        "metric_V": MATRIX,
        "v_basis": {"type": "array", "items": {"type": "string"}},
    },
}
LATTICE_SCHEMA = {
    "type": "object",
    "required": ["scaling"],
    "additionalProperties": False,
    "properties": {"kind": {"const": "lattice"}, "scaling": {"type": "array", "items": RATIONAL, "minItems": 1}},
}


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def _validate(doc: Any, schema: dict) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = max(errors, key=lambda e: len(e.absolute_path))
        raise SchemaError(err.message, _pointer(err.absolute_path))


def _rat(x, ptr: str):
    try:
        return rat(x.replace(" ", "") if isinstance(x, str) else x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"not a rational number: {x!r}", ptr) from exc


def _matrix(rows, ptr: str, size: int | None = None) -> RatMatrix:
    if size is not None and (len(rows) != size or any(len(r) != size for r in rows)):
        raise SchemaError(f"expected a {size}x{size} matrix", ptr)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise SchemaError("ragged matrix", ptr)
    ncols = len(rows[0]) if rows else (size or 0)
    return RatMatrix([[_rat(v, f"{ptr}/{i}/{j}") for j, v in enumerate(r)] for i, r in enumerate(rows)], ncols)


def _form(rows, ptr: str, size: int) -> SymmetricForm:
    mat = _matrix(rows, ptr, size)
    if not mat.is_symmetric():
        raise SchemaError("metric must be symmetric", ptr)
    return SymmetricForm(mat)


def _algebra(doc: dict, require_nilpotent: bool) -> NilLieAlgebra:
    n = doc["dim"]
    if "basis" in doc and len(doc["basis"]) != n:
        raise SchemaError(f"basis must list {n} names", "/basis")
    seen: dict[tuple[int, int], dict] = {}
    triples = []
    for idx, entry in enumerate(doc["brackets"]):
        ptr = f"/brackets/{idx}"
        i, j = entry["i"], entry["j"]
        if i > n or j > n:
            raise SchemaError(f"index out of range 1..{n}", ptr)
        coeffs = {}
        for k, v in entry["coeffs"].items():
            if int(k) > n:
                raise SchemaError(f"index out of range 1..{n}", f"{ptr}/coeffs/{k}")
            val = _rat(v, f"{ptr}/coeffs/{k}")
            if val:
                coeffs[int(k) - 1] = val
        if i == j and coeffs:
            raise SchemaError("[e_i, e_i] must vanish", ptr)
        if (i, j) in seen and seen[(i, j)] != coeffs:
            raise SchemaError("conflicting duplicate bracket entry", ptr)
        if (j, i) in seen and seen[(j, i)] != {k: -v for k, v in coeffs.items()}:
            raise SchemaError("mirror entry contradicts antisymmetry", ptr)
        seen[(i, j)] = coeffs
        triples.append((i - 1, j - 1, coeffs))
    return from_structure_constants(n, triples, doc.get("basis"), require_nilpotent=require_nilpotent)


def parse_document(doc: Any):
    """Validated domain object from an already-decoded JSON document."""
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object", "")
    if "scaling" in doc:
        _validate(doc, LATTICE_SCHEMA)
        return LatticeSpec(tuple(_rat(v, f"/scaling/{i}") for i, v in enumerate(doc["scaling"])))
    if "rep" in doc or doc.get("kind") == "dataset":
        _validate(doc, DATASET_SCHEMA)
        g = _algebra(doc, require_nilpotent=False)
        gm = _form(doc["metric_g"], "/metric_g", g.dim)
        if len(doc["rep"]) != g.dim:
            raise SchemaError(f"rep must hold {g.dim} matrices", "/rep")
        q = len(doc["metric_V"])
        vm = _form(doc["metric_V"], "/metric_V", q)
        rep = tuple(_matrix(r, f"/rep/{i}", q) for i, r in enumerate(doc["rep"]))
        if "v_basis" in doc and len(doc["v_basis"]) != q:
            raise SchemaError(f"v_basis must list {q} names", "/v_basis")
        return DataSet(g, gm, rep, vm, doc.get("name", ""), tuple(doc.get("v_basis", ())))
    _validate(doc, ALGEBRA_SCHEMA)
    alg = _algebra(doc, require_nilpotent=True)
    return MetricNilLieAlgebra(alg, _form(doc["metric"], "/metric", alg.dim), doc.get("name", ""))


def parse_text(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno})", "") from exc
    return parse_document(doc)


def parse_input(path) -> Any:
    """Read and validate one input file (algebra, data set or lattice)."""
    return parse_text(Path(path).read_text(encoding="utf-8"))


# --------------------------------------------------------------------------
# serialization


def rat_str(x) -> str:
    return format_rat(rat(x))


def matrix_json(m: RatMatrix) -> list[list[str]]:
    return [[rat_str(v) for v in row] for row in m.rows]


def vector_json(v) -> list[str]:
    return [rat_str(x) for x in v]


def _brackets_json(alg: NilLieAlgebra) -> list[dict]:
    return [
        {"i": i + 1, "j": j + 1, "coeffs": {str(k + 1): rat_str(c) for k, c in enumerate(v) if c}}
        for i, j, v in alg.nonzero_brackets()
    ]


def to_document(obj) -> dict:
    if isinstance(obj, MetricNilLieAlgebra):
        doc = {
            "kind": "algebra",
            "dim": obj.dim,
            "basis": list(obj.alg.basis_names),
            "brackets": _brackets_json(obj.alg),
            "metric": matrix_json(obj.gram),
        }
    elif isinstance(obj, DataSet):
        doc = {
            "kind": "dataset",
            "dim": obj.dim_g,
            "basis": list(obj.g.basis_names),
            "brackets": _brackets_json(obj.g),
            "metric_g": matrix_json(obj.metric_g.gram),
            "rep": [matrix_json(r) for r in obj.rep],
            "metric_V": matrix_json(obj.metric_V.gram),
            "v_basis": list(obj.v_names),
        }
    elif isinstance(obj, LatticeSpec):
        return {"kind": "lattice", "scaling": vector_json(obj.scaling)}
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    if obj.name:
        doc["name"] = obj.name
    return doc


def dumps(doc: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def serialize(obj) -> str:
    return dumps(to_document(obj))


def digest(text: str | bytes) -> str:
    data = text.encode("utf-8") if isinstance(text, str) else text
    return hashlib.sha256(data).hexdigest()


def geodesic_csv(samples: list[GeodesicSample], names) -> str:
    """Columns: t, z-coordinates, v-coordinates (splitting bases), velocity (ambient), residual."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    p = len(samples[0].z) if samples else 0
    q = len(samples[0].v) if samples else 0
    w.writerow(
        ["t"] + [f"z{i + 1}" for i in range(p)] + [f"v{i + 1}" for i in range(q)]
        + [f"d_{n}" for n in names] + ["residual"]
    )
    for s in samples:
        w.writerow(
            [repr(float(s.t))]
            + [repr(float(x)) for x in s.z]
            + [repr(float(x)) for x in s.v]
            + [repr(float(x)) for x in s.velocity]
            + [repr(float(s.residual))]
        )
    return buf.getvalue()
