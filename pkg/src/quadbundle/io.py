"""JSON documents for matrices, curves, square classes and profiles."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .brauer import SquareClass
from .coker import CokerKind, CokernelProfile
from .field import FieldSpec
from .gradedform import GradedSymMatrix, PlaneCurve, Smoothness, SmoothStatus, validate
from .grammar import format_poly, parse
from .polymat import PolyMatrix

SCHEMA_VERSION = 1


class DocumentError(ValueError):
    pass


def _header(kind: str, field: FieldSpec, variables) -> dict:
    return {"schema_version": SCHEMA_VERSION, "type": kind, "field": field.to_json(),
            "variables": list(variables)}


def _read_header(doc: dict, kind: str | tuple[str, ...]) -> tuple[FieldSpec, tuple[str, ...]]:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    kinds = (kind,) if isinstance(kind, str) else kind
    if doc.get("type", kinds[0]) not in kinds:
        raise DocumentError(f"expected a {' or '.join(kinds)} document, got {doc.get('type')!r}")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema version {version}")
    try:
        field = FieldSpec.from_json(doc.get("field", {"kind": "rational"}))
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    return field, tuple(doc.get("variables", ("x", "y", "z")))


def polymatrix_to_json(m: PolyMatrix, col_degrees=None) -> dict:
    out = _header("polymatrix", m.field, m.vars)
    out["matrix"] = [[format_poly(e) for e in row] for row in m.entries]
    out["shape"] = [m.rows, m.cols]
    if col_degrees is not None:
        out["col_degrees"] = list(col_degrees)
    return out


def polymatrix_from_json(doc: dict) -> tuple[PolyMatrix, tuple[int, ...] | None]:
    field, variables = _read_header(doc, ("polymatrix", "matrix"))
    rows = doc.get("matrix")
    if not isinstance(rows, list):
        raise DocumentError("missing matrix")
    mat = PolyMatrix([[parse(str(e), variables, field) for e in row] for row in rows], field, variables)
    if "shape" in doc and list(doc["shape"]) != [mat.rows, mat.cols]:
        raise DocumentError("shape does not match the matrix")
    cd = doc.get("col_degrees")
    return mat, tuple(cd) if cd is not None else None


def matrix_to_json(q: GradedSymMatrix) -> dict:
    out = _header("matrix", q.field, q.mat.vars)
    out["twist"] = q.twist
    out["degrees"] = list(q.degrees) if q.degrees is not None else None
    out["matrix"] = [[format_poly(e) for e in row] for row in q.mat.entries]
    return out


def matrix_from_json(doc: dict, check_det: bool = True) -> GradedSymMatrix:
    mat, _ = polymatrix_from_json(doc | {"type": "polymatrix"} if doc.get("type") == "matrix" else doc)
    degrees = doc.get("degrees")
    twist = doc.get("twist")
    return validate(tuple(degrees) if degrees is not None else None, twist, mat, check_det=check_det)


def _scalar_json(c) -> str:
    return str(c)


def _scalar_from(s: str, field: FieldSpec):
    return field(Fraction(s))


def curve_to_json(c: PlaneCurve) -> dict:
    out = _header("curve", c.field, c.f.vars)
    out["f"] = format_poly(c.f)
    out["degree"] = c.degree
    out["smoothness"] = c.smooth.to_json()
    return out


def curve_from_json(doc: dict) -> PlaneCurve:
    field, variables = _read_header(doc, "curve")
    f = parse(doc["f"], variables, field)
    sm = doc.get("smoothness", {"status": "Unchecked"})
    point = sm.get("point")
    smooth = Smoothness(SmoothStatus(sm["status"]),
                        tuple(_scalar_from(c, field) for c in point) if point is not None else None,
                        sm.get("detail", ""))
    return PlaneCurve(f, smooth)


def square_class_to_json(s: SquareClass) -> dict:
    out = _header("square-class", s.g.field, s.g.vars)
    out |= {"g": format_poly(s.g), "line": format_poly(s.line), "curve": format_poly(s.curve.f),
            "degree": int(s.g.degree())}
    return out


def square_class_from_json(doc: dict) -> SquareClass:
    field, variables = _read_header(doc, "square-class")
    return SquareClass(parse(doc["g"], variables, field), parse(doc["line"], variables, field),
                       PlaneCurve(parse(doc["curve"], variables, field)))


def profile_to_json(p: CokernelProfile) -> dict:
    return {"schema_version": SCHEMA_VERSION, "type": "profile"} | p.to_json()


def profile_from_json(doc: dict) -> CokernelProfile:
    if doc.get("type", "profile") != "profile":
        raise DocumentError("expected a profile document")
    table = {int(k): int(v) for k, v in doc.get("h0_table", {}).items()}
    return CokernelProfile(doc.get("c"), doc.get("twist"), CokerKind(doc["kind"]), table,
                           doc.get("normalization"), doc.get("diagnostic", ""))


def report_to_json(payload: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "type": "report"} | payload


SAVERS = {
    GradedSymMatrix: matrix_to_json,
    PlaneCurve: curve_to_json,
    SquareClass: square_class_to_json,
    CokernelProfile: profile_to_json,
}
LOADERS = {
    "matrix": matrix_from_json,
    "polymatrix": lambda d: polymatrix_from_json(d)[0],
    "curve": curve_from_json,
    "square-class": square_class_from_json,
    "profile": profile_from_json,
    "report": lambda d: d,
}


def save(obj: Any) -> dict:
    if isinstance(obj, PolyMatrix):
        return polymatrix_to_json(obj)
    for cls, fn in SAVERS.items():
        if isinstance(obj, cls):
            return fn(obj)
    if isinstance(obj, dict):
        return report_to_json(obj)
    raise DocumentError(f"cannot serialize {type(obj).__name__}")


def load(doc: dict) -> Any:
    kind = doc.get("type")
    if kind is None:
        kind = "matrix" if "matrix" in doc else None
    if kind not in LOADERS:
        raise DocumentError(f"unknown document type {kind!r}")
    return LOADERS[kind](doc)


def dumps(obj: Any) -> str:
    doc = obj if isinstance(obj, dict) and "schema_version" in obj else save(obj)
    return json.dumps(doc, indent=2, sort_keys=True)


def loads(text: str) -> Any:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return load(doc)
