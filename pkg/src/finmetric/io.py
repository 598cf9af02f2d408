"""JSON encoding of every object the CLI reads or writes.

Rationals are written as ``"p/q"`` strings (integers as ``"p"``); input also
accepts decimal strings and JSON integers.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import jsonschema

from .gh import CauchyCertificate, DisjointSumReport, GhEstimate
from .groups import FiniteMetricGroup, QuotientGroupResult, validate_group
from .isometry import AlphaSpec, IhtResult, IsometryGroup, OrbitPartition
from .metric import DerivativeResult, FiniteMetricSpace, PointMap, format_rational, validate_space
from .orders import OrderVerdict, UniformCompactnessReport
from .systems import (
    DirectSystemPrefix,
    ExistsVerdict,
    InverseSystemPrefix,
    LimitApproximation,
    validate_direct_system,
    validate_inverse_system,
)

_RATIONAL = {"oneOf": [{"type": "string", "pattern": r"^\s*-?\d+(\.\d+)?(/\d+)?\s*$"}, {"type": "integer"}]}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _RATIONAL}}
_INDEX_LIST = {"type": "array", "items": {"type": "integer", "minimum": 0}}

SPACE_SCHEMA = {
    "type": "object",
    "required": ["labels", "dist"],
    "properties": {"labels": {"type": "array", "items": {"type": "string"}, "minItems": 1}, "dist": _MATRIX},
}

ALPHA_SCHEMA = {
    "type": "object",
    "required": ["variant"],
    "properties": {
        "variant": {"enum": ["iso", "iso_inv", "iso_stab", "iso_fixed", "subgroup", "homeo", "lip", "custom"]},
        "indices": _INDEX_LIST,
        "perms": {"type": "array", "items": _INDEX_LIST},
        "M": _RATIONAL,
        "cost": _MATRIX,
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["lower", "upper", "exact"],
    "properties": {
        "lower": _RATIONAL,
        "upper": _RATIONAL,
        "exact": {"type": "boolean"},
        "witness": {"type": ["array", "null"], "items": {"type": "array", "items": {"type": "integer"}}},
    },
}

CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["certified", "tail_index", "tolerance", "pair_bounds"],
    "properties": {
        "certified": {"type": "boolean"},
        "tail_index": {"type": ["integer", "null"]},
        "tolerance": _RATIONAL,
        "pair_bounds": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3}},
        "violation": {"type": ["array", "null"]},
    },
}

VERDICT_SCHEMA = {
    "type": "object",
    "required": ["relation", "holds", "witness"],
    "properties": {
        "relation": {"enum": ["preceq", "preceq_s", "preceq_i"]},
        "holds": {"type": "boolean"},
        "witness": {
            "type": ["object", "null"],
            "properties": {"image": _INDEX_LIST, "subset": {"type": ["array", "null"]}},
        },
    },
}

GROUP_SCHEMA = {
    "type": "object",
    "required": ["elements", "mul", "dist"],
    "properties": {
        "elements": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "mul": {"type": "array", "items": _INDEX_LIST},
        "dist": _MATRIX,
    },
}

SYSTEM_SCHEMA = {
    "type": "object",
    "required": ["spaces", "bonds", "kind"],
    "properties": {
        "spaces": {"type": "array", "items": SPACE_SCHEMA, "minItems": 1},
        "bonds": {"type": "array", "items": _INDEX_LIST},
        "kind": {"enum": ["direct", "inverse"]},
    },
}

SCHEMAS = {
    "space": SPACE_SCHEMA,
    "alpha": ALPHA_SCHEMA,
    "report": REPORT_SCHEMA,
    "certificate": CERTIFICATE_SCHEMA,
    "verdict": VERDICT_SCHEMA,
    "group": GROUP_SCHEMA,
    "system": SYSTEM_SCHEMA,
}


class SchemaError(ValueError):
    pass


def check(obj, kind: str):
    try:
        jsonschema.validate(obj, SCHEMAS[kind])
    except jsonschema.ValidationError as err:
        raise SchemaError(f"invalid {kind} JSON: {err.message}") from None
    return obj


def q(x: Fraction) -> str:
    return format_rational(Fraction(x))


def _matrix(d):
    return [[q(v) for v in row] for row in d]


def load(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as err:
        raise SchemaError(f"{path}: not valid JSON ({err.msg})") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2)


# -- spaces, maps ------------------------------------------------------------


def space_to_json(X: FiniteMetricSpace) -> dict:
    return {"labels": list(X.labels), "dist": _matrix(X.dist)}


def space_from_json(obj) -> FiniteMetricSpace:
    check(obj, "space")
    return validate_space(obj["labels"], obj["dist"])


def map_to_json(f: PointMap) -> dict:
    return {"image": list(f.image), "non_expansive": f.non_expansive, "surjective": f.surjective,
            "isometric": f.isometric}


def derivative_to_json(res: DerivativeResult) -> dict:
    return {"quotient": space_to_json(res.quotient), "projection": map_to_json(res.projection),
            "classes": [list(c) for c in res.classes]}


def iht_to_json(res: IhtResult) -> dict:
    return {"height": res.height, "tower": [space_to_json(X) for X in res.tower],
            "projections": [list(p.image) for p in res.projections]}


def group_elements_to_json(G: IsometryGroup) -> dict:
    return {"n": G.n, "order": len(G), "elements": [list(p) for p in G.elements]}


def orbits_to_json(part: OrbitPartition) -> dict:
    return {"class_of": list(part.class_of), "classes": [list(c) for c in part.classes]}


def alpha_from_json(obj) -> AlphaSpec:
    check(obj, "alpha")
    return AlphaSpec(obj["variant"], obj.get("indices"), obj.get("perms"), obj.get("M"), obj.get("cost"))


# -- GH ----------------------------------------------------------------------


def estimate_to_json(e: GhEstimate) -> dict:
    return {"lower": q(e.lower), "upper": q(e.upper), "exact": e.exact,
            "witness": None if e.witness is None else [list(p) for p in e.witness.pairs]}


def certificate_to_json(c: CauchyCertificate | None) -> dict | None:
    if c is None:
        return None
    return {
        "certified": c.certified,
        "tail_index": c.tail_index,
        "tolerance": q(c.tolerance),
        "pair_bounds": [[m, n, q(b)] for m, n, b in c.pair_bounds],
        "violation": None if c.violation is None else [c.violation[0], c.violation[1], q(c.violation[2])],
        "window": c.window,
        "length": c.length,
    }


def disjoint_sum_to_json(r: DisjointSumReport) -> dict:
    return {
        "certified": r.certified, "tail_index": r.tail_index, "tolerance": q(r.tolerance), "r": q(r.r),
        "inequality_holds": r.inequality_holds,
        "rows": [{"index": w.index, "gh_x": q(w.gh_x), "gh_y": q(w.gh_y), "union_lower": q(w.union_lower),
                  "union_upper": q(w.union_upper)} for w in r.rows],
    }


# -- orders ------------------------------------------------------------------


def verdict_to_json(v: OrderVerdict) -> dict:
    witness = None
    if v.witness is not None:
        witness = {"image": list(v.witness.image), "subset": None if v.subset is None else list(v.subset)}
    return {"relation": v.relation, "holds": v.holds, "witness": witness}


def compactness_to_json(r: UniformCompactnessReport) -> dict:
    return {
        "bounded_diam": q(r.bounded_diam),
        "per_epsilon": [{"epsilon": q(e.epsilon), "N": e.N, "sizes": list(e.sizes),
                         "dense_sets": [list(s) for s in e.dense_sets], "strictly_increasing": e.strictly_increasing}
                        for e in r.per_epsilon],
    }


# -- groups ------------------------------------------------------------------


def group_to_json(G: FiniteMetricGroup) -> dict:
    return {"elements": list(G.labels), "mul": [list(r) for r in G.mul], "dist": _matrix(G.metric.dist)}


def group_from_json(obj) -> FiniteMetricGroup:
    check(obj, "group")
    return validate_group(obj["elements"], obj["mul"], obj["dist"])


def quotient_to_json(res: QuotientGroupResult) -> dict:
    return {"normal_subgroup": list(res.normal_subgroup), "quotient": group_to_json(res.quotient),
            "projection": list(res.projection.image), "cosets": [list(c) for c in res.cosets]}


# -- systems -----------------------------------------------------------------


def system_to_json(P) -> dict:
    kind = "direct" if isinstance(P, DirectSystemPrefix) else "inverse"
    return {"spaces": [space_to_json(X) for X in P.spaces], "bonds": [list(b.image) for b in P.bonds], "kind": kind}


def system_from_json(obj) -> DirectSystemPrefix | InverseSystemPrefix:
    check(obj, "system")
    spaces = [validate_space(s["labels"], s["dist"]) for s in obj["spaces"]]
    build = validate_direct_system if obj["kind"] == "direct" else validate_inverse_system
    return build(spaces, obj["bonds"])


def limit_to_json(L: LimitApproximation) -> dict:
    return {"status": L.status, "object": None if L.object is None else space_to_json(L.object),
            "arrows": [list(a.image) for a in L.arrows], "certificate": certificate_to_json(L.certificate),
            "stable_from": L.stable_from}


def exists_to_json(v: ExistsVerdict) -> dict:
    out = {"exists": v.exists, "criterion": v.criterion}
    if v.superspace is not None:
        out["superspace"] = space_to_json(v.superspace.space)
        out["embeddings"] = [list(e.image) for e in v.superspace.embeddings]
    if v.growth:
        out["growth"] = [{"member": n, "claimed": c, "dense_set_size": s} for n, c, s in v.growth]
    return out
