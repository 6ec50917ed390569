"""JSON documents for submeasures, patterns, composites, integer sets,
matrices and reports.

Rationals travel as canonical strings (``"3/2"``, ``"2"``, ``"inf"``) and
subsets of a ground set as sorted index arrays.  ``dumps`` sorts keys so
equal inputs give identical bytes.
"""

from __future__ import annotations

import csv
import io as _io
import json
from fractions import Fraction
from typing import Any

from .core import (
    Block, Covering, FiniteSubmeasure, MinConst, OplusMax, OplusSum, PatternPoint,
    PatternSubmeasure, PointwiseMax, Scale, Table, ValidationReport, WeightedMeasure,
    mask_of, members,
)
from .errors import PathlabError, SchemaError
from .extrat import ext, fmt, is_inf
from .hull import HullWitness
from .pathology import DEGREES, Composite, PathologyReport
from .prefix import IntegerSet, MatrixPrefix


def _rat(x, what: str):
    try:
        if isinstance(x, bool) or isinstance(x, float):
            raise TypeError
        return ext(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SchemaError(f"{what}: expected a rational string, got {x!r}") from None


def _need(doc: dict, key: str, ctx: str):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"{ctx}: missing field {key!r}")
    return doc[key]


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(f"{what}: expected an integer, got {x!r}")
    return x


def _index_mask(indices, n: int, what: str) -> int:
    if not isinstance(indices, list) or not all(isinstance(i, int) and not isinstance(i, bool)
                                                for i in indices):
        raise SchemaError(f"{what}: expected an array of indices")
    if any(not 0 <= i < n for i in indices):
        raise SchemaError(f"{what}: index outside 0..{n - 1}")
    return mask_of(indices)


# --------------------------------------------------------------- submeasures

def submeasure_to_json(phi: FiniteSubmeasure) -> dict:
    return {"ground": phi.n, "repr": _repr_doc(phi)}


def _repr_doc(phi: FiniteSubmeasure) -> dict:
    if isinstance(phi, Table):
        return {"type": "table", "values": [fmt(v) for v in phi.values]}
    if isinstance(phi, Covering):
        return {"type": "cover", "generators": [members(g) for g in phi.generators]}
    if isinstance(phi, WeightedMeasure):
        return {"type": "weights", "weights": [fmt(w) for w in phi.weights]}
    if isinstance(phi, (OplusMax, OplusSum)):
        kind = "oplus-max" if isinstance(phi, OplusMax) else "oplus-sum"
        return {"type": kind, "left": submeasure_to_json(phi.left),
                "right": submeasure_to_json(phi.right)}
    if isinstance(phi, Scale):
        return {"type": "scale", "factor": fmt(phi.factor), "inner": submeasure_to_json(phi.inner)}
    if isinstance(phi, MinConst):
        return {"type": "min-const", "cap": fmt(phi.cap), "inner": submeasure_to_json(phi.inner)}
    if isinstance(phi, PointwiseMax):
        return {"type": "pointwise-max", "left": submeasure_to_json(phi.left),
                "right": submeasure_to_json(phi.right)}
    if isinstance(phi, Block):
        doc = {"type": "block", "aggregator": phi.aggregator,
               "blocks": [submeasure_to_json(b) for b in phi.blocks]}
        if phi.weights is not None:
            doc["weights"] = [fmt(w) for w in phi.weights]
        return doc
    raise SchemaError(f"no JSON form for {type(phi).__name__}")


def submeasure_from_json(doc: Any) -> FiniteSubmeasure:
    n = _int(_need(doc, "ground", "submeasure"), "ground")
    rep = _need(doc, "repr", "submeasure")
    kind = _need(rep, "type", "repr")
    try:
        phi = _build(kind, rep, n)
    except PathlabError as e:
        if isinstance(e, SchemaError):
            raise
        raise SchemaError(f"{kind}: {e}") from None
    if phi.n != n:
        raise SchemaError(f"declared ground {n} but the representation spans {phi.n}")
    return phi


def _build(kind: str, rep: dict, n: int) -> FiniteSubmeasure:
    if kind == "table":
        vals = _need(rep, "values", "table")
        if not isinstance(vals, list) or len(vals) != 1 << n:
            raise SchemaError(f"table needs {1 << n} values")
        return Table(tuple(_rat(v, "table value") for v in vals))
    if kind == "cover":
        gens = _need(rep, "generators", "cover")
        if not isinstance(gens, list):
            raise SchemaError("cover generators must be an array")
        return Covering(n, tuple(_index_mask(g, n, "generator") for g in gens))
    if kind == "weights":
        w = _need(rep, "weights", "weights")
        if not isinstance(w, list):
            raise SchemaError("weights must be an array")
        return WeightedMeasure(tuple(_rat(x, "weight") for x in w))
    if kind in ("oplus-max", "oplus-sum", "pointwise-max"):
        left = submeasure_from_json(_need(rep, "left", kind))
        right = submeasure_from_json(_need(rep, "right", kind))
        cls = {"oplus-max": OplusMax, "oplus-sum": OplusSum, "pointwise-max": PointwiseMax}[kind]
        return cls(left, right)
    if kind == "scale":
        return Scale(_rat(_need(rep, "factor", kind), "factor"),
                     submeasure_from_json(_need(rep, "inner", kind)))
    if kind == "min-const":
        return MinConst(_rat(_need(rep, "cap", kind), "cap"),
                        submeasure_from_json(_need(rep, "inner", kind)))
    if kind == "block":
        blocks = _need(rep, "blocks", kind)
        if not isinstance(blocks, list):
            raise SchemaError("blocks must be an array")
        w = rep.get("weights")
        weights = tuple(_rat(x, "block weight") for x in w) if w is not None else None
        return Block(tuple(submeasure_from_json(b) for b in blocks),
                     rep.get("aggregator", "sum"), weights)
    raise SchemaError(f"unknown submeasure type {kind!r}")


# ------------------------------------------------------ patterns, composites

def pattern_to_json(P: PatternSubmeasure) -> dict:
    return {"atoms": P.atoms, "theta": [fmt(t) for t in P.theta], "floor": fmt(P.floor)}


def pattern_from_json(doc: Any) -> PatternSubmeasure:
    k = _int(_need(doc, "atoms", "pattern"), "atoms")
    theta = _need(doc, "theta", "pattern")
    if not isinstance(theta, list):
        raise SchemaError("theta must be an array")
    try:
        return PatternSubmeasure(k, tuple(_rat(t, "theta") for t in theta),
                                 _rat(doc.get("floor", "0"), "floor"))
    except PathlabError as e:
        raise SchemaError(f"pattern: {e}") from None


def object_to_json(obj) -> dict:
    if isinstance(obj, Composite):
        return {"oplus": obj.mode, "parts": [object_to_json(p) for p in obj.parts]}
    if isinstance(obj, PatternSubmeasure):
        return pattern_to_json(obj)
    return submeasure_to_json(obj)


def object_from_json(doc: Any):
    """Submeasure, pattern or composite, told apart by their top-level keys."""
    if not isinstance(doc, dict):
        raise SchemaError("expected a JSON object")
    if "oplus" in doc:
        parts = _need(doc, "parts", "composite")
        if not isinstance(parts, list):
            raise SchemaError("composite parts must be an array")
        try:
            return Composite(doc["oplus"], tuple(object_from_json(p) for p in parts))
        except PathlabError as e:
            raise SchemaError(f"composite: {e}") from None
    if "atoms" in doc:
        return pattern_from_json(doc)
    if "ground" in doc:
        return submeasure_from_json(doc)
    raise SchemaError("not a submeasure, pattern or composite document")


# ------------------------------------------------------- sets and matrices

def integer_set_from_json(doc: Any) -> IntegerSet:
    if isinstance(doc, list):
        if not all(isinstance(i, int) and not isinstance(i, bool) and i >= 0 for i in doc):
            raise SchemaError("integer sets are arrays of nonnegative integers")
        return IntegerSet.of(doc)
    if isinstance(doc, dict):
        pred = _need(doc, "predicate", "integer set")
        bound = _int(_need(doc, "bound", "integer set"), "bound")
        try:
            return IntegerSet.where(str(pred), bound)
        except ValueError as e:
            raise SchemaError(str(e)) from None
    raise SchemaError("integer set must be an array or a predicate object")


def integer_set_to_json(A: IntegerSet):
    if A.elements is not None:
        return list(A.elements)
    return {"predicate": A.predicate, "bound": A.bound}


def matrix_from_json(doc: Any) -> MatrixPrefix:
    first = 0
    if isinstance(doc, dict):
        first = _int(doc.get("first_row", 0), "first_row")
        doc = _need(doc, "rows", "matrix")
    if not isinstance(doc, list) or not all(isinstance(r, list) for r in doc):
        raise SchemaError("matrix must be a row-major array of arrays")
    try:
        return MatrixPrefix(tuple(tuple(_rat(x, "matrix entry") for x in r) for r in doc), first)
    except ValueError as e:
        raise SchemaError(str(e)) from None


def matrix_to_json(M: MatrixPrefix) -> dict:
    return {"first_row": M.first_row, "rows": [[fmt(x) for x in r] for r in M.entries]}


def matrix_to_csv(M: MatrixPrefix) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row"] + [f"col{k}" for k in range(M.cols)])
    for i, r in zip(M.row_labels, M.entries):
        w.writerow([i] + [fmt(x) for x in r])
    return buf.getvalue()


# ------------------------------------------------------------------ reports

def set_ref(ref):
    """JSON form of a set reference: index array, pattern point, or (part, inner)."""
    if isinstance(ref, PatternPoint):
        return {"pattern": members(ref.pattern), "nonempty": ref.nonempty}
    if isinstance(ref, tuple) and len(ref) == 2:
        return {"part": ref[0], "set": set_ref(ref[1])}
    if isinstance(ref, int):
        return members(ref)
    return ref


def pathology_to_json(r: PathologyReport) -> dict:
    doc = {
        "p_fin": fmt(r.p_fin),
        "p": fmt(r.p),
        "p_sigma": fmt(r.p_sigma),
        "argmax": [set_ref(r.argmax.get(name)) for name in DEGREES],
    }
    if r.ratios is not None:
        doc["ratios"] = [{"set": set_ref(s), "value": fmt(v), "hull": fmt(h), "ratio": fmt(q)}
                         for s, v, h, q in r.ratios]
    if r.consistent is not None:
        doc["consistent"] = r.consistent
    return doc


def ratios_to_csv(r: PathologyReport) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["set", "value", "hull", "ratio"])
    for s, v, h, q in r.ratios or []:
        w.writerow([json.dumps(set_ref(s), sort_keys=True), fmt(v), fmt(h), fmt(q)])
    return buf.getvalue()


def validation_to_json(rep: ValidationReport) -> dict:
    return {
        "valid": rep.valid,
        "mode": rep.mode,
        "truncated": rep.truncated,
        "violations": [{"kind": v.kind, "sets": [set_ref(s) for s in v.sets], "detail": v.detail}
                       for v in rep.violations],
    }


def witness_to_json(w: HullWitness) -> dict:
    return w.to_json()


def jsonable(x):
    """Recursively turn rationals into canonical strings and tuples into arrays."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction) or is_inf(x):
        return fmt(x)
    if isinstance(x, int):
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "__dataclass_fields__"):
        return {k: jsonable(getattr(x, k)) for k in x.__dataclass_fields__}
    raise SchemaError(f"cannot serialize {type(x).__name__}")


def dumps(doc) -> str:
    return json.dumps(jsonable(doc), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}") from None
