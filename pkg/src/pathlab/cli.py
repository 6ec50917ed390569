"""``pathlab`` command line.

Exit status: 0 on success, 2 when a check fails (the report is still
written), 1 on usage, input or schema errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import io as jio
from .core import (
    FiniteSubmeasure, PatternPoint, PatternSubmeasure, full_mask, mask_of, members, validate_pattern,
    validate_submeasure,
)
from .errors import PathlabError
from .extrat import fmt
from .gallery import (
    REGISTRY, TABLE2, TABLE2_UNSUPPORTED, gallery_build, make_mazur_system, make_phi_cover,
    make_table2_row,
)
from .hull import (
    covering_hull_fast, default_jobs, hull, pattern_hull, pattern_sigma_hull, verify_pattern_witness,
    verify_witness,
)
from .pathology import Composite, pathology_report
from . import prefix, vdw

EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- helpers

def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load(path: str):
    return jio.loads(_read_text(path))


def _indices(text: str | None) -> list[int] | None:
    if text is None:
        return None
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated indices, got {text!r}") from None


def _weights(spec: str | None, n: int):
    """``ones``, ``harmonic`` (1/(i+1)), ``geometric`` (1/2^i) or a JSON array file."""
    if spec is None or spec == "ones":
        return None
    if spec == "harmonic":
        return lambda i: Fraction(1, i + 1)
    if spec == "geometric":
        return lambda i: Fraction(1, 2 ** i)
    doc = _load(spec)
    if not isinstance(doc, list):
        raise UsageError("weights file must hold a JSON array")
    return [jio._rat(x, "weight") for x in doc]


def _pretty(doc, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for k in sorted(doc):
            v = doc[k]
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in
                                                         (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(jio.jsonable(v), ensure_ascii=False)}")
    elif isinstance(doc, list):
        for v in doc:
            lines.append(f"{pad}- {json.dumps(jio.jsonable(v), ensure_ascii=False, sort_keys=True)}")
    else:
        lines.append(f"{pad}{doc}")
    return "\n".join(lines)


class Output:
    def __init__(self, args):
        self.format = args.format
        self.path = getattr(args, "output", None)

    def emit(self, doc, csv_text: str | None = None) -> None:
        if self.format == "csv":
            if csv_text is None:
                raise UsageError("CSV output exists only for matrices and ratio tables")
            text = csv_text
        elif self.format == "pretty":
            text = _pretty(jio.jsonable(doc)) + "\n"
        else:
            text = jio.dumps(doc)
        if self.path and self.path != "-":
            try:
                with open(self.path, "w", encoding="utf-8") as fh:
                    fh.write(text)
            except OSError as e:
                raise UsageError(f"cannot write {self.path}: {e.strerror}") from None
        else:
            sys.stdout.write(text)


def _pattern_point(P: PatternSubmeasure, atoms: list[int] | None, empty: bool) -> PatternPoint:
    s = full_mask(P.atoms) if atoms is None else mask_of(atoms, P.atoms)
    return PatternPoint(s, not empty)


# ------------------------------------------------------------------ verbs

def cmd_validate(args, out: Output) -> int:
    obj = jio.object_from_json(_load(args.file))
    leaves = obj.leaves() if isinstance(obj, Composite) else [obj]
    reports = []
    for leaf in leaves:
        if isinstance(leaf, PatternSubmeasure):
            reports.append(validate_pattern(leaf, max_violations=args.max_violations))
        else:
            reports.append(validate_submeasure(leaf, max_violations=args.max_violations))
    docs = [jio.validation_to_json(r) for r in reports]
    doc = docs[0] if len(docs) == 1 else {"valid": all(d["valid"] for d in docs), "parts": docs}
    out.emit(doc)
    return EXIT_OK if doc["valid"] else EXIT_CHECK


def _hull_common(args, sigma: bool) -> tuple[dict, bool]:
    obj = jio.object_from_json(_load(args.file))
    idx = _indices(args.set)
    if isinstance(obj, PatternSubmeasure):
        x = _pattern_point(obj, idx, args.empty)
        if sigma:
            return {"value": fmt(pattern_sigma_hull(obj, x))}, True
        w = pattern_hull(obj, x)
        ok = verify_pattern_witness(obj, w, x)
        return {**w.to_json(), "verified": ok}, ok
    if not isinstance(obj, FiniteSubmeasure):
        raise UsageError("hull takes a submeasure or a pattern document")
    A = full_mask(obj.n) if idx is None else mask_of(idx, obj.n)
    w = hull(obj, A)
    ok = verify_witness(obj, w, A)
    return {**w.to_json(), "verified": ok}, ok


def cmd_hull(args, out: Output) -> int:
    doc, ok = _hull_common(args, sigma=False)
    out.emit(doc)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_sigma_hull(args, out: Output) -> int:
    doc, ok = _hull_common(args, sigma=True)
    out.emit(doc)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_pathology(args, out: Output) -> int:
    obj = jio.object_from_json(_load(args.file))
    rep = pathology_report(obj, ratios=args.ratios or args.format == "csv", jobs=args.jobs)
    out.emit(jio.pathology_to_json(rep), jio.ratios_to_csv(rep) if rep.ratios is not None else None)
    return EXIT_CHECK if rep.consistent is False else EXIT_OK


def _parse_params(items) -> dict:
    params = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"parameters look like key=value, got {item!r}")
        k, v = item.split("=", 1)
        params[k] = v
    return params


def cmd_gallery(args, out: Output) -> int:
    if args.action == "list":
        doc = [{"key": e.name, "description": e.description, "params": list(e.params)}
               for e in REGISTRY.values()]
        doc.append({"key": "table2:<row>", "description": "degree-table row, see `pathlab table2`",
                    "params": []})
        out.emit(doc)
        return EXIT_OK
    if not args.key:
        raise UsageError("gallery emit needs a key")
    obj = gallery_build(args.key, **_parse_params(args.param))
    out.emit(jio.object_to_json(obj))
    return EXIT_OK


def cmd_cover(args, out: Output) -> int:
    if args.action == "mazur":
        sysm = make_mazur_system(args.n)
        phi = make_phi_cover(sysm)
        full = full_mask(sysm.ground)
        w = covering_hull_fast(sysm.generators, full, ground=sysm.ground)
        value = phi.eval(full)
        doc = {"n": args.n, "points": sysm.ground, "generators": len(sysm.generators),
               "cover_number": fmt(value), "hull": fmt(w.value),
               "dual": [[members(g), fmt(y)] for g, y in w.dual],
               "ratio": fmt(value / w.value)}
        out.emit(doc)
        return EXIT_OK
    K = jio.integer_set_from_json(_load(args.K)).materialize().elements
    fam = _load(args.F)
    if not isinstance(fam, list) or not all(isinstance(s, list) for s in fam):
        raise UsageError("the family must be an array of index arrays")
    out.emit({"delta": fmt(prefix.covering_delta(K, fam)), "members": len(fam)})
    return EXIT_OK


def cmd_matrix(args, out: Output) -> int:
    if args.action == "witness":
        f = _load(args.file)
        if isinstance(f, dict):
            f = {int(k): v for k, v in f.items()}
        M = prefix.matrix_from_witness(f, args.i_max)
        out.emit(jio.matrix_to_json(M), jio.matrix_to_csv(M))
        return EXIT_OK
    M = jio.matrix_from_json(_load(args.file))
    if args.action == "check":
        d = prefix.check_regular(M)
        doc = {"row_sums": d.row_sums, "row_sums_sup": d.row_sums_sup,
               "column_tail_max": d.column_tail_max, "row_sum_trend": d.row_sum_trend,
               "column_decay_trend": d.column_decay_trend, "notes": d.failures}
        rows = ["kind,index,value"]
        rows += [f"row_sum,{i},{fmt(v)}" for i, v in zip(M.row_labels, d.row_sums)]
        rows += [f"column_tail_max,{k},{fmt(v)}" for k, v in enumerate(d.column_tail_max)]
        out.emit(doc, "\n".join(rows) + "\n")
        return EXIT_OK
    B = jio.integer_set_from_json(_load(args.set))
    rows = None
    if args.rows:
        lo, hi = _indices(args.rows)
        rows = (lo, hi)
    out.emit({"value": prefix.matrix_submeasure_prefix(M, B, rows)})
    return EXIT_OK


def cmd_density(args, out: Output) -> int:
    A = jio.integer_set_from_json(_load(args.set))
    if args.action == "exp":
        r = prefix.exp_density_prefix(A, args.n, args.denominator)
        out.emit({"count": r.count, "n": r.n, "lo": r.lo, "hi": r.hi, "exact": r.exact})
        return EXIT_OK
    if args.action == "prefix":
        f = _weights(args.weights, args.n)
        out.emit({"n": args.n, "density": prefix.density_prefix(f, A, args.n)})
        return EXIT_OK
    lo, hi = args.lo, args.hi
    f = _weights(args.weights, hi)
    out.emit({"window": [lo, hi], "max_density": prefix.density_limsup_window(f, A, lo, hi),
              "trend_only": True})
    return EXIT_OK


def cmd_summable(args, out: Output) -> int:
    if args.action == "weight":
        A = jio.integer_set_from_json(_load(args.set))
        f = _weights(args.weights, args.n)
        out.emit({"n": args.n, "weight": prefix.summable_weight(f, A, args.n)})
    elif args.action == "from-measures":
        ms = _load(args.file)
        if not isinstance(ms, list):
            raise UsageError("measures file must hold an array of point-mass arrays")
        ms = [[jio._rat(x, "mass") for x in m] for m in ms]
        out.emit({"g": prefix.summable_from_measures(ms, args.i_max)})
    else:
        f = [jio._rat(x, "weight") for x in _load(args.f)]
        g = _load(args.g)
        out.emit({"h": prefix.pushforward_weights(f, g)})
    return EXIT_OK


def _vtable(path: str | None) -> vdw.VTable:
    if path is None:
        return vdw.DEFAULT_VTABLE
    doc = _load(path)
    if isinstance(doc, dict):
        doc = doc.get("values")
    if not isinstance(doc, list):
        raise UsageError("a V-table file holds an array of integers")
    return vdw.VTable(tuple(doc))


def _explicit_set(path: str) -> list[int]:
    A = jio.integer_set_from_json(_load(path))
    return list(A.materialize().elements)


def cmd_vdw(args, out: Output) -> int:
    if args.action == "longest-ap":
        length, rec = vdw.longest_ap(_explicit_set(args.set))
        out.emit({"length": length, "witness": rec.terms() if rec else [],
                  "start": rec.start if rec else None, "step": rec.step if rec else None})
        return EXIT_OK
    if args.action == "w-check":
        r = vdw.w_check(args.n, args.L)
        out.emit({"n": r.n, "L": r.length, "holds": r.holds,
                  "counterexample": list(r.counterexample) if r.counterexample else None})
        return EXIT_OK
    V = _vtable(args.vtable)
    if args.action == "phi":
        A = jio.integer_set_from_json(_load(args.set))
        out.emit({"phi": vdw.vdw_phi(V, A), "vtable": list(V.values)})
        return EXIT_OK
    if args.action == "check-vtable":
        rows = vdw.check_vtable(V)
        out.emit({"vtable": list(V.values), "checks": rows})
        return EXIT_OK if all(r["ok"] for r in rows) else EXIT_CHECK
    rep = vdw.vdw_scaled_measure(_explicit_set(args.set), args.n, V)
    out.emit(rep)
    return EXIT_OK if rep["feasibility"]["feasible"] else EXIT_CHECK


def table2_report(jobs: int = 1) -> dict:
    rows = []
    for rid, expected in TABLE2.items():
        r = pathology_report(make_table2_row(rid), jobs=jobs)
        rows.append({"row": rid, "computed": [fmt(x) for x in r.degrees()],
                     "expected": [fmt(x) for x in expected], "match": r.degrees() == expected})
    unsupported = [{"row": rid, "reason": why} for rid, why in TABLE2_UNSUPPORTED.items()]
    return {"rows": rows, "unsupported": unsupported}


def cmd_table2(args, out: Output) -> int:
    doc = table2_report(args.jobs)
    csv_text = "row,p_fin,p,p_sigma,match\n" + "".join(
        f"{r['row']},{','.join(r['computed'])},{r['match']}\n" for r in doc["rows"])
    out.emit(doc, csv_text)
    return EXIT_OK if all(r["match"] for r in doc["rows"]) else EXIT_CHECK


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--jobs", type=int, default=default_jobs(),
                        help="worker processes for batch hull computations")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")

    p = _Parser(prog="pathlab", description="Exact hulls and degrees of pathology of submeasures.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="check the submeasure axioms")
    s.add_argument("file")
    s.add_argument("--max-violations", type=int, default=20)
    s.set_defaults(func=cmd_validate)

    for name, func in (("hull", cmd_hull), ("sigma-hull", cmd_sigma_hull)):
        s = sub.add_parser(name, parents=[common], help=f"{name} of one set with witnesses")
        s.add_argument("file")
        s.add_argument("--set", help="comma-separated indices (atoms for patterns); default all")
        s.add_argument("--empty", action="store_true", help="patterns: the empty set itself")
        s.set_defaults(func=func)

    s = sub.add_parser("pathology", parents=[common], help="degrees P_fin, P, P_sigma")
    s.add_argument("file")
    s.add_argument("--ratios", action="store_true", help="include the per-set ratio table")
    s.set_defaults(func=cmd_pathology)

    s = sub.add_parser("gallery", parents=[common], help="named examples")
    s.add_argument("action", choices=("list", "emit"))
    s.add_argument("key", nargs="?")
    s.add_argument("--param", action="append", metavar="KEY=VALUE")
    s.set_defaults(func=cmd_gallery)

    s = sub.add_parser("cover", help="covering systems and covering numbers")
    csub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = csub.add_parser("mazur", parents=[common])
    c.add_argument("n", type=int)
    c = csub.add_parser("delta", parents=[common])
    c.add_argument("K", help="integer set JSON")
    c.add_argument("F", help="JSON array of index arrays")
    s.set_defaults(func=cmd_cover)

    s = sub.add_parser("matrix", help="summability matrices")
    msub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    m = msub.add_parser("witness", parents=[common])
    m.add_argument("file", help="JSON array f(1..i_max) or object {i: f(i)}")
    m.add_argument("--i-max", type=int, required=True)
    m = msub.add_parser("check", parents=[common])
    m.add_argument("file")
    m = msub.add_parser("eval", parents=[common])
    m.add_argument("file")
    m.add_argument("--set", required=True)
    m.add_argument("--rows", help="lo,hi row labels")
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("density", help="weighted and exponential densities")
    dsub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    d = dsub.add_parser("prefix", parents=[common])
    d.add_argument("set")
    d.add_argument("n", type=int)
    d.add_argument("--weights", help="ones|harmonic|geometric|<file.json>")
    d = dsub.add_parser("window", parents=[common])
    d.add_argument("set")
    d.add_argument("lo", type=int)
    d.add_argument("hi", type=int)
    d.add_argument("--weights")
    d = dsub.add_parser("exp", parents=[common])
    d.add_argument("set")
    d.add_argument("n", type=int)
    d.add_argument("--denominator", type=int, default=64)
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("summable", help="summable weights and constructions")
    ssub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    w = ssub.add_parser("weight", parents=[common])
    w.add_argument("set")
    w.add_argument("n", type=int)
    w.add_argument("--weights")
    w = ssub.add_parser("from-measures", parents=[common])
    w.add_argument("file")
    w.add_argument("--i-max", type=int, required=True)
    w = ssub.add_parser("pushforward", parents=[common])
    w.add_argument("f")
    w.add_argument("g")
    s.set_defaults(func=cmd_summable)

    s = sub.add_parser("vdw", help="arithmetic progressions")
    vsub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    v = vsub.add_parser("longest-ap", parents=[common])
    v.add_argument("set")
    v = vsub.add_parser("w-check", parents=[common])
    v.add_argument("n", type=int)
    v.add_argument("L", type=int)
    v = vsub.add_parser("phi", parents=[common])
    v.add_argument("--vtable")
    v.add_argument("--set", required=True)
    v = vsub.add_parser("scaled-measure", parents=[common])
    v.add_argument("--vtable")
    v.add_argument("--set", required=True)
    v.add_argument("--n", type=int)
    v = vsub.add_parser("check-vtable", parents=[common])
    v.add_argument("--vtable")
    s.set_defaults(func=cmd_vdw)

    s = sub.add_parser("table2", parents=[common], help="reproduce the degree table")
    s.set_defaults(func=cmd_table2)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        return args.func(args, Output(args))
    except UsageError as e:
        print(f"pathlab: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PathlabError as e:
        print(f"pathlab: error [{e.code}]: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
