"""Degrees of pathology P_fin, P, P_sigma for finite submeasures, pattern
submeasures and direct-sum composites of both."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .core import (
    FiniteSubmeasure, OplusMax, OplusSum, PatternSubmeasure, pattern_eval,
)
from .errors import ParamRange, SizeLimit
from .extrat import INF, ExtRat, is_inf
from .hull import MAX_HULL_ALL_GROUND, hull_all, pattern_hull, pattern_sigma_hull

DEGREES = ("p_fin", "p", "p_sigma")


def ratio(a: ExtRat, b: ExtRat) -> ExtRat:
    """``a / b`` with inf/inf = 0/0 = 1 and a/0 = inf/a = inf for positive a."""
    if is_inf(a):
        return Fraction(1) if is_inf(b) else INF
    if b == 0:
        return Fraction(1) if a == 0 else INF
    if is_inf(b):
        return Fraction(0)
    return Fraction(a) / b


@dataclass
class Degree:
    value: ExtRat
    argmax: object  # mask, PatternPoint, or (part index, inner argmax)


@dataclass
class PathologyReport:
    p_fin: ExtRat
    p: ExtRat
    p_sigma: ExtRat
    argmax: dict = field(default_factory=dict)  # degree name -> set reference
    ratios: list | None = None  # (set, value, hull, ratio) rows
    consistent: bool | None = None  # direct vs combined agreement, composites only
    direct: "PathologyReport | None" = None

    def degrees(self) -> tuple:
        return (self.p_fin, self.p, self.p_sigma)

    def chain_holds(self) -> bool:
        return 1 <= self.p_fin <= self.p <= self.p_sigma


@dataclass(frozen=True)
class Composite:
    """Symbolic direct sum of finite and pattern leaves."""

    mode: str  # "max" or "sum"
    parts: tuple
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.mode not in ("max", "sum"):
            raise ParamRange(f"unknown direct-sum mode {self.mode!r}")
        if len(self.parts) < 1:
            raise ParamRange("a composite needs at least one part")
        object.__setattr__(self, "parts", tuple(self.parts))

    def leaves(self) -> list:
        out = []
        for p in self.parts:
            out.extend(p.leaves() if isinstance(p, Composite) else [p])
        return out


Analyzable = Union[FiniteSubmeasure, PatternSubmeasure, Composite]


def _argmax(pairs):
    """Max of (key, value) pairs; first key wins ties, keys arrive in mask order."""
    best_key, best = None, None
    for k, v in pairs:
        if best is None or v > best:
            best_key, best = k, v
    return Degree(best, best_key)


def _finite_table(phi: FiniteSubmeasure, jobs: int):
    if phi.n > MAX_HULL_ALL_GROUND:
        raise SizeLimit(f"degree computation capped at ground size {MAX_HULL_ALL_GROUND}")
    vals = phi.table()
    hulls = hull_all(phi, jobs=jobs)
    return vals, hulls, [ratio(v, h) for v, h in zip(vals, hulls)]


def degree_P(phi: FiniteSubmeasure, *, jobs: int = 1) -> Degree:
    """Exact max of phi(A)/hull(A) over all subsets; ties go to the lowest mask."""
    _, _, ratios = _finite_table(phi, jobs)
    return _argmax(enumerate(ratios))


def degree_P_fin(phi: FiniteSubmeasure, *, jobs: int = 1) -> Degree:
    # every subset of a finite ground set is finite
    return degree_P(phi, jobs=jobs)


def degree_P_sigma(phi: FiniteSubmeasure, *, jobs: int = 1) -> Degree:
    # the sigma-hull equals the hull on a finite ground set
    return degree_P(phi, jobs=jobs)


def finite_report(phi: FiniteSubmeasure, *, ratios: bool = False, jobs: int = 1) -> PathologyReport:
    vals, hulls, rs = _finite_table(phi, jobs)
    d = _argmax(enumerate(rs))
    rows = [(m, v, h, q) for m, (v, h, q) in enumerate(zip(vals, hulls, rs))] if ratios else None
    return PathologyReport(d.value, d.value, d.value,
                           {name: d.argmax for name in DEGREES}, rows)


def pattern_degrees(P: PatternSubmeasure, *, ratios: bool = False) -> PathologyReport:
    """Degrees of a pattern submeasure.

    Finite sets are the empty set and the nonempty points with empty
    pattern; on both, value and hull are driven by the floor, so P_fin comes
    out as 1 (0/0 when the floor is zero).
    """
    rows = []
    for x in P.points():
        v = pattern_eval(P, x)
        h = pattern_hull(P, x).value
        s = pattern_sigma_hull(P, x)
        rows.append((x, v, h, s))
    finite = [r for r in rows if r[0].pattern == 0]
    d_fin = _argmax((x, ratio(v, h)) for x, v, h, _ in finite)
    d_p = _argmax((x, ratio(v, h)) for x, v, h, _ in rows)
    d_s = _argmax((x, ratio(v, s)) for x, v, _, s in rows)
    table = [(x, v, h, ratio(v, h)) for x, v, h, _ in rows] if ratios else None
    return PathologyReport(d_fin.value, d_p.value, d_s.value,
                           {"p_fin": d_fin.argmax, "p": d_p.argmax, "p_sigma": d_s.argmax},
                           table)


def combine_degrees(left: PathologyReport, right: PathologyReport) -> PathologyReport:
    """Degrees of a direct sum (max or sum flavour): component-wise maximum."""
    out = {}
    arg = {}
    for name in DEGREES:
        a, b = getattr(left, name), getattr(right, name)
        if b > a:
            out[name], arg[name] = b, (1, right.argmax.get(name))
        else:
            out[name], arg[name] = a, (0, left.argmax.get(name))
    return PathologyReport(out["p_fin"], out["p"], out["p_sigma"], arg)


def _literal(c: Composite) -> FiniteSubmeasure:
    parts = [_literal(p) if isinstance(p, Composite) else p for p in c.parts]
    acc = parts[0]
    for p in parts[1:]:
        acc = OplusMax(acc, p) if c.mode == "max" else OplusSum(acc, p)
    return acc


def _all_finite(c: Composite) -> bool:
    return all(isinstance(x, FiniteSubmeasure) for x in c.leaves())


def pathology_report(obj: Analyzable, *, ratios: bool = False, jobs: int = 1,
                     direct: bool = True) -> PathologyReport:
    """Full report for a finite submeasure, a pattern, or a composite.

    Composites combine part reports; when every leaf is finite and the
    literal direct sum fits the hull size limit, the literal sum is analysed
    too and ``consistent`` records agreement.  Pattern quotients carry a
    single floor, so the literal route is not used for pattern leaves.
    """
    if isinstance(obj, FiniteSubmeasure):
        return finite_report(obj, ratios=ratios, jobs=jobs)
    if isinstance(obj, PatternSubmeasure):
        return pattern_degrees(obj, ratios=ratios)
    if not isinstance(obj, Composite):
        raise TypeError(f"cannot analyse {type(obj).__name__}")
    reports = [pathology_report(p, jobs=jobs, direct=direct) for p in obj.parts]
    combined = reports[0]
    for r in reports[1:]:
        combined = combine_degrees(combined, r)
    # point each argmax at the first part that attains the degree
    combined.argmax = {}
    for name in DEGREES:
        idx = next(i for i, r in enumerate(reports) if getattr(r, name) == getattr(combined, name))
        combined.argmax[name] = (idx, reports[idx].argmax.get(name))
    if direct and _all_finite(obj):
        lit = _literal(obj)
        if lit.n <= MAX_HULL_ALL_GROUND:
            d = finite_report(lit, ratios=ratios, jobs=jobs)
            combined.direct = d
            combined.consistent = d.degrees() == combined.degrees()
            combined.ratios = d.ratios
    return combined


def is_nonpathological(phi: FiniteSubmeasure, *, jobs: int = 1) -> bool:
    return list(hull_all(phi, jobs=jobs)) == list(phi.table())


def trivial_measure_report() -> PathologyReport:
    one = Fraction(1)
    return PathologyReport(one, one, one, {name: 0 for name in DEGREES})

