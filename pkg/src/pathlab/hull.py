"""Nonpathological hull: the largest value a measure dominated by a submeasure
can give to a set, computed exactly with a witness measure and a dual
certificate.

For ``A`` with elements ``a_1..a_r`` the hull is

    max  sum_j m_j   s.t.  m(C) <= phi(C) for every C subset of A,  m >= 0

(mass outside ``A`` only tightens constraints, and by monotonicity the
binding bound for any ``B`` is ``phi(B & A)``).  We solve the dual
fractional-cover problem

    min  sum_C phi(C) y_C   s.t.  sum_{C containing j} y_C >= 1,  y >= 0

with a revised simplex whose columns (one per subset) are priced on the
fly.  The simplex multipliers are the witness measure and the final basic
``y`` is the certificate.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .core import (
    Covering, FiniteSubmeasure, PatternPoint, PatternSubmeasure, Scale,
    ValidationReport, _check_axioms, members, pattern_eval,
)
from .errors import GroundMismatch, SizeLimit, Uncoverable
from .extrat import INF, ExtRat, ext, fmt, is_inf
from .lp import LinearProgram, solve_lp

MAX_HULL_GROUND = 20
MAX_HULL_ALL_GROUND = 14


@dataclass
class HullWitness:
    value: ExtRat
    measure: list
    dual: list = field(default_factory=list)  # [(constraint mask, multiplier)]
    unbounded: bool = False

    def to_json(self) -> dict:
        return {
            "value": fmt(self.value),
            "measure": [fmt(m) for m in self.measure],
            "dual": [[c, fmt(y)] for c, y in self.dual],
            "unbounded": self.unbounded,
        }


_INT_LIMIT = 1 << 62


class _Scaled:
    """A submeasure table over a common denominator, INF as ``None``."""

    def __init__(self, phi: FiniteSubmeasure):
        self.phi = phi
        self.table = phi.table()
        den = 1
        for v in self.table:
            if not is_inf(v):
                den = den * v.denominator // math.gcd(den, v.denominator)
        self.den = den
        self.ints = [None if is_inf(v) else v.numerator * (den // v.denominator)
                     for v in self.table]
        finite = [c for c in self.ints if c is not None]
        self.max_int = max(finite, default=0)
        self.fits = self.max_int < _INT_LIMIT
        if self.fits:
            self.np_ints = np.array([-1 if c is None else c for c in self.ints], dtype=np.int64)


def _check_ground(phi: FiniteSubmeasure, A: int) -> None:
    if A < 0 or A >> phi.n:
        raise GroundMismatch(f"set {members(A)} not inside ground set of size {phi.n}")


def _subset_sums(values: Sequence[int]) -> np.ndarray:
    """Entry t holds the sum of ``values[j]`` over the bits j of t."""
    out = np.zeros(1, dtype=np.int64)
    for v in values:
        out = np.concatenate((out, out + v))
    return out


def _lcm_den(fracs) -> int:
    D = 1
    for p in fracs:
        q = int(p.denominator)
        D = D * q // math.gcd(D, q)
    return D


_ZERO = mpq(0)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _solve_hull(sc: _Scaled, A: int) -> HullWitness:
    n = sc.phi.n
    if A == 0:
        return HullWitness(Fraction(0), [Fraction(0)] * n)
    elems = members(A)
    for i in elems:
        if sc.ints[1 << i] is None:
            return HullWitness(INF, [], [], True)
    r = len(elems)
    size = 1 << r
    L = sc.den

    # local subset t <-> global submask of A; ascending t is ascending global order
    if sc.fits:
        glob = _subset_sums([1 << i for i in elems])
        cost_np = sc.np_ints[glob]
        finite = cost_np >= 0
        cost = None
    else:
        glob = [0] * size
        for t in range(1, size):
            low = t & -t
            glob[t] = glob[t ^ low] | (1 << elems[low.bit_length() - 1])
        cost = [sc.ints[g] for g in glob]

    def cost_of(t):
        return int(cost_np[t]) if cost is None else cost[t]

    # column ("s", j) is surplus row j, ("c", t) is subset t; Bland key puts surplus first
    basis = [("c", 1 << j) for j in range(r)]
    binv = [[mpq(int(i == j)) for j in range(r)] for i in range(r)]
    xb = [mpq(1)] * r
    bland = False

    def key(col):
        return col[1] if col[0] == "s" else r + col[1]

    while True:
        cb = [mpq(cost_of(c[1]), L) if c[0] == "c" else _ZERO for c in basis]
        nzb = [i for i in range(r) if cb[i]]
        pi = [sum((cb[i] * binv[i][j] for i in nzb), _ZERO) for j in range(r)]
        enter = None
        neg = [j for j in range(r) if pi[j] < 0]
        if neg:
            enter = ("s", neg[0] if bland else min(neg, key=lambda j: (pi[j], j)))
        else:
            D = _lcm_den(pi)
            pint = [int(p.numerator * (D // p.denominator)) for p in pi]
            if cost is None and sc.max_int * D < _INT_LIMIT and L * sum(pint) < _INT_LIMIT:
                rc = cost_np * D - L * _subset_sums(pint)
                cand = np.flatnonzero(finite & (rc < 0))
                if cand.size:
                    t = int(cand[0]) if bland else int(cand[np.argmin(rc[cand])])
                    enter = ("c", t)
            else:
                best_rc = 0
                psum = [0] * size
                for t in range(1, size):
                    low = t & -t
                    s = psum[t ^ low] + pint[low.bit_length() - 1]
                    psum[t] = s
                    c = cost_of(t) if cost is None else cost[t]
                    if c is None or c < 0:
                        continue
                    v = c * D - L * s
                    if v < best_rc:
                        best_rc, enter = v, ("c", t)
                        if bland:
                            break
        if enter is None:
            break
        if enter[0] == "s":
            d = [-binv[i][enter[1]] for i in range(r)]
        else:
            cols = [j for j in range(r) if enter[1] >> j & 1]
            d = [sum((binv[i][j] for j in cols), _ZERO) for i in range(r)]
        leave, best = None, None
        for i in range(r):
            if d[i] > 0:
                ratio = xb[i] / d[i]
                if best is None or ratio < best or (ratio == best and key(basis[i]) < key(basis[leave])):
                    leave, best = i, ratio
        # the cover LP is bounded below by zero, so some row always limits the step
        assert leave is not None
        # largest-coefficient pricing while making progress, Bland's rule on degenerate stretches
        bland = best == 0
        piv = d[leave]
        prow = [v / piv for v in binv[leave]]
        xl = xb[leave] / piv
        for i in range(r):
            if i == leave or not d[i]:
                continue
            f = d[i]
            row = binv[i]
            for j in range(r):
                if prow[j]:
                    row[j] -= f * prow[j]
            xb[i] -= f * xl
        binv[leave] = prow
        xb[leave] = xl
        basis[leave] = enter

    measure = [Fraction(0)] * n
    for j, i in enumerate(elems):
        measure[i] = _frac(pi[j])
    dual = sorted((int(glob[c[1]]), _frac(x)) for c, x in zip(basis, xb) if c[0] == "c" and x > 0)
    return HullWitness(sum(measure, Fraction(0)), measure, dual)


def hull(phi: FiniteSubmeasure, A: int) -> HullWitness:
    """Hull value at ``A`` with witness measure and dual certificate."""
    _check_ground(phi, A)
    if phi.n > MAX_HULL_GROUND:
        raise SizeLimit(f"exhaustive hull capped at ground size {MAX_HULL_GROUND}")
    return _solve_hull(_Scaled(phi), A)


def sigma_hull(phi: FiniteSubmeasure, A: int) -> HullWitness:
    # on a finite ground set every finitely additive measure is countably additive
    return hull(phi, A)


def _hull_chunk(args):
    phi, masks = args
    sc = _Scaled(phi)
    return [_solve_hull(sc, a).value for a in masks]


def hull_all(phi: FiniteSubmeasure, *, jobs: int = 1, override: bool = False,
             check: bool = True) -> list:
    """Hull value for every subset, indexed by mask."""
    if phi.n > MAX_HULL_ALL_GROUND and not override:
        raise SizeLimit(f"hull_all is capped at ground size {MAX_HULL_ALL_GROUND}; pass override=True")
    if phi.n > MAX_HULL_GROUND:
        raise SizeLimit(f"exhaustive hull capped at ground size {MAX_HULL_GROUND}")
    size = 1 << phi.n
    if jobs > 1 and size >= 256:
        chunks = [list(range(s, size, jobs)) for s in range(jobs)]
        out = [None] * size
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for masks, vals in zip(chunks, pool.map(_hull_chunk, [(phi, c) for c in chunks])):
                for m, v in zip(masks, vals):
                    out[m] = v
    else:
        sc = _Scaled(phi)
        out = [_solve_hull(sc, a).value for a in range(size)]
    if check:
        report = ValidationReport("exhaustive")
        _check_axioms(out, phi.n, report, 1)
        if not report.valid:
            raise RuntimeError(f"hull table failed the submeasure axioms: {report.violations[0]}")
    return out


def _covering_parts(phi: FiniteSubmeasure):
    """Unwrap ``Scale`` layers around a ``Covering``; returns (covering, factor)."""
    factor = Fraction(1)
    while isinstance(phi, Scale):
        factor *= phi.factor
        phi = phi.inner
    if not isinstance(phi, Covering):
        return None, None
    return phi, factor


def covering_hull_fast(generators: Sequence[int], A: int, *, ground: int | None = None,
                       scale: Fraction = Fraction(1)) -> HullWitness:
    """Hull of (``scale`` times) a covering submeasure using one constraint per generator.

    A measure with mass at most 1 on every generator is dominated by the
    covering submeasure (cover ``B`` by ``k`` generators), so the generator
    rows alone describe the feasible region.
    """
    gens = [int(g) for g in generators]
    if ground is None:
        ground = max(g.bit_length() for g in gens)
    if A >> ground:
        raise GroundMismatch(f"set {members(A)} not inside ground set of size {ground}")
    union = 0
    for g in gens:
        union |= g
    if A & ~union:
        raise Uncoverable(f"points {members(A & ~union)} lie outside every generator")
    if A == 0:
        return HullWitness(Fraction(0), [Fraction(0)] * ground)
    elems = members(A)
    rows = [([Fraction(int(g >> i & 1)) for i in elems], Fraction(1)) for g in gens]
    res = solve_lp(LinearProgram.build(len(elems), [1] * len(elems), rows, labels=gens))
    scale = ext(scale)
    measure = [Fraction(0)] * ground
    for i, x in zip(elems, res.primal):
        measure[i] = x * scale
    dual = [(g, y) for g, y in zip(gens, res.dual) if y > 0]
    return HullWitness(res.value * scale, measure, dual)


def verify_witness(phi: FiniteSubmeasure, w: HullWitness, A: int) -> bool:
    """Recheck a witness from scratch: feasibility on every subset, attainment,
    and the dual bound.  Does not trust the solver."""
    n = phi.n
    if A < 0 or A >> n:
        return False
    if w.unbounded:
        return is_inf(w.value) and any(is_inf(phi.eval(1 << i)) for i in members(A))
    if is_inf(w.value) or len(w.measure) != n or any(m < 0 for m in w.measure):
        return False
    if n > MAX_HULL_GROUND:
        return False
    # feasibility: measure of every B against phi(B), over a common denominator
    sc = _Scaled(phi)
    den = 1
    for m in w.measure:
        den = den * m.denominator // math.gcd(den, m.denominator)
    mint = [m.numerator * (den // m.denominator) for m in w.measure]
    msum = 0
    sums = [0] * (1 << n)
    for b in range(1, 1 << n):
        low = b & -b
        msum = sums[b ^ low] + mint[low.bit_length() - 1]
        sums[b] = msum
        c = sc.ints[b]
        if c is not None and msum * sc.den > c * den:
            return False
    if sum((w.measure[i] for i in members(A)), Fraction(0)) != w.value:
        return False
    # weak duality: mu(A) <= sum_C y_C mu(C) <= sum_C y_C phi(C)
    cover = {i: Fraction(0) for i in members(A)}
    bound = Fraction(0)
    for c, y in w.dual:
        if y < 0 or c <= 0 or c >> n:
            return False
        v = phi.eval(c)
        if is_inf(v):
            return False
        bound += y * v
        for i in members(c):
            if i in cover:
                cover[i] += y
    if any(s < 1 for s in cover.values()):
        return False
    return bound <= w.value


# ----------------------------------------------------------------- patterns

def _pattern_lp(P: PatternSubmeasure, x: PatternPoint):
    atoms = members(x.pattern)
    nvar = len(atoms) + (1 if x.nonempty else 0)
    rows, labels = [], []
    start = 0 if x.nonempty else 1
    for t in range(start, 1 << P.atoms):
        coeffs = [Fraction(int(t >> i & 1)) for i in atoms]
        if x.nonempty:
            coeffs.append(Fraction(1))
        rows.append((coeffs, P.theta[t] if t else P.floor))
        labels.append(t)
    return atoms, LinearProgram.build(nvar, [1] * nvar, rows, labels)


def pattern_hull(P: PatternSubmeasure, x: PatternPoint) -> HullWitness:
    """Lower bound on the hull of a pattern submeasure at a pattern point.

    Variables are a mass on each atom in the pattern (a measure living on
    that atom's infinite tail) and, for nonempty points, a point mass ``y``.
    ``measure`` has one entry per atom followed by ``y``.
    """
    pattern_eval(P, x)  # range check
    if not x.nonempty:
        return HullWitness(Fraction(0), [Fraction(0)] * (P.atoms + 1))
    atoms, lp = _pattern_lp(P, x)
    res = solve_lp(lp)
    if res.status == "unbounded":
        return HullWitness(INF, [], [], True)
    measure = [Fraction(0)] * (P.atoms + 1)
    for i, v in zip(atoms, res.primal):
        measure[i] = v
    measure[-1] = res.primal[-1]
    dual = [(t, y) for t, y in zip(lp.labels, res.dual) if y > 0]
    return HullWitness(res.value, measure, dual)


def pattern_sigma_hull(P: PatternSubmeasure, x: PatternPoint) -> ExtRat:
    # a countably additive measure is determined by its point masses, and every
    # finite set has value at most floor
    pattern_eval(P, x)
    return P.floor if x.nonempty else Fraction(0)


def verify_pattern_witness(P: PatternSubmeasure, w: HullWitness, x: PatternPoint) -> bool:
    if w.unbounded:
        return is_inf(w.value) and is_inf(pattern_eval(P, x))
    if len(w.measure) != P.atoms + 1 or any(m < 0 for m in w.measure):
        return False
    if any(w.measure[i] for i in range(P.atoms) if not x.pattern >> i & 1):
        return False
    y = w.measure[-1]
    if y and not x.nonempty:
        return False
    for t in range(1 << P.atoms):
        load = y + sum((w.measure[i] for i in members(t)), Fraction(0))
        bound = P.theta[t] if t else P.floor
        if t == 0 and not x.nonempty:
            continue
        if load > bound:
            return False
    if sum(w.measure, Fraction(0)) != w.value:
        return False
    # dual: every variable in use must be covered with weight >= 1
    used = members(x.pattern) + (["y"] if x.nonempty else [])
    cover = {v: Fraction(0) for v in used}
    bound = Fraction(0)
    for t, mult in w.dual:
        if mult < 0:
            return False
        b = P.theta[t] if t else P.floor
        if is_inf(b):
            return False
        bound += mult * b
        for i in members(t):
            if i in cover:
                cover[i] += mult
        if "y" in cover:
            cover["y"] += mult
    return all(c >= 1 for c in cover.values()) and bound <= w.value


def default_jobs() -> int:
    return os.cpu_count() or 1
