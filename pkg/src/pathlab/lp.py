"""Exact rational simplex for ``max c.x  s.t.  A x <= b,  x >= 0`` with ``b >= 0``.

Because every bound is nonnegative, the all-slack basis is feasible and no
phase one is needed.  Pivoting follows Bland's rule, so the method
terminates on the degenerate LPs that symmetric submeasures produce.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ParamRange
from .extrat import ExtRat, ext, is_inf


@dataclass(frozen=True)
class LinearProgram:
    num_vars: int
    objective: tuple
    constraints: tuple  # ((coeffs, bound), ...) meaning coeffs . x <= bound
    labels: tuple = ()  # caller tag per retained constraint

    @classmethod
    def build(cls, num_vars: int, objective: Sequence, constraints: Sequence,
              labels: Sequence | None = None) -> "LinearProgram":
        obj = tuple(ext(c) for c in objective)
        if len(obj) != num_vars or any(is_inf(c) for c in obj):
            raise ParamRange("objective must have one finite coefficient per variable")
        if labels is None:
            labels = list(range(len(constraints)))
        if len(labels) != len(constraints):
            raise ParamRange("one label per constraint")
        rows, kept = [], []
        for (coeffs, bound), lab in zip(constraints, labels):
            coeffs = tuple(ext(c) for c in coeffs)
            bound = ext(bound)
            if len(coeffs) != num_vars or any(is_inf(c) for c in coeffs):
                raise ParamRange("constraint rows need one finite coefficient per variable")
            if is_inf(bound):
                continue  # never binding
            if bound < 0:
                raise ParamRange("constraint bounds must be nonnegative")
            rows.append((coeffs, bound))
            kept.append(lab)
        return cls(num_vars, obj, tuple(rows), tuple(kept))


@dataclass
class LPResult:
    status: str  # "optimal" | "unbounded"
    value: ExtRat
    primal: list = field(default_factory=list)
    dual: list = field(default_factory=list)  # one multiplier per retained constraint
    pivots: int = 0


def solve_lp(lp: LinearProgram) -> LPResult:
    m, n = len(lp.constraints), lp.num_vars
    # tableau columns: structural 0..n-1, slack n..n+m-1
    rows = []
    for coeffs, bound in lp.constraints:
        rows.append(list(coeffs) + [Fraction(0)] * m + [bound])
    for i in range(m):
        rows[i][n + i] = Fraction(1)
    # reduced-cost row for maximization: z_j - c_j
    zrow = [-c for c in lp.objective] + [Fraction(0)] * (m + 1)
    basis = [n + i for i in range(m)]
    width = n + m
    pivots = 0

    while True:
        enter = next((j for j in range(width) if zrow[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                r = rows[i][-1] / a
                if best is None or r < best or (r == best and basis[i] < basis[leave]):
                    leave, best = i, r
        if leave is None:
            return LPResult("unbounded", float("inf"), pivots=pivots)
        _pivot(rows, zrow, leave, enter)
        basis[leave] = enter
        pivots += 1

    primal = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            primal[j] = rows[i][-1]
    dual = [zrow[n + i] for i in range(m)]
    return LPResult("optimal", zrow[-1], primal, dual, pivots)


def _pivot(rows, zrow, r, c):
    prow = rows[r]
    p = prow[c]
    if p != 1:
        inv = 1 / p
        prow[:] = [v * inv for v in prow]
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(rows):
        if i != r:
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
    f = zrow[c]
    if f:
        for j in nz:
            zrow[j] -= f * prow[j]


def check_certificate(lp: LinearProgram, primal: Sequence, dual: Sequence, value) -> bool:
    """Independent optimality check: primal feasible, dual feasible, equal objectives."""
    if len(primal) != lp.num_vars or len(dual) != len(lp.constraints):
        return False
    if any(x < 0 for x in primal) or any(y < 0 for y in dual):
        return False
    for coeffs, bound in lp.constraints:
        if sum(a * x for a, x in zip(coeffs, primal)) > bound:
            return False
    for j in range(lp.num_vars):
        col = sum(y * lp.constraints[i][0][j] for i, y in enumerate(dual))
        if col < lp.objective[j]:
            return False
    pval = sum(c * x for c, x in zip(lp.objective, primal))
    dval = sum(y * lp.constraints[i][1] for i, y in enumerate(dual))
    return pval == value == dval
