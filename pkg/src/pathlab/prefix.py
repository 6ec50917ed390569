"""Finite-prefix evaluators for submeasures defining ideals on omega.

Everything here is a statistic of a finite prefix.  Limits (limsup,
regularity of a matrix) are reported as windowed evidence and labelled as
trends; nothing in this module decides ideal membership.

Prefix conventions: ``n`` means the initial segment ``{0, ..., n-1}``,
except in the witness-matrix construction whose rows use ``[1, i]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import BadWeights, NotACover, RangeError

PREDICATES = ("all", "evens", "odds", "squares", "multiples:<k>")


@dataclass(frozen=True)
class IntegerSet:
    """Explicit sorted set, or a named predicate with an enumeration bound."""

    elements: tuple | None = None
    predicate: str | None = None
    bound: int | None = None

    def __post_init__(self):
        if (self.elements is None) == (self.predicate is None):
            raise ValueError("give exactly one of elements or predicate")
        if self.elements is not None:
            els = tuple(sorted(set(int(e) for e in self.elements)))
            if els and els[0] < 0:
                raise ValueError("integer sets hold nonnegative integers")
            object.__setattr__(self, "elements", els)
        else:
            _predicate(self.predicate)  # validates the name
            if self.bound is None or self.bound < 0:
                raise ValueError("predicate sets must declare a nonnegative bound")

    @classmethod
    def of(cls, elements: Iterable[int]) -> "IntegerSet":
        return cls(elements=tuple(elements))

    @classmethod
    def where(cls, predicate: str, bound: int) -> "IntegerSet":
        return cls(predicate=predicate, bound=bound)

    @property
    def limit(self) -> int | None:
        """Exclusive index bound for prefix work; None means unbounded (explicit)."""
        return None if self.elements is not None else self.bound

    def __contains__(self, i: int) -> bool:
        if self.elements is not None:
            return i in set(self.elements)
        return _predicate(self.predicate)(i)

    def upto(self, n: int) -> list[int]:
        """Elements below ``n``."""
        if self.elements is not None:
            return [e for e in self.elements if e < n]
        if n > self.bound:
            raise RangeError(f"prefix {n} exceeds the declared bound {self.bound}")
        test = _predicate(self.predicate)
        return [i for i in range(n) if test(i)]

    def materialize(self) -> "IntegerSet":
        if self.elements is not None:
            return self
        return IntegerSet.of(self.upto(self.bound))


def _predicate(name: str) -> Callable[[int], bool]:
    if name == "all":
        return lambda i: True
    if name == "evens":
        return lambda i: i % 2 == 0
    if name == "odds":
        return lambda i: i % 2 == 1
    if name == "squares":
        return lambda i: math.isqrt(i) ** 2 == i
    if name.startswith("multiples:"):
        k = int(name.split(":", 1)[1])
        if k <= 0:
            raise ValueError("multiples:<k> needs k > 0")
        return lambda i: i % k == 0
    raise ValueError(f"unknown predicate {name!r}; choose from {PREDICATES}")


Weights = Sequence | Callable[[int], Fraction] | None


def _weight_fn(f: Weights, n: int) -> Callable[[int], Fraction]:
    if f is None:
        return lambda i: Fraction(1)
    if callable(f):
        return lambda i: Fraction(f(i))
    if len(f) < n:
        raise BadWeights(f"weight table has {len(f)} entries, prefix needs {n}")
    return lambda i: Fraction(f[i])


def _check_weights(w, n: int) -> None:
    if w(0) == 0:
        raise BadWeights("f(0) must be nonzero")
    for i in range(n):
        if w(i) < 0:
            raise BadWeights(f"negative weight at {i}")


def density_prefix(f: Weights, A: IntegerSet, n: int) -> Fraction:
    """Weighted share of ``A`` in ``{0..n-1}``."""
    if n < 1:
        raise RangeError("prefix length must be at least 1")
    w = _weight_fn(f, n)
    _check_weights(w, n)
    num = sum((w(i) for i in A.upto(n)), Fraction(0))
    den = sum((w(i) for i in range(n)), Fraction(0))
    return num / den


def density_sup(f: Weights, A: IntegerSet, n_max: int) -> Fraction:
    return density_limsup_window(f, A, 1, n_max)


def density_limsup_window(f: Weights, A: IntegerSet, n_lo: int, n_hi: int) -> Fraction:
    """Max of the prefix densities for ``n_lo <= n <= n_hi``."""
    if not 1 <= n_lo <= n_hi:
        raise RangeError("need 1 <= n_lo <= n_hi")
    if A.limit is not None and n_hi > A.limit:
        raise RangeError(f"window end {n_hi} exceeds the declared bound {A.limit}")
    w = _weight_fn(f, n_hi)
    _check_weights(w, n_hi)
    members = set(A.upto(n_hi))
    num = den = Fraction(0)
    best = None
    for n in range(1, n_hi + 1):
        x = w(n - 1)
        den += x
        if n - 1 in members:
            num += x
        if n >= n_lo:
            v = num / den
            if best is None or v > best:
                best = v
    return best


@dataclass(frozen=True)
class ExpDensity:
    """``ln count / ln n`` bracketed by rationals ``lo <= ratio <= hi``."""

    count: int
    n: int
    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi


def exp_density_prefix(A: IntegerSet, n: int, denominator: int = 64) -> ExpDensity:
    """Bracket ``ln|A ∩ n| / ln n`` using only integer power comparisons:
    ``p/q <= ln c / ln n`` iff ``n**p <= c**q``."""
    if n < 2:
        raise RangeError("exponential density needs n >= 2")
    c = len(A.upto(n))
    if c == 0:
        raise RangeError("A has no elements below n; the logarithm is undefined")
    q = denominator
    cq = c ** q
    lo_p, hi_p = 0, q  # c <= n, so the ratio lies in [0, 1]
    while lo_p < hi_p:
        mid = (lo_p + hi_p + 1) // 2
        if n ** mid <= cq:
            lo_p = mid
        else:
            hi_p = mid - 1
    lo = Fraction(lo_p, q)
    hi = lo if n ** lo_p == cq else Fraction(lo_p + 1, q)
    return ExpDensity(c, n, lo, hi)


def summable_weight(f: Weights, A: IntegerSet, n: int) -> Fraction:
    """Partial sum of ``f`` over ``A ∩ {0..n-1}``."""
    w = _weight_fn(f, n)
    total = Fraction(0)
    for i in A.upto(n):
        x = w(i)
        if x < 0:
            raise BadWeights(f"negative weight at {i}")
        total += x
    return total


def erdos_ulam_ratios(f: Weights, n: int) -> list[Fraction]:
    """``f(m) / sum_{i<m} f(i)`` for ``1 <= m < n``; callers judge the trend to 0."""
    w = _weight_fn(f, n)
    out, acc = [], Fraction(0)
    for m in range(n):
        if m:
            out.append(w(m) / acc if acc else Fraction(0))
        acc += w(m)
    return out


# ------------------------------------------------------------------ matrices

@dataclass(frozen=True)
class MatrixPrefix:
    """Rows ``first_row, first_row+1, ...``; columns ``0 .. cols-1``."""

    entries: tuple
    first_row: int = 0

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.entries)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("matrix rows must have equal length")
        if any(x < 0 for r in rows for x in r):
            raise ValueError("matrix entries must be nonnegative")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row(self, i: int) -> tuple:
        if not self.first_row <= i < self.first_row + self.rows:
            raise RangeError(f"row {i} outside {self.first_row}..{self.first_row + self.rows - 1}")
        return self.entries[i - self.first_row]

    @property
    def row_labels(self) -> range:
        return range(self.first_row, self.first_row + self.rows)


def row_mass(M: MatrixPrefix, B: IntegerSet, i: int) -> Fraction:
    return sum((M.row(i)[k] for k in B.upto(M.cols)), Fraction(0))


def matrix_submeasure_prefix(M: MatrixPrefix, B: IntegerSet, rows: tuple | None = None) -> Fraction:
    """Max over rows ``lo..hi`` (inclusive labels) of the row mass of ``B``."""
    lo, hi = rows if rows is not None else (M.first_row, M.first_row + M.rows - 1)
    if lo > hi:
        raise RangeError("empty row range")
    return max(row_mass(M, B, i) for i in range(lo, hi + 1))


@dataclass
class RegularityDiagnostics:
    row_sums: list
    row_sums_sup: Fraction
    column_tail_max: list  # per column, max over the second half of the rows
    nonnegative: bool
    row_sum_trend: bool  # trend only: row sums approach 1
    column_decay_trend: bool  # trend only: every established column decays
    failures: list = field(default_factory=list)


def check_regular(M: MatrixPrefix) -> RegularityDiagnostics:
    """Finite evidence for the regularity conditions.

    Row sums tend to 1: the last row sum is exactly 1, or its distance to 1
    shrinks strictly from the middle row to the last.  Columns tend to 0:
    every column whose first nonzero entry lies in the first half ends below
    its own maximum.  Both are labelled trends; a prefix cannot prove a limit.
    """
    sums = [sum(r, Fraction(0)) for r in M.entries]
    half = M.rows // 2
    tail = [max((M.entries[i][k] for i in range(half, M.rows)), default=Fraction(0))
            for k in range(M.cols)]
    failures = []
    row_ok = False
    if sums:
        last, mid = abs(sums[-1] - 1), abs(sums[half] - 1 if half < len(sums) else sums[-1] - 1)
        row_ok = last == 0 or last < mid
    if not row_ok:
        failures.append("row sums do not trend to 1 (trend only)")
    col_ok = True
    for k in range(M.cols):
        col = [M.entries[i][k] for i in range(M.rows)]
        first = next((i for i, x in enumerate(col) if x), None)
        if first is None or first >= max(half, 1):
            continue
        if not col[-1] < max(col):
            col_ok = False
            failures.append(f"column {k} does not decay (trend only)")
    return RegularityDiagnostics(sums, max(sums, default=Fraction(0)), tail, True,
                                 row_ok, col_ok, failures)


def matrix_from_witness(f: Mapping[int, int] | Sequence[int], i_max: int) -> MatrixPrefix:
    """Row ``i`` (1-based) spreads mass ``1/i`` onto ``f(1), ..., f(i)``.

    A sequence ``f`` is read with ``f[j-1]`` as the image of ``j``.
    """
    if isinstance(f, Mapping):
        image = [int(f[j]) for j in range(1, i_max + 1)]
    else:
        if len(f) < i_max:
            raise RangeError(f"witness defined on {len(f)} points, need {i_max}")
        image = [int(x) for x in f[:i_max]]
    if any(k < 0 for k in image):
        raise RangeError("witness values must be nonnegative")
    cols = max(image) + 1
    counts = [0] * cols
    rows = []
    for i, k in enumerate(image, start=1):
        counts[k] += 1
        rows.append([Fraction(c, i) for c in counts])
    return MatrixPrefix(tuple(rows), first_row=1)


# ------------------------------------------------------------- summable maps

def summable_from_measures(measures: Sequence, i_max: int) -> list[Fraction]:
    """``g(i) = sum_n mu_n({i}) / 2**n`` with ``n`` counted from 1.

    Each measure is a point-mass table: a sequence indexed by point or a
    mapping point -> mass.
    """
    g = [Fraction(0)] * i_max
    for n, mu in enumerate(measures, start=1):
        scale = Fraction(1, 2 ** n)
        items = mu.items() if isinstance(mu, Mapping) else enumerate(mu)
        for i, m in items:
            m = Fraction(m)
            if m < 0:
                raise BadWeights("measures must be nonnegative")
            if i < i_max:
                g[i] += m * scale
    return g


def measure_of(mu, A: Iterable[int]) -> Fraction:
    get = mu.get if isinstance(mu, Mapping) else (lambda i, d: mu[i] if i < len(mu) else d)
    return sum((Fraction(get(i, 0)) for i in A), Fraction(0))


def pushforward_weights(f: Sequence, g: Sequence[int] | Mapping[int, int]) -> list[Fraction]:
    """``h(n) = sum of f(i) over i with g(i) = n``."""
    gmap = g if isinstance(g, Mapping) else dict(enumerate(g))
    missing = [i for i in range(len(f)) if i not in gmap]
    if missing:
        raise RangeError(f"map undefined on {missing[:5]}")
    size = max((int(gmap[i]) for i in range(len(f))), default=-1) + 1
    h = [Fraction(0)] * size
    for i, x in enumerate(f):
        h[int(gmap[i])] += Fraction(x)
    return h


def covering_delta(K: Iterable[int], F: Sequence[Iterable[int]]) -> Fraction:
    """Least number of family members through a point of ``K``, over ``|F|``."""
    K = set(K)
    fam = [set(s) for s in F]
    if not fam:
        raise NotACover("the family is empty")
    union = set().union(*fam)
    if union != K:
        raise NotACover(f"family union differs from K by {sorted(union ^ K)[:5]}")
    return Fraction(min(sum(1 for s in fam if i in s) for i in K), len(fam))
