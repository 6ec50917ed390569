"""Submeasures on finite ground sets and finite pattern quotients.

Ground sets are ``range(n)``; a subset is an ``int`` bit mask.  Every
representation evaluates exactly (``Fraction`` or ``INF``).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GroundMismatch, ParamRange, SizeLimit, Uncoverable
from .extrat import ExtRat, add, ext, fmt, is_inf, mul

MAX_TABLE_GROUND = 20
MAX_EXHAUSTIVE_SUBADDITIVITY = 14
MAX_EXHAUSTIVE_PATTERN = 12
# children at most this large are evaluated through their cached table
_CHILD_TABLE_LIMIT = 16


# --------------------------------------------------------------------- masks

def mask_of(indices: Iterable[int], n: int | None = None) -> int:
    m = 0
    for i in indices:
        if i < 0 or (n is not None and i >= n):
            raise GroundMismatch(f"index {i} outside ground set of size {n}")
        m |= 1 << i
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in decreasing order, ending with 0."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def full_mask(n: int) -> int:
    return (1 << n) - 1


def _scaled_ints(values: Sequence[ExtRat]) -> tuple[list, int]:
    """Common-denominator integers for ``values``; ``None`` stands for INF."""
    den = 1
    for v in values:
        if not is_inf(v):
            den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [None if is_inf(v) else v.numerator * (den // v.denominator) for v in values]
    return ints, den


# ------------------------------------------------------------- submeasures

class FiniteSubmeasure:
    """Base class: a set function on subsets of ``range(n)``."""

    n: int

    def eval(self, mask: int, ground: int | None = None) -> ExtRat:
        if ground is not None and ground != self.n:
            raise GroundMismatch(f"set lives on {ground} points, submeasure on {self.n}")
        if mask < 0 or mask >> self.n:
            raise GroundMismatch(f"mask {mask:#x} has bits outside ground size {self.n}")
        return self._eval(mask)

    __call__ = eval

    def _eval(self, mask: int) -> ExtRat:
        raise NotImplementedError

    def table(self) -> tuple[ExtRat, ...]:
        return self._table

    @cached_property
    def _table(self) -> tuple[ExtRat, ...]:
        if self.n > MAX_TABLE_GROUND:
            raise SizeLimit(f"table materialization capped at ground size {MAX_TABLE_GROUND}")
        return tuple(self._build_table())

    def _build_table(self) -> list[ExtRat]:
        return [self._eval(m) for m in range(1 << self.n)]

    def materialize(self) -> "Table":
        return Table(self.table())

    def _child(self, child: "FiniteSubmeasure", mask: int) -> ExtRat:
        if child.n <= _CHILD_TABLE_LIMIT:
            return child.table()[mask]
        return child._eval(mask)


@dataclass(frozen=True, eq=True)
class Table(FiniteSubmeasure):
    values: tuple

    def __post_init__(self):
        vals = tuple(ext(v) for v in self.values)
        size = len(vals)
        if size == 0 or size & (size - 1):
            raise ParamRange(f"table length {size} is not a power of two")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values).bit_length() - 1

    def _eval(self, mask):
        return self.values[mask]

    def _build_table(self):
        return list(self.values)


@dataclass(frozen=True, eq=True)
class Covering(FiniteSubmeasure):
    """Value of A = fewest generators whose union contains A."""

    ground: int
    generators: tuple

    def __post_init__(self):
        gens = tuple(int(g) for g in self.generators)
        if not gens:
            raise ParamRange("a covering submeasure needs at least one generator")
        for g in gens:
            if g <= 0 or g >> self.ground:
                raise GroundMismatch(f"generator {g:#x} not a nonempty subset of the ground set")
        object.__setattr__(self, "generators", gens)

    @property
    def n(self) -> int:
        return self.ground

    def _eval(self, mask):
        if mask == 0:
            return Fraction(0)
        gens = sorted({g & mask for g in self.generators if g & mask})
        union = 0
        for g in gens:
            union |= g
        if union != mask:
            raise Uncoverable(f"points {members(mask & ~union)} lie outside every generator")
        # breadth-first over cover cardinality
        seen = {0}
        frontier = [0]
        depth = 0
        while True:
            depth += 1
            nxt = []
            for u in frontier:
                for g in gens:
                    v = u | g
                    if v == mask:
                        return Fraction(depth)
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt

    def _build_table(self):
        n = self.ground
        union = 0
        for g in self.generators:
            union |= g
        if union != full_mask(n):
            raise Uncoverable(f"points {members(full_mask(n) & ~union)} lie outside every generator")
        # shortest number of generators reaching each union, then push down to subsets
        level = {0: 0}
        frontier = [0]
        depth = 0
        while frontier:
            depth += 1
            nxt = []
            for u in frontier:
                for g in self.generators:
                    v = u | g
                    if v not in level:
                        level[v] = depth
                        nxt.append(v)
            frontier = nxt
        big = len(self.generators) + 1
        best = np.full(1 << n, big, dtype=np.int64)
        for u, d in level.items():
            best[u] = d
        for b in range(n):
            view = best.reshape(-1, 2, 1 << b)
            np.minimum(view[:, 0, :], view[:, 1, :], out=view[:, 0, :])
        return [Fraction(int(v)) for v in best]


@dataclass(frozen=True, eq=True)
class WeightedMeasure(FiniteSubmeasure):
    weights: tuple

    def __post_init__(self):
        w = tuple(ext(x) for x in self.weights)
        if any(x < 0 for x in w):
            raise ParamRange("measure weights must be nonnegative")
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.weights)

    def _eval(self, mask):
        s: ExtRat = Fraction(0)
        for i in members(mask):
            s = add(s, self.weights[i])
        return s


@dataclass(frozen=True, eq=True)
class Scale(FiniteSubmeasure):
    factor: Fraction
    inner: FiniteSubmeasure

    def __post_init__(self):
        f = ext(self.factor)
        if is_inf(f) or f <= 0:
            raise ParamRange("scale factor must be positive and finite")
        object.__setattr__(self, "factor", f)

    @property
    def n(self) -> int:
        return self.inner.n

    def _eval(self, mask):
        v = self._child(self.inner, mask)
        return v if is_inf(v) else v * self.factor


@dataclass(frozen=True, eq=True)
class MinConst(FiniteSubmeasure):
    cap: Fraction
    inner: FiniteSubmeasure

    def __post_init__(self):
        c = ext(self.cap)
        if c < 0:
            raise ParamRange("cap must be nonnegative")
        object.__setattr__(self, "cap", c)

    @property
    def n(self) -> int:
        return self.inner.n

    def _eval(self, mask):
        return min(self.cap, self._child(self.inner, mask))


@dataclass(frozen=True, eq=True)
class PointwiseMax(FiniteSubmeasure):
    left: FiniteSubmeasure
    right: FiniteSubmeasure

    def __post_init__(self):
        if self.left.n != self.right.n:
            raise GroundMismatch("pointwise max needs a common ground set")

    @property
    def n(self) -> int:
        return self.left.n

    def _eval(self, mask):
        return max(self._child(self.left, mask), self._child(self.right, mask))


@dataclass(frozen=True, eq=True)
class _DirectSum(FiniteSubmeasure):
    """Left component on indices [0, left.n), right on the rest."""

    left: FiniteSubmeasure
    right: FiniteSubmeasure

    @property
    def n(self) -> int:
        return self.left.n + self.right.n

    def _parts(self, mask):
        low = mask & full_mask(self.left.n)
        return self._child(self.left, low), self._child(self.right, mask >> self.left.n)


class OplusSum(_DirectSum):
    def _eval(self, mask):
        a, b = self._parts(mask)
        return add(a, b)


class OplusMax(_DirectSum):
    def _eval(self, mask):
        return max(self._parts(mask))


AGGREGATORS = ("sum", "sup", "weighted_sup")


@dataclass(frozen=True, eq=True)
class Block(FiniteSubmeasure):
    """Blocks on consecutive index ranges combined by sum, sup or weighted sup."""

    blocks: tuple
    aggregator: str = "sum"
    weights: tuple | None = None
    meta: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if not blocks:
            raise ParamRange("a block submeasure needs at least one block")
        object.__setattr__(self, "blocks", blocks)
        if self.aggregator not in AGGREGATORS:
            raise ParamRange(f"unknown aggregator {self.aggregator!r}")
        if self.aggregator == "weighted_sup":
            if self.weights is None or len(self.weights) != len(blocks):
                raise ParamRange("weighted_sup needs one weight per block")
            w = tuple(ext(x) for x in self.weights)
            if any(is_inf(x) or x <= 0 for x in w):
                raise ParamRange("block weights must be positive and finite")
            object.__setattr__(self, "weights", w)
        elif self.weights is not None:
            raise ParamRange("weights are only meaningful for weighted_sup")

    @property
    def n(self) -> int:
        return sum(b.n for b in self.blocks)

    @property
    def offsets(self) -> list[int]:
        offs, o = [], 0
        for b in self.blocks:
            offs.append(o)
            o += b.n
        return offs

    def block_mask(self, k: int) -> int:
        return full_mask(self.blocks[k].n) << self.offsets[k]

    def local_values(self, mask: int) -> list[ExtRat]:
        vals = []
        for b, off in zip(self.blocks, self.offsets):
            vals.append(self._child(b, (mask >> off) & full_mask(b.n)))
        return vals

    def _eval(self, mask):
        vals = self.local_values(mask)
        if self.aggregator == "sum":
            s: ExtRat = Fraction(0)
            for v in vals:
                s = add(s, v)
            return s
        if self.aggregator == "sup":
            return max(vals)
        return max(v if v == 0 else mul(w, v) for w, v in zip(self.weights, vals))


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class Violation:
    kind: str  # "empty set" | "monotonicity" | "subadditivity" | "floor" | "point"
    sets: tuple
    detail: str


@dataclass
class ValidationReport:
    mode: str  # "exhaustive" or "sampled"
    violations: list = field(default_factory=list)
    truncated: bool = False

    @property
    def valid(self) -> bool:
        return not self.violations

    def _add(self, v: Violation, limit: int) -> bool:
        """Record ``v``; returns False once the violation limit is reached."""
        if len(self.violations) >= limit:
            self.truncated = True
            return False
        self.violations.append(v)
        return True


def _le(a, b) -> bool:
    # a <= b where None is +inf
    if b is None:
        return True
    if a is None:
        return False
    return a <= b


def _check_axioms(values: Sequence[ExtRat], bits: int, report: ValidationReport,
                  limit: int, kind_label: str = "") -> None:
    ints, _ = _scaled_ints(values)
    full = full_mask(bits)
    if ints[0] != 0:
        report._add(Violation("empty set", (0,), f"value at empty{kind_label} is {fmt(values[0])}"), limit)
    for m in range(1 << bits):
        free = full & ~m
        while free:
            low = free & -free
            free ^= low
            if not _le(ints[m], ints[m | low]):
                if not report._add(Violation(
                        "monotonicity", (m, m | low),
                        f"{fmt(values[m])} > {fmt(values[m | low])}"), limit):
                    return
    # with monotonicity, disjoint pairs suffice for subadditivity
    for u in range(1, 1 << bits):
        vu = ints[u]
        a = (u - 1) & u
        while a:
            b = u ^ a
            if a < b:
                va, vb = ints[a], ints[b]
                if va is not None and vb is not None and not _le(vu, va + vb):
                    if not report._add(Violation(
                            "subadditivity", (a, b),
                            f"value({u:#x})={fmt(values[u])} > {fmt(values[a])} + {fmt(values[b])}"),
                            limit):
                        return
            a = (a - 1) & u


def _sampled_axioms(evalf, bits: int, report: ValidationReport, limit: int,
                    samples: int, seed: int) -> None:
    rng = random.Random(seed)
    if evalf(0) != 0:
        report._add(Violation("empty set", (0,), f"value at empty is {fmt(evalf(0))}"), limit)
    for _ in range(samples):
        a = rng.getrandbits(bits)
        b = rng.getrandbits(bits)
        va, vb, vab = evalf(a), evalf(b), evalf(a | b)
        if va > vab and not report._add(
                Violation("monotonicity", (a, a | b), f"{fmt(va)} > {fmt(vab)}"), limit):
            return
        if vab > add(va, vb) and not report._add(
                Violation("subadditivity", (a, b), f"{fmt(vab)} > {fmt(va)} + {fmt(vb)}"), limit):
            return


def validate_submeasure(phi: FiniteSubmeasure, *, max_violations: int = 100,
                        samples: int = 20000, seed: int = 0) -> ValidationReport:
    """Check the submeasure axioms; never raises on a mathematical violation."""
    if phi.n <= MAX_EXHAUSTIVE_SUBADDITIVITY:
        report = ValidationReport("exhaustive")
        _check_axioms(phi.table(), phi.n, report, max_violations)
    else:
        report = ValidationReport("sampled")
        _sampled_axioms(phi.eval, phi.n, report, max_violations, samples, seed)
    return report


# ------------------------------------------------------------------ patterns

@dataclass(frozen=True)
class PatternPoint:
    """A set described by the atoms it meets infinitely and whether it is nonempty."""

    pattern: int
    nonempty: bool

    def __post_init__(self):
        if self.pattern < 0:
            raise ParamRange("pattern mask must be nonnegative")
        if self.pattern and not self.nonempty:
            raise ParamRange("a set meeting some atom infinitely is nonempty")


@dataclass(frozen=True, eq=True)
class PatternSubmeasure:
    """Submeasure on omega determined by atom pattern, with value ``floor`` on
    nonempty sets meeting every atom finitely."""

    atoms: int
    theta: tuple
    floor: Fraction = Fraction(0)
    meta: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.atoms < 1:
            raise ParamRange("a pattern submeasure needs at least one atom")
        th = tuple(ext(v) for v in self.theta)
        if len(th) != 1 << self.atoms:
            raise ParamRange(f"theta needs {1 << self.atoms} entries, got {len(th)}")
        fl = ext(self.floor)
        if is_inf(fl) or fl < 0:
            raise ParamRange("floor must be finite and nonnegative")
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "floor", fl)

    @property
    def k(self) -> int:
        return self.atoms

    def points(self) -> list[PatternPoint]:
        """Every pattern point, empty set first."""
        pts = [PatternPoint(0, False), PatternPoint(0, True)]
        pts += [PatternPoint(s, True) for s in range(1, 1 << self.atoms)]
        return pts

    def lifted(self, s: int) -> ExtRat:
        """Value of a nonempty set with pattern ``s``."""
        return self.theta[s] if s else self.floor


def pattern_eval(P: PatternSubmeasure, x: PatternPoint) -> ExtRat:
    if x.pattern >> P.atoms:
        raise GroundMismatch(f"pattern {x.pattern:#x} uses atoms beyond {P.atoms}")
    if x.pattern:
        return P.theta[x.pattern]
    return P.floor if x.nonempty else Fraction(0)


def validate_pattern(P: PatternSubmeasure, *, max_violations: int = 100,
                     samples: int = 20000, seed: int = 0) -> ValidationReport:
    k = P.atoms
    if k <= MAX_EXHAUSTIVE_PATTERN:
        report = ValidationReport("exhaustive")
        _check_axioms(P.theta, k, report, max_violations, " pattern")
    else:
        report = ValidationReport("sampled")
        _sampled_axioms(lambda s: P.theta[s], k, report, max_violations, samples, seed)
    for s in range(1, 1 << k):
        if P.theta[s] < P.floor:
            if not report._add(Violation(
                    "floor", (s,), f"theta={fmt(P.theta[s])} below floor {fmt(P.floor)}"),
                    max_violations):
                break
    return report


def direct_sum_pattern(P: PatternSubmeasure, Q: PatternSubmeasure,
                       mode: str = "max") -> PatternSubmeasure:
    """Atoms of ``P`` first, then those of ``Q``.

    A side whose sub-pattern is empty is charged its floor (the set may still
    have finitely many points there); this keeps the result a valid pattern.
    """
    if mode not in ("max", "sum"):
        raise ParamRange(f"unknown direct-sum mode {mode!r}")
    op = max if mode == "max" else (lambda a, b: add(a, b))
    k = P.atoms + Q.atoms
    low = full_mask(P.atoms)
    theta = [Fraction(0)]
    for s in range(1, 1 << k):
        theta.append(op(P.lifted(s & low), Q.lifted(s >> P.atoms)))
    return PatternSubmeasure(k, tuple(theta), op(P.floor, Q.floor))
