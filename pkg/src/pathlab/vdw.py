"""Arithmetic progressions, finite van der Waerden checks and the
V-table submeasure ``phi(A) = max{n : A holds an AP of length V_n}``."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParamRange, SizeLimit, Unsupported
from .extrat import INF, ExtRat
from .prefix import IntegerSet

MAX_AP_SET = 10_000
MAX_W_LENGTH = 25
MAX_EXHAUSTIVE_MEASURE = 16
MAX_DENSITY_CHECK = 20
AP_RICH = ("all", "evens", "odds")


@dataclass(frozen=True)
class VTable:
    values: tuple

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if len(vals) < 2 or vals[:2] != (1, 2):
            raise ParamRange("a V-table starts 1, 2")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ParamRange("V-table values must be strictly increasing")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, n: int) -> int:
        """1-based access: ``V[1] == 1``."""
        if not 1 <= n <= len(self.values):
            raise IndexError(n)
        return self.values[n - 1]

    def __len__(self) -> int:
        return len(self.values)


# smallest-choice values through index 4; V_5 >= W_9 is out of reach
DEFAULT_VTABLE = VTable((1, 2, 3, 9))


@dataclass(frozen=True)
class APRecord:
    start: int
    step: int
    length: int

    def terms(self) -> list[int]:
        return [self.start + j * self.step for j in range(self.length)]


def _explicit(A) -> list[int]:
    if isinstance(A, IntegerSet):
        if A.elements is None:
            raise Unsupported("AP search needs an explicit set; materialize the predicate first")
        return list(A.elements)
    return sorted(set(int(a) for a in A))


def longest_ap(A) -> tuple[int, APRecord | None]:
    """Exact longest AP in a finite set and the first witness by (start, step)."""
    a = _explicit(A)
    if len(a) > MAX_AP_SET:
        raise SizeLimit(f"AP search is capped at {MAX_AP_SET} elements")
    if not a:
        return 0, None
    best = APRecord(a[0], 1, 1)
    members = set(a)
    top = a[-1]
    for i, x in enumerate(a):
        for y in a[i + 1:]:
            d = y - x
            if (top - x) // d + 1 <= best.length:
                break  # larger steps only fit fewer terms
            if x - d in members:
                continue  # not the first term of its progression
            k, z = 2, y + d
            while z in members:
                k, z = k + 1, z + d
            if k > best.length:
                best = APRecord(x, d, k)
    return best.length, best


def _phi_of_length(V: VTable, length: int) -> int:
    return sum(1 for v in V.values if v <= length)


def vdw_phi(V: VTable, A) -> ExtRat:
    """Largest ``n`` with an AP of length ``V_n`` inside ``A``, capped at the table length."""
    if isinstance(A, IntegerSet) and A.elements is None:
        if A.predicate in AP_RICH or A.predicate.startswith("multiples:"):
            return INF
        raise Unsupported(f"{A.predicate} is not declared AP-rich; materialize it to a bound")
    return Fraction(_phi_of_length(V, longest_ap(A)[0]))


@dataclass
class WResult:
    n: int
    length: int
    holds: bool
    counterexample: tuple | None = None  # colour of each position 0..L-1


def w_check(n: int, L: int) -> WResult:
    """Does every 2-colouring of ``[0, L)`` have a monochromatic ``n``-term AP?

    Backtracking assigns positions from ``L-1`` down, colour 0 first, so the
    first surviving colouring is the one of lowest index
    ``sum(colour[j] << j)``.
    """
    if n < 1:
        raise ParamRange("progression length must be at least 1")
    if not 0 <= L <= MAX_W_LENGTH:
        raise SizeLimit(f"w_check is capped at L = {MAX_W_LENGTH}")
    colour = [None] * L

    def closes_ap(p: int) -> bool:
        # monochromatic n-AP whose least term is p
        c = colour[p]
        if n == 1:
            return True
        for d in range(1, (L - 1 - p) // (n - 1) + 1):
            if all(colour[p + j * d] == c for j in range(1, n)):
                return True
        return False

    def search(p: int) -> bool:
        if p < 0:
            return True
        for c in (0, 1):
            colour[p] = c
            if not closes_ap(p) and search(p - 1):
                return True
        colour[p] = None
        return False

    if search(L - 1):
        return WResult(n, L, False, tuple(colour))
    return WResult(n, L, True)


def _ap_masks(elements: list[int], length: int) -> list[int]:
    """Bit masks (over positions in ``elements``) of every AP of the given length."""
    idx = {x: i for i, x in enumerate(elements)}
    if length <= 1:
        return [1 << i for i in range(len(elements))] if length == 1 else [0]
    out = set()
    for i, x in enumerate(elements):
        for y in elements[i + 1:]:
            d = y - x
            terms = [x + j * d for j in range(length)]
            if all(t in idx for t in terms):
                m = 0
                for t in terms:
                    m |= 1 << idx[t]
                out.add(m)
    return sorted(out)


def vdw_scaled_measure(A, n: int | None, V: VTable, *, samples: int = 4096, seed: int = 0) -> dict:
    """Uniform measure on a witnessing AP and its feasibility against ``phi``.

    ``nu`` puts ``n / V_n`` on each point of an AP ``B`` of length ``V_n``;
    ``mu`` is ``nu / 2`` when ``n > 2`` and ``nu`` itself otherwise (then the
    mass per point is 1).  Feasibility is ``mu(C) <= phi(C)`` over every
    ``C ⊆ A`` when ``|A| <= 16``, otherwise over seeded random subsets.
    """
    a = _explicit(A)
    phi = _phi_of_length(V, longest_ap(a)[0])
    if n is None:
        n = phi
    if n != phi:
        raise ParamRange(f"phi(A) = {phi}, not {n}")
    if n == 0:
        raise ParamRange("A must be nonempty")
    vn = V[n]
    _, rec = longest_ap(a)
    B = APRecord(rec.start, rec.step, vn).terms()
    per_point = Fraction(n, vn)
    mu_point = per_point / 2 if n > 2 else per_point
    pos = {x: i for i, x in enumerate(a)}
    bmask = 0
    for b in B:
        bmask |= 1 << pos[b]
    ap_masks = [_ap_masks(a, V[i]) for i in range(1, len(V) + 1)]

    def phi_of(c: int) -> int:
        val = 0
        for i, masks in enumerate(ap_masks, start=1):
            if any(m & c == m for m in masks):
                val = i
            else:
                break
        return val

    size = len(a)
    if size <= MAX_EXHAUSTIVE_MEASURE:
        subsets, mode = range(1, 1 << size), "exhaustive"
    else:
        rng = random.Random(seed)
        subsets, mode = [rng.getrandbits(size) or 1 for _ in range(samples)], "sampled"
    worst, worst_set, violations, checked = Fraction(0), 0, [], 0
    for c in subsets:
        checked += 1
        k = bin(c & bmask).count("1")
        p = phi_of(c)
        nu = per_point * k
        r = nu / p
        if r > worst:
            worst, worst_set = r, c
        if mu_point * k > p and len(violations) < 10:
            violations.append([a[i] for i in range(size) if c >> i & 1])
    return {
        "n": n,
        "phi": phi,
        "B": B,
        "nu": {b: per_point for b in B},
        "mu": {b: mu_point for b in B},
        "nu_total": per_point * vn,
        "mu_total": mu_point * vn,
        "feasibility": {
            "mode": mode,
            "checked": checked,
            "feasible": not violations,
            "violations": violations,
            "max_ratio": worst,
            "argmax": [a[i] for i in range(size) if worst_set >> i & 1],
        },
    }


def _density_holds(length: int, size: int, ap_len: int) -> bool:
    """Every ``size``-subset of ``[0, length)`` holds an AP of ``ap_len`` terms."""
    if size > length:
        return True
    universe = list(range(length))
    for combo in itertools.combinations(universe, size):
        if longest_ap(combo)[0] < ap_len:
            return False
    return True


def check_vtable(V: VTable) -> list[dict]:
    """Per index ``n >= 3``: the van der Waerden bound ``V_n >= W_{V_{n-1}}`` and,
    for each ``i < n``, that subsets of an AP of length ``V_n`` with density
    ``>= i/n`` hold an AP of length ``V_i``.

    Both are checked only at length ``V_n`` and only where brute force is
    feasible; otherwise the entry is ``None`` (unchecked).
    """
    rows = []
    for n in range(3, len(V) + 1):
        vn = V[n]
        w = w_check(V[n - 1], vn).holds if vn <= MAX_W_LENGTH else None
        dens = {}
        for i in range(1, n):
            need = math.ceil(Fraction(i * vn, n))
            dens[i] = _density_holds(vn, need, V[i]) if vn <= MAX_DENSITY_CHECK else None
        ok = w is not False and all(v is not False for v in dens.values())
        rows.append({"n": n, "V_n": vn, "w_bound": w, "density": dens, "ok": ok})
    return rows
