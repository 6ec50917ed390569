"""Random generators and independent oracles shared by the tests."""

import itertools
import random
from fractions import Fraction

from pathlab.core import Covering, Table, full_mask, members
from pathlab.extrat import INF, is_inf
from pathlab.lp import LinearProgram, solve_lp


def weighted_cover_table(n, rng, max_extra=None, denominators=(1, 2, 3)):
    """Cheapest weighted cover by random generators, pushed down to subsets.

    Always a submeasure: monotone by construction and subadditive because
    covers concatenate.  Overlapping generators make most draws pathological.
    """
    gens = [(1 << i, Fraction(rng.randint(1, 3), rng.choice(denominators))) for i in range(n)]
    for _ in range(rng.randint(1, max_extra or 2 * n)):
        gens.append((rng.getrandbits(n) or 1, Fraction(rng.randint(1, 4), rng.choice(denominators))))
    size = 1 << n
    best = [None] * size
    best[0] = Fraction(0)
    for m in range(size):
        if best[m] is None:
            continue
        for g, w in gens:
            u = m | g
            if best[u] is None or best[m] + w < best[u]:
                best[u] = best[m] + w
    for b in range(n):
        for m in range(size):
            if not m >> b & 1 and best[m | 1 << b] < best[m]:
                best[m] = best[m | 1 << b]
    return best


def random_submeasure(n, rng):
    """A random valid submeasure table on ``n`` points (occasionally with inf)."""
    vals = weighted_cover_table(n, rng)
    kind = rng.random()
    if kind < 0.2:
        cap = Fraction(rng.randint(1, 6), 2)
        vals = [min(v, cap) for v in vals]
    elif kind < 0.28 and n >= 2:
        p = rng.randrange(n)
        vals = [INF if m >> p & 1 else v for m, v in enumerate(vals)]
    return Table(tuple(vals))


def random_covering(n, rng):
    gens = [rng.getrandbits(n) or 1 for _ in range(rng.randint(1, 6))]
    union = 0
    for g in gens:
        union |= g
    # make sure every point is covered
    for i in range(n):
        if not union >> i & 1:
            gens.append((1 << i) | (rng.getrandbits(n) & full_mask(n)))
            union |= gens[-1]
    return Covering(n, tuple(gens))


def lp_hull(phi, A):
    """Hull by the explicit primal LP: one constraint per nonempty subset of A."""
    elems = members(A)
    if not elems:
        return Fraction(0)
    if any(is_inf(phi.eval(1 << i)) for i in elems):
        return INF
    rows = []
    for t in range(1, 1 << len(elems)):
        coeffs = [Fraction(t >> j & 1) for j in range(len(elems))]
        mask = sum(1 << elems[j] for j in range(len(elems)) if t >> j & 1)
        rows.append((coeffs, phi.eval(mask)))
    return solve_lp(LinearProgram.build(len(elems), [1] * len(elems), rows)).value


def brute_min_cover(generators, A):
    """Fewest generators whose union contains A, by trying every combination."""
    if A == 0:
        return 0
    for k in range(1, len(generators) + 1):
        for combo in itertools.combinations(generators, k):
            u = 0
            for g in combo:
                u |= g
            if A & ~u == 0:
                return k
    return None


def brute_ratio_max(vals, hulls):
    best = None
    for v, h in zip(vals, hulls):
        if is_inf(v):
            r = Fraction(1) if is_inf(h) else INF
        elif h == 0:
            r = Fraction(1) if v == 0 else INF
        else:
            r = v / h
        if best is None or r > best:
            best = r
    return best


def seeded(seed):
    return random.Random(seed)

