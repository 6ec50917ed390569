"""Named example submeasures, pattern quotients, covering systems and
Table-of-degrees composites."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    Block, Covering, PatternSubmeasure, Scale, Table, WeightedMeasure,
    full_mask, mask_of, popcount,
)
from .errors import ParamRange, SizeLimit, UnknownKind, Unsupported
from .extrat import INF, ext
from .hull import covering_hull_fast
from .pathology import Composite

ONE = Fraction(1)


def _by_size(k: int, values) -> tuple:
    return tuple(values[popcount(s)] for s in range(1 << k))


# ----------------------------------------------------------- finite examples

def make_tau() -> Table:
    """Three points: 1 on sets of size 1 or 2, 2 on the whole set."""
    return Table(_by_size(3, [0, 1, 1, 2]))


def make_interp(alpha) -> Table:
    alpha = ext(alpha)
    if not Fraction(3, 2) < alpha <= 2:
        raise ParamRange("alpha must satisfy 3/2 < alpha <= 2")
    return Table(_by_size(3, [0, 1, 1, alpha]))


def make_delta_table(n: int) -> Table:
    return Table([0] + [1] * ((1 << n) - 1))


# ------------------------------------------------------------------ patterns

def make_tau3_inf() -> PatternSubmeasure:
    return PatternSubmeasure(3, _by_size(3, [0, 1, 1, 2]), 0, meta={"name": "tau3-inf"})


def make_eta() -> PatternSubmeasure:
    return PatternSubmeasure(4, _by_size(4, [0, 3, 3, 3, 6]), 1, meta={"name": "eta"})


_DELTA_KINDS = {
    # kind: (theta on the single atom, floor)
    "delta_fin": (ONE, Fraction(0)),
    "delta_plus_delta_fin": (Fraction(2), ONE),
    "delta": (ONE, ONE),
    "delta_fin_inf": (INF, Fraction(0)),
}


def make_delta_pattern(kind: str) -> PatternSubmeasure:
    """One-atom quotients of the delta family (the atom is omega itself)."""
    kind = kind.replace("-", "_")
    if kind not in _DELTA_KINDS:
        raise UnknownKind(f"unknown delta kind {kind!r}; choose from {sorted(_DELTA_KINDS)}")
    top, floor = _DELTA_KINDS[kind]
    return PatternSubmeasure(1, (0, top), floor, meta={"name": kind})


# ---------------------------------------------------------- covering systems

@dataclass(frozen=True)
class CoveringSystem:
    ground: int
    generators: tuple
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not self.generators:
            raise ParamRange("a covering system needs generators")
        union = 0
        for g in self.generators:
            union |= g
        if union != full_mask(self.ground):
            raise ParamRange("generators must cover the ground set")


def mazur_points(n: int) -> list[tuple]:
    """The n-subsets of range(2n) in colexicographic order."""
    return sorted(itertools.combinations(range(2 * n), n), key=lambda s: s[::-1])


def make_mazur_system(n: int) -> CoveringSystem:
    """Points are the n-subsets of [2n]; generator i collects the subsets containing i.

    No n generators cover everything (the complement of their indices is a
    missed point), yet every probability on the points gives some generator
    mass at least 1/2.  Both facts are rechecked here for n <= 3.
    """
    if not 1 <= n <= 5:
        raise SizeLimit("Mazur systems are built for 1 <= n <= 5")
    pts = mazur_points(n)
    gens = tuple(mask_of(j for j, s in enumerate(pts) if i in s) for i in range(2 * n))
    sys = CoveringSystem(len(pts), gens, tuple(pts))
    if n <= 3:
        full = full_mask(sys.ground)
        for combo in itertools.combinations(gens, n):
            u = 0
            for g in combo:
                u |= g
            assert u != full, "n generators must not cover the points"
        # max total mass with every generator <= 1 is 2, i.e. some generator gets >= 1/2
        assert covering_hull_fast(gens, full, ground=sys.ground).value == 2
    return sys


def make_phi_cover(sys: CoveringSystem) -> Covering:
    return Covering(sys.ground, sys.generators)


def make_mazur_piece(n: int) -> Scale:
    """Covering submeasure of the size-n system divided by n+1: value 1 on the
    whole system, hull 2/(n+1)."""
    return Scale(Fraction(1, n + 1), make_phi_cover(make_mazur_system(n)))


PSI_VARIANTS = {"sum": "sum", "sup": "sup", "weighted_sup": "weighted_sup"}


def make_psi(variant: str, blocks: int = 2, piece_params=None, weights=None) -> Block:
    """Block submeasure of normalized Mazur pieces.

    Each piece has value 1 on its block and hull ``eps_k = 2/(n_k+1)``; these
    stand in for epsilon-pathological pieces with the bound sequence
    relabelled to ``eps_k``.
    """
    if variant not in PSI_VARIANTS:
        raise UnknownKind(f"unknown psi variant {variant!r}")
    if not 1 <= blocks <= 3:
        raise SizeLimit("psi truncations use at most 3 blocks")
    params = list(piece_params) if piece_params is not None else list(range(1, blocks + 1))
    if len(params) != blocks or any(not 1 <= p <= 3 for p in params):
        raise SizeLimit("one Mazur parameter in 1..3 per block")
    pieces = tuple(make_mazur_piece(p) for p in params)
    w = None
    if variant == "weighted_sup":
        w = tuple(weights) if weights is not None else tuple(p + 1 for p in params)
    meta = {
        "substitution": "normalized Mazur pieces, eps_k = 2/(n_k+1)",
        "pieces": params,
        "eps": [Fraction(2, p + 1) for p in params],
    }
    return Block(pieces, PSI_VARIANTS[variant], w, meta=meta)


def psi_block_analysis(psi: Block) -> list[dict]:
    """Per-block value, hull and ratio for a psi built by ``make_psi``."""
    rows = []
    weights = psi.weights or (ONE,) * len(psi.blocks)
    for k, (piece, off) in enumerate(zip(psi.blocks, psi.offsets)):
        factor = piece.factor * (weights[k] if psi.aggregator == "weighted_sup" else 1)
        cover = piece.inner
        full = full_mask(cover.n)
        h = covering_hull_fast(cover.generators, full, ground=cover.n, scale=factor).value
        v = psi.eval(psi.block_mask(k))
        rows.append({"block": k, "points": cover.n, "value": v, "hull": h, "ratio": v / h})
    return rows


# -------------------------------------------------------------- degree table

def _sigma_measure() -> WeightedMeasure:
    return WeightedMeasure((1, Fraction(1, 2), Fraction(1, 4)))


def _leaf(name: str):
    return {
        "sigma-measure": _sigma_measure,
        "tau3": make_tau,
        "tau3-inf": make_tau3_inf,
        "eta": make_eta,
        "delta-plus-delta-fin": lambda: make_delta_pattern("delta_plus_delta_fin"),
        "delta-fin-inf": lambda: make_delta_pattern("delta_fin_inf"),
    }[name]()


Q = Fraction
# row id -> (P_fin, P, P_sigma) as listed in the degree table
TABLE2 = {
    "sigma-measure": (ONE, ONE, ONE),
    "delta-fin-inf": (ONE, ONE, INF),
    "delta-plus-delta-fin": (ONE, ONE, Q(2)),
    "tau3-inf": (ONE, Q(4, 3), INF),
    "tau3": (Q(4, 3), Q(4, 3), Q(4, 3)),
    "tau3⊕tau3-inf": (Q(4, 3), Q(4, 3), INF),
    "eta": (ONE, Q(3, 2), Q(6)),
    "delta-plus-delta-fin⊕tau3": (Q(4, 3), Q(4, 3), Q(2)),
    "tau3⊕tau3-inf⊕eta": (Q(4, 3), Q(3, 2), INF),
    "eta⊕tau3": (Q(4, 3), Q(3, 2), Q(6)),
}

TABLE2_UNSUPPORTED = {
    "chi": "needs a nonzero submeasure with zero hull; no finite construction exists",
    "psi1": "P_fin = inf only in the limit of infinitely many blocks; see the psi truncations",
    "psi2": "P_fin = inf only in the limit of infinitely many blocks; see the psi truncations",
    "delta-plus-chi": "contains chi; P(delta+chi) is an open question",
    "tau3⊕chi": "contains chi",
    "tau3⊕delta-plus-chi": "contains chi; P is an open question",
}


def normalize_row_id(row_id: str) -> str:
    """Accept ``+`` or ``(+)`` as ASCII spellings of the direct-sum sign."""
    return row_id.replace("(+)", "⊕").replace("+", "⊕")


def make_table2_row(row_id: str):
    """Leaf or max-direct-sum composite for a row of the degree table."""
    rid = normalize_row_id(row_id)
    if rid in TABLE2_UNSUPPORTED:
        raise Unsupported(f"{rid}: {TABLE2_UNSUPPORTED[rid]}")
    if rid not in TABLE2:
        raise UnknownKind(f"unknown row {row_id!r}")
    names = rid.split("⊕")
    if len(names) == 1:
        return _leaf(names[0])
    return Composite("max", tuple(_leaf(n) for n in names), name=rid)


# ------------------------------------------------------------------ registry

@dataclass(frozen=True)
class GalleryEntry:
    name: str
    description: str
    build: object
    params: tuple = ()


def _mazur(n=2):
    return make_phi_cover(make_mazur_system(int(n)))


def _psi(variant="sum", blocks=2):
    return make_psi(str(variant), int(blocks))


REGISTRY = {
    e.name: e for e in [
        GalleryEntry("tau", "3-point table 0/1/1/2 by cardinality", make_tau),
        GalleryEntry("interp", "3-point table 0/1/1/alpha, 3/2 < alpha <= 2", make_interp, ("alpha",)),
        GalleryEntry("delta", "n-point table, 1 on every nonempty set",
                     lambda n=3: make_delta_table(int(n)), ("n",)),
        GalleryEntry("sigma-measure", "point masses 1, 1/2, 1/4", _sigma_measure),
        GalleryEntry("tau3-inf", "pattern: atoms met infinitely, 0/1/1/2 by count, 0 on finite sets",
                     make_tau3_inf),
        GalleryEntry("eta", "pattern: 4 atoms, 0/3/3/3/6 by count, 1 on nonempty finite sets", make_eta),
        GalleryEntry("delta-fin", "pattern: 1 on infinite sets, 0 on finite sets",
                     lambda: make_delta_pattern("delta_fin")),
        GalleryEntry("delta-fin-inf", "pattern: inf on infinite sets, 0 on finite sets",
                     lambda: make_delta_pattern("delta_fin_inf")),
        GalleryEntry("delta-plus-delta-fin", "pattern: 2 on infinite sets, 1 on nonempty finite sets",
                     lambda: make_delta_pattern("delta_plus_delta_fin")),
        GalleryEntry("mazur", "covering submeasure of the n-subsets of [2n] by stars", _mazur, ("n",)),
        GalleryEntry("psi", "blocks of normalized Mazur pieces (variant: sum|sup|weighted_sup)",
                     _psi, ("variant", "blocks")),
    ]
}


def gallery_build(name: str, **params):
    if name.startswith("table2:"):
        return make_table2_row(name.split(":", 1)[1])
    if name not in REGISTRY:
        raise UnknownKind(f"unknown gallery key {name!r}")
    entry = REGISTRY[name]
    unknown = set(params) - set(entry.params)
    if unknown:
        raise ParamRange(f"{name} takes parameters {list(entry.params)}, got {sorted(unknown)}")
    return entry.build(**params)


def gallery_objects() -> dict:
    """Every parameter-free gallery object plus a few parametrized ones."""
    out = {k: gallery_build(k) for k, e in REGISTRY.items() if not e.params}
    out["interp(7/4)"] = make_interp(Fraction(7, 4))
    out["delta(3)"] = make_delta_table(3)
    out["mazur(2)"] = _mazur(2)
    out["psi(sum,2)"] = make_psi("sum", 2)
    return out

