"""Acceptance suite: twelve end-to-end criteria, each timed and reported on
one PASS/FAIL line (shown in the pytest terminal summary, or printed when
this file is run as a script)."""

import random
import sys
from fractions import Fraction as F
from time import perf_counter

import pytest

from pathlab.core import OplusMax, OplusSum, Table, full_mask, members, validate_submeasure
from pathlab.gallery import (
    TABLE2, make_eta, make_interp, make_mazur_system, make_phi_cover, make_psi, make_table2_row,
    make_tau, make_tau3_inf, psi_block_analysis,
)
from pathlab.hull import covering_hull_fast, hull, hull_all, pattern_hull, verify_witness
from pathlab.pathology import degree_P, pathology_report, pattern_degrees
from pathlab.extrat import INF
from pathlab.prefix import (
    IntegerSet, matrix_from_witness, matrix_submeasure_prefix, measure_of, pushforward_weights,
    summable_from_measures,
)
from pathlab.vdw import DEFAULT_VTABLE, VTable, vdw_scaled_measure, w_check

import acceptance_log
from helpers import brute_min_cover, random_covering, random_submeasure


def run_criterion(number, title, check, limit=None):
    start = perf_counter()
    try:
        failures, summary = check()
    except Exception as exc:  # a crash is a failed criterion, reported like any other
        failures, summary = [f"{type(exc).__name__}: {exc}"], "raised"
    elapsed = perf_counter() - start
    if limit is not None and elapsed >= limit:
        failures.append(f"took {elapsed:.2f} s, limit {limit} s")
    ok = not failures
    detail = summary if ok else "; ".join(failures[:3])
    acceptance_log.record(number, title, ok, detail, elapsed)
    print(acceptance_log.line(number))
    assert ok, detail


# ----------------------------------------------------------------- checks

def check_tau():
    fails = []
    w = hull(make_tau(), 0b111)
    if w.value != F(3, 2) or not verify_witness(make_tau(), w, 0b111):
        fails.append(f"hull(tau, full) = {w.value}")
    d = degree_P(make_tau()).value
    if d != F(4, 3):
        fails.append(f"degree_P(tau) = {d}")
    return fails, "hull 3/2, P = 4/3"


def check_patterns():
    fails = []
    tau_expect = [0, 1, 1, F(3, 2)]
    for x in make_tau3_inf().points():
        v = pattern_hull(make_tau3_inf(), x).value
        if v != tau_expect[bin(x.pattern).count("1")]:
            fails.append(f"tau3-inf hull at {x} = {v}")
    eta_expect = [1, 3, 3, 3, 4]
    for x in make_eta().points():
        want = eta_expect[bin(x.pattern).count("1")] if x.nonempty else 0
        v = pattern_hull(make_eta(), x).value
        if v != want:
            fails.append(f"eta hull at {x} = {v}, want {want}")
    if pattern_degrees(make_tau3_inf()).degrees() != (1, F(4, 3), INF):
        fails.append("tau3-inf degrees")
    if pattern_degrees(make_eta()).degrees() != (1, F(3, 2), 6):
        fails.append("eta degrees")
    return fails, "tau3-inf and eta hull tables and degrees exact"


def check_table2():
    fails = []
    for rid, expected in TABLE2.items():
        got = pathology_report(make_table2_row(rid)).degrees()
        if got != expected:
            fails.append(f"{rid}: {got} != {expected}")
    return fails, f"{len(TABLE2)} supported rows match"


def check_mazur():
    fails = []
    ratios = []
    for n in (2, 3):
        sysm = make_mazur_system(n)
        phi = make_phi_cover(sysm)
        full = full_mask(sysm.ground)
        cover = brute_min_cover(sysm.generators, full)
        if cover != n + 1 or phi.eval(full) != n + 1:
            fails.append(f"n={n}: cover number {cover}")
        # dual certificate y_i = 1/n, checked from scratch: every point covered, bound 2
        y = F(1, n)
        for p in range(sysm.ground):
            if sum(y for g in sysm.generators if g >> p & 1) < 1:
                fails.append(f"n={n}: point {p} under-covered")
        bound = sum(y * phi.eval(g) for g in sysm.generators)
        # primal: uniform mass with total 2 puts mass 1 on each star
        mass = F(2, sysm.ground)
        if any(mass * len(members(g)) > 1 for g in sysm.generators):
            fails.append(f"n={n}: uniform measure exceeds a star")
        fast = covering_hull_fast(sysm.generators, full, ground=sysm.ground).value
        if not bound == fast == 2:
            fails.append(f"n={n}: dual bound {bound}, LP value {fast}")
        if n == 2:
            w = hull(phi, full)
            if w.value != 2 or not verify_witness(phi, w, full):
                fails.append("n=2: exhaustive hull")
            uniform = [mass] * sysm.ground
            table = phi.table()
            for B in range(1 << sysm.ground):
                if sum((uniform[i] for i in members(B)), F(0)) > table[B]:
                    fails.append(f"n=2: uniform measure exceeds phi at {members(B)}")
                    break
            hulls = hull_all(phi)
            if hulls[full] != 2:
                fails.append("n=2: hull table at K_n")
            for B in range(1 << sysm.ground):
                wb = hull(phi, B)
                if wb.value != hulls[B] or not verify_witness(phi, wb, B):
                    fails.append(f"n=2: witness at {members(B)}")
        ratios.append(F(n + 1, 2))
    if ratios != sorted(set(ratios)):
        fails.append(f"ratios not increasing: {ratios}")
    return fails, f"cover numbers 3, 4; hull 2; ratios {', '.join(map(str, ratios))}"


def check_interp():
    fails = []
    for alpha in (F(8, 5), F(7, 4), F(2)):
        got = degree_P(make_interp(alpha)).value
        if got != F(2, 3) * alpha:
            fails.append(f"alpha={alpha}: {got}")
    return fails, "P = (2/3) alpha for alpha in 8/5, 7/4, 2"


def check_oplus():
    fails = []
    rng = random.Random(20240601)
    for trial in range(200):
        a = rng.randint(1, 5)
        b = rng.randint(1, min(5, 10 - a))
        p, q = random_submeasure(a, rng), random_submeasure(b, rng)
        want = max(degree_P(p).value, degree_P(q).value)
        for lit in (OplusMax(p, q), OplusSum(p, q)):
            got = degree_P(lit).value
            if got != want:
                fails.append(f"trial {trial} {type(lit).__name__}: {got} != {want}")
    return fails, "200 pairs, max and sum direct sums"


def check_hull_invariants():
    fails = []
    rng = random.Random(777)
    for trial in range(500):
        n = rng.randint(1, 8)
        phi = random_submeasure(n, rng)
        vals = phi.table()
        h = hull_all(phi, check=False)
        if any(x > v for x, v in zip(h, vals)):
            fails.append(f"trial {trial}: hull exceeds phi")
        if not validate_submeasure(Table(tuple(h))).valid:
            fails.append(f"trial {trial}: hull table not a submeasure")
        if hull_all(Table(tuple(h)), check=False) != h:
            fails.append(f"trial {trial}: hull not idempotent")
        for A in range(1 << n):
            if not verify_witness(phi, hull(phi, A), A):
                fails.append(f"trial {trial}: witness at {members(A)} rejected")
        rep = pathology_report(phi)
        if not (rep.p_fin == rep.p == rep.p_sigma) or not rep.chain_holds():
            fails.append(f"trial {trial}: degrees {rep.degrees()}")
    return fails, "500 tables, zero violations"


def check_covering():
    fails = []
    rng = random.Random(4242)
    for trial in range(100):
        n = rng.randint(1, 10)
        phi = random_covering(n, rng)
        h = hull_all(phi)
        for A in range(1 << n):
            if covering_hull_fast(phi.generators, A, ground=n).value != h[A]:
                fails.append(f"trial {trial}: mismatch at {members(A)}")
                break
    return fails, "100 systems, every subset equal"


def check_matrix():
    fails = []
    rng = random.Random(99)
    for trial in range(20):
        A = sorted(rng.sample(range(100), rng.randint(1, 20)))
        f = {i: rng.choice(A) for i in range(1, 51)}
        M = matrix_from_witness(f, 50)
        target = IntegerSet.of(A)
        for i in M.row_labels:
            if sum(M.row(i)) != 1:
                fails.append(f"trial {trial}: row {i} sums to {sum(M.row(i))}")
            if matrix_submeasure_prefix(M, target, (i, i)) != 1:
                fails.append(f"trial {trial}: row {i} misses A")
    return fails, "20 witnesses, all rows exactly 1 on A"


def check_summable():
    fails = []
    rng = random.Random(31337)
    for trial in range(50):
        ms = [[F(rng.randint(0, 6), rng.randint(1, 5)) for _ in range(15)]
              for _ in range(rng.randint(1, 5))]
        g = summable_from_measures(ms, 15)
        for _ in range(20):
            A = [i for i in range(15) if rng.random() < 0.5]
            lhs = sum((g[i] for i in A), F(0))
            rhs = sum((measure_of(m, A) / 2 ** k for k, m in enumerate(ms, start=1)), F(0))
            if lhs != rhs:
                fails.append(f"trial {trial}: {lhs} != {rhs}")
    for trial in range(100):
        f = [F(rng.randint(0, 9), rng.randint(1, 7)) for _ in range(rng.randint(1, 30))]
        g = [rng.randrange(8) for _ in f]
        if sum(pushforward_weights(f, g)) != sum(f):
            fails.append(f"pushforward trial {trial} loses mass")
    return fails, "exchange identity and mass conservation exact"


def _mono_ap(colour, n):
    L = len(colour)
    return any(len({colour[s + j * d] for j in range(n)}) == 1
               for s in range(L) for d in range(1, L) if s + (n - 1) * d < L)


def check_vdw():
    fails = []
    # oracle: every colouring of [0, L), in index order
    for L in (8, 9):
        first_free = next((tuple(c >> j & 1 for j in range(L)) for c in range(1 << L)
                           if not _mono_ap(tuple(c >> j & 1 for j in range(L)), 3)), None)
        r = w_check(3, L)
        if r.holds != (first_free is None) or r.counterexample != first_free:
            fails.append(f"w_check(3, {L}) disagrees with exhaustive search")
    if not w_check(3, 9).holds or w_check(3, 8).holds:
        fails.append("w(2,3) = 9 not reproduced")
    rng = random.Random(5)
    worst = F(0)
    tables = (DEFAULT_VTABLE, VTable((1, 2, 4)))
    for trial in range(100):
        A = rng.sample(range(18), rng.randint(1, 12))
        rep = vdw_scaled_measure(A, None, tables[trial % 2])
        feas = rep["feasibility"]
        worst = max(worst, feas["max_ratio"])
        if feas["mode"] != "exhaustive" or not feas["feasible"] or feas["max_ratio"] > 2:
            fails.append(f"trial {trial}: {feas['max_ratio']}")
    for V in tables:
        rep = vdw_scaled_measure(range(V[len(V)]), None, V)
        worst = max(worst, rep["feasibility"]["max_ratio"])
        if not rep["feasibility"]["feasible"]:
            fails.append(f"AP of length {V[len(V)]} infeasible")
    return fails, f"w(2,3) = 9; max nu/phi ratio {worst}"


def check_psi():
    fails = []
    psi = make_psi("sum", 2, piece_params=(1, 2))
    full = full_mask(psi.n)
    w = hull(psi, full)
    if w.value != 1 + F(2, 3) or not verify_witness(psi, w, full):
        fails.append(f"two-block hull {w.value}")
    rows = psi_block_analysis(make_psi("sum", 3, piece_params=(1, 2, 3)))
    ratios = [r["ratio"] for r in rows]
    if ratios != [F(n + 1, 2) for n in (1, 2, 3)] or any(b <= a for a, b in zip(ratios, ratios[1:])):
        fails.append(f"block ratios {ratios}")
    return fails, f"hull 5/3; block ratios {', '.join(map(str, ratios))}"


CRITERIA = [
    (1, "tau exactness", check_tau, 1),
    (2, "pattern exactness", check_patterns, 1),
    (3, "degree table reproduction", check_table2, 5),
    (4, "Mazur pipeline", check_mazur, 30),
    (5, "interpolation law", check_interp, None),
    (6, "direct-sum laws", check_oplus, None),
    (7, "hull invariant suite", check_hull_invariants, None),
    (8, "covering fast path", check_covering, None),
    (9, "witness matrix construction", check_matrix, None),
    (10, "summable constructions", check_summable, None),
    (11, "van der Waerden checks", check_vdw, 10),
    (12, "psi truncation", check_psi, None),
]


@pytest.mark.parametrize("number,title,check,limit", CRITERIA, ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, title, check, limit):
    run_criterion(number, title, check, limit)


if __name__ == "__main__":
    failed = 0
    for number, title, check, limit in CRITERIA:
        try:
            run_criterion(number, title, check, limit)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
