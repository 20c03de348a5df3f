"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a PASS/FAIL line that is repeated in the terminal summary.
"""

import functools
import random
import subprocess
import sys
from fractions import Fraction as F

from lipfree import arith
from lipfree.certify import certify, derived_bound, search_certificate, valid_bound
from lipfree.corpus import curated, random_space, two_point
from lipfree.extension import lower_values, upper_values
from lipfree.freenorm import combination_norm, free_norm, norm_one_cyclic_check, norm_one_weights
from lipfree.metric import FreeElement, MoleculeCombination
from lipfree.potentials import BetaSystem, compute_B, pair_gap, potentials_exist
from lipfree.slices import DEFAULT_ALPHA_GRID, SliceSpec, slice_diameter, wstar_bdp_scan

from conftest import record
from oracles import (
    brute_path_min,
    cycle_sum,
    decompose_closed_walk,
    min_simple_cycle,
    norm_one_feasible,
    potential_gap_lp,
    potential_gap_lp_exact,
    random_subset_function,
    sample_extensions,
    transport_cost,
)


def bounded_beta(rng, n, denom=4):
    """Entries in [-2, 2]; about half are potential-consistent, the rest perturbed."""
    a = [F(rng.randint(-denom, denom), denom) for _ in range(n)]
    beta = [[F(0)] * n for _ in range(n)]
    for k in range(n):
        for j in range(n):
            if k != j:
                beta[k][j] = min(F(2), a[k] - a[j] + F(rng.randint(0, 2 * denom), denom))
    if rng.random() < 0.5 and n > 1:
        k, j = rng.sample(range(n), 2)
        beta[k][j] = F(rng.randint(-2 * denom, 2 * denom), denom)
    return beta


def feasible_instances(seed, count, n_max):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        beta = bounded_beta(rng, rng.randint(2, n_max))
        if compute_B(BetaSystem(beta)).feasible:
            out.append(beta)
    return out


# 1 -------------------------------------------------------------------------

def test_criterion_1_potentials_iff_nonnegative_cycles():
    rng = random.Random(1)
    counts = {True: 0, False: 0}
    bad = []
    for t in range(600):
        n = rng.randint(1, 7)
        beta = bounded_beta(rng, n) if t % 3 else [
            [F(0) if i == j else F(rng.randint(-8, 8), 4) for j in range(n)] for i in range(n)]
        ok, pv = potentials_exist(BetaSystem(beta))
        expect = min_simple_cycle(beta) >= 0
        counts[expect] += 1
        if ok != expect:
            bad.append(("feasibility", t))
        if ok and not all(pv.alpha[k] <= pv.alpha[j] + beta[k][j] for j in range(n) for k in range(n)):
            bad.append(("witness", t))
        # repeated-vertex walks split into simple cycles with the same total
        walk = [rng.randrange(n) for _ in range(rng.randint(1, 2 * n + 2))]
        if sum((cycle_sum(beta, c) for c in decompose_closed_walk(walk)), F(0)) != cycle_sum(beta, walk):
            bad.append(("decomposition", t))
    ok = not bad and min(counts.values()) >= 100
    record(1, ok, f"600 systems ({counts[True]} feasible, {counts[False]} not), mismatches={bad[:3]}")
    assert ok


# 2 -------------------------------------------------------------------------

def test_criterion_2_B_matrix_laws():
    bad = []
    insts = feasible_instances(2, 250, 6)
    for t, beta in enumerate(insts):
        n = len(beta)
        B = compute_B(BetaSystem(beta)).B
        for r in range(n):
            if B[r][r] != 0:
                bad.append(("diag", t))
            for s in range(n):
                if B[r][s] != brute_path_min(beta, r, s):
                    bad.append(("path", t, r, s))
                for u in range(n):
                    if B[r][s] + B[s][u] < B[r][u]:
                        bad.append(("triangle", t))
    ok = not bad
    record(2, ok, f"{len(insts)} feasible systems, n<=6, violations={bad[:3]}")
    assert ok


# 3 -------------------------------------------------------------------------

def test_criterion_3_gap_equals_lp_supremum():
    insts = feasible_instances(3, 200, 6)
    bad, checked = [], 0
    for t, beta in enumerate(insts):
        bm = compute_B(BetaSystem(beta))
        n = len(beta)
        for j in range(n):
            for k in range(n):
                if j == k:
                    continue
                gap = pair_gap(bm, j, k)
                # the two copies are interchangeable, so the sup of |.| is the sup of (.)
                if potential_gap_lp_exact(beta, j, k) != gap:
                    bad.append(("rational", t, j, k))
                if abs(potential_gap_lp(beta, j, k) - float(gap)) > 1e-8:
                    bad.append(("float", t, j, k))
                checked += 1
    ok = not bad
    record(3, ok, f"{len(insts)} feasible systems, {checked} ordered pairs, exact and 1e-8, mismatches={bad[:3]}")
    assert ok


# 4 -------------------------------------------------------------------------

def test_criterion_4_norm_one_criterion():
    rng = random.Random(4)
    bad, counts, worst_gap = [], {True: 0, False: 0}, 0.0
    for t in range(220):
        M = random_space(rng, rng.randint(3, 7))
        pairs = rng.sample(M.ordered_pairs(), rng.randint(1, 4))
        ok = norm_one_cyclic_check(pairs, M)
        counts[ok] += 1
        if ok != norm_one_feasible(M.dist, pairs):
            bad.append(("oracle", t))
        w = norm_one_weights(pairs, M)
        if (w is not None) != ok:
            bad.append(("weights", t))
        if ok and combination_norm(MoleculeCombination(tuple(pairs), w), M) != 1:
            bad.append(("norm", t))
        raw = [rng.randint(1, 9) for _ in pairs]
        mu = MoleculeCombination(tuple(pairs), tuple(F(r, sum(raw)) for r in raw)).to_element(M)
        if mu.is_zero():
            continue
        res = free_norm(mu, M)
        worst_gap = max(worst_gap, abs(float(res.transport_cost(M) - res.value)))
        worst_gap = max(worst_gap, abs(float(res.value) - transport_cost(M.dist, mu.as_dict())))
        if not ok and res.value >= 1:
            bad.append(("random weights reach 1", t))
        with arith.arithmetic("float"):
            Mf = type(M)(M.labels, tuple(tuple(float(x) for x in r) for r in M.dist), M.base)
            rf = free_norm(FreeElement(tuple((i, float(c)) for i, c in mu.terms)), Mf)
            worst_gap = max(worst_gap, abs(rf.transport_cost(Mf) - rf.value), abs(rf.value - float(res.value)))
    ok = not bad and worst_gap <= 1e-8 and min(counts.values()) >= 30
    record(4, ok, f"220 pair systems ({counts[True]} norm-one, {counts[False]} not), "
                  f"max duality gap {worst_gap:.2e}, mismatches={bad[:3]}")
    assert ok


# 5 -------------------------------------------------------------------------

def test_criterion_5_mcshane_sandwich():
    rng = random.Random(5)
    bad = []
    for t in range(200):
        M = random_space(rng, rng.randint(2, 7))
        f = random_subset_function(rng, M)
        h1, h2 = upper_values(f, M), lower_values(f, M)
        if any(h1[z] != f[z] or h2[z] != f[z] for z in f):
            bad.append(("restriction", t))
        for g in sample_extensions(M, f, 10, rng, exact=True):
            if any(g[z] != f[z] for z in f):
                bad.append(("sample", t))
            if not all(h2[x] <= g[x] <= h1[x] for x in range(M.n)):
                bad.append(("sandwich", t))
    ok = not bad
    record(5, ok, f"200 instances x 10 exact LP extensions, violations={bad[:3]}")
    assert ok


# 6 -------------------------------------------------------------------------

def test_criterion_6_two_point_closed_forms():
    M = two_point(1)
    bad = []
    mu = FreeElement.delta(1, M)
    for k in range(1, 9):
        alpha = F(1, 2 ** k)
        if abs(slice_diameter(M, SliceSpec(mu, alpha)) - alpha) > 1e-9:
            bad.append(("diameter", k))
    for k in range(1, 7):
        eps = F(1, 2 ** k)
        c = certify(M, [(1, 0)], eps / 2, eps)
        if not c.ok or c.n != 1 or c.derived_bound != 8 * eps / (1 + eps) + 3 * eps:
            bad.append(("certify", k))
    ok = not bad
    record(6, ok, f"alpha in 2^-1..2^-8, eps in 2^-1..2^-6, failures={bad}")
    assert ok


# 7 -------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def soundness_instances():
    """(name, eps, space, certificate) for every certificate the searches produce."""
    out, misses = [], []
    for name, M in curated().items():
        for eps in (F(1, 2), F(1, 10)):
            res = search_certificate(M, eps, 3 if M.n <= 6 else 2)
            (out.append((name, eps, M, res.certificate)) if res.found else misses.append((name, eps)))
            misses.extend((name, eps, "soundness") for _ in res.failures)
    rng = random.Random(7)
    for t in range(20):
        M = random_space(rng, rng.randint(3, 5))
        for eps in (F(1, 2), F(1, 4)):
            res = search_certificate(M, eps, 2)
            (out.append((f"fuzz{t}", eps, M, res.certificate)) if res.found else misses.append((f"fuzz{t}", eps)))
    return tuple(out), tuple(misses)


def test_criterion_7_slice_bound_from_certificate():
    certs, misses = soundness_instances()
    over = [(name, str(eps), float(c.slice_diameter), float(derived_bound(M, eps)))
            for name, eps, M, c in certs if c.slice_diameter > derived_bound(M, eps) + F(1, 10 ** 6)]
    ok = not over
    record(7, ok, f"{len(certs)} certificates ({len(curated())} curated spaces x 2 eps + fuzz), "
                  f"{len(misses)} searches without one; diameter > 8D^2e/(c(c+e)) + e(1+2D) + 1e-6 on "
                  f"{len(over)}: {over[:4]}")
    assert ok


def test_slice_bound_with_division_by_c():
    certs, _ = soundness_instances()
    over = [(name, str(eps)) for name, eps, M, c in certs if c.slice_diameter > valid_bound(M, eps)]
    assert len(certs) >= 44 and not over


# 8 -------------------------------------------------------------------------

CONVERSE_SPACES = ("line3", "equilateral3", "star3", "line3_half", "equilateral3_small", "star3_third")


def test_criterion_8_small_slice_gives_certificate():
    spaces = curated()
    rows, bad = [], []
    for name in CONVERSE_SPACES:
        M = spaces[name]
        rep = wstar_bdp_scan(M, 3, DEFAULT_ALPHA_GRID, all_alphas=True)
        eps = next(F(1, 2 ** k) for k in range(11, -1, -1) if rep.min_diameter < F(1, 2 ** k) / (2 * M.D))
        res = search_certificate(M, eps, 3)
        rows.append((name, str(rep.min_diameter), str(eps), res.found))
        if not res.found:
            bad.append(name)
    ok = not bad and len(rows) >= 5
    record(8, ok, f"{len(rows)} spaces (name, scan min diameter, eps, found): {rows}")
    assert ok


# 9 -------------------------------------------------------------------------

def test_criterion_9_reports_are_byte_identical(tmp_path):
    spaces = curated()
    runs = [
        ("search", "line4", ["--eps", "1/4", "--n-max", "2"]),
        ("search", "equilateral3", ["--eps", "1/1000", "--n-max", "1"]),
        ("scan", "line3", ["--n-pairs-max", "2"]),
        ("scan", "square_diag", ["--n-pairs-max", "1", "--arith", "float"]),
    ]
    bad = []
    for cmd, name, extra in runs:
        path = tmp_path / f"{name}.json"
        path.write_text(__import__("json").dumps(spaces[name].to_json()))
        outs = []
        for _ in range(2):
            proc = subprocess.run([sys.executable, "-m", "lipfree", cmd, str(path)] + extra,
                                  capture_output=True, check=False)
            outs.append(proc.stdout)
        if outs[0] != outs[1] or not outs[0]:
            bad.append((cmd, name))
    ok = not bad
    record(9, ok, f"{len(runs)} search/scan runs repeated twice, differing={bad}")
    assert ok
