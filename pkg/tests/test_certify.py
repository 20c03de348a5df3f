import importlib
import itertools
import random
from fractions import Fraction as F

import pytest

from lipfree import arith
from lipfree.certify import (
    check_condition_a,
    check_condition_b,
    check_condition_c,
    certify,
    derived_bound,
    search_certificate,
    valid_bound,
)
from lipfree.corpus import cycle, equilateral, line, random_space, two_point
from lipfree.freenorm import lipschitz_rows
from lipfree.potentials import SizeLimitExceeded, beta_from_pairs
from lipfree.slices import wstar_bdp_scan

from oracles import min_distinct_cycle_through

cert_mod = importlib.import_module("lipfree.certify")

EPS = [F(1, 2 ** k) for k in range(1, 7)]


# ---- condition (a) ----

def test_a_single_pair_vacuous():
    assert check_condition_a(line(3), [(1, 0)], F(1, 100)) == (True, {})


def test_a_chain_on_line():
    ok, w = check_condition_a(line(3), [(1, 0), (2, 1)], F(1, 1000))
    assert ok and w[(0, 1)]["sum"] == 0 and w[(0, 1)]["cycle"] in ((0, 1), (1, 0))


def test_a_four_cycle_threshold():
    M = cycle(4, F(1, 2))
    pairs = [(0, 1), (3, 2)]
    b = beta_from_pairs(M, pairs).beta
    assert min_distinct_cycle_through(b, 0, 1) == 1
    ok, detail = check_condition_a(M, pairs, F(1, 2))
    assert not ok and detail["pair"] == (0, 1) and detail["sum"] == 1
    assert check_condition_a(M, pairs, F(3, 2))[0]


@pytest.mark.parametrize("seed", range(30))
def test_a_witnesses_are_valid(seed):
    rng = random.Random(seed)
    M = random_space(rng, rng.randint(3, 6))
    pairs = rng.sample(M.ordered_pairs(), rng.randint(2, 4))
    eps = F(rng.randint(1, 8), 4)
    ok, w = check_condition_a(M, pairs, eps)
    beta = beta_from_pairs(M, pairs).beta
    n = len(pairs)
    expect = all(min_distinct_cycle_through(beta, j, k) < eps for j in range(n) for k in range(j + 1, n))
    assert ok == expect
    if ok:
        for (j, k), entry in w.items():
            cyc = entry["cycle"]
            assert j in cyc and k in cyc and len(set(cyc)) == len(cyc)
            total = sum(beta[cyc[t]][cyc[(t + 1) % len(cyc)]] for t in range(len(cyc)))
            assert total == entry["sum"] < eps
            assert entry["relaxed"] <= entry["sum"]


def test_a_size_limit():
    M = line(4)
    pairs = [(1, 0), (2, 0), (3, 0)]
    with pytest.raises(SizeLimitExceeded):
        check_condition_a(M, pairs, 1, n_exact=2)


# ---- condition (b) ----

def test_b_examples():
    M = line(3)
    assert check_condition_b(M, [(2, 1)])
    assert check_condition_b(M, [(1, 0), (2, 1)])
    assert not check_condition_b(M, [(1, 2), (2, 1)])


# ---- condition (c) ----

def test_c_two_point():
    M = two_point(1)
    ok, w = check_condition_c(M, [(1, 0)], F(1, 8), F(1, 4))
    assert ok and w[1] == (0, 1, F(7, 8))


def test_c_points_of_N_always_have_metric_clause():
    M = line(4)
    pairs = [(3, 0)]
    ok, w = check_condition_c(M, pairs, F(1, 100), F(1, 10))
    assert ok
    for x, (s, t, low) in w.items():
        assert M.d(x, s) + M.d(x, t) < M.d(s, t) + F(1, 10)
        assert low > M.d(s, t) - F(1, 10)


def _lp_min_increase_scipy(M, pairs, alpha, s, t):
    import numpy as np
    from scipy.optimize import linprog
    rows, rhs, _ = lipschitz_rows(M)
    A = [list(map(float, r)) for r in rows]
    b = list(map(float, rhs))
    for x, y in pairs:
        r = [0.0] * (M.n - 1)
        if x:
            r[x - 1] -= 1
        if y:
            r[y - 1] += 1
        A.append(r)
        b.append(-float((1 - alpha) * M.d(x, y)))
    c = np.zeros(M.n - 1)
    if t:
        c[t - 1] += 1
    if s:
        c[s - 1] -= 1
    res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * (M.n - 1), method="highs")
    return res.fun


def test_c_three_point_failure():
    M = equilateral(3)
    pairs, alpha, eps = [(1, 0)], F(1, 20), F(1, 10)
    ok, detail = check_condition_c(M, pairs, alpha, eps)
    assert not ok and detail["x"] == 2
    # exhaustive oracle: no (s, t) in N works for x = 2
    N = (0, 1)
    for s, t in itertools.permutations(N, 2):
        metric = M.d(2, s) + M.d(2, t) < M.d(s, t) + eps
        lp_ok = _lp_min_increase_scipy(M, pairs, alpha, s, t) > float(M.d(s, t) - eps)
        assert not (metric and lp_ok)


# ---- certify ----

@pytest.mark.parametrize("eps", EPS)
def test_certify_two_point(eps):
    M = two_point(1)
    c = certify(M, [(1, 0)], eps / 2, eps)
    assert c.ok and c.n == 1 and c.weights == (1,)
    assert c.derived_bound == 8 * eps / (1 + eps) + 3 * eps
    assert c.slice_diameter == eps / 2 <= c.derived_bound


def test_certify_b_failure_names_cycle():
    M = line(3)
    out = certify(M, [(1, 2), (2, 1)], F(1, 4), F(1, 2))
    assert not out.ok and out.condition == "b"
    assert sorted(out.detail["negative_cycle"]) == [0, 1] and out.detail["sum"] < 0


def test_b_gates_a_and_c(monkeypatch):
    def boom(*args, **kwargs):
        raise AssertionError("evaluated past a failed (b)")
    monkeypatch.setattr(cert_mod, "check_condition_a", boom)
    monkeypatch.setattr(cert_mod, "check_condition_c", boom)
    assert certify(line(3), [(1, 2), (2, 1)], F(1, 4), F(1, 2)).condition == "b"


def test_certify_preconditions():
    with pytest.raises(ValueError):
        certify(two_point(1), [(1, 0)], F(1, 2), F(1, 2))
    with pytest.raises(ValueError):
        certify(two_point(1), [(1, 0), (1, 0)], F(1, 4), F(1, 2))


@pytest.mark.parametrize("seed", range(12))
def test_monotone_in_eps(seed):
    rng = random.Random(seed)
    M = random_space(rng, rng.randint(3, 5))
    eps = F(1, 2)
    res = search_certificate(M, eps, 2)
    if not res.found:
        return
    c = res.certificate
    for bigger in (F(3, 4), 1, 2):
        assert certify(M, c.pairs, c.alpha, bigger).ok


def test_float_mode_certificate():
    with arith.arithmetic("float"):
        M = two_point(1.0)
        c = certify(M, [(1, 0)], 0.125, 0.25)
        assert c.ok and abs(c.slice_diameter - 0.125) < 1e-9 and c.mode == "float"


# ---- the slice bound for small distances ----

def test_bound_needs_division_by_c():
    # side 1/100: the measured slice is 1 + alpha wide
    M = equilateral(3, F(1, 100))
    eps, alpha = F(1, 10), F(1, 20)
    c = certify(M, [(0, 1)], alpha, eps)
    assert c.ok
    assert c.slice_diameter == 1 + alpha
    assert c.slice_diameter > derived_bound(M, eps)
    assert c.slice_diameter <= valid_bound(M, eps) == derived_bound(M, eps) / M.c


def test_bounds_agree_when_c_is_one():
    M = line(4)
    assert valid_bound(M, F(1, 3)) == derived_bound(M, F(1, 3))


# ---- search ----

@pytest.mark.parametrize("eps", EPS)
def test_search_two_point(eps):
    res = search_certificate(two_point(1), eps, 1)
    assert res.found and res.examined == 1 and res.certificate.alpha == eps / 2


@pytest.mark.parametrize("M", [line(3), equilateral(4), cycle(5)])
def test_search_with_large_eps(M):
    eps = 2 * M.D + F(1, 10)
    res = search_certificate(M, eps, 1)
    assert res.found and res.certificate.n == 1


def test_search_exhausts_with_near_misses():
    M = equilateral(3)
    eps = F(1, 1000)
    res = search_certificate(M, eps, 1)
    assert not res.found and res.examined == 6
    assert res.near_misses["c"] and not res.failures
    # no single-molecule slice at the search grid is below eps / (2D)
    scan = wstar_bdp_scan(M, 1, cert_mod.alpha_grid_for(eps))
    assert scan.min_diameter >= eps / (2 * M.D)


def test_search_is_deterministic():
    M = line(4)
    a = search_certificate(M, F(1, 4), 2).certificate
    b = search_certificate(M, F(1, 4), 2).certificate
    assert (a.pairs, a.alpha, a.witnesses_a, a.witnesses_c) == (b.pairs, b.alpha, b.witnesses_a, b.witnesses_c)
