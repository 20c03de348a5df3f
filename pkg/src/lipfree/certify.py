"""Certificates that the norm of F(M) is nonrough.

A certificate at tolerance ``eps`` is a list of molecule pairs and a width
``alpha`` satisfying three checkable conditions:

(a) every two pair indices j != k lie on a cycle of distinct indices whose
    beta-sum is below ``eps``;
(b) no beta-cycle is negative, i.e. some combination of the molecules has norm one;
(c) every point x lies within ``eps`` of a geodesic between two points s != t
    of N = {x_i, y_i}, and every 1-Lipschitz f nearly norming all the molecules
    (f(x_i) - f(y_i) >= (1 - alpha) d(x_i, y_i)) increases by more than
    d(s, t) - eps from s to t.

Such data force the slice of B_Lip0 cut by the combination at width
``alpha * min(lambda) / n`` to be small, which is measured exactly here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import arith, lp
from .freenorm import lipschitz_rows, norm_one_cyclic_check, norm_one_weights, var_index
from .metric import FiniteMetricSpace, MoleculeCombination, check_pairs
from .potentials import N_EXACT, beta_from_pairs, compute_B, distinct_cycle_table
from .slices import SliceSpec, candidate_pair_sets, measure_slice

CLOSED_LP_NOTE = (
    "condition (c) is checked on the closed constraint set f(x_i) - f(y_i) >= (1 - alpha) d(x_i, y_i); "
    "this is sufficient for the strict version but may reject borderline instances"
)


class LpInfeasible(RuntimeError):
    pass


def derived_bound(M: FiniteMetricSpace, eps):
    """8 D^2 eps / (c (c + eps)) + eps (1 + 2 D)."""
    a = arith.current()
    eps = a.num(eps)
    c, D = M.c, M.D
    return 8 * D * D * eps / (c * (c + eps)) + eps * (1 + 2 * D)


def valid_bound(M: FiniteMetricSpace, eps):
    """The slice-diameter bound with the final division by d(x, y) >= c kept.

    Point-value differences of f - g are bounded by ``derived_bound``; turning
    them into a Lipschitz ratio divides by a distance of at least c.  For c >= 1
    this is no larger than ``derived_bound``; for c < 1 it is larger.
    """
    return derived_bound(M, eps) / M.c


@dataclass
class Failure:
    condition: str  # "a", "b", "c" or "soundness"
    detail: dict

    ok = False


@dataclass
class NonroughCertificate:
    eps: object
    alpha: object
    pairs: tuple
    weights: tuple
    witnesses_a: dict  # (j, k) -> {"cycle": (...), "sum": value, "relaxed": value}
    witnesses_c: dict  # x -> (s, t, lp_min_value)
    derived_bound: object
    valid_bound: object
    slice_alpha: object = None
    slice_diameter: object = None
    slice_boundary_only: bool | None = None
    mode: str = "rational"
    note: str = CLOSED_LP_NOTE

    ok = True

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def within_derived_bound(self) -> bool | None:
        if self.slice_diameter is None:
            return None
        return arith.current().le(self.slice_diameter, self.derived_bound)


def check_condition_b(M: FiniteMetricSpace, pairs) -> bool:
    return norm_one_cyclic_check(pairs, M)


def check_condition_a(M: FiniteMetricSpace, pairs, eps, n_exact: int = N_EXACT) -> tuple[bool, dict]:
    """Distinct-index cycle through each j != k with beta-sum < eps.

    Returns ``(True, witnesses)`` or ``(False, {"pair": (j, k), ...})`` for the first failure.
    """
    a = arith.current()
    eps = a.num(eps)
    pairs = check_pairs(pairs, M)
    bs = beta_from_pairs(M, pairs)
    n = bs.n
    if n < 2:
        return True, {}
    table = distinct_cycle_table(bs, n_exact)
    bm = compute_B(bs)
    out = {}
    for j in range(n):
        for k in range(j + 1, n):
            val, cyc = table.through(j, k)
            relaxed = bm.B[j][k] + bm.B[k][j]
            entry = {"cycle": cyc, "sum": val, "relaxed": relaxed}
            if not a.lt(val, eps):
                return False, {"pair": (j, k), **entry}
            out[(j, k)] = entry
    return True, out


def _c_system(M: FiniteMetricSpace, pairs, alpha):
    a = arith.current()
    alpha = a.num(alpha)
    rows, rhs, _ = lipschitz_rows(M)
    col = var_index(M)
    for x, y in pairs:
        row = [0] * (M.n - 1)
        if x != M.base:
            row[col[x]] -= 1
        if y != M.base:
            row[col[y]] += 1
        rows.append(row)
        rhs.append(-(1 - alpha) * M.d(x, y))
    return rows, rhs, col


def _min_increase(M, system, s, t):
    """min f(t) - f(s) over the closed constraint set."""
    rows, rhs, col = system
    c = [0] * (M.n - 1)
    if s != M.base:
        c[col[s]] += 1
    if t != M.base:
        c[col[t]] -= 1
    res = lp.linprog(c, rows, rhs)
    if res.status != lp.OPTIMAL:
        raise LpInfeasible(f"condition (c) LP ended {res.status}")
    return -res.objective


def check_condition_c(M: FiniteMetricSpace, pairs, alpha, eps) -> tuple[bool, dict]:
    a = arith.current()
    eps = a.num(eps)
    pairs = check_pairs(pairs, M)
    N = sorted({p for pr in pairs for p in pr})
    system = _c_system(M, pairs, alpha)
    cache = {}
    out = {}
    for x in range(M.n):
        found = None
        near = None
        for s in N:
            for t in N:
                if s == t:
                    continue
                dst = M.d(s, t)
                if not a.lt(M.d(x, s) + M.d(x, t), dst + eps):
                    continue
                if (s, t) not in cache:
                    cache[(s, t)] = _min_increase(M, system, s, t)
                low = cache[(s, t)]
                if a.gt(low, dst - eps):
                    found = (s, t, low)
                    break
                gap = (dst - eps) - low
                if near is None or gap < near[0]:
                    near = (gap, s, t, low)
            if found:
                break
        if found is None:
            detail = {"x": x}
            if near is not None:
                detail.update(shortfall=near[0], s=near[1], t=near[2], lp_min=near[3])
            return False, detail
        out[x] = found
    return True, out


def certify(M: FiniteMetricSpace, pairs, alpha, eps, n_exact: int = N_EXACT,
            measure: bool = True):
    """Check (b), (a), (c) in that order and measure the induced slice.

    Returns a :class:`NonroughCertificate` or a :class:`Failure`.
    """
    a = arith.current()
    alpha, eps = a.num(alpha), a.num(eps)
    if not (0 < alpha < eps):
        raise ValueError("certify expects 0 < alpha < eps")
    pairs = tuple(check_pairs(pairs, M))
    if len(set(pairs)) != len(pairs):
        raise ValueError("pairs must be distinct")
    bm = compute_B(beta_from_pairs(M, pairs))
    if not bm.feasible:
        bs = beta_from_pairs(M, pairs)
        cyc = bm.negative_cycle
        return Failure("b", {"negative_cycle": cyc, "sum": bs.cycle_sum(cyc)})
    ok, wa = check_condition_a(M, pairs, eps, n_exact)
    if not ok:
        return Failure("a", wa)
    ok, wc = check_condition_c(M, pairs, alpha, eps)
    if not ok:
        return Failure("c", wc)
    weights = norm_one_weights(pairs, M)
    cert = NonroughCertificate(
        eps, alpha, pairs, weights, wa, wc, derived_bound(M, eps), valid_bound(M, eps), mode=a.mode
    )
    if measure:
        n = len(pairs)
        cert.slice_alpha = alpha * min(weights) / n
        mu = MoleculeCombination(pairs, weights).to_element(M)
        m = measure_slice(M, SliceSpec(mu, cert.slice_alpha))
        cert.slice_diameter = m.diameter
        cert.slice_boundary_only = m.boundary_only
        if not a.le(m.diameter, cert.valid_bound):
            return Failure("soundness", {"slice_diameter": m.diameter, "bound": cert.valid_bound,
                                         "pairs": pairs, "alpha": alpha})
    return cert


def alpha_grid_for(eps, steps: int = 10) -> tuple:
    a = arith.current()
    eps = a.num(eps)
    return tuple(eps / 2 ** k for k in range(1, steps + 1))


@dataclass
class SearchResult:
    eps: object
    n_max: int
    certificate: NonroughCertificate | None
    examined: int = 0
    near_misses: dict = field(default_factory=lambda: {"a": [], "b": [], "c": []})
    failures: list = field(default_factory=list)  # soundness failures, if any

    @property
    def found(self) -> bool:
        return self.certificate is not None


def _keep(bucket: list, item: tuple, limit: int = 3):
    bucket.append(item)
    bucket.sort(key=lambda it: it[0])
    del bucket[limit:]


def search_certificate(M: FiniteMetricSpace, eps, n_max: int = 2, alpha_grid=None,
                       n_exact: int = N_EXACT) -> SearchResult:
    """First certificate in (pair-set size, lexicographic, descending alpha) order.

    Condition (c) only gets easier as alpha shrinks, so a pair set is dropped
    as soon as it fails at the smallest alpha of the grid.
    """
    a = arith.current()
    eps = a.num(eps)
    grid = tuple(sorted({a.num(x) for x in (alpha_grid or alpha_grid_for(eps))}, reverse=True))
    grid = tuple(x for x in grid if 0 < x < eps)
    res = SearchResult(eps, n_max, None)
    if not grid:
        return res
    for pairs in candidate_pair_sets(M, n_max):
        res.examined += 1
        bs = beta_from_pairs(M, pairs)
        bm = compute_B(bs)
        if not bm.feasible:
            _keep(res.near_misses["b"], (-bs.cycle_sum(bm.negative_cycle), list(pairs)))
            continue
        ok, wa = check_condition_a(M, pairs, eps, n_exact)
        if not ok:
            _keep(res.near_misses["a"], (wa["sum"] - eps, list(pairs)))
            continue
        ok, wc = check_condition_c(M, pairs, grid[-1], eps)
        if not ok:
            _keep(res.near_misses["c"], (wc.get("shortfall", float("inf")), list(pairs), wc["x"]))
            continue
        for alpha in grid:
            if alpha != grid[-1] and not check_condition_c(M, pairs, alpha, eps)[0]:
                continue
            out = certify(M, pairs, alpha, eps, n_exact)
            if out.ok:
                res.certificate = out
                return res
            res.failures.append(out)
            break
    return res
