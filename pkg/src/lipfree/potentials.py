"""Potential systems alpha_k <= alpha_j + beta[k][j] and their path closure.

The closure ``B[r][s]`` is the cheapest beta-walk from r to s.  A potential
system is solvable exactly when no beta-cycle is negative, in which case any
column of ``B`` is a solution.  ``B[j][k] + B[k][j]`` measures how far two
solutions can disagree on the difference between j and k.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import arith
from .metric import FiniteMetricSpace, check_pairs

NEG_INF = float("-inf")
N_EXACT = 14


class Infeasible(ValueError):
    pass


class SizeLimitExceeded(ValueError):
    pass


@dataclass(frozen=True)
class BetaSystem:
    beta: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.beta)
        object.__setattr__(self, "beta", rows)
        for j, r in enumerate(rows):
            if len(r) != len(rows):
                raise ValueError("beta must be square")
            if r[j] != 0:
                raise ValueError(f"beta[{j}][{j}] must be 0")

    @property
    def n(self) -> int:
        return len(self.beta)

    def cycle_sum(self, cycle) -> object:
        """beta-sum of the closed walk cycle[0] -> cycle[1] -> ... -> cycle[0]."""
        b = self.beta
        return sum((b[cycle[t]][cycle[(t + 1) % len(cycle)]] for t in range(len(cycle))),
                   arith.current().zero)


@dataclass(frozen=True)
class BMatrix:
    B: tuple
    feasible: bool
    # a negative cycle when infeasible
    negative_cycle: tuple = ()

    @property
    def n(self) -> int:
        return len(self.B)


@dataclass(frozen=True)
class PotentialVector:
    alpha: tuple

    def satisfies(self, bs: BetaSystem) -> bool:
        a = arith.current()
        al = self.alpha
        return all(a.le(al[k], al[j] + bs.beta[k][j])
                   for j in range(bs.n) for k in range(bs.n))


def beta_from_pairs(M: FiniteMetricSpace, pairs) -> BetaSystem:
    """beta[i][j] = d(x_i, y_j) - d(x_i, y_i)."""
    pairs = check_pairs(pairs, M)
    return BetaSystem(tuple(
        tuple(M.d(xi, yj) - M.d(xi, yi) for (_, yj) in pairs)
        for (xi, yi) in pairs
    ))


def compute_B(bs: BetaSystem) -> BMatrix:
    """All-pairs relaxation with negative-cycle detection."""
    n = bs.n
    beta = bs.beta
    B = [list(r) for r in beta]
    for t in range(n):
        Bt = B[t]
        for r in range(n):
            brt = B[r][t]
            Br = B[r]
            for s in range(n):
                cand = brt + Bt[s]
                if cand < Br[s]:
                    Br[s] = cand
    bad = [t for t in range(n) if B[t][t] < 0]
    if not bad:
        return BMatrix(tuple(tuple(r) for r in B), True)
    # beta is a complete digraph, so every entry can route through the cycle
    B = [[NEG_INF] * n for _ in range(n)]
    return BMatrix(tuple(tuple(r) for r in B), False, _negative_cycle_bf(beta))


def _negative_cycle_bf(beta) -> tuple:
    """Bellman-Ford from a virtual source; returns one simple negative cycle."""
    n = len(beta)
    dist = [0] * n
    pred = [-1] * n
    last = -1
    for _ in range(n):
        last = -1
        for u in range(n):
            for v in range(n):
                if u != v and dist[u] + beta[u][v] < dist[v]:
                    dist[v] = dist[u] + beta[u][v]
                    pred[v] = u
                    last = v
        if last < 0:
            return ()
    v = last
    for _ in range(n):
        v = pred[v]
    cyc = [v]
    u = pred[v]
    while u != v:
        cyc.append(u)
        u = pred[u]
    cyc.reverse()
    return tuple(cyc)


def potentials_exist(bs: BetaSystem, ref: int = 0) -> tuple[bool, PotentialVector | None]:
    bm = compute_B(bs)
    if not bm.feasible:
        return False, None
    pv = PotentialVector(tuple(bm.B[j][ref] for j in range(bs.n)))
    if not pv.satisfies(bs):
        raise AssertionError("potential witness violates its constraints")
    return True, pv


def pair_gap(bm: BMatrix, j: int, k: int):
    if not bm.feasible:
        raise Infeasible("beta system has a negative cycle")
    if j == k:
        raise ValueError("pair_gap needs j != k")
    return bm.B[j][k] + bm.B[k][j]


@dataclass(frozen=True)
class CycleTable:
    """Cheapest simple cycle through every vertex pair, from a subset DP."""

    best: dict  # (j, k) with j < k -> (value, cycle)

    def through(self, j, k):
        return self.best[(min(j, k), max(j, k))]


def distinct_cycle_table(bs: BetaSystem, n_exact: int = N_EXACT) -> CycleTable:
    """Held-Karp over vertex subsets.

    ``ham[mask]`` is the cheapest cycle visiting exactly the vertices of ``mask``
    (each once), anchored at the lowest vertex.  A superset-minimum pass then gives,
    for each pair, the cheapest simple cycle containing both.
    """
    n = bs.n
    if n > n_exact:
        raise SizeLimitExceeded(f"{n} indices exceed n_exact={n_exact}")
    return _cycle_table(bs.beta)


@lru_cache(maxsize=256)
def _cycle_table(beta) -> CycleTable:
    n = len(beta)
    full = 1 << n
    # path[mask][v]: cheapest simple path from low(mask) through mask ending at v
    path = [None] * full
    parent = [None] * full
    ham_val = [None] * full
    ham_end = [None] * full
    for s in range(n):
        m = 1 << s
        path[m] = {s: 0}
        parent[m] = {s: None}
    for mask in range(1, full):
        row = path[mask]
        if not row:
            continue
        low = (mask & -mask).bit_length() - 1
        if mask != 1 << low:
            for v, cost in row.items():
                tot = cost + beta[v][low]
                if ham_val[mask] is None or tot < ham_val[mask]:
                    ham_val[mask] = tot
                    ham_end[mask] = v
        for w in range(low + 1, n):
            bit = 1 << w
            if mask & bit:
                continue
            nm = mask | bit
            if path[nm] is None:
                path[nm] = {}
                parent[nm] = {}
            tgt = path[nm]
            for v, cost in row.items():
                tot = cost + beta[v][w]
                if w not in tgt or tot < tgt[w]:
                    tgt[w] = tot
                    parent[nm][w] = v
    # superset minimum: sup[mask] = best ham over supersets of mask
    sup_val = list(ham_val)
    sup_arg = [m if ham_val[m] is not None else None for m in range(full)]
    for b in range(n):
        bit = 1 << b
        for mask in range(full):
            if not mask & bit:
                o = mask | bit
                if sup_val[o] is not None and (sup_val[mask] is None or sup_val[o] < sup_val[mask]):
                    sup_val[mask] = sup_val[o]
                    sup_arg[mask] = sup_arg[o]
    best = {}
    for j in range(n):
        for k in range(j + 1, n):
            m = sup_arg[(1 << j) | (1 << k)]
            best[(j, k)] = (sup_val[(1 << j) | (1 << k)], _rebuild(parent, m, ham_end[m]))
    return CycleTable(best)


def _rebuild(parent, mask, end) -> tuple:
    seq = []
    v = end
    while v is not None:
        seq.append(v)
        pv = parent[mask][v]
        mask ^= 1 << v
        v = pv
    seq.reverse()
    return tuple(seq)


def min_cycle_through(bs: BetaSystem, j: int, k: int, distinct: bool = True,
                      n_exact: int = N_EXACT):
    """Cheapest beta-cycle through both j and k.

    With ``distinct`` the cycle may not repeat indices; otherwise it is the walk
    value ``B[j][k] + B[k][j]`` (``-inf`` when a negative cycle is reachable).
    """
    if j == k:
        raise ValueError("min_cycle_through needs j != k")
    if not distinct:
        bm = compute_B(bs)
        return bm.B[j][k] + bm.B[k][j]
    return distinct_cycle_table(bs, n_exact).through(j, k)[0]
