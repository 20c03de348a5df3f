"""w*-slices of the unit ball of Lip0(M) and their exact diameters.

For a slicing element mu of norm one the closed slice is
``{f in B_Lip0 : <mu, f> >= 1 - alpha}``.  The Lipschitz norm of f - g is a
maximum over point pairs of a linear functional of (f, g), and f and g range
independently over the slice, so the diameter is

    max_{u<v} [max_f (f(u) - f(v)) - min_f (f(u) - f(v))] / d(u, v)

which costs two LPs per unordered pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import arith, lp
from .freenorm import (
    free_element_as_combination,
    free_norm,
    lipschitz_rows,
    norm_one_weights,
    values_from_vars,
    var_index,
)
from .metric import FiniteMetricSpace, FreeElement, MoleculeCombination

DEFAULT_ALPHA_GRID = tuple(2.0 ** -k for k in range(1, 11))


class EmptySlice(ValueError):
    pass


class NotNormalized(ValueError):
    pass


class AlphaTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class SliceSpec:
    mu: FreeElement
    alpha: object
    closed: bool = True

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.closed:
            raise ValueError("only closed slices can be measured by LP")


@dataclass(frozen=True)
class SliceMeasurement:
    diameter: object
    pair: tuple  # (u, v) attaining the diameter
    f: tuple  # maximizes f(u) - f(v) over the slice
    g: tuple  # minimizes it
    boundary_only: bool  # an extreme is attained only where <mu, f> = 1 - alpha


def _slice_system(M: FiniteMetricSpace, mu: FreeElement, alpha):
    a = arith.current()
    rows, rhs, _ = lipschitz_rows(M)
    col = var_index(M)
    srow = [0] * (M.n - 1)
    for i, coef in mu.terms:
        srow[col[i]] = -coef
    rows.append(srow)
    rhs.append(a.num(alpha) - 1)
    return rows, rhs, col


def _diff_objective(M, col, u, v, sign):
    c = [0] * (M.n - 1)
    if u != M.base:
        c[col[u]] += sign
    if v != M.base:
        c[col[v]] -= sign
    return c


def _check_normalized(M, mu):
    a = arith.current()
    nv = free_norm(mu, M).value
    if not a.eq(nv, 1):
        raise NotNormalized(f"slicing element has norm {nv}")


def measure_slice(M: FiniteMetricSpace, s: SliceSpec, check_norm: bool = True) -> SliceMeasurement:
    if check_norm:
        _check_normalized(M, s.mu)
    rows, rhs, col = _slice_system(M, s.mu, s.alpha)
    best = None
    for u in range(M.n):
        for v in range(u + 1, M.n):
            hi = lp.linprog(_diff_objective(M, col, u, v, 1), rows, rhs)
            if hi.status == lp.INFEASIBLE:
                raise EmptySlice("no 1-Lipschitz function reaches the slice")
            lo = lp.linprog(_diff_objective(M, col, u, v, -1), rows, rhs)
            width = (hi.objective + lo.objective) / M.d(u, v)
            if best is None or width > best[0]:
                best = (width, (u, v), hi, lo)
    width, (u, v), hi, lo = best
    boundary = _boundary_only(M, s, rows, rhs, col, u, v, hi.objective, 1) or _boundary_only(
        M, s, rows, rhs, col, u, v, lo.objective, -1
    )
    return SliceMeasurement(
        width, (u, v), values_from_vars(hi.x, M), values_from_vars(lo.x, M), boundary
    )


def _boundary_only(M, s, rows, rhs, col, u, v, value, sign) -> bool:
    """True when every optimizer of the pair objective sits on <mu, f> = 1 - alpha."""
    a = arith.current()
    c = [0] * (M.n - 1)
    for i, coef in s.mu.terms:
        c[col[i]] = coef
    res = lp.linprog(c, rows, rhs, A_eq=[_diff_objective(M, col, u, v, sign)], b_eq=[value])
    if not res.optimal:
        return False
    return a.eq(res.objective, 1 - a.num(s.alpha))


def slice_diameter(M: FiniteMetricSpace, s: SliceSpec) -> object:
    return measure_slice(M, s).diameter


def slice_contained(M: FiniteMetricSpace, inner: SliceSpec, outer: SliceSpec) -> tuple[bool, object]:
    """Is every f in the inner slice also in the outer one?  Returns (ok, worst violation)."""
    a = arith.current()
    rows, rhs, col = _slice_system(M, inner.mu, inner.alpha)
    c = [0] * (M.n - 1)
    for i, coef in outer.mu.terms:
        c[col[i]] = -coef
    res = lp.linprog(c, rows, rhs)
    if res.status == lp.INFEASIBLE:
        return True, a.zero
    lowest = -res.objective
    violation = (1 - a.num(outer.alpha)) - lowest
    return a.le(violation, 0), violation


def reduce_slicer(M: FiniteMetricSpace, mu: FreeElement, alpha, eps) -> tuple[MoleculeCombination, object]:
    """Replace the slicing element by a convex combination of molecules.

    On a finite space mu is already finitely supported, so mu_0 = mu and only the
    width shrinks to ``alpha - 2 eps``; containment of the new slice is verified.
    """
    a = arith.current()
    alpha, eps = a.num(alpha), a.num(eps)
    if not alpha > 2 * eps:
        raise AlphaTooSmall("need alpha > 2 eps")
    norm = free_norm(mu, M).value
    if not a.eq(norm, 1):
        raise NotNormalized(f"slicing element has norm {norm}")
    comb = free_element_as_combination(mu, M)
    reduced = alpha - 2 * eps
    ok, viol = slice_contained(M, SliceSpec(comb.to_element(M), reduced), SliceSpec(mu, alpha))
    if not ok:
        raise AssertionError(f"reduced slice escapes the original by {viol}")
    return comb, reduced


@dataclass
class ScanReport:
    n_pairs_max: int
    alpha_grid: tuple
    candidates: list = field(default_factory=list)  # dicts: pairs, weights, alpha, diameter
    scanned: int = 0
    rejected: int = 0  # pair systems failing the norm-one criterion
    min_diameter: object = None
    argmin: dict | None = None


def candidate_pair_sets(M: FiniteMetricSpace, n_max: int):
    """All sets of distinct ordered pairs, by size then lexicographically."""
    pool = M.ordered_pairs()
    for size in range(1, n_max + 1):
        yield from itertools.combinations(pool, size)


def wstar_bdp_scan(M: FiniteMetricSpace, n_pairs_max: int = 3, alpha_grid=DEFAULT_ALPHA_GRID,
                   all_alphas: bool = False) -> ScanReport:
    """Smallest slice diameter over norm-one molecule combinations.

    Nested slices shrink with alpha, so by default each candidate is measured
    only at the smallest alpha of the grid; ``all_alphas`` measures every one.
    """
    a = arith.current()
    grid = tuple(sorted({a.num(x) for x in alpha_grid}, reverse=True))
    rep = ScanReport(n_pairs_max, grid)
    for pairs in candidate_pair_sets(M, n_pairs_max):
        rep.scanned += 1
        weights = norm_one_weights(pairs, M)
        if weights is None:
            rep.rejected += 1
            continue
        comb = MoleculeCombination(pairs, weights)
        mu = comb.to_element(M)
        _check_normalized(M, mu)
        for alpha in (grid if all_alphas else grid[-1:]):
            d = measure_slice(M, SliceSpec(mu, alpha), check_norm=False).diameter
            entry = {"pairs": list(pairs), "weights": list(weights), "alpha": alpha, "diameter": d}
            rep.candidates.append(entry)
            if rep.min_diameter is None or d < rep.min_diameter:
                rep.min_diameter = d
                rep.argmin = entry
    return rep
