"""The Lipschitz-free norm via Kantorovich-Rubinstein duality.

``free_norm`` maximizes the pairing <mu, f> over 1-Lipschitz f vanishing at the
base point.  The LP duals of the pairwise constraints form a transport plan
whose cost equals the norm; that plan also gives the molecule decomposition of
a norm-one element.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import arith, lp
from .metric import (
    FiniteMetricSpace,
    FreeElement,
    MoleculeCombination,
    ZeroElement,
    check_pairs,
)
from .potentials import beta_from_pairs, compute_B


class NotNormOne(ValueError):
    def __init__(self, norm):
        super().__init__(f"element has norm {norm}, not 1")
        self.norm = norm


@dataclass(frozen=True)
class LipschitzFunction:
    values: tuple
    lip_const: object

    def __call__(self, i):
        return self.values[i]


@dataclass(frozen=True)
class NormResult:
    value: object
    dual_witness: LipschitzFunction
    primal_witness: dict  # (u, v) -> mass moved from u to v

    def transport_cost(self, M: FiniteMetricSpace):
        a = arith.current()
        return sum((m * M.d(u, v) for (u, v), m in self.primal_witness.items()), a.zero)


def lipschitz_constant(values, M: FiniteMetricSpace):
    a = arith.current()
    best = a.zero
    for u in range(M.n):
        for v in range(u + 1, M.n):
            r = abs(values[u] - values[v]) / M.d(u, v)
            if r > best:
                best = r
    return best


def lip_norm(values, M: FiniteMetricSpace) -> LipschitzFunction:
    """Normalize to vanish at the base point and attach the best Lipschitz constant."""
    a = arith.current()
    vals = [a.num(v) for v in values]
    if len(vals) != M.n:
        raise ValueError("need one value per point")
    b = vals[M.base]
    vals = tuple(v - b for v in vals)
    return LipschitzFunction(vals, lipschitz_constant(vals, M))


def lipschitz_rows(M: FiniteMetricSpace, nvars=None, offset=0):
    """Rows f(u) - f(v) <= d(u, v) over all ordered pairs, base value eliminated.

    Variable ``offset + k`` holds the value at the k-th non-base point.
    """
    nvars = nvars if nvars is not None else M.n - 1
    col = var_index(M, offset)
    rows, rhs, keys = [], [], []
    for u, v in M.ordered_pairs():
        row = [0] * nvars
        if u != M.base:
            row[col[u]] += 1
        if v != M.base:
            row[col[v]] -= 1
        rows.append(row)
        rhs.append(M.d(u, v))
        keys.append((u, v))
    return rows, rhs, keys


def var_index(M: FiniteMetricSpace, offset=0) -> dict:
    col, k = {}, offset
    for p in range(M.n):
        if p != M.base:
            col[p] = k
            k += 1
    return col


def values_from_vars(x, M: FiniteMetricSpace, offset=0) -> tuple:
    a = arith.current()
    col = var_index(M, offset)
    return tuple(a.zero if p == M.base else x[col[p]] for p in range(M.n))


def free_norm(mu: FreeElement, M: FiniteMetricSpace) -> NormResult:
    if mu.is_zero():
        raise ZeroElement("the zero element has no norming function")
    a = arith.current()
    col = var_index(M)
    c = [0] * (M.n - 1)
    for i, coef in mu.terms:
        c[col[i]] = coef
    rows, rhs, keys = lipschitz_rows(M)
    res = lp.linprog(c, rows, rhs)
    if not res.optimal:
        raise lp.LPError(f"norm LP ended {res.status}")
    f = values_from_vars(res.x, M)
    plan = {k: y for k, y in zip(keys, res.duals_ub) if (y > 0 if a.exact else y > a.tol * 1e-3)}
    out = NormResult(res.objective, LipschitzFunction(f, lipschitz_constant(f, M)), plan)
    if not a.eq(out.transport_cost(M), out.value):
        raise lp.LPError("duality gap in norm computation")
    return out


def combination_norm(comb: MoleculeCombination, M: FiniteMetricSpace):
    mu = comb.to_element(M)
    if mu.is_zero():
        return arith.current().zero
    return free_norm(mu, M).value


def norm_one_cyclic_check(pairs, M: FiniteMetricSpace) -> bool:
    """True iff some positive weights make the combination of these molecules norm one.

    The cyclic inequality sum d(x_t, y_t) <= sum d(x_t, y_{t+1}) over every index
    cycle says exactly that every beta-cycle is nonnegative.
    """
    pairs = check_pairs(pairs, M)
    return compute_B(beta_from_pairs(M, pairs)).feasible


def free_element_as_combination(mu: FreeElement, M: FiniteMetricSpace) -> MoleculeCombination:
    """Write a norm-one element as a convex combination of molecules.

    The optimal transport plan moves mass ``m`` from u to v; that contributes
    ``m * d(u, v)`` times the molecule (u, v).  Flow routed through points outside
    ``supp(mu) + {base}`` is short-cut, which keeps the cost because the plan is optimal.
    """
    a = arith.current()
    res = free_norm(mu, M)
    if not a.eq(res.value, 1):
        raise NotNormOne(res.value)
    plan = dict(res.primal_witness)
    keep = set(mu.support()) | {M.base}
    _shortcut(plan, keep, M)
    pairs = sorted(plan)
    weights = [plan[p] * M.d(*p) for p in pairs]
    total = sum(weights, a.zero)
    if not a.exact:
        weights = [w / total for w in weights]
    return MoleculeCombination(tuple(pairs), tuple(weights))


def _shortcut(plan: dict, keep: set, M: FiniteMetricSpace) -> None:
    a = arith.current()
    tiny = a.zero if a.exact else a.tol * 1e-3
    while True:
        hub = None
        for (u, v), m in plan.items():
            if v not in keep and m > tiny:
                hub = v
                break
        if hub is None:
            break
        ins = sorted((u, m) for (u, w), m in plan.items() if w == hub and m > tiny)
        outs = sorted((w, m) for (v, w), m in plan.items() if v == hub and m > tiny)
        if not outs:
            # cannot happen with a balanced plan; drop float dust
            for u, _ in ins:
                del plan[(u, hub)]
            continue
        (u, mi), (w, mo) = ins[0], outs[0]
        t = min(mi, mo)
        _bump(plan, (u, hub), -t, tiny)
        _bump(plan, (hub, w), -t, tiny)
        if u != w:
            _bump(plan, (u, w), t, tiny)
    # cancel opposite flows
    for (u, v) in sorted(plan):
        if (u, v) in plan and (v, u) in plan:
            t = min(plan[(u, v)], plan[(v, u)])
            _bump(plan, (u, v), -t, tiny)
            _bump(plan, (v, u), -t, tiny)
    for k in [k for k, m in plan.items() if m <= tiny]:
        del plan[k]


def _bump(plan, key, delta, tiny):
    v = plan.get(key, 0) + delta
    if v <= tiny:
        plan.pop(key, None)
    else:
        plan[key] = v


def norm_one_weights(pairs, M: FiniteMetricSpace) -> tuple | None:
    """Weights making the molecule combination norm one, or None if none exist.

    A combination with all weights positive has norm one exactly when a single
    1-Lipschitz f attains f(x_i) - f(y_i) = d(x_i, y_i) for every i, which does
    not depend on the weights.  Maximizing the smallest weight therefore gives
    the uniform vector.
    """
    pairs = check_pairs(pairs, M)
    if not norm_one_cyclic_check(pairs, M):
        return None
    a = arith.current()
    w = a.one / len(pairs)
    weights = tuple(w for _ in pairs)
    value = combination_norm(MoleculeCombination(tuple(pairs), weights), M)
    if not a.eq(value, 1):
        raise AssertionError(f"cyclic criterion passed but the norm is {value}")
    return weights
