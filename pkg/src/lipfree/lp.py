"""Dense two-phase tableau simplex in exact or floating-point arithmetic.

Solves ::

    maximize    c @ x
    subject to  A_ub @ x <= b_ub
                A_eq @ x == b_eq
                x[j] >= 0 for j in nonneg, x[j] free otherwise

and returns a primal optimum together with the constraint duals.  The problems
in this package are small (at most a few thousand rows), so a dense tableau is
fine.  Entering variables follow Dantzig's rule; after a degenerate pivot the
solver switches to Bland's rule until progress resumes, which rules out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import arith

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_FLOAT_PIVOT_TOL = 1e-11
_MAX_PIVOTS = 200_000


class LPError(RuntimeError):
    pass


@dataclass
class LPResult:
    status: str
    x: list = field(default_factory=list)
    objective: object = None
    duals_ub: list = field(default_factory=list)
    duals_eq: list = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    def __init__(self, T, basis, exact):
        self.T = T
        self.basis = basis
        self.exact = exact
        self.tol = 0 if exact else _FLOAT_PIVOT_TOL
        self.pivots = 0

    def pivot(self, i, j, z):
        T = self.T
        T[i] = T[i] / T[i, j]
        col = T[:, j].copy()
        col[i] = 0
        rows = np.nonzero(col != 0)[0]
        if len(rows):
            T[rows] -= np.outer(col[rows], T[i])
        if z[j] != 0:
            z -= z[j] * T[i]
        if not self.exact:
            # pin the pivot column so round-off does not leave residue
            T[rows, j] = 0.0
            z[j] = 0.0
        self.basis[i] = j
        self.pivots += 1
        if self.pivots > _MAX_PIVOTS:
            raise LPError("pivot limit exceeded")

    def run(self, z, allowed):
        """Maximize with reduced-cost row ``z`` (last entry is minus the objective)."""
        T, tol = self.T, self.tol
        bland = False
        while True:
            cand = [j for j in allowed if z[j] > tol]
            if not cand:
                return OPTIMAL
            j = cand[0] if bland else max(cand, key=lambda k: z[k])
            colj = T[:, j]
            best = None
            for i in np.nonzero(colj > tol)[0]:
                ratio = T[i, -1] / colj[i]
                if best is None or ratio < best[0] or (
                    ratio == best[0] and self.basis[i] < self.basis[best[1]]
                ):
                    best = (ratio, i)
            if best is None:
                return UNBOUNDED
            bland = best[0] <= tol
            self.pivot(best[1], j, z)


def _as_rows(A, n) -> list:
    if A is None:
        return []
    rows = [list(r) for r in A]
    for r in rows:
        if len(r) != n:
            raise ValueError("constraint row has wrong length")
    return rows


def linprog(
    c: Sequence,
    A_ub=None,
    b_ub=None,
    A_eq=None,
    b_eq=None,
    nonneg: Iterable[int] = (),
    exact: bool | None = None,
) -> LPResult:
    """Maximize ``c @ x``.  ``exact`` defaults to the current arithmetic mode."""
    if exact is None:
        exact = arith.current().exact
    num = arith.to_fraction if exact else float
    n = len(c)
    ub = _as_rows(A_ub, n)
    eq = _as_rows(A_eq, n)
    bub = [num(v) for v in (b_ub or [])]
    beq = [num(v) for v in (b_eq or [])]
    if len(bub) != len(ub) or len(beq) != len(eq):
        raise ValueError("right-hand side length mismatch")
    nonneg = set(nonneg)

    # structural columns: nonneg vars keep one column, free vars split into +/-
    colmap = []  # (var, sign)
    for v in range(n):
        colmap.append((v, 1))
        if v not in nonneg:
            colmap.append((v, -1))
    ns = len(colmap)
    m_ub, m = len(ub), len(ub) + len(eq)
    rows = ub + eq
    rhs = bub + beq
    sign = [1] * m
    for i in range(m):
        if rhs[i] < 0:
            sign[i] = -1
    need_art = [i for i in range(m) if i >= m_ub or sign[i] < 0]
    art_col = {}
    ncols = ns + m_ub
    for i in need_art:
        art_col[i] = ncols
        ncols += 1

    zero = Fraction(0) if exact else 0.0
    T = np.empty((m, ncols + 1), dtype=object if exact else float)
    T[:] = zero
    for i in range(m):
        s = sign[i]
        row = rows[i]
        for k, (v, sg) in enumerate(colmap):
            a = row[v]
            if a:
                T[i, k] = num(a) * (s * sg)
        if i < m_ub:
            T[i, ns + i] = zero + s
        if i in art_col:
            T[i, art_col[i]] = zero + 1
        T[i, -1] = rhs[i] * s
    basis = [art_col.get(i, ns + i) for i in range(m)]
    id_col = list(basis)
    tab = _Tableau(T, basis, exact)
    arts = set(art_col.values())
    real_cols = [j for j in range(ncols) if j not in arts]

    if arts:
        z = np.empty(ncols + 1, dtype=T.dtype)
        z[:] = zero
        for j in arts:
            z[j] = zero - 1
        for i in range(m):
            if basis[i] in arts:
                z += T[i]
        tab.run(z, real_cols)
        if (z[-1] > 0) if exact else (z[-1] > 1e-9 * max(1.0, max(abs(float(b)) for b in rhs))):
            return LPResult(INFEASIBLE)
        for i in range(m):
            if basis[i] in arts:
                for j in real_cols:
                    if abs(T[i, j]) > tab.tol:
                        tab.pivot(i, j, z)
                        break

    z = np.empty(ncols + 1, dtype=T.dtype)
    z[:] = zero
    for k, (v, sg) in enumerate(colmap):
        z[k] = num(c[v]) * sg
    for i in range(m):
        if z[basis[i]] != 0:
            z -= z[basis[i]] * T[i]
    status = tab.run(z, real_cols)
    if status != OPTIMAL:
        return LPResult(status)

    vals = [zero] * ncols
    for i in range(m):
        vals[basis[i]] = T[i, -1]
    x = [zero] * n
    for k, (v, sg) in enumerate(colmap):
        if vals[k]:
            x[v] = x[v] + sg * vals[k]
    y = [-z[id_col[i]] * sign[i] for i in range(m)]
    if not exact:
        x = [float(v) for v in x]
        y = [float(v) for v in y]
    obj = -z[-1]
    return LPResult(OPTIMAL, x, obj if exact else float(obj), y[:m_ub], y[m_ub:])
