"""McShane and Whitney extensions of 1-Lipschitz data from a subset of M."""

from __future__ import annotations

from typing import Mapping

from . import arith
from .freenorm import LipschitzFunction, lip_norm
from .metric import FiniteMetricSpace


class NotLipschitzOnSubset(ValueError):
    def __init__(self, u, v):
        super().__init__(f"|f({u}) - f({v})| > d({u}, {v})")
        self.points = (u, v)


def _subset_data(f: Mapping[int, object], M: FiniteMetricSpace) -> list[tuple[int, object]]:
    a = arith.current()
    raw = list(f.items()) if isinstance(f, Mapping) else list(f)
    items = sorted((int(z), a.num(v)) for z, v in raw)
    if len({z for z, _ in items}) != len(items):
        raise ValueError("duplicate point in subset")
    if not items:
        raise ValueError("extension needs a nonempty subset")
    for z, _ in items:
        if not 0 <= z < M.n:
            raise ValueError(f"point {z} out of range")
    for i, (u, fu) in enumerate(items):
        for v, fv in items[i + 1:]:
            if not a.le(abs(fu - fv), M.d(u, v)):
                raise NotLipschitzOnSubset(u, v)
    return items


def upper_values(f: Mapping[int, object], M: FiniteMetricSpace) -> tuple:
    """h1(x) = min_z f(z) + d(z, x), the largest 1-Lipschitz extension."""
    items = _subset_data(f, M)
    return tuple(min(fz + M.d(z, x) for z, fz in items) for x in range(M.n))


def lower_values(f: Mapping[int, object], M: FiniteMetricSpace) -> tuple:
    """h2(x) = max_z f(z) - d(z, x), the smallest 1-Lipschitz extension."""
    items = _subset_data(f, M)
    return tuple(max(fz - M.d(z, x) for z, fz in items) for x in range(M.n))


def argmin_upper(f: Mapping[int, object], M: FiniteMetricSpace, x: int) -> int:
    """Point of N attaining h1(x); ties go to the lowest index."""
    items = _subset_data(f, M)
    return min(items, key=lambda zf: (zf[1] + M.d(zf[0], x), zf[0]))[0]


def argmax_lower(f: Mapping[int, object], M: FiniteMetricSpace, x: int) -> int:
    items = _subset_data(f, M)
    return min(items, key=lambda zf: (-(zf[1] - M.d(zf[0], x)), zf[0]))[0]


def inf_extension(f: Mapping[int, object], M: FiniteMetricSpace) -> LipschitzFunction:
    return translate_to_base(upper_values(f, M), M)


def sup_extension(f: Mapping[int, object], M: FiniteMetricSpace) -> LipschitzFunction:
    return translate_to_base(lower_values(f, M), M)


def translate_to_base(values, M: FiniteMetricSpace) -> LipschitzFunction:
    if isinstance(values, LipschitzFunction):
        values = values.values
    return lip_norm(values, M)
