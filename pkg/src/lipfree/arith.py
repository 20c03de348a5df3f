"""Arithmetic mode shared by every computation in a run.

Two modes exist: ``"rational"`` (exact :class:`fractions.Fraction`) and
``"float"`` (binary floating point compared with tolerance ``tol``).  The mode
is held in a context variable so a CLI run or a test can switch it in one place::

    with arithmetic("float", tol=1e-9):
        ...
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number, Rational
from typing import Iterator, Union

Scalar = Union[Fraction, float, int]

# Strict inequalities in float mode must clear this many tolerances.
STRICT_MARGIN = 10


@dataclass(frozen=True)
class Arithmetic:
    mode: str = "rational"
    tol: float = 1e-9

    def __post_init__(self):
        if self.mode not in ("rational", "float"):
            raise ValueError(f"unknown arithmetic mode {self.mode!r}")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")

    @property
    def exact(self) -> bool:
        return self.mode == "rational"

    def num(self, x) -> Scalar:
        """Coerce ``x`` (int, float, Fraction or a string like ``"1/3"``) into the mode's number type."""
        if self.exact:
            return to_fraction(x)
        if isinstance(x, str):
            return float(Fraction(x))
        return float(x)

    # Comparisons.  Exact mode ignores the tolerance entirely.
    def le(self, a, b) -> bool:
        return a <= b if self.exact else a <= b + self.tol

    def ge(self, a, b) -> bool:
        return self.le(b, a)

    def eq(self, a, b) -> bool:
        return a == b if self.exact else abs(a - b) <= self.tol

    def lt(self, a, b) -> bool:
        """Strict ``a < b``; float mode requires a margin of ``STRICT_MARGIN * tol``."""
        return a < b if self.exact else a < b - STRICT_MARGIN * self.tol

    def gt(self, a, b) -> bool:
        return self.lt(b, a)

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.exact else 0.0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.exact else 1.0


_current: contextvars.ContextVar[Arithmetic] = contextvars.ContextVar(
    "lipfree_arithmetic", default=Arithmetic()
)


def current() -> Arithmetic:
    return _current.get()


@contextlib.contextmanager
def arithmetic(mode: str = "rational", tol: float = 1e-9) -> Iterator[Arithmetic]:
    token = _current.set(Arithmetic(mode, tol))
    try:
        yield _current.get()
    finally:
        _current.reset(token)


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, Number):
        xf = float(x)
        if not math.isfinite(xf):
            raise ValueError(f"non-finite value {x!r}")
        # repr gives the shortest decimal that round-trips, i.e. what the user typed
        return Fraction(repr(xf))
    raise TypeError(f"cannot interpret {x!r} as a number")


def is_finite(x) -> bool:
    if isinstance(x, Fraction):
        return True
    return math.isfinite(float(x))


def fmt(x, digits: int = 12) -> str:
    """Decimal rendering with fixed significant digits."""
    if x == float("-inf"):
        return "-inf"
    if x == float("inf"):
        return "inf"
    return f"{float(x):.{digits}g}"
