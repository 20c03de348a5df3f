"""Finite pointed metric spaces and finitely supported elements of F(M)."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import arith


class MetricError(ValueError):
    """Base class for rejected distance matrices."""


class NotSquare(MetricError):
    pass


class TooFewPoints(MetricError):
    pass


class NonFiniteEntry(MetricError):
    def __init__(self, i, j):
        super().__init__(f"non-finite distance at ({i}, {j})")
        self.indices = (i, j)


class AsymmetricMatrix(MetricError):
    def __init__(self, i, j):
        super().__init__(f"dist[{i}][{j}] != dist[{j}][{i}]")
        self.indices = (i, j)


class NegativeDistance(MetricError):
    def __init__(self, i, j):
        super().__init__(f"dist[{i}][{j}] < 0")
        self.indices = (i, j)


class ZeroOffDiagonal(MetricError):
    def __init__(self, i, j):
        super().__init__(f"dist[{i}][{j}] = 0 for distinct points")
        self.indices = (i, j)


class NonzeroDiagonal(MetricError):
    def __init__(self, i):
        super().__init__(f"dist[{i}][{i}] != 0")
        self.indices = (i,)


class TriangleViolation(MetricError):
    def __init__(self, i, j, k):
        super().__init__(f"dist[{i}][{k}] > dist[{i}][{j}] + dist[{j}][{k}]")
        self.indices = (i, j, k)


class SchemaError(ValueError):
    pass


class ParseError(ValueError):
    pass


class InvalidPair(ValueError):
    def __init__(self, index, msg="x == y"):
        super().__init__(f"pair {index}: {msg}")
        self.index = index


class ZeroElement(ValueError):
    pass


@dataclass(frozen=True)
class FiniteMetricSpace:
    labels: tuple
    dist: tuple
    base: int = 0

    @property
    def n(self) -> int:
        return len(self.labels)

    def d(self, i: int, j: int):
        return self.dist[i][j]

    @property
    def c(self):
        """Smallest distance between distinct points."""
        return min(self.dist[i][j] for i in range(self.n) for j in range(self.n) if i != j)

    @property
    def D(self):
        """Diameter."""
        return max(max(row) for row in self.dist)

    def index(self, label) -> int:
        if isinstance(label, int) and not isinstance(label, bool) and label not in self.labels:
            if 0 <= label < self.n:
                return label
        try:
            return self.labels.index(label)
        except ValueError:
            raise SchemaError(f"unknown point label {label!r}") from None

    def points(self) -> range:
        return range(self.n)

    def ordered_pairs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(self.n) if u != v]

    def to_json(self) -> dict:
        a = arith.current()
        enc = (lambda x: str(x)) if a.exact else float
        return {
            "labels": list(self.labels),
            "base": self.base,
            "dist": [[enc(x) for x in row] for row in self.dist],
        }

    def rescaled(self, factor) -> "FiniteMetricSpace":
        factor = arith.current().num(factor)
        return FiniteMetricSpace(
            self.labels, tuple(tuple(x * factor for x in row) for row in self.dist), self.base
        )


def validate_metric(matrix, base: int = 0, labels: Sequence | None = None) -> FiniteMetricSpace:
    """Check every metric axiom exhaustively and return an immutable space."""
    a = arith.current()
    rows = [list(r) for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NotSquare("distance matrix is not square")
    if n < 2:
        raise TooFewPoints("a pointed metric space needs at least 2 points here")
    d = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            try:
                d[i][j] = a.num(rows[i][j])
            except (TypeError, ValueError, ZeroDivisionError):
                raise NonFiniteEntry(i, j) from None
            if not arith.is_finite(d[i][j]):
                raise NonFiniteEntry(i, j)
    for i in range(n):
        if d[i][i] != 0:
            raise NonzeroDiagonal(i)
    for i in range(n):
        for j in range(n):
            if d[i][j] != d[j][i]:
                raise AsymmetricMatrix(i, j)
    for i in range(n):
        for j in range(n):
            if d[i][j] < 0:
                raise NegativeDistance(i, j)
            if i != j and d[i][j] == 0:
                raise ZeroOffDiagonal(i, j)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if not a.le(d[i][k], d[i][j] + d[j][k]):
                    raise TriangleViolation(i, j, k)
    if not (isinstance(base, int) and 0 <= base < n):
        raise SchemaError(f"base index {base!r} out of range")
    if labels is None:
        labels = [f"p{i}" for i in range(n)]
    labels = tuple(labels)
    if len(labels) != n or len(set(labels)) != n:
        raise SchemaError("labels must be distinct and one per point")
    return FiniteMetricSpace(labels, tuple(tuple(r) for r in d), base)


def load_json(text: str) -> FiniteMetricSpace:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict) or "dist" not in data:
        raise SchemaError("expected an object with a 'dist' field")
    return validate_metric(data["dist"], base=data.get("base", 0), labels=data.get("labels"))


def load_csv(text: str, base: int = 0) -> FiniteMetricSpace:
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            rows.append([arith.to_fraction(cell) if arith.current().exact else float(cell) for cell in row])
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"line {lineno}: cannot parse {row!r}") from exc
    return validate_metric(rows, base=base)


@dataclass(frozen=True)
class FreeElement:
    """Finitely supported element sum c_i delta_{x_i} of F(M)."""

    terms: tuple  # sorted ((index, coefficient), ...)

    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, object], M: FiniteMetricSpace) -> "FreeElement":
        a = arith.current()
        acc: dict[int, object] = {}
        for i, v in coeffs.items():
            if not 0 <= i < M.n:
                raise SchemaError(f"point index {i} out of range")
            if i == M.base:
                # delta at the origin is the zero functional
                continue
            acc[i] = acc.get(i, a.zero) + a.num(v)
        return cls(tuple(sorted((i, v) for i, v in acc.items() if v != 0)))

    @classmethod
    def delta(cls, i: int, M: FiniteMetricSpace, coef=1) -> "FreeElement":
        return cls.from_mapping({i: coef}, M)

    @classmethod
    def molecule(cls, x: int, y: int, M: FiniteMetricSpace) -> "FreeElement":
        if x == y:
            raise InvalidPair(0)
        a = arith.current()
        w = a.one / M.d(x, y)
        return cls.from_mapping({x: w, y: -w}, M)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def pair(self, values: Sequence) -> object:
        """Duality pairing with a function given by its values on all points."""
        a = arith.current()
        return sum((c * values[i] for i, c in self.terms), a.zero)

    def scale(self, s) -> "FreeElement":
        return FreeElement(tuple((i, c * s) for i, c in self.terms if c * s != 0))

    def add(self, other: "FreeElement") -> "FreeElement":
        acc = dict(self.terms)
        for i, c in other.terms:
            acc[i] = acc.get(i, 0) + c
        return FreeElement(tuple(sorted((i, c) for i, c in acc.items() if c != 0)))

    def support(self) -> tuple:
        return tuple(i for i, _ in self.terms)


@dataclass(frozen=True)
class MoleculeCombination:
    """Convex combination sum lambda_i (delta_{x_i} - delta_{y_i}) / d(x_i, y_i)."""

    pairs: tuple
    weights: tuple = field(default=())

    def __post_init__(self):
        pairs = tuple((int(x), int(y)) for x, y in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        a = arith.current()
        if not self.weights:
            w = a.one / len(pairs) if pairs else ()
            object.__setattr__(self, "weights", tuple(w for _ in pairs))
        else:
            object.__setattr__(self, "weights", tuple(a.num(w) for w in self.weights))
        if len(self.weights) != len(pairs):
            raise ValueError("one weight per pair required")
        if not pairs:
            raise ValueError("empty molecule combination")
        for i, (x, y) in enumerate(pairs):
            if x == y:
                raise InvalidPair(i)
        if len(set(pairs)) != len(pairs):
            raise ValueError("pairs must be distinct ordered pairs")
        if any(not w > 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if not a.eq(sum(self.weights), 1):
            raise ValueError("weights must sum to 1")

    @property
    def n(self) -> int:
        return len(self.pairs)

    def to_element(self, M: FiniteMetricSpace) -> FreeElement:
        out = FreeElement(())
        for (x, y), w in zip(self.pairs, self.weights):
            out = out.add(FreeElement.molecule(x, y, M).scale(w))
        return out


def check_pairs(pairs, M: FiniteMetricSpace) -> list[tuple[int, int]]:
    out = []
    for i, (x, y) in enumerate(pairs):
        if not (0 <= x < M.n and 0 <= y < M.n):
            raise InvalidPair(i, "index out of range")
        if x == y:
            raise InvalidPair(i)
        out.append((int(x), int(y)))
    return out
