"""Named and random finite metric spaces used by tests and scripts."""

from __future__ import annotations

import random
from fractions import Fraction

from .metric import FiniteMetricSpace, validate_metric


def shortest_path_closure(w):
    n = len(w)
    d = [list(r) for r in w]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def graph_metric(n: int, edges, default=None) -> FiniteMetricSpace:
    """Path metric of a weighted graph given as {(i, j): weight}."""
    big = Fraction(10 ** 9) if default is None else Fraction(default)
    w = [[Fraction(0) if i == j else big for j in range(n)] for i in range(n)]
    for (i, j), x in edges.items():
        w[i][j] = w[j][i] = Fraction(x)
    return validate_metric(shortest_path_closure(w))


def two_point(theta=1) -> FiniteMetricSpace:
    return validate_metric([[0, theta], [theta, 0]], labels=["0", "p"])


def line(n: int, step=1) -> FiniteMetricSpace:
    step = Fraction(step)
    return validate_metric([[abs(i - j) * step for j in range(n)] for i in range(n)])


def equilateral(n: int, side=1) -> FiniteMetricSpace:
    return validate_metric([[0 if i == j else side for j in range(n)] for i in range(n)])


def cycle(n: int, step=1) -> FiniteMetricSpace:
    return graph_metric(n, {(i, (i + 1) % n): step for i in range(n)})


def star(leaves: int, arm=1) -> FiniteMetricSpace:
    return graph_metric(leaves + 1, {(0, i): arm for i in range(1, leaves + 1)})


def random_uniform_space(rng: random.Random, n: int, denom: int = 4) -> FiniteMetricSpace:
    """Off-diagonal entries in [1, 2]; any such symmetric matrix is a metric."""
    d = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d[i][j] = d[j][i] = Fraction(rng.randint(denom, 2 * denom), denom)
    return validate_metric(d)


def random_graph_space(rng: random.Random, n: int, denom: int = 2, p: float = 0.6) -> FiniteMetricSpace:
    """Shortest-path metric of a random connected graph; has many geodesics."""
    edges = {(i, i + 1): Fraction(rng.randint(1, 3 * denom), denom) for i in range(n - 1)}
    for i in range(n):
        for j in range(i + 2, n):
            if rng.random() < p:
                edges[(i, j)] = Fraction(rng.randint(1, 3 * denom), denom)
    return graph_metric(n, edges)


def random_space(rng: random.Random, n: int) -> FiniteMetricSpace:
    if rng.random() < 0.5:
        return random_uniform_space(rng, n)
    return random_graph_space(rng, n)


def in_mode(M: FiniteMetricSpace) -> FiniteMetricSpace:
    """Re-validate a space so its entries use the current arithmetic mode."""
    return validate_metric([list(r) for r in M.dist], base=M.base, labels=M.labels)


def curated() -> dict:
    """Fixed corpus of small spaces (3 to 8 points), including rescaled copies."""
    spaces = {
        "line3": line(3),
        "line4": line(4),
        "line5": line(5),
        "equilateral3": equilateral(3),
        "equilateral4": equilateral(4),
        "cycle4": cycle(4),
        "cycle5": cycle(5),
        "cycle6": cycle(6),
        "star3": star(3),
        "star4": star(4),
        "square_diag": graph_metric(4, {(0, 1): 1, (1, 2): 1, (2, 3): 1, (3, 0): 1, (0, 2): Fraction(3, 2)}),
        "path_tree6": graph_metric(6, {(0, 1): 1, (1, 2): 2, (1, 3): 1, (3, 4): 1, (3, 5): 2}),
        "uniform12_5": validate_metric([[0, 1, 2, 1, 2], [1, 0, 1, 2, 1], [2, 1, 0, 1, 2],
                                         [1, 2, 1, 0, 1], [2, 1, 2, 1, 0]]),
        "line8": line(8),
        "equilateral3_small": equilateral(3, Fraction(1, 100)),
        "line3_half": line(3, Fraction(1, 2)),
        "cycle4_tenth": cycle(4, Fraction(1, 10)),
        "star3_third": star(3, Fraction(1, 3)),
        "line4_scaled3": line(4, 3),
        "equilateral5": equilateral(5),
        "cycle7": cycle(7),
        "star5": star(5),
    }
    return spaces
