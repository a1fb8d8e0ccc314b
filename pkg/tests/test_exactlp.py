import random
from fractions import Fraction
from itertools import product

import pytest

from contextuality.exactlp import feasible_equalities, maximize


def test_maximize_known_lp():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6; optimum at (8/5, 6/5)
    value, x = maximize([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert value == Fraction(14, 5)
    assert x == [Fraction(8, 5), Fraction(6, 5)]


def test_maximize_degenerate_and_zero_cost():
    value, x = maximize([0, 0], [[1, 0], [0, 1]], [1, 1])
    assert value == 0
    value, x = maximize([1], [[1], [1]], [2, 3])
    assert value == 2


def test_maximize_rejects_negative_rhs():
    with pytest.raises(ValueError):
        maximize([1], [[1]], [-1])


def brute_force_max(cost, lhs, rhs, grid=9):
    """Check optimality against a rational grid over the feasible box."""
    best = None
    bound = max(rhs) if rhs else 0
    points = [Fraction(i, 3) for i in range(3 * bound + 1)]
    for xs in product(points, repeat=len(cost)):
        if all(sum(a * x for a, x in zip(row, xs)) <= b
               for row, b in zip(lhs, rhs)):
            v = sum(c * x for c, x in zip(cost, xs))
            if best is None or v > best:
                best = v
    return best


def test_maximize_random_small_lps():
    rng = random.Random(12)
    for _ in range(25):
        n = rng.randrange(1, 4)
        m = rng.randrange(1, 4)
        cost = [rng.randrange(0, 4) for _ in range(n)]
        lhs = [[rng.randrange(0, 3) for _ in range(n)] for _ in range(m)]
        rhs = [rng.randrange(0, 4) for _ in range(m)]
        # keep the region bounded in every costed direction
        lhs.append([1] * n)
        rhs.append(5)
        value, x = maximize(cost, lhs, rhs)
        assert all(xi >= 0 for xi in x)
        assert all(sum(a * xi for a, xi in zip(row, x)) <= b
                   for row, b in zip(lhs, rhs))
        assert sum(c * xi for c, xi in zip(cost, x)) == value
        grid_best = brute_force_max(cost, lhs, rhs)
        assert grid_best is not None
        assert value >= grid_best


def test_feasible_equalities_solves():
    x = feasible_equalities([[1, 1, 0], [0, 1, 1]], [1, 1])
    assert x is not None
    assert x[0] + x[1] == 1
    assert x[1] + x[2] == 1
    assert all(v >= 0 for v in x)


def test_feasible_equalities_detects_infeasibility():
    # x + y = 1 and x + y = 2 cannot both hold
    assert feasible_equalities([[1, 1], [1, 1]], [1, 2]) is None
    # nonnegativity makes x1 + x2 = -1 impossible even with signed rhs flip
    assert feasible_equalities([[1, 0], [-1, 0]], [1, 2]) is None


def test_feasible_equalities_random_consistency():
    rng = random.Random(13)
    for _ in range(30):
        n = rng.randrange(1, 5)
        m = rng.randrange(1, 4)
        lhs = [[rng.randrange(-2, 3) for _ in range(n)] for _ in range(m)]
        hidden = [Fraction(rng.randrange(0, 4), rng.randrange(1, 4)) for _ in range(n)]
        rhs = [sum(a * x for a, x in zip(row, hidden)) for row in lhs]
        x = feasible_equalities(lhs, rhs)
        # a solution is known to exist, and the returned one must verify
        assert x is not None
        assert all(sum(a * xi for a, xi in zip(row, x)) == b
                   for row, b in zip(lhs, rhs))
        assert all(xi >= 0 for xi in x)
