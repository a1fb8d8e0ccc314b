"""Exact linear programming over rationals, tableau simplex with Bland's rule.

Small dense problems only; every entry is a ``fractions.Fraction``, so
optima and witnesses are exact. Bland's pivoting rule (lowest eligible
index for entering and leaving ties) guarantees termination under the
degeneracy these polytopes are full of.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


class _Tableau:
    """rows of [A | I | b] with a reduced-cost row; basis tracked by index."""

    def __init__(self, matrix: list[list[Fraction]], basis: list[int], cost: list[Fraction]):
        self.matrix = matrix
        self.basis = basis
        self.cost = cost  # length = columns of matrix minus rhs; reduced costs

    def pivot(self, row: int, col: int) -> None:
        piv = self.matrix[row][col]
        self.matrix[row] = [v / piv for v in self.matrix[row]]
        for i, r in enumerate(self.matrix):
            if i != row and r[col] != 0:
                f = r[col]
                self.matrix[i] = [a - f * b for a, b in zip(r, self.matrix[row])]
        f = self.cost[col]
        if f != 0:
            self.cost = [a - f * b for a, b in zip(self.cost, self.matrix[row][:-1])]
        self.basis[row] = col

    def run(self) -> None:
        ncols = len(self.cost)
        while True:
            enter = next((j for j in range(ncols) if self.cost[j] > 0), None)
            if enter is None:
                return
            leave, best = None, None
            for i, r in enumerate(self.matrix):
                if r[enter] > 0:
                    ratio = r[-1] / r[enter]
                    if best is None or ratio < best or (
                            ratio == best and self.basis[i] < self.basis[leave]):
                        leave, best = i, ratio
            if leave is None:
                raise ArithmeticError("objective unbounded")
            self.pivot(leave, enter)


def _as_fractions(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in rows]


def maximize(cost: Sequence, lhs: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, list[Fraction]]:
    """max cost.x subject to lhs x <= rhs, x >= 0; rhs must be nonnegative.

    Returns the exact optimum and an optimal vertex.
    """
    A = _as_fractions(lhs)
    b = [Fraction(v) for v in rhs]
    c = [Fraction(v) for v in cost]
    if any(v < 0 for v in b):
        raise ValueError("nonnegative right-hand side required")
    m, n = len(A), len(c)
    matrix = [A[i] + [ONE if j == i else ZERO for j in range(m)] + [b[i]]
              for i in range(m)]
    tab = _Tableau(matrix, [n + i for i in range(m)], c + [ZERO] * m)
    tab.run()
    x = [ZERO] * n
    for i, var in enumerate(tab.basis):
        if var < n:
            x[var] = tab.matrix[i][-1]
    value = sum(ci * xi for ci, xi in zip(c, x))
    return value, x


def feasible_equalities(lhs: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Find x >= 0 with lhs x = rhs, or None; phase-one simplex."""
    A = _as_fractions(lhs)
    b = [Fraction(v) for v in rhs]
    for i, v in enumerate(b):
        if v < 0:
            A[i] = [-a for a in A[i]]
            b[i] = -v
    m, n = len(A), len(A[0]) if A else 0
    matrix = [A[i] + [ONE if j == i else ZERO for j in range(m)] + [b[i]]
              for i in range(m)]
    # maximizing -sum(artificials); in terms of nonbasics the reduced cost
    # of column j is the column sum of A, of artificials zero
    cost = [sum(A[i][j] for i in range(m)) for j in range(n)] + [ZERO] * m
    tab = _Tableau(matrix, [n + i for i in range(m)], cost)
    tab.run()
    for i, var in enumerate(tab.basis):
        if var >= n and tab.matrix[i][-1] != 0:
            return None
    x = [ZERO] * n
    for i, var in enumerate(tab.basis):
        if var < n:
            x[var] = tab.matrix[i][-1]
    return x
