"""GF(2) linear algebra on integer bitmask rows.

A vector of width w is an int whose bit i is coordinate i. Everything here
is exact and deterministic; pivots are chosen at the lowest set bit.
"""

from __future__ import annotations


def lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def rref(rows: list[int]) -> tuple[list[int], list[int]]:
    """Reduced row echelon form.

    Returns (reduced nonzero rows sorted by pivot, pivot positions).
    Each pivot coordinate appears in exactly one row.
    """
    basis: dict[int, int] = {}
    for r in rows:
        for p, b in basis.items():
            if (r >> p) & 1:
                r ^= b
        if r:
            p = lowest_bit(r)
            for q in list(basis):
                if (basis[q] >> p) & 1:
                    basis[q] ^= r
            basis[p] = r
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


def nullspace(rows: list[int], width: int) -> list[int]:
    """Basis of all v with even overlap against every row."""
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [i for i in range(width) if i not in pivot_set]
    basis = []
    for f in free:
        v = 1 << f
        for p, row in zip(pivots, reduced):
            if (row >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def in_span(basis_rows: list[int], v: int) -> bool:
    """Membership of v in the rowspace of an rref basis."""
    for row in basis_rows:
        if (v >> lowest_bit(row)) & 1:
            v ^= row
    return v == 0


class AffineBasis:
    """Incremental GF(2) affine system with combination tracking.

    Each inserted equation is (coefficients, constant). The basis remembers
    which input equations combine into each stored row, so an inconsistency
    surfaces as the exact subset of inputs summing to 0 = 1.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows: dict[int, tuple[int, int, int]] = {}  # pivot -> (coef, const, combo)
        self.count = 0
        self.conflict: int | None = None  # combo mask of first 0 = 1 derivation

    def add(self, coef: int, const: int) -> None:
        combo = 1 << self.count
        self.count += 1
        for p, (bc, bk, bm) in self.rows.items():
            if (coef >> p) & 1:
                coef ^= bc
                const ^= bk
                combo ^= bm
        if coef == 0:
            if const == 1 and self.conflict is None:
                self.conflict = combo
            return
        p = lowest_bit(coef)
        for q in list(self.rows):
            qc, qk, qm = self.rows[q]
            if (qc >> p) & 1:
                self.rows[q] = (qc ^ coef, qk ^ const, qm ^ combo)
        self.rows[p] = (coef, const, combo)

    def solution(self) -> int | None:
        """A satisfying vector with free coordinates zero, or None."""
        if self.conflict is not None:
            return None
        sol = 0
        for p, (_, const, _) in self.rows.items():
            if const:
                sol |= 1 << p
        return sol
