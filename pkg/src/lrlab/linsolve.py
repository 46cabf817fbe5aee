"""Exact sparse linear systems over Q.

Rows are scaled to integers and eliminated fraction-free (each combination is
divided by the content of the resulting row).  Columns are integers; the pivot
of a row is its smallest column, so callers control pivoting by how they
number the unknowns.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, Optional, Tuple

Row = Dict[int, int]


class Inconsistent(Exception):
    """The system has no solution."""


def _integral(coeffs: Dict[int, Fraction], rhs: Fraction) -> Tuple[Row, int]:
    den = 1
    for c in coeffs.values():
        den = lcm(den, Fraction(c).denominator)
    den = lcm(den, Fraction(rhs).denominator)
    row = {j: int(Fraction(c) * den) for j, c in coeffs.items() if c}
    return row, int(Fraction(rhs) * den)


def _primitive(row: Row, rhs: int) -> Tuple[Row, int]:
    g = abs(rhs)
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row, rhs
    if g > 1:
        row = {j: v // g for j, v in row.items()}
        rhs //= g
    return row, rhs


class SparseSystem:
    """Incremental echelon form for ``sum(coeffs[j] * u_j) = rhs`` equations."""

    def __init__(self):
        self.pivots: Dict[int, Tuple[Row, int]] = {}
        self.consistent = True
        self.n_equations = 0

    def add(self, coeffs: Dict[int, Fraction], rhs=0) -> None:
        self.n_equations += 1
        row, b = _integral(coeffs, rhs)
        while row:
            p = min(row)
            piv = self.pivots.get(p)
            if piv is None:
                break
            prow, pb = piv
            a, c = prow[p], row[p]
            g = gcd(a, c)
            sa, sc = a // g, c // g
            new = {j: v * sa for j, v in row.items()}
            for j, v in prow.items():
                w = new.get(j, 0) - sc * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            row, b = _primitive(new, b * sa - sc * pb)
        if not row:
            if b:
                self.consistent = False
            return
        if row[min(row)] < 0:
            row = {j: -v for j, v in row.items()}
            b = -b
        self.pivots[min(row)] = (row, b)

    def solve(self) -> Dict[int, Fraction]:
        """One solution with all free unknowns set to zero."""
        if not self.consistent:
            raise Inconsistent("linear system is inconsistent")
        value: Dict[int, Fraction] = {}
        for p in sorted(self.pivots, reverse=True):
            row, b = self.pivots[p]
            acc = Fraction(b)
            for j, v in row.items():
                if j != p and j in value:
                    acc -= v * value[j]
            if acc:
                value[p] = acc / row[p]
        return value

    @property
    def rank(self) -> int:
        return len(self.pivots)


def solve(equations: Iterable[Tuple[Dict[int, Fraction], Fraction]]) -> Optional[Dict[int, Fraction]]:
    """Solve a list of ``(coeffs, rhs)`` equations; None when inconsistent."""
    sys_ = SparseSystem()
    for coeffs, rhs in equations:
        sys_.add(coeffs, rhs)
        if not sys_.consistent:
            return None
    return sys_.solve()
