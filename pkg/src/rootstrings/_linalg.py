"""Exact rational linear algebra on short integer vectors."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def row_echelon(rows: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of ``rows``; returns (matrix, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[int]]) -> int:
    return len(row_echelon(rows)[1])


def is_independent(rows: Sequence[Sequence[int]]) -> bool:
    return rank(rows) == len(rows)


class SpanSolver:
    """Coordinates of vectors with respect to a fixed independent family.

    ``coordinates(v)`` returns the rational coefficients ``c`` with
    ``sum(c[k] * basis[k]) == v``, or ``None`` when ``v`` is outside the span.
    """

    def __init__(self, basis: Sequence[Sequence[int]]):
        self.basis = [tuple(b) for b in basis]
        if not self.basis:
            raise ValueError("empty basis")
        k = len(self.basis)
        _, pivots = row_echelon(self.basis)
        if len(pivots) != k:
            raise ValueError("basis vectors are linearly dependent")
        self._cols = pivots
        square = [[Fraction(self.basis[i][c]) for c in pivots] for i in range(k)]
        inverse = _invert(square)
        # Keep the inverse as an integer matrix over a common denominator so
        # that coordinate queries stay in integer arithmetic.
        self._den = lcm(*(x.denominator for row in inverse for x in row))
        self._inverse = [[int(x * self._den) for x in row] for row in inverse]

    def _scaled(self, v: Sequence[int]) -> list[int] | None:
        k = len(self.basis)
        rhs = [v[c] for c in self._cols]
        # v restricted to pivot columns = c @ square  =>  c = rhs @ inverse
        scaled = [sum(rhs[j] * self._inverse[j][i] for j in range(k)) for i in range(k)]
        for idx in range(len(v)):
            if sum(scaled[i] * self.basis[i][idx] for i in range(k)) != v[idx] * self._den:
                return None
        return scaled

    def coordinates(self, v: Sequence[int]) -> tuple[Fraction, ...] | None:
        scaled = self._scaled(v)
        if scaled is None:
            return None
        return tuple(Fraction(x, self._den) for x in scaled)

    def integer_coordinates(self, v: Sequence[int]) -> tuple[int, ...] | None:
        scaled = self._scaled(v)
        if scaled is None or any(x % self._den for x in scaled):
            return None
        return tuple(x // self._den for x in scaled)


def _invert(a: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    red, pivots = row_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in red]
