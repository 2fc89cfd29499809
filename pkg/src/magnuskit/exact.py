"""Exact rational arithmetic helpers and Bernoulli numbers.

Every symbolic coefficient in the package is a :class:`fractions.Fraction`.
Fractions are normalised on construction (positive denominator, reduced),
which is exactly the invariant the rest of the code relies on.

Bernoulli numbers use the convention ``B_1 = -1/2``, i.e. the coefficients of
``z / (exp(z) - 1)``.  The other common convention (``B_1 = +1/2``) differs
only at index one.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import comb
from typing import Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "bernoulli",
    "format_rational",
    "parse_rational",
    "solve_rational",
]

_bernoulli_cache: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(m: int) -> Fraction:
    """Return ``B_m`` with ``B_1 = -1/2``.

    Uses the recurrence ``sum_{j=0}^{m} C(m+1, j) B_j = 0`` for ``m >= 1``.
    Results are cached; the cache is guarded by a lock.
    """
    if m < 0:
        raise ValueError(f"Bernoulli index must be non-negative, got {m}")
    with _bernoulli_lock:
        cache = _bernoulli_cache
        for k in range(len(cache), m + 1):
            acc = sum((comb(k + 1, j) * cache[j] for j in range(k)), Fraction(0))
            cache.append(-acc / (k + 1))
        return cache[m]


def format_rational(q: Fraction | int) -> str:
    """Serialise as ``"p/q"``, or ``"p"`` when the denominator is one."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def solve_rational(
    matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> list[Fraction] | None:
    """Solve ``matrix @ x = rhs`` exactly.

    Returns the unique solution, or ``None`` when the system is inconsistent
    or under-determined.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if any(all(v == 0 for v in row[:-1]) and row[-1] != 0 for row in aug):
        return None
    if len(pivots) < cols:
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][-1]
    return x
