from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from magnuskit.exact import bernoulli, format_rational, parse_rational, solve_rational


@pytest.mark.parametrize(
    "m, value",
    [(0, 1), (1, Fraction(-1, 2)), (2, Fraction(1, 6)), (3, 0), (4, Fraction(-1, 30))],
)
def test_bernoulli_small(m, value):
    assert bernoulli(m) == value


def test_bernoulli_series_inverts_exponential_series():
    # z/(e^z - 1) * (e^z - 1)/z = 1, coefficient by coefficient
    n = 16
    b = [bernoulli(k) / factorial(k) for k in range(n)]
    e = [Fraction(1, factorial(k + 1)) for k in range(n)]
    for m in range(n):
        total = sum(b[k] * e[m - k] for k in range(m + 1))
        assert total == (1 if m == 0 else 0)


def test_odd_bernoulli_vanish():
    assert all(bernoulli(2 * k + 1) == 0 for k in range(1, 12))


def test_even_bernoulli_alternate_in_sign():
    signs = [bernoulli(2 * k) > 0 for k in range(1, 10)]
    assert signs == [k % 2 == 1 for k in range(1, 10)]


def test_bernoulli_rejects_negative():
    with pytest.raises(ValueError):
        bernoulli(-1)


@given(st.fractions(max_denominator=10**6))
def test_format_roundtrip(q):
    text = format_rational(q)
    assert parse_rational(text) == q
    assert "/" not in text or not text.endswith("/1")


def test_format_normalises():
    assert format_rational(Fraction(2, -4)) == "-1/2"
    assert format_rational(Fraction(0, 5)) == "0"
    assert format_rational(3) == "3"


def test_solve_rational_unique():
    A = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)], [Fraction(3), Fraction(4)]]
    x = [Fraction(1, 3), Fraction(-2, 7)]
    b = [sum(a * v for a, v in zip(row, x)) for row in A]
    assert solve_rational(A, b) == x


def test_solve_rational_inconsistent_and_singular():
    assert solve_rational([[1, 0], [1, 0]], [1, 2]) is None
    assert solve_rational([[1, 1], [2, 2]], [1, 2]) is None
