"""The pre-Lie Magnus element in the free pre-Lie algebra on one generator.

Two independent constructions are provided:

* :func:`magnus_theorem4` sums ``gamma(tau) * psi_bar(tau)`` over planar
  trees whose vertices all have fertility 0, 1 or an even number;
* :func:`magnus_recursion` runs the Bernoulli recursion
  ``W_n = sum_j B_j/j! sum_{k_1+..+k_j=n-1} W_{k_1} -> (... -> (W_{k_j} -> o))``
  directly on grafting.

A third, the Grossman-Larson logarithm, lives in :mod:`magnuskit.gl`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from .exact import bernoulli, format_rational, solve_rational
from .prelie import PreLieElement, graft_linear, psi_bar
from .trees import DOT, InvalidOrderError, PlanarTree, enumerate_e1, parse_planar

__all__ = [
    "MAX_ORDER",
    "MagnusTermTable",
    "TermCounts",
    "TableExhaustedError",
    "gamma",
    "tree_functional",
    "magnus_theorem4",
    "magnus_recursion",
    "term_counts",
    "REMOVABLE_TERMS",
    "ORDER4_REDUCED",
    "reduced_form_value",
    "identify_reduced_form",
]

# Enumeration of e1-trees is exhaustive; beyond order 9 it is out of scope.
MAX_ORDER = 9

# Number of e_tau terms that the pre-Lie identity removes at each order.
REMOVABLE_TERMS = {1: 0, 2: 0, 3: 0, 4: 2, 5: 3, 6: 11, 7: 23}


class TableExhaustedError(LookupError):
    """No recorded removal count for this order.

    ``partial`` holds the :class:`TermCounts` with the computable fields set.
    """

    def __init__(self, message: str, partial: "TermCounts"):
        super().__init__(message)
        self.partial = partial


def _check(n: int, cap: int = MAX_ORDER) -> None:
    if not isinstance(n, int) or n < 1 or n > cap:
        raise InvalidOrderError(f"order must be an integer in [1, {cap}], got {n!r}")


def gamma(t: PlanarTree) -> Fraction:
    """Product over vertices of ``B_f / f!`` with ``f`` the fertility."""
    out = Fraction(1)
    for f in t.fertilities():
        out *= bernoulli(f) / factorial(f)
        if not out:
            break
    return out


def tree_functional(t: PlanarTree, arg: PreLieElement) -> PreLieElement:
    """``F[B+(t_1..t_k)](x) = F[t_1](x) -> (F[t_2](x) -> (... -> (F[t_k](x) -> x)))``."""
    acc = arg
    for child in reversed(t.children):
        acc = graft_linear(tree_functional(child, arg), acc)
    return acc


@dataclass(frozen=True)
class MagnusTermTable:
    order: int
    planar_terms: dict[PlanarTree, Fraction]
    nonplanar: PreLieElement

    def to_json(self) -> dict:
        planar = [
            {"elem": t.key, "coeff": format_rational(c)}
            for t, c in sorted(self.planar_terms.items(), key=lambda kv: kv[0].key)
        ]
        return {"order": self.order, "planar": planar, "nonplanar": self.nonplanar.to_json()}


@lru_cache(maxsize=None)
def magnus_theorem4(n: int) -> MagnusTermTable:
    """Degree-``n`` part of the Magnus element as a sum over e1-trees."""
    _check(n)
    planar = {}
    for t in enumerate_e1(n):
        g = gamma(t)
        if g:
            planar[t] = g
    nonplanar = PreLieElement.sum(g * psi_bar(t) for t, g in planar.items())
    return MagnusTermTable(n, planar, nonplanar)


@lru_cache(maxsize=None)
def _recursion_table(n: int) -> tuple[PreLieElement, ...]:
    """Magnus components W_1..W_n by the Bernoulli recursion."""
    dot = PreLieElement.tree(DOT)
    omega: list[PreLieElement] = [PreLieElement(), dot]
    # nested[j][m] = sum over k_1+..+k_j = m of W_{k_1} -> (... -> (W_{k_j} -> o))
    nested: list[list[PreLieElement]] = [[dot] + [PreLieElement()] * n]
    for order in range(2, n + 1):
        m = order - 1
        # extend nested tables to total m using the newly known W_{m}
        for j in range(1, m + 1):
            if len(nested) <= j:
                nested.append([PreLieElement()] * (n + 1))
            row = nested[j]
            row[m] = PreLieElement.sum(
                graft_linear(omega[k], nested[j - 1][m - k]) for k in range(1, m - j + 2)
            )
        omega.append(
            PreLieElement.sum(
                (bernoulli(j) / factorial(j)) * nested[j][m] for j in range(1, m + 1)
            )
        )
    return tuple(omega)


def magnus_recursion(n: int) -> PreLieElement:
    """Degree-``n`` Magnus component by direct recursion in the free pre-Lie algebra."""
    _check(n)
    return _recursion_table(n)[n]


@dataclass(frozen=True)
class TermCounts:
    e1_count: int
    nonplanar_support: int
    reduced_count: int | None = None

    def to_json(self) -> dict:
        return {
            "e1_count": self.e1_count,
            "nonplanar_support": self.nonplanar_support,
            "reduced_count": self.reduced_count,
        }


def term_counts(n: int) -> TermCounts:
    """Term bookkeeping at order ``n``.

    ``reduced_count`` is the e1 count minus the recorded number of removable
    terms; beyond order 7 no count is known and :class:`TableExhaustedError`
    is raised with the other fields filled in.
    """
    table = magnus_theorem4(n)
    e1 = len(enumerate_e1(n))
    support = len(table.nonplanar)
    if n not in REMOVABLE_TERMS:
        raise TableExhaustedError(
            f"no removable-term count recorded for order {n}",
            TermCounts(e1, support, None),
        )
    return TermCounts(e1, support, e1 - REMOVABLE_TERMS[n])


# -(1/6) ((x>x)>x)>x - (1/12) x>((x>x)>x)
ORDER4_REDUCED: dict[PlanarTree, Fraction] = {
    parse_planar("o(o(o(o)))"): Fraction(-1, 6),
    parse_planar("o(o,o(o))"): Fraction(-1, 12),
}


def reduced_form_value(form: dict[PlanarTree, Fraction]) -> PreLieElement:
    """Expand ``sum c_tau e_tau`` with ``e_tau = psi_bar(tau)``."""
    return PreLieElement.sum(c * psi_bar(t) for t, c in form.items())


def identify_reduced_form(
    n: int, coefficients: Sequence[Fraction], target: PreLieElement | None = None
) -> list[dict[PlanarTree, Fraction]]:
    """Find e1-trees carrying ``coefficients`` such that the form equals ``target``.

    For every choice of ``len(coefficients)`` distinct e1-trees of degree
    ``n`` the exact linear system ``sum x_tau psi_bar(tau) = target`` is
    solved; a choice matches when its unique solution is a permutation of
    ``coefficients``.  ``target`` defaults to the degree-``n`` Magnus element.
    """
    if target is None:
        target = magnus_recursion(n)
    trees = enumerate_e1(n)
    images = [psi_bar(t) for t in trees]
    basis = sorted(set(target.keys()).union(*(im.keys() for im in images)), key=lambda s: s.key)
    rhs = [target.coefficient(s) for s in basis]
    wanted = sorted(Fraction(c) for c in coefficients)
    matches = []
    for chosen in itertools.combinations(range(len(trees)), len(wanted)):
        matrix = [[images[j].coefficient(s) for j in chosen] for s in basis]
        sol = solve_rational(matrix, rhs)
        if sol is not None and sorted(sol) == wanted:
            matches.append({trees[j]: x for j, x in zip(chosen, sol)})
    return matches
