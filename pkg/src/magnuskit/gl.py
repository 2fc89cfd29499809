"""Grossman-Larson algebra of non-planar forests.

For forests ``F = t_1...t_n`` and ``G = s_1...s_m``::

    F * G = sum over f: {1..m} -> {0..n} of  G_0 (G_1 -> t_1) ... (G_n -> t_n)

where ``G_i`` collects the ``s_j`` sent to ``i``.  Forests act on trees so that
``(F * G) -> t = G -> (F -> t)``.  The action of a forest with two or more
trees is obtained by peeling one tree ``s`` off ``s.G``::

    (s.G) -> t = G -> (s -> t) - sum_{G_1 != {}} (G_0 . (G_1 -> s)) -> t

which follows from ``s * G = sum_{G_0 + G_1 = G} G_0 . (G_1 -> s)``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

from ._combination import Combination, accumulate
from .magnus import _check
from .prelie import PreLieElement, graft
from .trees import DOT, Tree

__all__ = [
    "Forest",
    "GLElement",
    "gl_product",
    "gl_action",
    "gl_action_linear",
    "exp_dot",
    "log_star_component",
]


class Forest:
    """Commutative product of non-planar trees; the empty forest is the unit."""

    __slots__ = ("trees", "key", "_hash")

    def __init__(self, trees: Iterable[Tree] = ()):
        self.trees = tuple(sorted(trees, key=lambda t: t.key))
        self.key = "|".join(t.key for t in self.trees) if self.trees else "1"
        self._hash = hash(("Forest", self.key))

    @property
    def weight(self) -> int:
        return len(self.trees)

    @property
    def degree(self) -> int:
        return sum(t.size for t in self.trees)

    def __mul__(self, other: "Forest") -> "Forest":
        return Forest(self.trees + other.trees)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Forest) and other.key == self.key

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return self.key

    def __repr__(self) -> str:
        return f"Forest({self.key!r})"


UNIT = Forest()


class GLElement(Combination):
    __slots__ = ()

    @classmethod
    def forest(cls, trees: Iterable[Tree], coeff: Fraction | int = 1) -> "GLElement":
        return cls({Forest(trees): coeff})

    def truncate(self, max_degree: int) -> "GLElement":
        return GLElement({f: c for f, c in self.items() if f.degree <= max_degree})

    def component(self, degree: int) -> "GLElement":
        return GLElement({f: c for f, c in self.items() if f.degree == degree})


def _forests_of(parts: Sequence[PreLieElement]) -> dict[Forest, Fraction]:
    """Expand the commutative product of the given tree combinations."""
    acc: dict = {}
    for choice in itertools.product(*(list(p.items()) for p in parts)):
        coeff = Fraction(1)
        for _, c in choice:
            coeff *= c
        accumulate([(Forest(t for t, _ in choice), coeff)], acc)
    return acc


@lru_cache(maxsize=None)
def _action(forest: Forest, t: Tree, peel: int = 0) -> PreLieElement:
    trees = forest.trees
    if not trees:
        return PreLieElement.tree(t)
    if len(trees) == 1:
        return graft(trees[0], t)
    s = trees[peel]
    rest = trees[:peel] + trees[peel + 1 :]
    out = gl_action_linear(Forest(rest), graft(s, t))
    acc: dict = dict(out.items())
    # subtract sum over non-empty sub-multisets G_1 (by position) of (G_0 . (G_1 -> s)) -> t
    idx = range(len(rest))
    for r in range(1, len(rest) + 1):
        for picked in itertools.combinations(idx, r):
            g1 = Forest(rest[i] for i in picked)
            g0 = [rest[i] for i in idx if i not in picked]
            onto_s = _action(g1, s)
            for sp, c in onto_s.items():
                inner = _action(Forest(g0 + [sp]), t)
                accumulate(((u, -c * d) for u, d in inner.items()), acc)
    return PreLieElement(acc)


def gl_action(forest: Forest, t: Tree, peel: int = 0) -> PreLieElement:
    """``F -> t`` for a forest ``F`` acting on a tree ``t``.

    ``peel`` selects which tree of ``F`` (in canonical order) the top-level
    recursion removes first; the result does not depend on it.
    """
    if forest.trees and not 0 <= peel < len(forest.trees):
        raise IndexError(f"peel index {peel} out of range for {forest}")
    return _action(forest, t, peel if len(forest.trees) > 1 else 0)


def gl_action_linear(forest: Forest | GLElement, x: PreLieElement) -> PreLieElement:
    """Linear extension of :func:`gl_action` in both arguments."""
    acc: dict = {}
    pairs = [(forest, Fraction(1))] if isinstance(forest, Forest) else list(forest.items())
    for f, a in pairs:
        for t, b in x.items():
            ab = a * b
            accumulate(((u, ab * c) for u, c in _action(f, t).items()), acc)
    return PreLieElement(acc)


@lru_cache(maxsize=None)
def _forest_product(left: Forest, right: Forest) -> GLElement:
    n = left.weight
    acc: dict = {}
    for f in itertools.product(range(n + 1), repeat=right.weight):
        groups: list[list[Tree]] = [[] for _ in range(n + 1)]
        for j, target in enumerate(f):
            groups[target].append(right.trees[j])
        parts = [PreLieElement.tree(s) for s in groups[0]]
        parts += [_action(Forest(groups[i + 1]), left.trees[i]) for i in range(n)]
        accumulate(_forests_of(parts).items(), acc)
    return GLElement(acc)


def gl_product(x: GLElement, y: GLElement, max_degree: int | None = None) -> GLElement:
    """Grossman-Larson product, optionally dropping forests above ``max_degree``."""
    acc: dict = {}
    for f, a in x.items():
        for g, b in y.items():
            if max_degree is not None and f.degree + g.degree > max_degree:
                continue
            ab = a * b
            accumulate(((h, ab * c) for h, c in _forest_product(f, g).items()), acc)
    return GLElement(acc)


def exp_dot(max_degree: int) -> GLElement:
    """``exp(o) = sum_k o^k / k!`` (forests of one-vertex trees), truncated."""
    return GLElement({Forest([DOT] * k): Fraction(1, factorial(k)) for k in range(max_degree + 1)})


@lru_cache(maxsize=None)
def _log_star(n: int) -> PreLieElement:
    top = n - 1
    e_minus_1 = exp_dot(top) - GLElement.basis(UNIT)
    power = GLElement.basis(UNIT)
    total: dict = {}
    for j in range(0, n):
        if j:
            power = gl_product(power, e_minus_1, max_degree=top)
        weight = Fraction((-1) ** j, j + 1)
        for f, c in power.component(top).items():
            # a forest acting on the single vertex is B+ of that forest
            accumulate([(Tree(f.trees), weight * c)], total)
    return PreLieElement(total)


def log_star_component(n: int) -> PreLieElement:
    """Degree-``n`` part of ``sum_k (-1)^(k-1)/k (exp(o) - 1)^{*(k-1)} -> o``."""
    _check(n)
    return _log_star(n)
