"""The free pre-Lie algebra on non-planar rooted trees, with grafting.

``graft(s, t)`` attaches ``s`` by a new edge to each vertex of ``t`` in turn
and sums the results.  This is a left pre-Lie product:
``(x->y)->z - x->(y->z)`` is symmetric in ``x`` and ``y``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ._combination import Combination, accumulate
from .trees import PlanarTree, Tree, canonicalize

__all__ = [
    "PreLieElement",
    "graft",
    "graft_linear",
    "psi_bar",
    "alpha",
    "prelie_associator_check",
]


class PreLieElement(Combination):
    """Finite rational combination of (possibly decorated) non-planar trees."""

    __slots__ = ()

    @classmethod
    def tree(cls, t: Tree | PlanarTree, coeff: Fraction | int = 1) -> "PreLieElement":
        return cls({canonicalize(t): coeff})

    def degrees(self) -> set[int]:
        return {t.size for t in self.keys()}

    def weights(self) -> set[int]:
        return {t.weight for t in self.keys()}

    def component(self, degree: int) -> "PreLieElement":
        """Terms whose trees have ``degree`` vertices."""
        return PreLieElement({t: c for t, c in self.items() if t.size == degree})


@lru_cache(maxsize=None)
def _graft_all(s: Tree, t: Tree) -> tuple[Tree, ...]:
    out = [Tree(t.children + (s,), t.label)]
    for i, child in enumerate(t.children):
        rest = t.children[:i] + t.children[i + 1 :]
        for g in _graft_all(s, child):
            out.append(Tree(rest + (g,), t.label))
    return tuple(out)


def graft(s: Tree, t: Tree) -> PreLieElement:
    """``s -> t``: sum over vertices ``v`` of ``t`` of ``s`` attached at ``v``."""
    return PreLieElement((g, 1) for g in _graft_all(s, t))


def graft_linear(x: PreLieElement, y: PreLieElement) -> PreLieElement:
    """Bilinear extension of :func:`graft`."""
    acc: dict = {}
    for s, a in x.items():
        for t, b in y.items():
            ab = a * b
            accumulate(((g, ab) for g in _graft_all(s, t)), acc)
    return PreLieElement(acc)


@lru_cache(maxsize=None)
def _psi_bar(t: PlanarTree) -> PreLieElement:
    if not t.children:
        return PreLieElement.tree(Tree((), t.label))
    # t = t_1 o\ B+(t_2 ... t_k)
    head, rest = t.children[0], PlanarTree(t.children[1:], t.label)
    return graft_linear(_psi_bar(head), _psi_bar(rest))


def psi_bar(t: PlanarTree) -> PreLieElement:
    """Replace every left Butcher product in ``t`` by grafting."""
    return _psi_bar(t)


def alpha(s: Tree, t: PlanarTree) -> Fraction:
    """Coefficient of the non-planar tree ``s`` in ``psi_bar(t)``."""
    return psi_bar(t).coefficient(canonicalize(s))


def prelie_associator_check(
    x: PreLieElement, y: PreLieElement, z: PreLieElement
) -> PreLieElement:
    """``(x->y)->z - x->(y->z) - (y->x)->z + y->(x->z)``; zero for a pre-Lie product."""
    g = graft_linear
    return g(g(x, y), z) - g(x, g(y, z)) - g(g(y, x), z) + g(y, g(x, z))
