"""Rooted trees: planar (ordered) and non-planar (canonical), optionally decorated.

A vertex carries either no decoration (``label is None``) or a generator
index ``i >= 1`` standing for ``a_i`` of degree ``i``.

Serialization grammar: an undecorated vertex is ``o``, a decorated one is
``a<i>``; children follow in parentheses, comma separated, and the
parentheses are omitted for a leaf.  Non-planar trees keep their children
sorted by serialization, so two :class:`Tree` objects are equal iff their
strings are equal.
"""
from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

__all__ = [
    "InvalidOrderError",
    "PlanarTree",
    "Tree",
    "b_plus",
    "left_butcher",
    "canonicalize",
    "as_planar",
    "enumerate_planar",
    "enumerate_e1",
    "enumerate_trees",
    "decorate_all",
    "is_e1",
    "ladder",
    "parse_tree",
    "parse_planar",
    "DOT",
]


class InvalidOrderError(ValueError):
    """Raised for a non-positive (or out-of-range) expansion order."""


def _label_str(label: int | None) -> str:
    return "o" if label is None else f"a{label}"


class _Rooted:
    __slots__ = ("label", "children", "key", "size", "weight", "_hash")

    label: int | None
    children: tuple

    def _finish(self) -> None:
        head = _label_str(self.label)
        if self.children:
            self.key = head + "(" + ",".join(c.key for c in self.children) + ")"
        else:
            self.key = head
        self.size = 1 + sum(c.size for c in self.children)
        own = 1 if self.label is None else self.label
        self.weight = own + sum(c.weight for c in self.children)
        self._hash = hash((type(self).__name__, self.key))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return type(other) is type(self) and other.key == self.key  # type: ignore[attr-defined]

    def __lt__(self, other: "_Rooted") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.key!r})"

    def __str__(self) -> str:
        return self.key

    @property
    def degree(self) -> int:
        """Number of vertices."""
        return self.size

    @property
    def decorated_degree(self) -> int:
        """Sum of generator degrees; an undecorated vertex counts as one."""
        return self.weight

    @property
    def fertility(self) -> int:
        return len(self.children)

    def vertices(self) -> Iterator["_Rooted"]:
        """Subtrees rooted at each vertex, pre-order."""
        yield self
        for c in self.children:
            yield from c.vertices()

    def fertilities(self) -> list[int]:
        return [v.fertility for v in self.vertices()]

    def labels(self) -> list[int | None]:
        return [v.label for v in self.vertices()]


class PlanarTree(_Rooted):
    """Ordered rooted tree; the order of children is significant."""

    __slots__ = ()

    def __init__(self, children: Iterable["PlanarTree"] = (), label: int | None = None):
        self.label = label
        self.children = tuple(children)
        self._finish()


class Tree(_Rooted):
    """Non-planar rooted tree with children kept in canonical order."""

    __slots__ = ()

    def __init__(self, children: Iterable["Tree"] = (), label: int | None = None):
        self.label = label
        self.children = tuple(sorted(children, key=lambda c: c.key))
        self._finish()

    def relabel(self, label: int | None) -> "Tree":
        return Tree(self.children, label)


DOT = Tree()


def b_plus(children: Sequence[PlanarTree] = (), label: int | None = None) -> PlanarTree:
    """Join ``children`` (in order) to a new root."""
    return PlanarTree(children, label)


def left_butcher(t1: PlanarTree, t2: PlanarTree) -> PlanarTree:
    """Graft ``t1`` onto the root of ``t2`` as its new leftmost branch."""
    return PlanarTree((t1,) + t2.children, t2.label)


def canonicalize(t: _Rooted) -> Tree:
    """Forget the planar order (identity on non-planar trees)."""
    if isinstance(t, Tree):
        return t
    return Tree((canonicalize(c) for c in t.children), t.label)


def as_planar(t: _Rooted) -> PlanarTree:
    """Embed a tree as a planar tree with its current child order."""
    if isinstance(t, PlanarTree):
        return t
    return PlanarTree((as_planar(c) for c in t.children), t.label)


def ladder(n: int, label: int | None = None) -> PlanarTree:
    if n < 1:
        raise InvalidOrderError(f"ladder needs at least one vertex, got {n}")
    t = PlanarTree((), label)
    for _ in range(n - 1):
        t = PlanarTree((t,), label)
    return t


def _compositions(total: int) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _planar(n: int) -> tuple[PlanarTree, ...]:
    out = []
    for comp in _compositions(n - 1):
        for kids in itertools.product(*(_planar(k) for k in comp)):
            out.append(PlanarTree(kids))
    return tuple(sorted(out, key=lambda t: t.key))


def _check_order(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidOrderError(f"order must be a positive integer, got {n!r}")


def enumerate_planar(n: int) -> list[PlanarTree]:
    """All undecorated planar rooted trees with ``n`` vertices (Catalan(n-1))."""
    _check_order(n)
    return list(_planar(n))


def is_e1(t: _Rooted) -> bool:
    """True when no vertex has odd fertility greater than one."""
    return all(f <= 1 or f % 2 == 0 for f in t.fertilities())


def enumerate_e1(n: int) -> list[PlanarTree]:
    """Planar trees of degree ``n`` whose fertilities are all 0, 1 or even."""
    return [t for t in enumerate_planar(n) if is_e1(t)]


def enumerate_trees(n: int) -> list[Tree]:
    """All undecorated non-planar rooted trees with ``n`` vertices."""
    return sorted({canonicalize(t) for t in enumerate_planar(n)}, key=lambda t: t.key)


def _decorate(t: PlanarTree, choices: Iterator[int]) -> PlanarTree:
    label = next(choices)
    kids = [_decorate(c, choices) for c in t.children]
    return PlanarTree(kids, label)


def decorate_all(t: PlanarTree, e_max: int, degree_cap: int) -> list[PlanarTree]:
    """Every decoration of ``t`` by ``a_1..a_{e_max}`` of total degree <= ``degree_cap``.

    Existing labels are overwritten; vertices are decorated in pre-order.
    """
    n = t.size
    out = []
    for labels in itertools.product(range(1, e_max + 1), repeat=n):
        if sum(labels) <= degree_cap:
            out.append(_decorate(t, iter(labels)))
    return out


_TOKEN = re.compile(r"\s*(o|a\d+|\(|\)|,)")


def _parse(text: str, cls: type) -> _Rooted:
    tokens = _TOKEN.findall(text)
    if "".join(tokens) != re.sub(r"\s+", "", text):
        raise ValueError(f"cannot parse tree {text!r}")
    pos = 0

    def node() -> _Rooted:
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == "o":
            label = None
        elif tok.startswith("a"):
            label = int(tok[1:])
        else:
            raise ValueError(f"unexpected token {tok!r} in {text!r}")
        kids = []
        if pos < len(tokens) and tokens[pos] == "(":
            pos += 1
            kids.append(node())
            while tokens[pos] == ",":
                pos += 1
                kids.append(node())
            if tokens[pos] != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            pos += 1
        return cls(kids, label)

    try:
        result = node()
    except IndexError:
        raise ValueError(f"unexpected end of input in {text!r}") from None
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return result


def parse_tree(text: str) -> Tree:
    """Parse a serialized tree into a non-planar :class:`Tree`."""
    return _parse(text, Tree)  # type: ignore[return-value]


def parse_planar(text: str) -> PlanarTree:
    return _parse(text, PlanarTree)  # type: ignore[return-value]
