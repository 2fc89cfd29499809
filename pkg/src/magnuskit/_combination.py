from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, TypeVar

from .exact import format_rational

K = TypeVar("K", bound=Hashable)
C = TypeVar("C", bound="Combination")


def accumulate(pairs: Iterable[tuple[Any, Fraction | int]], into: dict | None = None) -> dict:
    """Sum ``(key, coeff)`` pairs into a dict, dropping zero coefficients."""
    acc: dict = {} if into is None else into
    for k, c in pairs:
        if not c:
            continue
        v = acc.get(k, 0) + c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


class Combination:
    """Immutable finite rational linear combination of hashable basis keys.

    Zero coefficients are never stored, so equality is plain dict equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable[tuple[Any, Fraction | int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc = accumulate((k, Fraction(c)) for k, c in items)
        self._terms = acc
        self._hash = None

    @classmethod
    def basis(cls: type[C], key: Any, coeff: Fraction | int = 1) -> C:
        return cls({key: coeff})

    @classmethod
    def zero(cls: type[C]) -> C:
        return cls()

    def items(self) -> Iterator[tuple[Any, Fraction]]:
        return iter(self._terms.items())

    def keys(self):
        return self._terms.keys()

    def coefficient(self, key: Any) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def __getitem__(self, key: Any) -> Fraction:
        return self.coefficient(key)

    def __contains__(self, key: Any) -> bool:
        return key in self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self._terms
        return type(other) is type(self) and other._terms == self._terms  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self: C, other: C) -> C:
        acc = dict(self._terms)
        accumulate(other._terms.items(), acc)
        return type(self)(acc)

    def __sub__(self: C, other: C) -> C:
        acc = dict(self._terms)
        accumulate(((k, -c) for k, c in other._terms.items()), acc)
        return type(self)(acc)

    def __neg__(self: C) -> C:
        return type(self)({k: -c for k, c in self._terms.items()})

    def __mul__(self: C, scalar: Fraction | int) -> C:
        if isinstance(scalar, Combination):
            return NotImplemented
        return type(self)({k: c * scalar for k, c in self._terms.items()})

    __rmul__ = __mul__

    def map_keys(self: C, fn: Callable[[Any], Any]) -> C:
        return type(self)(((fn(k), c) for k, c in self._terms.items()))

    @classmethod
    def sum(cls: type[C], parts: Iterable["Combination"]) -> C:
        acc: dict = {}
        for p in parts:
            accumulate(p._terms.items(), acc)
        return cls(acc)

    def sorted_items(self) -> list[tuple[Any, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: str(kv[0]))

    def to_json(self) -> list[dict[str, str]]:
        return [{"elem": str(k), "coeff": format_rational(c)} for k, c in self.sorted_items()]

    def __repr__(self) -> str:
        if not self._terms:
            return f"{type(self).__name__}(0)"
        body = " + ".join(f"{format_rational(c)}*{k}" for k, c in self.sorted_items())
        return f"{type(self).__name__}({body})"
