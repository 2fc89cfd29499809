"""Free Lie algebra on the graded alphabet ``a_1 < a_2 < ...`` with ``|a_i| = i``.

Elements are stored in the Lyndon basis (standard bracketing).  Brackets are
computed by expanding into the free associative algebra and peeling off the
lexicographically smallest word, which is always the leading word of a
unique Lyndon basis element.

Also here: the graded pre-Lie product ``x |> y = [x, y] / |x|``, the
homomorphism ``phi`` from decorated trees, the decorated Magnus element, and
the classical Magnus components for a Taylor-expanded ``A(t)``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

from ._combination import Combination, accumulate
from .exact import bernoulli, format_rational
from .magnus import gamma
from .prelie import PreLieElement, psi_bar
from .trees import InvalidOrderError, PlanarTree, Tree, decorate_all, enumerate_e1

__all__ = [
    "GradingError",
    "Word",
    "is_lyndon",
    "standard_factorization",
    "lyndon_words",
    "LieElement",
    "bracket",
    "prelie_on_lie",
    "from_nested",
    "phi",
    "phi_linear",
    "magnus_lie",
    "classical_magnus_midpoint",
    "HSeries",
    "hseries_prelie",
    "hseries_prelie_check",
    "graded_dimension",
    "format_word",
    "format_table",
]

Word = tuple  # tuple of generator indices


class GradingError(ValueError):
    """Raised when a homogeneous element is required."""


def weight(word: Sequence[int]) -> int:
    return sum(word)


def is_lyndon(word: Sequence[int]) -> bool:
    """Strictly smaller than each of its proper rotations."""
    w = tuple(word)
    n = len(w)
    if n == 0:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, n))


@lru_cache(maxsize=None)
def standard_factorization(word: Word) -> tuple[Word, Word]:
    """``w = uv`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise ValueError(f"{word} has no standard factorization")


@lru_cache(maxsize=None)
def _expand(word: Word) -> dict[Word, int]:
    """Associative expansion of the standard bracketing of a Lyndon word."""
    if len(word) == 1:
        return {word: 1}
    u, v = standard_factorization(word)
    pu, pv = _expand(u), _expand(v)
    return _commutator(pu, pv)


def _commutator(p: Mapping[Word, Fraction | int], q: Mapping[Word, Fraction | int]) -> dict:
    acc: dict = {}
    for a, x in p.items():
        for b, y in q.items():
            xy = x * y
            accumulate([(a + b, xy), (b + a, -xy)], acc)
    return acc


def _compositions_weighted(total: int) -> Iterable[Word]:
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions_weighted(total - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def lyndon_words(degree: int) -> tuple[Word, ...]:
    """Lyndon words of the given weighted degree, sorted lexicographically."""
    return tuple(sorted(w for w in _compositions_weighted(degree) if is_lyndon(w)))


def format_word(word: Sequence[int], letter: str = "a") -> str:
    """Nested-bracket text of the standard bracketing, e.g. ``[a1,[a1,a2]]``."""
    word = tuple(word)
    if len(word) == 1:
        return f"{letter}{word[0]}"
    u, v = standard_factorization(word)
    return f"[{format_word(u, letter)},{format_word(v, letter)}]"


class LieElement(Combination):
    """Rational combination of Lyndon words (standard bracketing)."""

    __slots__ = ()

    @classmethod
    def generator(cls, i: int, coeff: Fraction | int = 1) -> "LieElement":
        if i < 1:
            raise ValueError(f"generator index must be >= 1, got {i}")
        return cls({(i,): coeff})

    @classmethod
    def from_associative(cls, poly: Mapping[Word, Fraction | int]) -> "LieElement":
        """Rewrite an associative polynomial that is a Lie element in the Lyndon basis."""
        rest = {w: Fraction(c) for w, c in poly.items() if c}
        out: dict = {}
        while rest:
            w = min(rest)
            if not is_lyndon(w):
                raise ValueError(f"not a Lie polynomial: leading word {w} is not Lyndon")
            c = rest[w]
            out[w] = c
            accumulate(((u, -c * d) for u, d in _expand(w).items()), rest)
        return cls(out)

    def to_associative(self) -> dict[Word, Fraction]:
        acc: dict = {}
        for w, c in self.items():
            accumulate(((u, c * d) for u, d in _expand(w).items()), acc)
        return acc

    def weights(self) -> set[int]:
        return {weight(w) for w in self.keys()}

    def component(self, degree: int) -> "LieElement":
        return LieElement({w: c for w, c in self.items() if weight(w) == degree})

    def homogeneous_degree(self) -> int:
        ws = self.weights()
        if len(ws) != 1:
            raise GradingError(f"element is not homogeneous (degrees {sorted(ws)})")
        return ws.pop()

    def sorted_items(self) -> list[tuple[Word, Fraction]]:
        return sorted(self.items(), key=lambda kv: (weight(kv[0]), len(kv[0]), kv[0]))

    def to_json(
        self, letter: str = "a", with_lambda: bool = False
    ) -> list[dict]:
        out = []
        for w, c in self.sorted_items():
            item: dict = {
                "word": ".".join(f"{letter}{i}" for i in w),
                "bracketing": "lyndon-standard",
                "coeff": format_rational(c),
            }
            if with_lambda:
                powers: dict[str, int] = {}
                for i in w:
                    powers[str(i)] = powers.get(str(i), 0) + 1
                item["lambda"] = dict(sorted(powers.items(), key=lambda kv: int(kv[0])))
            out.append(item)
        return out

    def to_text(self, letter: str = "a") -> str:
        if not self:
            return "0"
        parts = []
        for w, c in self.sorted_items():
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coeff = "" if mag == 1 else f"{format_rational(mag)} "
            parts.append(f"{sign} {coeff}{format_word(w, letter)}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[1:]

    def __repr__(self) -> str:
        return f"LieElement({self.to_text()})"


@lru_cache(maxsize=None)
def _bracket_basis(u: Word, v: Word) -> LieElement:
    return LieElement.from_associative(_commutator(_expand(u), _expand(v)))


def bracket(x: LieElement, y: LieElement) -> LieElement:
    """Lie bracket, rewritten into the Lyndon basis."""
    acc: dict = {}
    for u, a in x.items():
        for v, b in y.items():
            if u == v:
                continue
            ab = a * b
            accumulate(((w, ab * c) for w, c in _bracket_basis(u, v).items()), acc)
    return LieElement(acc)


def prelie_on_lie(x: LieElement, y: LieElement) -> LieElement:
    """``x |> y = [x, y] / |x|`` for homogeneous ``x``."""
    if not x:
        return LieElement()
    return bracket(x, y) * Fraction(1, x.homogeneous_degree())


def from_nested(expr) -> LieElement:
    """Build a Lie element from nested pairs of generator indices.

    ``from_nested((2, (1, 2)))`` is ``[a2, [a1, a2]]``.
    """
    if isinstance(expr, int):
        return LieElement.generator(expr)
    left, right = expr
    return bracket(from_nested(left), from_nested(right))


# ---------------------------------------------------------------------------
# phi: decorated trees -> (L(E), |>)

def _brace(root: LieElement, branches: tuple[LieElement, ...]) -> LieElement:
    """Image of ``B+_root(branches)``, by peeling the last branch.

    ``B(x; y_1..y_n) = y_n |> B(x; y_1..y_{n-1})
                       - sum_i B(x; y_1, .., y_n |> y_i, .., y_{n-1})``
    """
    if not branches:
        return root
    *rest, last = branches
    out = prelie_on_lie(last, _brace(root, tuple(rest)))
    for i, y in enumerate(rest):
        swapped = tuple(rest[:i]) + (prelie_on_lie(last, y),) + tuple(rest[i + 1 :])
        out = out - _brace(root, swapped)
    return out


@lru_cache(maxsize=None)
def _phi(t: Tree) -> LieElement:
    if t.label is None:
        raise ValueError("phi needs every vertex decorated by a generator")
    return _brace(LieElement.generator(t.label), tuple(_phi(c) for c in t.children))


def phi(t: Tree | PlanarTree) -> LieElement:
    """Pre-Lie homomorphism ``(PL(E), ->) -> (L(E), |>)`` with ``o_{a_i} -> a_i``."""
    if isinstance(t, PlanarTree):
        from .trees import canonicalize

        t = canonicalize(t)
    return _phi(t)


def phi_linear(x: PreLieElement) -> LieElement:
    acc: dict = {}
    for t, c in x.items():
        accumulate(((w, c * d) for w, d in _phi(t).items()), acc)
    return LieElement(acc)


@lru_cache(maxsize=None)
def _magnus_lie(n: int) -> LieElement:
    acc: dict = {}
    for m in range(1, n + 1):
        for shape in enumerate_e1(m):
            g = gamma(shape)
            if not g:
                continue
            for sigma in decorate_all(shape, n, n):
                if sigma.weight != n:
                    continue
                img = phi_linear(psi_bar(sigma))
                accumulate(((w, g * c) for w, c in img.items()), acc)
    return LieElement(acc)


def magnus_lie(
    n: int, lambdas: Mapping[int, Fraction | int] | None = None, cap: int = 7
) -> LieElement:
    """Degree-``n`` part of the Magnus element for ``x = sum_i lambda_i a_i``.

    Each basis word's lambda monomial is the product of ``lambda_i`` over its
    letters, so with ``lambdas=None`` the coefficients are those of the
    formal monomials (all ``lambda_i = 1``).  Pass numeric ``lambdas`` to
    specialise.
    """
    if not isinstance(n, int) or n < 1 or n > cap:
        raise InvalidOrderError(f"order must be an integer in [1, {cap}], got {n!r}")
    base = _magnus_lie(n)
    if lambdas is None:
        return base
    out = {}
    for w, c in base.items():
        for i in w:
            c *= Fraction(lambdas.get(i, 0))
        out[w] = c
    return LieElement(out)


# ---------------------------------------------------------------------------
# classical Magnus expansion of a Taylor-expanded A(t)

Poly = tuple  # coefficients of 1, s, s^2, ...


def _pmul(p: Poly, q: Poly) -> Poly:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return tuple(out)


def _peval(p: Poly, s: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * s + c
    return acc


def _pintegrate(p: Poly, lower: Fraction) -> Poly:
    """Antiderivative vanishing at ``lower``."""
    out = [Fraction(0)] + [c / (i + 1) for i, c in enumerate(p)]
    out[0] = -_peval(tuple(out), lower)
    return tuple(out)


def _series_add(acc: dict, x: Mapping[Word, Poly], scale: Fraction = Fraction(1)) -> None:
    for w, p in x.items():
        cur = acc.get(w)
        sp = tuple(c * scale for c in p)
        if cur is None:
            acc[w] = sp
        else:
            n = max(len(cur), len(sp))
            acc[w] = tuple(
                (cur[i] if i < len(cur) else 0) + (sp[i] if i < len(sp) else 0) for i in range(n)
            )


def _series_bracket(x: Mapping[Word, Poly], y: Mapping[Word, Poly], cap: int) -> dict:
    out: dict = {}
    for u, p in x.items():
        wu = weight(u)
        for v, q in y.items():
            if wu + weight(v) > cap:
                continue
            pq = _pmul(p, q)
            _series_add(out, {u + v: pq})
            _series_add(out, {v + u: pq}, Fraction(-1))
    return out


@lru_cache(maxsize=None)
def _classical_tables(degree_cap: int, center: str) -> tuple[LieElement, ...]:
    # s = (t - t_c)/h; q_i = a_{i-1} h^i, so with h = 1 the q-weight carries the h-power
    if center == "midpoint":
        lower, upper = Fraction(-1, 2), Fraction(1, 2)
    elif center == "start":
        lower, upper = Fraction(0), Fraction(1)
    else:
        raise ValueError(f"unknown expansion point {center!r}")
    a_series = {(e + 1,): tuple([Fraction(0)] * e + [Fraction(1)]) for e in range(degree_cap)}
    omega: list[dict] = [{}, {w: _pintegrate(p, lower) for w, p in a_series.items()}]
    s_tab: dict[tuple[int, int], dict] = {}
    for n in range(2, degree_cap + 1):
        s_tab[(n, 1)] = _series_bracket(omega[n - 1], a_series, degree_cap)
        for j in range(2, n):
            acc: dict = {}
            for m in range(1, n - j + 1):
                _series_add(acc, _series_bracket(omega[m], s_tab[(n - m, j - 1)], degree_cap))
            s_tab[(n, j)] = acc
        integrand: dict = {}
        for j in range(1, n):
            b = bernoulli(j) / factorial(j)
            if b:
                _series_add(integrand, s_tab[(n, j)], b)
        omega.append({w: _pintegrate(p, lower) for w, p in integrand.items()})
    tables = []
    for n in range(1, degree_cap + 1):
        values = {w: _peval(p, upper) for w, p in omega[n].items()}
        tables.append(LieElement.from_associative(values))
    return tuple(tables)


def classical_magnus_midpoint(k: int, degree_cap: int, center: str = "midpoint") -> LieElement:
    """Component ``Omega_k`` over one step, in the generators ``q_i = a_{i-1} h^i``.

    ``A(t) = sum_i a_i (t - t_c)^i`` with ``t_c`` the midpoint of the step (or
    its start for ``center="start"``).  Terms of total ``h``-degree above
    ``degree_cap`` are dropped.
    """
    if not isinstance(k, int) or k < 1:
        raise InvalidOrderError(f"component index must be a positive integer, got {k!r}")
    if not isinstance(degree_cap, int) or degree_cap < 1:
        raise InvalidOrderError(f"degree cap must be a positive integer, got {degree_cap!r}")
    if k > degree_cap:
        return LieElement()
    return _classical_tables(degree_cap, center)[k - 1]


def format_table(k: int, element: LieElement, letter: str = "q") -> str:
    """Human-readable ``Omega_k = ...`` line grouped by ``h``-degree."""
    groups = []
    for d in sorted(element.weights()):
        groups.append(element.component(d).to_text(letter))
    body = " + ".join(f"({g})" if len(groups) > 1 else g for g in groups) or "0"
    return f"Omega_{k} = {body}"


# ---------------------------------------------------------------------------
# formal power series in h with Lie-word coefficients

class HSeries(Combination):
    """Combination of ``(word, p)`` keys meaning ``word * h^p``; words are associative.

    The generator ``q_i`` is ``((i,), i)``: the constant symbol ``a_{i-1}``
    times ``h^i``.
    """

    __slots__ = ()

    @classmethod
    def generator(cls, i: int, coeff: Fraction | int = 1) -> "HSeries":
        return cls({((i,), i): coeff})

    @classmethod
    def from_lie(cls, x: LieElement) -> "HSeries":
        return cls({(w, weight(w)): c for w, c in x.to_associative().items()})

    def to_lie(self) -> LieElement:
        if any(p != weight(w) for w, p in self.keys()):
            raise GradingError("h-power does not match word weight")
        return LieElement.from_associative({w: c for (w, _), c in self.items()})

    def truncate(self, max_power: int) -> "HSeries":
        return HSeries({k: c for k, c in self.items() if k[1] <= max_power})


def hseries_bracket(f: HSeries, g: HSeries) -> HSeries:
    acc: dict = {}
    for (u, p), a in f.items():
        for (v, q), b in g.items():
            ab = a * b
            accumulate([((u + v, p + q), ab), ((v + u, p + q), -ab)], acc)
    return HSeries(acc)


def hseries_prelie(f: HSeries, g: HSeries, max_power: int | None = None) -> HSeries:
    """``(f |> g)(h) = [int_0^h f(s)/s ds, g(h)]``."""
    integ = {}
    for (w, p), c in f.items():
        if p < 1:
            raise ValueError("series must lie in h R[[h]]")
        integ[(w, p)] = c / p
    out = hseries_bracket(HSeries(integ), g)
    return out if max_power is None else out.truncate(max_power)


def hseries_prelie_check(
    f: HSeries, g: HSeries, h: HSeries, max_power: int | None = None
) -> HSeries:
    """Pre-Lie associator ``(f|>g)|>h - f|>(g|>h) - (g|>f)|>h + g|>(f|>h)``."""
    p = lambda x, y: hseries_prelie(x, y, max_power)  # noqa: E731
    return p(p(f, g), h) - p(f, p(g, h)) - p(p(g, f), h) + p(g, p(f, h))


def graded_dimension(max_degree: int) -> tuple[dict[int, int], dict[int, int]]:
    """Per-degree and cumulative counts of Lyndon basis elements."""
    per = {d: len(lyndon_words(d)) for d in range(1, max_degree + 1)}
    cumulative = dict(zip(per, itertools.accumulate(per.values())))
    return per, cumulative
