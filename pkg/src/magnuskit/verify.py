"""Cross-route and golden-table checks shared by the ``verify`` command.

Each check is run for orders ``1..max_order`` (or the part of its table that
fits under that cap) and reports ``(name, order, ok, detail)``.  Checks stop
at the first failure so the report names the first violated invariant.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .freelie import (
    LieElement,
    classical_magnus_midpoint,
    from_nested,
    graded_dimension,
    lyndon_words,
    magnus_lie,
    prelie_on_lie,
)
from .gl import Forest, GLElement, gl_action, gl_product, log_star_component
from .magnus import (
    ORDER4_REDUCED,
    gamma,
    identify_reduced_form,
    magnus_recursion,
    magnus_theorem4,
    reduced_form_value,
)
from .prelie import PreLieElement, prelie_associator_check
from .trees import enumerate_e1, enumerate_planar, enumerate_trees, ladder, parse_tree

__all__ = [
    "CheckResult",
    "E1_COUNTS",
    "CLASSICAL_TABLES",
    "PRELIE_TABLES",
    "ORDER5_REDUCED_COEFFS",
    "run_checks",
]

F = Fraction

# number of planar e1-trees with n vertices, n = 1..9
E1_COUNTS = (1, 1, 2, 4, 10, 26, 73, 211, 630)

# coefficients of the reduced order-5 form; the last one is B_4/4!
ORDER5_REDUCED_COEFFS = (F(5, 48), F(1, 48), F(1, 24), F(1, 48), F(1, 144), F(1, 144), F(-1, 720))

# Omega_k in bracket form over q_1, q_2, ...; nested pairs are commutators
CLASSICAL_TABLES: dict[int, list[tuple[object, Fraction]]] = {
    1: [(1, F(1)), (3, F(1, 12)), (5, F(1, 80)), (7, F(1, 448))],
    2: [
        ((1, 2), F(-1, 12)), ((1, 4), F(-1, 80)), ((2, 3), F(1, 240)),
        ((1, 6), F(-1, 448)), ((2, 5), F(1, 2240)), ((3, 4), F(-1, 1344)),
    ],
    3: [
        ((1, (1, 3)), F(1, 360)), ((2, (1, 2)), F(-1, 240)), ((1, (1, 5)), F(1, 1680)),
        ((1, (2, 4)), F(-1, 2240)), ((2, (2, 3)), F(1, 6720)), ((3, (1, 3)), F(1, 6048)),
        ((4, (1, 2)), F(-1, 840)),
    ],
    4: [
        ((1, (1, (1, 2))), F(1, 720)), ((1, (1, (1, 4))), F(1, 6720)),
        ((1, (1, (2, 3))), F(-1, 7560)), ((1, (3, (1, 2))), F(1, 4032)),
        ((2, (1, (1, 3))), F(11, 60480)), ((2, (2, (1, 2))), F(-1, 6720)),
    ],
    5: [
        ((1, (1, (1, (1, 3)))), F(-1, 15120)), ((1, (1, (2, (1, 2)))), F(-1, 30240)),
        ((2, (1, (1, (1, 2)))), F(1, 7560)),
    ],
    6: [((1, (1, (1, (1, (1, 2))))), F(-1, 30240))],
}

# the same components written with q_i |> q_j = [q_i, q_j] / i
PRELIE_TABLES: dict[int, list[tuple[object, Fraction]]] = {
    1: CLASSICAL_TABLES[1],
    2: [
        ((1, 2), F(-1, 12)), ((1, 4), F(-1, 80)), ((2, 3), F(1, 120)),
        ((1, 6), F(-1, 448)), ((2, 5), F(1, 1120)), ((3, 4), F(-1, 448)),
    ],
    3: [
        ((1, (1, 3)), F(1, 360)), ((2, (1, 2)), F(-1, 120)), ((1, (1, 5)), F(1, 1680)),
        ((1, (2, 4)), F(-1, 1120)), ((2, (2, 3)), F(1, 1680)), ((3, (1, 3)), F(1, 2016)),
        ((4, (1, 2)), F(-1, 210)),
    ],
    4: [
        ((1, (1, (1, 2))), F(1, 720)), ((1, (1, (1, 4))), F(1, 6720)),
        ((1, (1, (2, 3))), F(-1, 3780)), ((1, (3, (1, 2))), F(1, 1344)),
        ((2, (1, (1, 3))), F(11, 30240)), ((2, (2, (1, 2))), F(-1, 1680)),
    ],
    5: [
        ((1, (1, (1, (1, 3)))), F(-1, 15120)), ((1, (1, (2, (1, 2)))), F(-1, 15120)),
        ((2, (1, (1, (1, 2)))), F(1, 3780)),
    ],
    6: [((1, (1, (1, (1, (1, 2))))), F(-1, 30240))],
}


def nested_weight(expr) -> int:
    if isinstance(expr, int):
        return expr
    return nested_weight(expr[0]) + nested_weight(expr[1])


def from_prelie_nested(expr) -> LieElement:
    """Evaluate nested pairs with ``(x, y)`` read as ``x |> y``."""
    if isinstance(expr, int):
        return LieElement.generator(expr)
    return prelie_on_lie(from_prelie_nested(expr[0]), from_prelie_nested(expr[1]))


def table_element(
    terms: list[tuple[object, Fraction]], max_weight: int, reader: Callable = from_nested
) -> LieElement:
    return LieElement.sum(
        c * reader(e) for e, c in terms if nested_weight(e) <= max_weight
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    order: int
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "order": self.order, "status": "pass" if self.ok else "fail"}
        if self.detail:
            out["detail"] = self.detail
        return out


# ---------------------------------------------------------------------------
# individual checks; each yields one result per order it covers


def _e1_counts(max_order: int) -> Iterator[CheckResult]:
    for n in range(1, max_order + 1):
        got = len(enumerate_e1(n))
        yield CheckResult("e1-count", n, got == E1_COUNTS[n - 1], f"got {got}, want {E1_COUNTS[n - 1]}")


def _routes(max_order: int) -> Iterator[CheckResult]:
    for n in range(1, max_order + 1):
        a = magnus_theorem4(n).nonplanar
        b = magnus_recursion(n)
        c = log_star_component(n)
        detail = "" if a == b == c else f"tree sum {a == b} vs recursion, GL log {b == c} vs recursion"
        yield CheckResult("route-equivalence", n, a == b == c, detail)


def _golden(max_order: int) -> Iterator[CheckResult]:
    golden = {
        2: {"o(o)": F(-1, 2)},
        3: {"o(o(o))": F(1, 3), "o(o,o)": F(1, 12)},
    }
    multisets = {
        4: [F(-1, 4), F(-1, 12), F(-1, 12)],
        5: [F(1, 5), F(3, 40), F(1, 10), F(1, 180), F(1, 60), F(1, 20), F(1, 120), F(-1, 120), F(-1, 720)],
    }
    for n in range(2, min(max_order, 5) + 1):
        got = magnus_recursion(n)
        if n in golden:
            want = PreLieElement({parse_tree(k): v for k, v in golden[n].items()})
            ok = got == want
        else:
            ok = sorted(c for _, c in got.items()) == sorted(multisets[n])
        yield CheckResult("golden-one-generator", n, ok, "" if ok else str(got.to_json()))


def _reduced(max_order: int) -> Iterator[CheckResult]:
    if max_order >= 4:
        ok = reduced_form_value(ORDER4_REDUCED) == magnus_recursion(4)
        yield CheckResult("reduced-form", 4, ok)
    if max_order >= 5:
        matches = identify_reduced_form(5, ORDER5_REDUCED_COEFFS)
        yield CheckResult("reduced-form", 5, len(matches) == 1, f"{len(matches)} tree assignments")


def _gamma(max_order: int) -> Iterator[CheckResult]:
    for n in range(1, max_order + 1):
        bad = [
            t.key
            for t in enumerate_planar(n)
            if any(f in (3, 5) for f in t.fertilities()) and gamma(t) != 0
        ]
        bad += [t.key for t in enumerate_e1(n) if gamma(t) == 0]
        yield CheckResult("gamma-vanishing", n, not bad, ", ".join(bad[:3]))


def _random_element(rng: random.Random, degree: int, terms: int = 2) -> PreLieElement:
    pool = enumerate_trees(degree)
    return PreLieElement.sum(
        PreLieElement.tree(rng.choice(pool), F(rng.randint(-3, 3), rng.randint(1, 3)))
        for _ in range(terms)
    )


def _prelie_identity(max_order: int, samples: int = 20) -> Iterator[CheckResult]:
    rng = random.Random(7)
    for n in range(3, min(max_order, 5) + 1):
        ok = True
        for _ in range(samples):
            parts = [1] * 3
            for _ in range(n - 3):
                parts[rng.randrange(3)] += 1
            x, y, z = (_random_element(rng, d) for d in parts)
            if prelie_associator_check(x, y, z):
                ok = False
                break
        yield CheckResult("prelie-identity", n, ok)


def _gl(max_order: int) -> Iterator[CheckResult]:
    top = min(max_order, 5)
    forests = [Forest([t]) for d in (1, 2) for t in enumerate_trees(d)]
    forests += [Forest([ladder(1), ladder(1)]), Forest([ladder(1), ladder(2)])]
    for n in range(2, top + 1):
        # associativity on triples of total degree n
        ok = True
        for f, g, h in itertools.product(forests, repeat=3):
            if f.degree + g.degree + h.degree != n:
                continue
            x, y, z = (GLElement.basis(k) for k in (f, g, h))
            if gl_product(gl_product(x, y), z) != gl_product(x, gl_product(y, z)):
                ok = False
                break
        yield CheckResult("gl-associativity", n, ok)
        # peeling order for forests acting on trees, total degree n
        ok = True
        for k in range(2, n):
            for trees in itertools.combinations_with_replacement(
                [t for d in range(1, n) for t in enumerate_trees(d)], k
            ):
                forest = Forest(trees)
                rest = n - forest.degree
                if rest < 1:
                    continue
                for t in enumerate_trees(rest):
                    vals = {gl_action(forest, t, peel=i) for i in range(k)}
                    if len(vals) != 1:
                        ok = False
        yield CheckResult("gl-peel-independence", n, ok)


def _lie_routes(max_order: int) -> Iterator[CheckResult]:
    top = min(max_order, 6)
    start = [classical_magnus_midpoint(k, top, "start") for k in range(1, top + 1)]
    total = LieElement.sum(start)
    for n in range(1, top + 1):
        ok = magnus_lie(n) == total.component(n) * n
        yield CheckResult("lie-magnus-routes", n, ok)


def _classical(max_order: int) -> Iterator[CheckResult]:
    cap = max(max_order, 1)
    for k, terms in CLASSICAL_TABLES.items():
        if k > cap:
            break
        want = table_element(terms, cap)
        got = classical_magnus_midpoint(k, cap)
        yield CheckResult("classical-midpoint-table", k, got == want, "" if got == want else (got - want).to_text("q"))


def _prelie_tables(max_order: int) -> Iterator[CheckResult]:
    for k in PRELIE_TABLES:
        a = table_element(PRELIE_TABLES[k], max_order, from_prelie_nested)
        b = table_element(CLASSICAL_TABLES[k], max_order)
        yield CheckResult("prelie-bracket-tables", k, a == b)


def _dimension(max_order: int) -> Iterator[CheckResult]:
    if max_order < 4:
        return
    _, cumulative = graded_dimension(4)
    words = set(itertools.chain.from_iterable(lyndon_words(d) for d in range(1, 5)))
    want = {(1,), (2,), (3,), (4,), (1, 2), (1, 3), (1, 1, 2)}
    yield CheckResult("graded-dimension", 4, cumulative[4] == 7 and words == want)


def _integrator(max_order: int) -> Iterator[CheckResult]:
    from .numeric import PROBLEMS, convergence_errors, slopes

    problem = PROBLEMS["noncommuting"]
    for p in (2, 4, 6):
        s = slopes(convergence_errors(problem, p, [2, 4, 8, 16]))
        ok = all(p - 0.3 <= v <= p + 0.5 for v in s)
        yield CheckResult("integrator-convergence", p, ok, ", ".join(f"{v:.3f}" for v in s))


CHECKS: tuple[Callable[[int], Iterator[CheckResult]], ...] = (
    _e1_counts,
    _routes,
    _golden,
    _reduced,
    _gamma,
    _prelie_identity,
    _gl,
    _lie_routes,
    _classical,
    _prelie_tables,
    _dimension,
    _integrator,
)


def run_checks(max_order: int, stop_on_failure: bool = True) -> list[CheckResult]:
    """Run every check up to ``max_order``; stop after the first failure by default."""
    out: list[CheckResult] = []
    for check in CHECKS:
        for result in check(max_order):
            out.append(result)
            if stop_on_failure and not result.ok:
                return out
    return out
