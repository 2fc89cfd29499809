import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from magnuskit.exact import bernoulli
from magnuskit.freelie import (
    GradingError,
    HSeries,
    LieElement,
    bracket,
    classical_magnus_midpoint,
    from_nested,
    graded_dimension,
    hseries_prelie,
    hseries_prelie_check,
    is_lyndon,
    lyndon_words,
    magnus_lie,
    phi,
    phi_linear,
    prelie_on_lie,
    standard_factorization,
)
from magnuskit.prelie import graft
from magnuskit.trees import InvalidOrderError, enumerate_trees, parse_tree

F = Fraction
a = LieElement.generator


def test_bracket_examples():
    assert bracket(a(1), a(2)) == LieElement({(1, 2): 1})
    assert bracket(a(2), a(1)) == -bracket(a(1), a(2))
    assert bracket(bracket(a(1), a(2)), a(1)) == -bracket(a(1), bracket(a(1), a(2)))
    assert bracket(a(1), a(1)) == LieElement()


def _brute_lyndon(word):
    return all(word < word[i:] + word[:i] for i in range(1, len(word)))


def _compositions(n):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


@pytest.mark.parametrize("n", range(1, 10))
def test_lyndon_words_by_brute_force(n):
    want = {w for w in _compositions(n) if _brute_lyndon(w)}
    assert set(lyndon_words(n)) == want
    assert all(is_lyndon(w) for w in want)


def test_dimension_identity():
    # sum_{d | n} d * dim_d = 2^n - 1 for generators in every positive degree
    per, _ = graded_dimension(12)
    for n in range(1, 13):
        assert sum(d * per[d] for d in range(1, n + 1) if n % d == 0) == 2**n - 1


def test_graded_dimension_examples():
    per, cumulative = graded_dimension(4)
    assert cumulative[4] == 7
    assert per[1] == 1
    assert set(lyndon_words(4)) == {(4,), (1, 3), (1, 1, 2)}


def test_standard_factorization():
    assert standard_factorization((1, 1, 2)) == ((1,), (1, 2))
    assert standard_factorization((1, 2, 2)) == ((1, 2), (2,))
    for n in range(2, 8):
        for w in lyndon_words(n):
            if len(w) > 1:
                u, v = standard_factorization(w)
                assert u + v == w and is_lyndon(u) and is_lyndon(v) and u < v


# random matrices as an oracle for the bracket structure constants
_rng = np.random.default_rng(11)
_MATS = {i: _rng.standard_normal((4, 4)) for i in range(1, 8)}


def _eval_word(w):
    if len(w) == 1:
        return _MATS[w[0]]
    u, v = standard_factorization(w)
    x, y = _eval_word(u), _eval_word(v)
    return x @ y - y @ x


def _eval(x):
    out = np.zeros((4, 4))
    for w, c in x.items():
        out += float(c) * _eval_word(w)
    return out


def _random_lie(rng, max_weight):
    words = [w for d in range(1, max_weight + 1) for w in lyndon_words(d)]
    return LieElement.sum(
        LieElement({rng.choice(words): F(rng.randint(-5, 5), rng.randint(1, 5))}) for _ in range(3)
    )


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bracket_matches_matrix_commutator(seed):
    rng = random.Random(seed)
    x, y = _random_lie(rng, 4), _random_lie(rng, 3)
    X, Y = _eval(x), _eval(y)
    assert np.allclose(_eval(bracket(x, y)), X @ Y - Y @ X, atol=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_jacobi_and_antisymmetry(seed):
    rng = random.Random(seed)
    x, y, z = (_random_lie(rng, 3) for _ in range(3))
    assert bracket(x, y) == -bracket(y, x)
    jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    assert jac == LieElement()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_associative_roundtrip(seed):
    x = _random_lie(random.Random(seed), 5)
    assert LieElement.from_associative(x.to_associative()) == x


def test_from_associative_rejects_non_lie():
    with pytest.raises(ValueError):
        LieElement.from_associative({(1, 2): F(1)})


def test_prelie_on_lie_examples():
    assert prelie_on_lie(a(1), a(2)) == bracket(a(1), a(2))
    assert prelie_on_lie(a(2), a(3)) == bracket(a(2), a(3)) * F(1, 2)
    assert prelie_on_lie(a(3), a(4)) == bracket(a(3), a(4)) * F(1, 3)
    with pytest.raises(GradingError):
        prelie_on_lie(a(1) + a(2), a(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_prelie_on_lie_is_pre_lie(seed):
    rng = random.Random(seed)
    words = [w for d in range(1, 4) for w in lyndon_words(d)]
    x, y, z = (LieElement({rng.choice(words): 1}) for _ in range(3))
    p = prelie_on_lie
    if x.homogeneous_degree() + y.homogeneous_degree() > 0:
        lhs = p(p(x, y), z) - p(x, p(y, z))
        rhs = p(p(y, x), z) - p(y, p(x, z))
        assert lhs == rhs


def _decorated(max_weight):
    out = []
    for n in range(1, max_weight + 1):
        for shape in enumerate_trees(n):
            for labels in itertools.product(range(1, max_weight + 1), repeat=n):
                if sum(labels) <= max_weight:
                    it = iter(labels)
                    out.append(_relabel(shape, it))
    return list(set(out))


def _relabel(t, it):
    from magnuskit.trees import Tree

    label = next(it)
    return Tree([_relabel(c, it) for c in t.children], label)


_DEC = _decorated(5)


def test_phi_examples():
    assert phi(parse_tree("a1")) == a(1)
    assert phi_linear(graft(parse_tree("a1"), parse_tree("a2"))) == bracket(a(1), a(2))
    with pytest.raises(ValueError):
        phi(parse_tree("o"))


@pytest.mark.parametrize("s", [t for t in _DEC if t.weight <= 3])
def test_phi_is_homomorphism(s):
    for t in _DEC:
        if s.weight + t.weight > 5:
            continue
        assert phi_linear(graft(s, t)) == prelie_on_lie(phi(s), phi(t))


def test_phi_kills_ideal():
    for s, t in itertools.combinations_with_replacement(_DEC, 2):
        if s.weight + t.weight > 5:
            continue
        x = phi_linear(graft(s, t)) * s.weight + phi_linear(graft(t, s)) * t.weight
        assert x == LieElement()


def test_phi_weight_preserved():
    for t in _DEC:
        img = phi(t)
        assert not img or img.weights() == {t.weight}


def _lie_recursion(n):
    """Magnus element for x = a_1 + a_2 + ... by the Bernoulli recursion in (L, |>)."""
    W = {1: a(1)}
    gens = {m: a(m) for m in range(1, n + 1)}
    # nest[j][m] = sum over k_1+..+k_j + l = m of W_{k_1} |> (... |> (W_{k_j} |> a_l))
    nest = {0: dict(gens)}
    for m in range(2, n + 1):
        for j in range(1, m):
            row = nest.setdefault(j, {})
            acc = LieElement()
            for k in range(1, m):
                if k in W and (m - k) in nest[j - 1]:
                    acc = acc + prelie_on_lie(W[k], nest[j - 1][m - k])
            row[m] = acc
        total = gens[m]
        for j in range(1, m):
            total = total + nest[j][m] * (bernoulli(j) / _fact(j))
        W[m] = total
    return W


def _fact(j):
    out = 1
    for i in range(2, j + 1):
        out *= i
    return out


def test_magnus_lie_matches_direct_recursion():
    W = _lie_recursion(6)
    for n in range(1, 7):
        assert magnus_lie(n) == W[n]


def test_magnus_lie_examples():
    assert magnus_lie(1) == a(1)
    assert magnus_lie(2) == a(2)
    assert magnus_lie(3) == a(3) - bracket(a(1), a(2)) * F(1, 4)
    lam = {1: F(2), 2: F(3), 3: F(5)}
    assert magnus_lie(3, lam) == a(3) * 5 - bracket(a(1), a(2)) * F(6, 4)


def test_magnus_lie_json_lambda():
    items = magnus_lie(3).to_json(with_lambda=True)
    assert items[1] == {"word": "a1.a2", "bracketing": "lyndon-standard", "coeff": "-1/4", "lambda": {"1": 1, "2": 1}}


def test_magnus_lie_start_expansion_route():
    # Omega over [0, 1] with A(t) = sum a_{i} t^{i-1}: degree-n part times n
    total = LieElement.sum(classical_magnus_midpoint(k, 6, "start") for k in range(1, 7))
    for n in range(1, 7):
        assert magnus_lie(n) == total.component(n) * n


@pytest.mark.parametrize("n", [0, 8])
def test_magnus_lie_invalid(n):
    with pytest.raises(InvalidOrderError):
        magnus_lie(n)


def test_classical_examples():
    q = a
    assert classical_magnus_midpoint(1, 7) == q(1) + q(3) * F(1, 12) + q(5) * F(1, 80) + q(7) * F(1, 448)
    assert classical_magnus_midpoint(2, 3) == bracket(q(1), q(2)) * F(-1, 12)
    assert classical_magnus_midpoint(6, 7) == from_nested((1, (1, (1, (1, (1, 2)))))) * F(-1, 30240)
    assert classical_magnus_midpoint(4, 5) == from_nested((1, (1, (1, 2)))) * F(1, 720)
    assert classical_magnus_midpoint(5, 4) == LieElement()


def test_classical_time_symmetry():
    # only odd total h-degrees survive at the midpoint
    for k in range(1, 8):
        assert all(w % 2 == 1 for w in classical_magnus_midpoint(k, 8).weights())


def test_classical_invalid():
    with pytest.raises(InvalidOrderError):
        classical_magnus_midpoint(0, 3)
    with pytest.raises(InvalidOrderError):
        classical_magnus_midpoint(1, 0)
    with pytest.raises(ValueError):
        classical_magnus_midpoint(1, 3, "end")


def test_classical_matches_numeric_log():
    # Omega_1 + ... + Omega_k for A(t) = a_0 + a_1 s + a_2 s^2 over one step
    import scipy.linalg
    from scipy.integrate import solve_ivp

    rng = np.random.default_rng(5)
    h = 0.1
    coeffs = [rng.standard_normal((3, 3)) for _ in range(3)]

    def A(t):
        s = t - h / 2
        return sum(c * s**i for i, c in enumerate(coeffs))

    sol = solve_ivp(lambda t, y: (A(t) @ y.reshape(3, 3)).ravel(), (0, h), np.eye(3).ravel(),
                    method="DOP853", rtol=1e-13, atol=1e-16)
    target = scipy.linalg.logm(sol.y[:, -1].reshape(3, 3)).real
    q = {i + 1: coeffs[i] * h ** (i + 1) for i in range(3)}
    total = LieElement.sum(classical_magnus_midpoint(k, 6) for k in range(1, 7))
    approx = np.zeros((3, 3))
    for w, c in total.items():
        if all(i in q for i in w):
            m = _eval_with(w, q)
            approx += float(c) * m
    assert np.abs(approx - target).max() < 1e-8


def _eval_with(w, q):
    if len(w) == 1:
        return q[w[0]]
    u, v = standard_factorization(w)
    x, y = _eval_with(u, q), _eval_with(v, q)
    return x @ y - y @ x


def test_hseries_examples():
    q2, q5, q1 = HSeries.generator(2), HSeries.generator(5), HSeries.generator(1)
    assert hseries_prelie(q2, q5).to_lie() == bracket(a(2), a(5)) * F(1, 2)
    assert hseries_prelie(q1, q1) == HSeries()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_hseries_associator_vanishes(seed):
    rng = random.Random(seed)

    def rand():
        return HSeries.sum(HSeries.generator(rng.randint(1, 4), F(rng.randint(-3, 3), rng.randint(1, 3))) for _ in range(2))

    f, g, h = rand(), rand(), rand()
    assert hseries_prelie_check(f, g, h, max_power=12) == HSeries()


def test_hseries_matches_lie_prelie():
    for i, j in itertools.product(range(1, 5), repeat=2):
        got = hseries_prelie(HSeries.generator(i), HSeries.generator(j)).to_lie()
        assert got == prelie_on_lie(a(i), a(j))


def test_format_text():
    assert (bracket(a(1), a(2)) * F(-1, 4) + a(3)).to_text() == "a3 - 1/4 [a1,a2]"
    assert LieElement().to_text() == "0"
