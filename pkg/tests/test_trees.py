import itertools
from math import comb

import pytest
from hypothesis import given, strategies as st

from magnuskit.trees import (
    DOT,
    InvalidOrderError,
    PlanarTree,
    Tree,
    as_planar,
    b_plus,
    canonicalize,
    decorate_all,
    enumerate_e1,
    enumerate_planar,
    enumerate_trees,
    is_e1,
    ladder,
    left_butcher,
    parse_planar,
    parse_tree,
)

dot = PlanarTree()
cherry = PlanarTree((dot, dot))


def catalan(n):
    return comb(2 * n, n) // (n + 1)


def test_b_plus_examples():
    assert b_plus([]).key == "o"
    assert b_plus([dot]) == ladder(2)
    assert b_plus([dot, dot]).key == "o(o,o)" and b_plus([dot, dot]).degree == 3


def test_left_butcher_examples():
    assert left_butcher(dot, dot) == ladder(2)
    assert left_butcher(dot, left_butcher(dot, dot)) == cherry
    assert left_butcher(ladder(2), dot) == ladder(3)


def test_canonicalize_examples():
    a = PlanarTree((ladder(2), dot))
    b = PlanarTree((dot, ladder(2)))
    assert a != b
    assert canonicalize(a) == canonicalize(b)
    assert canonicalize(dot) == DOT
    assert canonicalize(ladder(4)).key == ladder(4).key


def test_serialization():
    assert parse_tree("o(o(o),o)").key == "o(o,o(o))"
    assert parse_planar("o(o(o),o)").key == "o(o(o),o)"
    assert parse_tree("a1(a2)").key == "a1(a2)"
    assert parse_tree(" o ( o , o ) ").key == "o(o,o)"


@pytest.mark.parametrize("bad", ["", "o(", "o(o", "o)", "x", "o(o,)", "o o"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_tree(bad)


def _brute_planar(n):
    """Planar trees with n vertices as nested tuples, generated by adding leaves."""
    level = {()}
    for _ in range(n - 1):
        nxt = set()
        for t in level:
            nxt.update(_add_leaf(t))
        level = nxt
    return level


def _add_leaf(t):
    # insert a leaf at each position among the root's children, or recurse
    out = []
    for i in range(len(t) + 1):
        out.append(t[:i] + ((),) + t[i:])
    for i, c in enumerate(t):
        for c2 in _add_leaf(c):
            out.append(t[:i] + (c2,) + t[i + 1 :])
    return out


def _to_tuple(t):
    return tuple(_to_tuple(c) for c in t.children)


@pytest.mark.parametrize("n", range(1, 8))
def test_planar_enumeration_matches_leaf_insertion(n):
    got = enumerate_planar(n)
    assert len(got) == catalan(n - 1)
    assert {_to_tuple(t) for t in got} == _brute_planar(n)


def test_planar_small_sizes():
    assert enumerate_planar(1) == [dot]
    assert len(enumerate_planar(3)) == 2
    assert len(enumerate_planar(4)) == 5


@pytest.mark.parametrize("n", [0, -1])
def test_invalid_order(n):
    with pytest.raises(InvalidOrderError):
        enumerate_planar(n)
    with pytest.raises(InvalidOrderError):
        enumerate_e1(n)


def test_e1_examples():
    assert enumerate_e1(1) == [dot]
    assert set(enumerate_e1(3)) == {ladder(3), cherry}
    assert [len(enumerate_e1(n)) for n in range(1, 8)] == [1, 1, 2, 4, 10, 26, 73]


@pytest.mark.parametrize("n", range(1, 8))
def test_e1_subset_and_membership(n):
    planar = set(enumerate_planar(n))
    for t in enumerate_e1(n):
        assert t in planar
        assert all(f <= 1 or f % 2 == 0 for f in t.fertilities())
    rejected = [t for t in planar if not is_e1(t)]
    assert len(rejected) + len(enumerate_e1(n)) == len(planar)


def test_nonplanar_counts():
    # rooted unlabeled trees
    assert [len(enumerate_trees(n)) for n in range(1, 9)] == [1, 1, 2, 4, 9, 20, 48, 115]


def test_decorate_examples():
    assert {t.key for t in decorate_all(dot, 2, 2)} == {"a1", "a2"}
    got = decorate_all(ladder(2), 3, 3)
    assert {t.key for t in got} == {"a1(a1)", "a1(a2)", "a2(a1)"}
    assert decorate_all(dot, 1, 0) == []


def test_decorated_degree():
    t = parse_tree("a1(a2,a3(a1))")
    assert t.degree == 4
    assert t.decorated_degree == 7
    assert parse_tree("o(o,o)").decorated_degree == 3


planar_trees = st.integers(1, 7).flatmap(lambda n: st.sampled_from(enumerate_planar(n)))


@given(planar_trees, st.randoms(use_true_random=False))
def test_canonicalize_idempotent_through_any_child_order(t, rnd):
    def shuffle(x):
        kids = [shuffle(c) for c in x.children]
        rnd.shuffle(kids)
        return PlanarTree(kids, x.label)

    c = canonicalize(t)
    assert canonicalize(shuffle(as_planar(c))) == c
    assert canonicalize(c) is c


@given(planar_trees, planar_trees)
def test_left_butcher_degree_additive(t1, t2):
    assert left_butcher(t1, t2).degree == t1.degree + t2.degree


@given(planar_trees)
def test_decomposition_roundtrip(t):
    # B+(t_1..t_k) = t_1 o\ (t_2 o\ (... (t_k o\ o)))
    acc = PlanarTree((), t.label)
    for child in reversed(t.children):
        acc = left_butcher(child, acc)
    assert acc == t


def test_tree_children_sorted():
    t = Tree((Tree((DOT,)), DOT))
    assert [c.key for c in t.children] == sorted(c.key for c in t.children)
    assert t == parse_tree("o(o(o),o)")
    assert hash(t) == hash(parse_tree("o(o,o(o))"))


def test_planar_and_nonplanar_never_equal():
    assert PlanarTree() != Tree()


def test_trees_usable_in_sets():
    everything = list(itertools.chain.from_iterable(enumerate_trees(n) for n in range(1, 6)))
    assert len(set(everything)) == len(everything)
