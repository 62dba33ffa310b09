import itertools
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import find_vertex
from treeqsym.coloring import (
    Coloring,
    ColoringError,
    GapMultiset,
    S_of_f,
    elevation,
    elevations,
    enumerate_gap_multisets,
    enumerate_increasing_colorings,
    f_of_S,
    gap_product,
    profile_by_formula,
    profile_of_coloring,
)
from treeqsym.monomial import LaurentMonomial as M
from treeqsym.monomial import sigma, tau
from treeqsym.tree import RootedTree, enumerate_rooted_trees, random_tree


def fig4_gaps(t):
    a = find_vertex(t, "((()))")
    c_leaf = find_vertex(t, "()", "(()(()()))")
    d_child = find_vertex(t, "(())", "((())(()()))")
    return GapMultiset.of([a, c_leaf, d_child])


def random_gaps(t, rng, max_mult=3, max_members=4):
    picks = rng.sample(range(t.size), rng.randint(0, min(max_members, t.size)))
    return GapMultiset.of({v: rng.randint(1, max_mult) for v in picks})


@st.composite
def tree_and_gaps(draw, max_d=12):
    t = random_tree(draw(st.integers(1, max_d)), draw(st.integers(0, 10**6)))
    mult = draw(st.lists(st.integers(0, 3), min_size=t.size, max_size=t.size))
    return t, GapMultiset(tuple(enumerate(mult)))


# text forms


def test_coloring_and_multiset_text_round_trip():
    f = Coloring((1, 3, 4))
    assert str(f) == "0:1,1:3,2:4"
    assert Coloring.parse(str(f)) == f
    S = GapMultiset.of([2, 0, 2])
    assert str(S) == "0^1,2^2"
    assert GapMultiset.parse(str(S)) == S
    with pytest.raises(ColoringError):
        Coloring.parse("0:1,2:3")


# f_S and its inverse


def test_empty_multiset_colors_by_coheight(nineteen):
    f = f_of_S(nineteen, GapMultiset())
    assert profile_of_coloring(nineteen, f) == M.parse("x1 x2^4 x3^6 x4^8")
    assert S_of_f(nineteen, f) == GapMultiset()


def test_root_copies_on_single_vertex():
    t = RootedTree.single()
    f = f_of_S(t, GapMultiset.of([0, 0]))
    assert f.colors == (3,)
    assert S_of_f(t, Coloring((3,))) == GapMultiset.of({0: 2})
    assert profile_of_coloring(t, f_of_S(t, GapMultiset())) == M.parse("x1")


def test_three_incomparable_gaps(nineteen):
    S = fig4_gaps(nineteen)
    f = f_of_S(nineteen, S)
    assert profile_of_coloring(nineteen, f) == M.parse("x1 x2^3 x3^4 x4^9 x5^2")
    assert S_of_f(nineteen, f) == S


def test_S_of_f_rejects_non_increasing():
    t = RootedTree.path(2)
    with pytest.raises(ColoringError):
        S_of_f(t, Coloring((2, 2)))
    with pytest.raises(ColoringError):
        f_of_S(t, GapMultiset.of([5]))


@given(tree_and_gaps())
def test_f_of_S_is_increasing_and_inverted(ts):
    t, S = ts
    f = f_of_S(t, S)
    assert f.is_increasing(t)
    assert S_of_f(t, f) == S
    assert f[t.root] == 1 + S.multiplicity(t.root)
    assert sum(c == 1 for c in f.colors) <= 1


def test_bijection_exhaustive_small_trees():
    for d in range(1, 7):
        for t in enumerate_rooted_trees(d):
            fs = list(enumerate_increasing_colorings(t, d + 2))
            Ss = list(enumerate_gap_multisets(t, d + 2))
            assert len(fs) == len(Ss)
            assert {S_of_f(t, f) for f in fs} == set(Ss)
            assert {f_of_S(t, S) for S in Ss} == set(fs)


# elevation


def test_elevation_examples(nineteen):
    S = fig4_gaps(nineteen)
    assert all(e == 0 for _, e in elevations(nineteen, S))
    t = RootedTree.path(2)
    S = GapMultiset.of({0: 3})
    assert [elevation(t, S, 0, k) for k in range(3)] == [0, 1, 2]
    S = GapMultiset.of({0: 3, 1: 1})
    assert elevation(t, S, 1) == 3
    with pytest.raises(ColoringError):
        elevation(t, S, 1, 1)


# closed form


def test_closed_form_worked_example(nineteen):
    S = fig4_gaps(nineteen)
    assert gap_product(nineteen, S) == M.parse("x1 x2^3 x3^2")
    assert profile_by_formula(nineteen, S) == M.parse("x1 x2^3 x3^4 x4^9 x5^2")


@given(st.integers(1, 12), st.integers(0, 10**6))
def test_closed_form_of_empty_multiset(d, seed):
    t = random_tree(d, seed)
    assert profile_by_formula(t, GapMultiset()) == sigma(t.coheight_profile())


@settings(max_examples=300)
@given(tree_and_gaps())
def test_closed_form_matches_coloring(ts):
    t, S = ts
    assert profile_by_formula(t, S) == profile_of_coloring(t, f_of_S(t, S))


def test_closed_form_exhaustive_small_trees():
    for d in range(1, 6):
        for t in enumerate_rooted_trees(d):
            for S in enumerate_gap_multisets(t, d + 2):
                assert profile_by_formula(t, S) == profile_of_coloring(t, f_of_S(t, S))


def test_copy_order_does_not_change_the_product():
    # number copies of each vertex in reverse; the product is unchanged
    rng = random.Random(4)
    for _ in range(200):
        t = random_tree(rng.randint(1, 10), rng.randrange(10**6))
        S = random_gaps(t, rng)
        mult = dict(S.counts)
        acc = M.one()
        for v, k in reversed(S.counts):
            a = sum(mult.get(u, 0) for u in t.ancestors(v))
            for j in reversed(range(k)):
                acc = acc * t.coheight_profile(v).sigma(a + j)
        assert acc == gap_product(t, S)


def test_adding_one_gap_multiplies_by_its_shifted_difference():
    rng = random.Random(11)
    for _ in range(1000):
        t = random_tree(rng.randint(1, 12), rng.randrange(10**6))
        S = random_gaps(t, rng)
        members = set(S.members())
        # g has no strict descendant in S
        choices = [
            g for g in range(t.size)
            if not any(u != g and t.is_ancestor_or_self(g, u) for u in members)
        ]
        g = rng.choice(choices)
        S2 = GapMultiset(S.counts + ((g, 1),))
        h = elevation(t, S2, g, S2.multiplicity(g) - 1)
        step = sigma(tau(t.coheight_profile(g).sigma(h)))
        assert profile_by_formula(t, S2) == profile_by_formula(t, S) * step


# enumeration


def test_enumeration_examples(four_branch):
    assert [f.colors for f in enumerate_increasing_colorings(RootedTree.single(), 3)] == [(1,), (2,), (3,)]
    pairs = [f.colors for f in enumerate_increasing_colorings(RootedTree.path(2), 3)]
    assert pairs == [(1, 2), (1, 3), (2, 3)]
    with pytest.raises(ColoringError):
        list(enumerate_increasing_colorings(four_branch, 2))


def test_enumeration_matches_brute_force():
    for d in range(1, 6):
        for t in enumerate_rooted_trees(d):
            K = d + 1
            brute = [
                c for c in itertools.product(range(1, K + 1), repeat=d)
                if Coloring(c).is_increasing(t)
            ]
            got = [f.colors for f in enumerate_increasing_colorings(t, K)]
            assert got == sorted(brute)


def test_path_colorings_are_subsets():
    for d in range(1, 6):
        for K in range(d, d + 4):
            assert sum(1 for _ in enumerate_increasing_colorings(RootedTree.path(d), K)) == comb(K, d)
