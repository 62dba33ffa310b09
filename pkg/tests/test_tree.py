import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import find_vertex
from treeqsym.monomial import LaurentMonomial as M
from treeqsym.tree import (
    NestedProfile,
    RootedTree,
    TreeError,
    canonical_code,
    coheight,
    enumerate_rooted_trees,
    is_isomorphic,
    layer,
    nested_compare,
    nested_profile,
    random_tree,
    subtree_vertices,
)


def rooted_tree_counts(n_max):
    """Counts of unlabeled rooted trees from the Euler transform recurrence."""
    a = [0, 1]
    for n in range(1, n_max):
        s = 0
        for k in range(1, n + 1):
            dsum = sum(d * a[d] for d in range(1, k + 1) if k % d == 0)
            s += dsum * a[n - k + 1]
        a.append(s // n)
    return a[1:]


def permuted(t, seed):
    """Same tree with vertex ids shuffled and children stored in another order."""
    import random

    rng = random.Random(seed)
    perm = list(range(t.size))
    rng.shuffle(perm)
    parent = [None] * t.size
    for v, p in enumerate(t.parent):
        parent[perm[v]] = None if p is None else perm[p]
    return RootedTree(parent)


trees = st.builds(random_tree, st.integers(1, 25), st.integers(0, 10**6))


# construction


def test_parse_and_text():
    t = RootedTree.parse("( () (()) )")
    assert t.size == 4
    assert t.to_text() == "(()(()))"


@pytest.mark.parametrize("bad", ["", "(", "())", "()()", "(x)", ")("])
def test_parse_rejects_bad_text(bad):
    with pytest.raises(TreeError):
        RootedTree.parse(bad)


@pytest.mark.parametrize("parent", [[], [None, None], [1, 0], [None, 5], [None, 2, 1]])
def test_constructor_rejects_bad_parent_maps(parent):
    with pytest.raises(TreeError):
        RootedTree(parent)


# coheights and layers


def test_coheight_examples():
    p = RootedTree.path(4)
    assert coheight(p, 0) == 0
    assert coheight(p, 1) == 1
    assert coheight(p, 3) == 3
    with pytest.raises(TreeError):
        coheight(p, 9)


def test_layer_examples(nineteen):
    assert len(layer(nineteen, 1)) == 4
    assert layer(nineteen, 0) == (nineteen.root,)
    assert layer(RootedTree.single(), 1) == ()


def test_subtree_vertices_examples(four_branch):
    assert subtree_vertices(four_branch, four_branch.root) == frozenset(range(four_branch.size))
    leaf = four_branch.layers[-1][0]
    assert subtree_vertices(four_branch, leaf) == {leaf}
    g = find_vertex(four_branch, "(())")
    assert len(subtree_vertices(four_branch, g)) == 2
    assert four_branch.coheight_profile(g) == M.parse("x1 x2")


@given(trees)
def test_layers_partition_the_vertices(t):
    assert sum(len(L) for L in t.layers) == t.size
    assert len(t.layers[0]) == 1
    xh = t.coheight_profile()
    for n, L in enumerate(t.layers):
        assert xh.exponent(n) == len(L)


# profiles


def test_coheight_profile_examples(nineteen):
    assert nineteen.coheight_profile() == M.parse("x0 x1^4 x2^6 x3^8")
    for leaf in (v for v in nineteen.preorder if not nineteen.children[v]):
        assert nineteen.coheight_profile(leaf) == M.var(nineteen.coheight(leaf))
    a = find_vertex(nineteen, "((()))")
    c_leaf = find_vertex(nineteen, "()", "(()(()()))")
    d_child = find_vertex(nineteen, "(())", "((())(()()))")
    assert [nineteen.coheight_profile(v) for v in (a, c_leaf, d_child)] == [
        M.parse("x1 x2 x3"),
        M.parse("x2"),
        M.parse("x2 x3"),
    ]


def test_nested_profile_examples(nineteen):
    assert nested_profile(nineteen, 1).value == M.parse("x0 x1^4 x2^6 x3^8")
    level2 = {m.value for m in nested_profile(nineteen, 2).members}
    assert M.parse("x0 x1^4 x2^6 x3^8") in level2
    assert M.parse("x1 x2 x3") in level2
    single = RootedTree.single()
    for n in (1, 2, 3):
        p = nested_profile(single, n)
        while p.level > 1:
            assert len(p.members) == 1
            p = p.members[0]
        assert p.value == M.parse("x0")


def test_nested_profile_level_one_is_the_coheight_profile(nineteen):
    assert nested_profile(nineteen, 1) == NestedProfile(1, nineteen.coheight_profile())


def test_nested_profile_base_monomial(nineteen):
    for k in (1, 2, 3):
        assert nested_profile(nineteen, k).base_monomial() == nineteen.coheight_profile()


def test_nested_compare_examples():
    a, b = enumerate_rooted_trees(3)
    assert nested_compare(nested_profile(a, 2), nested_profile(b, 2)) != 0
    assert nested_compare(nested_profile(a, 2), nested_profile(a, 2)) == 0
    x, y = M.parse("x1"), M.parse("x2")
    assert nested_compare(NestedProfile(1, x), NestedProfile(1, y)) == 1
    with pytest.raises(TreeError):
        nested_compare(nested_profile(a, 1), nested_profile(a, 2))


def test_nested_profiles_reject_negative_exponents():
    with pytest.raises(TreeError):
        NestedProfile(1, M.parse("x1^-1"))


@settings(max_examples=60)
@given(trees, st.integers(0, 100), st.integers(1, 4))
def test_nested_profile_is_isomorphism_invariant(t, seed, level):
    assert nested_profile(permuted(t, seed), level) == nested_profile(t, level)


def test_nested_profile_at_layer_count_separates_all_small_trees():
    for d in range(1, 9):
        seen = {}
        for t in enumerate_rooted_trees(d):
            key = nested_profile(t, t.num_layers)
            assert key not in seen
            seen[key] = t


# canonical form and enumeration


def test_canonical_code_examples():
    t = RootedTree.parse("((())()(()()))")
    assert is_isomorphic(t, RootedTree.parse("(()(()())(()))"))
    assert not is_isomorphic(RootedTree.path(3), RootedTree.star(2))
    codes = {canonical_code(t) for t in enumerate_rooted_trees(5)}
    assert len(codes) == 9


@settings(max_examples=60)
@given(trees, st.integers(0, 100))
def test_relabeling_keeps_canonical_code(t, seed):
    u = permuted(t, seed)
    assert canonical_code(u) == canonical_code(t)
    assert u.canonical().parent == t.canonical().parent


def test_enumeration_counts_match_recurrence():
    expected = rooted_tree_counts(10)
    assert expected[:5] == [1, 1, 2, 4, 9]
    for d in range(1, 11):
        ts = enumerate_rooted_trees(d)
        assert len(ts) == expected[d - 1]
        assert len({t.canonical_code() for t in ts}) == len(ts)
        assert all(t.size == d for t in ts)


def test_enumeration_matches_brute_force_parent_maps():
    # every parent map with parent[v] < v covers every class
    for d in range(1, 7):
        codes = set()
        for ps in itertools.product(*[range(v) for v in range(1, d)]):
            codes.add(RootedTree([None, *ps]).canonical_code())
        assert codes == {t.canonical_code() for t in enumerate_rooted_trees(d)}


def test_enumeration_cap():
    with pytest.raises(TreeError):
        enumerate_rooted_trees(13)
    with pytest.raises(TreeError):
        enumerate_rooted_trees(0)


def test_random_tree():
    assert random_tree(1, 5).size == 1
    assert random_tree(8, 3) == random_tree(8, 3)
    t = random_tree(8, 3)
    assert t.size == 8 and t.parent[0] is None
    with pytest.raises(TreeError):
        random_tree(0)
