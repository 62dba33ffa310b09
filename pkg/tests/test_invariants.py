import itertools

import pytest

from treeqsym.invariants import (
    SimpleGraph,
    bowtie,
    chromatic_polynomial_tree,
    csf_fingerprint,
    dart,
    evaluate,
    is_graph_isomorphic,
    proper_coloring_count,
    strict_order_separates,
    tree_as_graph,
)
from treeqsym.tree import RootedTree, enumerate_rooted_trees


def triangle():
    return SimpleGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def test_graph_validation_and_parse():
    with pytest.raises(ValueError):
        SimpleGraph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError):
        SimpleGraph.from_edges(2, [(0, 2)])
    g = SimpleGraph.parse("0-1\n# comment\n1-2\n2-0\n1-0\n")
    assert g == triangle()


def test_chromatic_polynomial_examples():
    assert chromatic_polynomial_tree(1) == [0, 1]
    assert chromatic_polynomial_tree(2) == [0, -1, 1]
    with pytest.raises(ValueError):
        chromatic_polynomial_tree(0)


def test_chromatic_polynomial_matches_brute_force_on_all_small_trees():
    for d in range(1, 7):
        coeffs = chromatic_polynomial_tree(d)
        for t in enumerate_rooted_trees(d):
            g = tree_as_graph(t)
            for k in range(1, 8):
                assert proper_coloring_count(g, k) == evaluate(coeffs, k)


def test_csf_examples():
    single = SimpleGraph.from_edges(1, [])
    assert csf_fingerprint(single) == {(1,): 1}
    fp = csf_fingerprint(triangle())
    assert all(len(shape) == 3 for shape in fp)


def test_bowtie_and_dart_collide():
    assert csf_fingerprint(bowtie()) == csf_fingerprint(dart())
    assert not is_graph_isomorphic(bowtie(), dart())
    assert sorted(bowtie().degrees()) == [2, 2, 2, 2, 4]
    assert sorted(dart().degrees()) == [1, 2, 3, 3, 3]


def test_graph_isomorphism_check():
    g = SimpleGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    h = SimpleGraph.from_edges(4, [(2, 0), (0, 3), (3, 1)])
    assert is_graph_isomorphic(g, h)
    assert not is_graph_isomorphic(g, SimpleGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)]))


def test_separation_examples():
    assert strict_order_separates(RootedTree.parse("(()(()))"), RootedTree.parse("((())())")) is None
    diff = strict_order_separates(RootedTree.path(3), RootedTree.star(2))
    assert diff.index == 0
    assert diff.first.startswith("Q 1 =>")


def test_equal_profile_trees_separate_later():
    a, b = RootedTree.parse("((()())())"), RootedTree.parse("((())(()))")
    assert a.coheight_profile() == b.coheight_profile()
    diff = strict_order_separates(a, b)
    assert diff is not None and diff.index > 0


def test_separation_iff_non_isomorphic_up_to_six():
    trees = [t for d in range(1, 7) for t in enumerate_rooted_trees(d)]
    for a, b in itertools.combinations(trees, 2):
        assert strict_order_separates(a, b) is not None
    for t in trees:
        assert strict_order_separates(t, t.canonical()) is None
