"""Strict order quasisymmetric functions of rooted trees: sampling and reconstruction."""

from .coloring import Coloring, GapMultiset, f_of_S, profile_by_formula, profile_of_coloring, S_of_f
from .monomial import LaurentMonomial, PrefixCondition, lex_compare
from .oracle import ReplayOracle, SampleLedger, TreeOracle, build_term_table, sample_F, structured_F
from .reconstruct import ReconstructionError, reconstruct_nested, reconstruct_tree
from .tree import NestedProfile, RootedTree, enumerate_rooted_trees, random_tree

__all__ = [
    "Coloring",
    "GapMultiset",
    "LaurentMonomial",
    "NestedProfile",
    "PrefixCondition",
    "ReconstructionError",
    "ReplayOracle",
    "RootedTree",
    "S_of_f",
    "SampleLedger",
    "TreeOracle",
    "build_term_table",
    "enumerate_rooted_trees",
    "f_of_S",
    "lex_compare",
    "profile_by_formula",
    "profile_of_coloring",
    "random_tree",
    "reconstruct_nested",
    "reconstruct_tree",
    "sample_F",
    "structured_F",
]
