"""Walk through the reconstruction of the four-branch tree query by query."""

from treeqsym.monomial import LaurentMonomial, PrefixCondition
from treeqsym.oracle import TreeOracle, build_term_table, sample_F_tilde
from treeqsym.reconstruct import reconstruct_tree
from treeqsym.tree import RootedTree

TREE = "((())(())(()())(()()))"


def main():
    t = RootedTree.parse(TREE)
    print(f"tree {TREE}, coheight profile {t.coheight_profile()}")

    table = build_term_table(t, 5)
    print("\nleading terms with colors up to 5:")
    for m, c in table.sorted_terms()[:6]:
        print(f"  {c:3d} {m}")

    res = reconstruct_tree(TreeOracle(t))
    print(f"\nreconstruction used {len(res.ledger)} samples:")
    for line in res.ledger.transcript():
        print("  " + line)
    print(f"rebuilt {res.tree.canonical_code()}, isomorphic: {res.tree.is_isomorphic(t)}")

    print("\nminimal gap products over layer 1:")
    o = TreeOracle(t)
    xh = t.coheight_profile()
    for m in range(1, xh.exponent(1) + 1):
        q = PrefixCondition.from_monomial(LaurentMonomial.var(1, m), 1)
        print(f"  F~({q}) = {sample_F_tilde(o, xh, q)}")


if __name__ == "__main__":
    main()
