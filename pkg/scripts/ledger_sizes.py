"""Ledger sizes of full reconstructions, per vertex count."""

import argparse
import statistics
import time

from treeqsym.oracle import TreeOracle
from treeqsym.reconstruct import reconstruct_tree
from treeqsym.tree import enumerate_rooted_trees, random_tree


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-d", type=int, default=10, help="enumerate every tree up to this size")
    ap.add_argument("--random", type=int, nargs="*", default=[15, 20, 30], help="sizes sampled at random")
    ap.add_argument("--samples", type=int, default=50)
    args = ap.parse_args()

    print(f"{'d':>4} {'trees':>6} {'min':>4} {'max':>4} {'mean':>7} {'engine':>7} {'seconds':>8}")
    plan = [(d, enumerate_rooted_trees(d)) for d in range(1, args.max_d + 1)]
    plan += [(d, [random_tree(d, s) for s in range(args.samples)]) for d in args.random]
    for d, trees in plan:
        start = time.perf_counter()
        sizes, extra = [], 0
        for t in trees:
            res = reconstruct_tree(TreeOracle(t))
            assert res.tree.is_isomorphic(t)
            sizes.append(len(res.ledger))
            extra += res.stats.get("queries", 0)
        print(
            f"{d:>4} {len(trees):>6} {min(sizes):>4} {max(sizes):>4} "
            f"{statistics.mean(sizes):>7.2f} {extra:>7} {time.perf_counter() - start:>8.1f}"
        )
    print("engine = samples spent separating hypotheses beyond the layer profiles")


if __name__ == "__main__":
    main()
