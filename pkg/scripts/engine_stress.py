"""Stress the reconstruction engine where layer profiles stop being enough.

Lists trees that share a level-2 nested profile, then reconstructs every
tree of a given size (and random larger ones) and reports failures,
runtimes and how many hypotheses the engine had to separate.
"""

import argparse
import time
from collections import defaultdict

from treeqsym.oracle import TreeOracle
from treeqsym.reconstruct import ReconstructionError, reconstruct_tree
from treeqsym.tree import enumerate_rooted_trees, random_tree


def level2_twins(d):
    groups = defaultdict(list)
    for t in enumerate_rooted_trees(d):
        groups[t.nested_profile(2)].append(t.canonical_code())
    return [g for g in groups.values() if len(g) > 1]


def run(trees, backend):
    fails, worst, stats = [], 0.0, defaultdict(int)
    start = time.perf_counter()
    for t in trees:
        t0 = time.perf_counter()
        try:
            res = reconstruct_tree(TreeOracle(t, backend))
            if not res.tree.is_isomorphic(t):
                fails.append(t.canonical_code())
            stats["queries"] += res.stats.get("queries", 0)
            stats["rounds_with_choices"] += res.stats.get("rounds_with_choices", 0)
            stats["max_hypotheses"] = max(stats["max_hypotheses"], res.stats.get("max_hypotheses", 1))
        except ReconstructionError as exc:
            fails.append(f"{t.canonical_code()} {exc}")
        worst = max(worst, time.perf_counter() - t0)
    return fails, time.perf_counter() - start, worst, dict(stats)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--enumerate", type=int, default=12, help="reconstruct every tree of this size")
    ap.add_argument("--random", type=int, nargs="*", default=[30, 45])
    ap.add_argument("--samples", type=int, default=40)
    ap.add_argument("--backend", default="structured")
    args = ap.parse_args()

    for d in range(1, args.enumerate + 1):
        twins = level2_twins(d)
        if twins:
            print(f"d={d}: {len(twins)} groups share a level-2 profile, e.g. {twins[0]}")
            break
    else:
        print(f"level-2 profiles separate all trees up to d={args.enumerate}")

    batches = [(f"all d={args.enumerate}", enumerate_rooted_trees(args.enumerate))]
    batches += [(f"random d={d}", [random_tree(d, s) for s in range(args.samples)]) for d in args.random]
    for name, trees in batches:
        fails, total, worst, stats = run(trees, args.backend)
        print(f"{name}: {len(trees)} trees, {len(fails)} failures, {total:.1f} s total, worst {worst:.2f} s, {stats}")
        for f in fails[:5]:
            print("  FAIL", f)


if __name__ == "__main__":
    main()
