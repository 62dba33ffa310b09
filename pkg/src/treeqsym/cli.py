"""Command-line front end: treeqsym gen | terms | sample | reconstruct | verify | separate | demo-csf."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .invariants import bowtie, csf_fingerprint, dart, is_graph_isomorphic, strict_order_separates
from .monomial import LaurentMonomial, MonomialError, PrefixCondition
from .oracle import BACKENDS, ReplayOracle, TreeOracle, build_term_table, format_answer
from .reconstruct import ReconstructionError, reconstruct_tree
from .tree import RootedTree, TreeError, enumerate_rooted_trees, random_tree


def parse_query(text: str) -> PrefixCondition:
    """Accept "x1^2 x3" or a structured JSON object such as {"1": 2, "3": 1}."""
    text = text.strip()
    if text.startswith("{"):
        m = LaurentMonomial.from_structured(json.loads(text))
        return PrefixCondition.from_monomial(m, max(m.max_index, 0))
    return PrefixCondition.parse(text)


def _tree_arg(text: str) -> RootedTree:
    p = Path(text)
    if not text.lstrip().startswith("(") and p.is_file():
        text = p.read_text()
    return RootedTree.parse(text)


def cmd_gen(args) -> int:
    if args.enumerate is not None:
        trees = enumerate_rooted_trees(args.enumerate)
    elif args.d is None:
        raise TreeError("give a vertex count or --enumerate d")
    else:
        trees = [random_tree(args.d, args.seed)]
    for t in trees:
        print(t.canonical_code() if args.enumerate is not None else t.to_text())
    return 0


def cmd_terms(args) -> int:
    t = _tree_arg(args.tree)
    max_color = args.max_color if args.max_color is not None else t.num_layers + 1
    table = build_term_table(t, max_color)
    rows = table.sorted_terms()
    if args.top is not None:
        rows = rows[: args.top]
    if args.json:
        print(json.dumps([{"coefficient": c, "term": m.to_structured()} for m, c in rows]))
    else:
        for m, c in rows:
            print(f"{c} {m}")
    return 0


def cmd_sample(args) -> int:
    t = _tree_arg(args.tree)
    print(format_answer(TreeOracle(t, args.backend).answer(parse_query(args.query))))
    return 0


def cmd_reconstruct(args) -> int:
    if args.transcript:
        oracle = ReplayOracle(Path(args.transcript).read_text().splitlines())
    elif args.tree:
        oracle = TreeOracle(_tree_arg(args.tree), args.backend)
    else:
        raise TreeError("give a tree or --transcript")
    res = reconstruct_tree(oracle)
    if args.json:
        print(json.dumps(res.to_document(), indent=2))
    else:
        print(res.tree.canonical_code())
        for line in res.ledger.transcript():
            print(line)
    return 0


def _verify_one(code_and_backend: tuple[str, str]) -> tuple[str, bool, int, str]:
    code, backend = code_and_backend
    t = RootedTree.parse(code)
    try:
        res = reconstruct_tree(TreeOracle(t, backend))
    except (ReconstructionError, ValueError, RuntimeError) as exc:
        return code, False, 0, str(exc)
    return code, res.tree.is_isomorphic(t), len(res.ledger), ""


def cmd_verify(args) -> int:
    if args.enumerate is not None:
        codes = sorted(t.canonical_code() for t in enumerate_rooted_trees(args.enumerate))
    elif args.tree:
        codes = [_tree_arg(args.tree).canonical_code()]
    else:
        raise TreeError("give a tree or --enumerate d")
    work = [(c, args.backend) for c in codes]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_verify_one, work))
    else:
        results = [_verify_one(w) for w in work]
    failed = 0
    for code, ok, n, err in sorted(results):
        failed += not ok
        print(f"{'OK' if ok else 'FAIL'} {code} queries={n}" + (f" {err}" if err else ""))
    print(f"{len(results) - failed}/{len(results)} OK")
    return 0 if failed == 0 else 1


def cmd_separate(args) -> int:
    t1, t2 = _tree_arg(args.tree1), _tree_arg(args.tree2)
    diff = strict_order_separates(t1, t2, args.backend)
    if diff is None:
        print("NONE")
    else:
        print(f"entry {diff.index}")
        print(f"  first:  {diff.first or '(transcript ended)'}")
        print(f"  second: {diff.second or '(transcript ended)'}")
    return 0


def cmd_demo_csf(args) -> int:
    b, d = bowtie(), dart()
    fb, fd = csf_fingerprint(b), csf_fingerprint(d)
    equal = fb == fd
    iso = is_graph_isomorphic(b, d)
    for shape in sorted(fb, reverse=True):
        print(f"{shape}: bowtie {fb[shape]} dart {fd.get(shape, 0)}")
    print(f"{'EQUAL' if equal else 'DIFFERENT'} fingerprints, {'isomorphic' if iso else 'NON-isomorphic'} graphs")
    return 0 if equal and not iso else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="treeqsym", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="random tree or all trees of a size")
    g.add_argument("d", type=int, nargs="?")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--enumerate", type=int, metavar="D")
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("terms", help="terms of the strict order function with bounded colors")
    t.add_argument("tree")
    t.add_argument("--max-color", type=int)
    t.add_argument("--top", type=int)
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_terms)

    s = sub.add_parser("sample", help="lex-greatest term matching a prefix")
    s.add_argument("tree")
    s.add_argument("query")
    s.add_argument("--backend", choices=BACKENDS, default="structured")
    s.set_defaults(func=cmd_sample)

    r = sub.add_parser("reconstruct", help="rebuild a tree from sampled terms")
    r.add_argument("tree", nargs="?")
    r.add_argument("--transcript", metavar="PATH")
    r.add_argument("--backend", choices=BACKENDS, default="structured")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_reconstruct)

    v = sub.add_parser("verify", help="round-trip reconstruction check")
    v.add_argument("tree", nargs="?")
    v.add_argument("--enumerate", type=int, metavar="D")
    v.add_argument("--backend", choices=BACKENDS, default="structured")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    p = sub.add_parser("separate", help="first sample on which two trees differ")
    p.add_argument("tree1")
    p.add_argument("tree2")
    p.add_argument("--backend", choices=BACKENDS, default="structured")
    p.set_defaults(func=cmd_separate)

    c = sub.add_parser("demo-csf", help="bowtie and dart share a chromatic symmetric function")
    c.set_defaults(func=cmd_demo_csf)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TreeError, MonomialError, ReconstructionError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
