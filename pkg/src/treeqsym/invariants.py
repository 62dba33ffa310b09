"""Weaker invariants for contrast: chromatic polynomials and chromatic symmetric functions.

Every tree on d vertices has chromatic polynomial x(x-1)^(d-1), and two
non-isomorphic graphs (the bowtie and the dart) share a chromatic
symmetric function.  The strict order function, by contrast, separates
rooted trees, and ``strict_order_separates`` exhibits the first sample on
which two trees disagree.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import comb

from .oracle import TreeOracle
from .reconstruct import reconstruct_tree
from .tree import RootedTree


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError("loops are not allowed")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {u}-{v} leaves the vertex range")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges) -> SimpleGraph:
        return cls(n, frozenset(tuple(e) for e in edges))

    @classmethod
    def parse(cls, text: str) -> SimpleGraph:
        """One "u-v" edge per line; vertices are 0..max id."""
        edges = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            u, _, v = line.partition("-")
            edges.append((int(u), int(v)))
        n = 1 + max((max(e) for e in edges), default=-1)
        return cls.from_edges(n, edges)

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degrees(self) -> list[int]:
        return [len(a) for a in self.neighbors()]


def bowtie() -> SimpleGraph:
    """Two triangles sharing vertex 0."""
    return SimpleGraph.from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])


def dart() -> SimpleGraph:
    """Two triangles sharing edge 1-2, with a pendant vertex on a degree-2 corner."""
    return SimpleGraph.from_edges(5, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4)])


def tree_as_graph(t: RootedTree) -> SimpleGraph:
    return SimpleGraph.from_edges(t.size, [(v, p) for v, p in enumerate(t.parent) if p is not None])


def is_graph_isomorphic(g: SimpleGraph, h: SimpleGraph) -> bool:
    if g.n != h.n or len(g.edges) != len(h.edges) or sorted(g.degrees()) != sorted(h.degrees()):
        return False
    for perm in itertools.permutations(range(g.n)):
        if {(min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in g.edges} == h.edges:
            return True
    return False


def chromatic_polynomial_tree(d: int) -> list[int]:
    """Coefficients of x(x-1)^(d-1), constant term first."""
    if d < 1:
        raise ValueError("d must be at least 1")
    coeffs = [0] * (d + 1)
    for k in range(d):
        coeffs[k + 1] = comb(d - 1, k) * (-1) ** (d - 1 - k)
    return coeffs


def evaluate(coeffs: list[int], x: int) -> int:
    return sum(c * x**i for i, c in enumerate(coeffs))


def _proper_colorings(g: SimpleGraph, k: int):
    adj = g.neighbors()
    colors = [0] * g.n

    def rec(v: int):
        if v == g.n:
            yield tuple(colors)
            return
        for c in range(1, k + 1):
            if all(colors[u] != c for u in adj[v] if u < v):
                colors[v] = c
                yield from rec(v + 1)
        colors[v] = 0

    yield from rec(0)


def proper_coloring_count(g: SimpleGraph, k: int) -> int:
    return sum(1 for _ in _proper_colorings(g, k))


def csf_fingerprint(g: SimpleGraph) -> dict[tuple[int, ...], int]:
    """Proper colorings with colors 1..n, counted by their sorted color-usage vector.

    The chromatic symmetric function is homogeneous of degree n and
    symmetric, so these counts determine it.
    """
    out: Counter[tuple[int, ...]] = Counter()
    for col in _proper_colorings(g, g.n):
        out[tuple(sorted(Counter(col).values(), reverse=True))] += 1
    return dict(out)


@dataclass(frozen=True)
class TranscriptDifference:
    index: int
    first: str
    second: str


def strict_order_separates(
    t1: RootedTree, t2: RootedTree, backend: str = "structured"
) -> TranscriptDifference | None:
    """First differing entry of the two reconstruction transcripts, or None."""
    a = reconstruct_tree(TreeOracle(t1, backend)).ledger.transcript()
    b = reconstruct_tree(TreeOracle(t2, backend)).ledger.transcript()
    for i, (x, y) in enumerate(itertools.zip_longest(a, b, fillvalue="")):
        if x != y:
            return TranscriptDifference(i, x, y)
    return None
