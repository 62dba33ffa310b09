"""Increasing colorings and their gap-multiset coordinates.

A gap multiset S determines the coloring f_S(v) = 1 + h_v + (number of copies
in S of ancestors-or-self of v).  Every increasing coloring arises from
exactly one S, and the monomial of f_S has a closed form in terms of the
coheight profiles of the members of S.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .monomial import LaurentMonomial
from .tree import RootedTree


class ColoringError(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    """Colors indexed by vertex id."""

    colors: tuple[int, ...]

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def is_increasing(self, t: RootedTree) -> bool:
        return all(
            p is None or self.colors[p] < self.colors[v] for v, p in enumerate(t.parent)
        ) and all(c >= 1 for c in self.colors)

    def __str__(self) -> str:
        return ",".join(f"{v}:{c}" for v, c in enumerate(self.colors))

    @classmethod
    def parse(cls, text: str) -> Coloring:
        pairs = sorted(_pairs(text, ":"))
        if [v for v, _ in pairs] != list(range(len(pairs))):
            raise ColoringError("coloring text must list vertices 0..d-1 once each")
        return cls(tuple(c for _, c in pairs))


@dataclass(frozen=True)
class GapMultiset:
    """Multiset of vertices, stored as sorted (vertex, multiplicity) pairs."""

    counts: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        acc: Counter[int] = Counter()
        for v, k in self.counts:
            if k < 0:
                raise ColoringError("multiplicities are nonnegative")
            acc[int(v)] += int(k)
        object.__setattr__(self, "counts", tuple(sorted((v, k) for v, k in acc.items() if k)))

    @classmethod
    def of(cls, members: Iterable[int] | Mapping[int, int]) -> GapMultiset:
        if isinstance(members, Mapping):
            return cls(tuple(members.items()))
        return cls(tuple(Counter(members).items()))

    def multiplicity(self, v: int) -> int:
        return dict(self.counts).get(v, 0)

    def __len__(self) -> int:
        return sum(k for _, k in self.counts)

    def members(self) -> list[int]:
        return [v for v, k in self.counts for _ in range(k)]

    def check(self, t: RootedTree) -> None:
        for v, _ in self.counts:
            if not 0 <= v < t.size:
                raise ColoringError(f"vertex {v} is not in the tree")

    def __str__(self) -> str:
        return ",".join(f"{v}^{k}" for v, k in self.counts)

    @classmethod
    def parse(cls, text: str) -> GapMultiset:
        return cls(tuple(_pairs(text, "^")))


def _pairs(text: str, sep: str) -> list[tuple[int, int]]:
    out = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        a, _, b = tok.partition(sep)
        if not b:
            raise ColoringError(f"expected 'v{sep}n', got {tok!r}")
        out.append((int(a), int(b)))
    return out


def f_of_S(t: RootedTree, S: GapMultiset) -> Coloring:
    S.check(t)
    mult = dict(S.counts)
    colors = [0] * t.size
    above = [0] * t.size  # copies in S of ancestors-or-self
    for v in t.preorder:
        p = t.parent[v]
        above[v] = (above[p] if p is not None else 0) + mult.get(v, 0)
        colors[v] = 1 + t.coheights[v] + above[v]
    return Coloring(tuple(colors))


def S_of_f(t: RootedTree, f: Coloring) -> GapMultiset:
    if len(f.colors) != t.size:
        raise ColoringError("coloring size does not match the tree")
    counts = []
    for v, p in enumerate(t.parent):
        k = f[v] - (f[p] if p is not None else 0) - 1
        if k < 0:
            raise ColoringError(f"coloring is not increasing at vertex {v}")
        counts.append((v, k))
    return GapMultiset(tuple(counts))


def elevations(t: RootedTree, S: GapMultiset) -> list[tuple[int, int]]:
    """(vertex, elevation) for every copy in S.

    A copy's elevation counts the copies of strict ancestors in S plus the
    earlier copies of the same vertex, so k copies take a, a+1, ..., a+k-1.
    """
    S.check(t)
    mult = dict(S.counts)
    out = []
    for v, k in S.counts:
        a = sum(mult.get(u, 0) for u in t.ancestors(v))
        out.extend((v, a + j) for j in range(k))
    return out


def elevation(t: RootedTree, S: GapMultiset, g: int, copy: int = 0) -> int:
    k = S.multiplicity(g)
    if not 0 <= copy < k:
        raise ColoringError(f"vertex {g} has no copy {copy} in S")
    mult = dict(S.counts)
    return sum(mult.get(u, 0) for u in t.ancestors(g)) + copy


def profile_of_coloring(t: RootedTree, f: Coloring) -> LaurentMonomial:
    return LaurentMonomial(Counter(f.colors))


def gap_product(t: RootedTree, S: GapMultiset) -> LaurentMonomial:
    """prod over copies g in S of sigma^{elevation}(x_h|_g)."""
    acc: Counter[int] = Counter()
    for g, e in elevations(t, S):
        for i, k in t.profiles[g].items():
            acc[i + e] += k
    return LaurentMonomial(acc)


def profile_by_formula(t: RootedTree, S: GapMultiset) -> LaurentMonomial:
    xh = t.coheight_profile()
    return (xh * gap_product(t, S).tau()).sigma()


def enumerate_increasing_colorings(t: RootedTree, max_color: int) -> Iterator[Coloring]:
    """All increasing colorings with colors in 1..max_color.

    Colorings come out in lexicographic order of the color tuple indexed by
    vertex id.
    """
    if max_color < t.num_layers:
        raise ColoringError(
            f"max_color {max_color} is below the layer count {t.num_layers}; no colorings exist"
        )
    d = t.size
    h = t.coheights
    # height[v]: longest downward path from v, so v needs room for it below max_color
    height = [0] * d
    for v in reversed(t.preorder):
        p = t.parent[v]
        if p is not None:
            height[p] = max(height[p], height[v] + 1)
    colors = [0] * d

    def rec(v: int) -> Iterator[Coloring]:
        if v == d:
            yield Coloring(tuple(colors))
            return
        lo, hi = 1 + h[v], max_color - height[v]
        p = t.parent[v]
        if p is not None and colors[p]:
            lo = max(lo, colors[p] + 1)
        for c in t.children[v]:
            if colors[c]:
                hi = min(hi, colors[c] - 1)
        for col in range(lo, hi + 1):
            colors[v] = col
            yield from rec(v + 1)
        colors[v] = 0

    yield from rec(0)


def enumerate_gap_multisets(t: RootedTree, max_color: int) -> Iterator[GapMultiset]:
    """All S whose coloring f_S stays within 1..max_color.

    Walks S directly (not through colorings), so it is an independent check
    on the bijection between gap multisets and increasing colorings.
    """
    height = [0] * t.size
    for v in reversed(t.preorder):
        p = t.parent[v]
        if p is not None:
            height[p] = max(height[p], height[v] + 1)
    order = t.preorder
    mult = [0] * t.size
    above = [0] * t.size

    def rec(i: int) -> Iterator[GapMultiset]:
        if i == len(order):
            yield GapMultiset(tuple((v, k) for v, k in enumerate(mult) if k))
            return
        v = order[i]
        p = t.parent[v]
        base = above[p] if p is not None else 0
        # the deepest vertex below v gets color 1 + h_v + height_v + copies
        room = max_color - (1 + t.coheights[v] + height[v]) - base
        for k in range(room + 1):
            mult[v] = k
            above[v] = base + k
            yield from rec(i + 1)
        mult[v] = 0

    yield from rec(0)
