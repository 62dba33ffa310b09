"""Rooted trees, coheights, layer profiles and nested profiles."""

from __future__ import annotations

import random
from functools import cached_property, lru_cache, total_ordering
from typing import Iterable, Sequence

from .monomial import LaurentMonomial, lex_compare

ENUMERATION_CAP = 12


class TreeError(ValueError):
    pass


class RootedTree:
    """An immutable rooted tree on vertices 0..d-1.

    Children lists are storage order only.  Everything exposed here apart from
    vertex ids is invariant under isomorphism.
    """

    __slots__ = ("parent", "children", "root", "__dict__")

    def __init__(self, parent: Sequence[int | None]):
        d = len(parent)
        if d == 0:
            raise TreeError("a tree has at least one vertex")
        par: list[int | None] = []
        for v, p in enumerate(parent):
            if p is None or p < 0:
                par.append(None)
            elif not 0 <= p < d or p == v:
                raise TreeError(f"bad parent {p} for vertex {v}")
            else:
                par.append(int(p))
        roots = [v for v, p in enumerate(par) if p is None]
        if len(roots) != 1:
            raise TreeError(f"expected exactly one root, found {len(roots)}")
        kids: list[list[int]] = [[] for _ in range(d)]
        for v, p in enumerate(par):
            if p is not None:
                kids[p].append(v)
        self.parent = tuple(par)
        self.children = tuple(tuple(c) for c in kids)
        self.root = roots[0]
        if len(self.preorder) != d:
            raise TreeError("parent map has a cycle or unreachable vertices")

    # construction

    @classmethod
    def parse(cls, text: str) -> RootedTree:
        """Parse nested parentheses, e.g. "(()(()))"; whitespace is ignored."""
        s = "".join(text.split())
        if not s:
            raise TreeError("empty tree text")
        parent: list[int | None] = []
        stack: list[int] = []
        closed_root = False
        for pos, ch in enumerate(s):
            if ch == "(":
                if closed_root:
                    raise TreeError("text holds more than one tree")
                parent.append(stack[-1] if stack else None)
                stack.append(len(parent) - 1)
            elif ch == ")":
                if not stack:
                    raise TreeError(f"unbalanced ')' at position {pos}")
                stack.pop()
                closed_root = not stack
            else:
                raise TreeError(f"unexpected character {ch!r}")
        if stack:
            raise TreeError("unbalanced '('")
        return cls(parent)

    @classmethod
    def single(cls) -> RootedTree:
        return cls([None])

    @classmethod
    def star(cls, r: int) -> RootedTree:
        return cls([None] + [0] * r)

    @classmethod
    def path(cls, d: int) -> RootedTree:
        return cls([None] + list(range(d - 1)))

    # basic structure

    def __len__(self) -> int:
        return len(self.parent)

    @property
    def size(self) -> int:
        return len(self.parent)

    def _check(self, v: int) -> None:
        if not 0 <= v < len(self.parent):
            raise TreeError(f"unknown vertex {v}")

    @cached_property
    def preorder(self) -> tuple[int, ...]:
        out, stack = [], [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.children[v]))
        return tuple(out)

    @cached_property
    def coheights(self) -> tuple[int, ...]:
        h = [0] * len(self.parent)
        for v in self.preorder:
            p = self.parent[v]
            if p is not None:
                h[v] = h[p] + 1
        return tuple(h)

    def coheight(self, v: int) -> int:
        self._check(v)
        return self.coheights[v]

    @cached_property
    def num_layers(self) -> int:
        return max(self.coheights) + 1

    @cached_property
    def layers(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_layers)]
        for v in range(len(self.parent)):
            out[self.coheights[v]].append(v)
        return tuple(tuple(x) for x in out)

    def layer(self, n: int) -> tuple[int, ...]:
        return self.layers[n] if 0 <= n < self.num_layers else ()

    def subtree_vertices(self, v: int) -> frozenset[int]:
        self._check(v)
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return frozenset(out)

    def ancestors(self, v: int) -> tuple[int, ...]:
        """Strict ancestors of v, nearest first."""
        self._check(v)
        out = []
        p = self.parent[v]
        while p is not None:
            out.append(p)
            p = self.parent[p]
        return tuple(out)

    def is_ancestor_or_self(self, a: int, v: int) -> bool:
        while v is not None:
            if v == a:
                return True
            v = self.parent[v]
        return False

    # profiles

    @cached_property
    def profiles(self) -> tuple[LaurentMonomial, ...]:
        """Coheight profile x_h|_v of every vertex, coheights taken in the whole tree."""
        acc: list[dict[int, int]] = [dict() for _ in self.parent]
        for v in reversed(self.preorder):
            acc[v][self.coheights[v]] = acc[v].get(self.coheights[v], 0) + 1
            p = self.parent[v]
            if p is not None:
                for i, e in acc[v].items():
                    acc[p][i] = acc[p].get(i, 0) + e
        return tuple(LaurentMonomial(a) for a in acc)

    def coheight_profile(self, v: int | None = None) -> LaurentMonomial:
        if v is None:
            v = self.root
        self._check(v)
        return self.profiles[v]

    def nested_profiles(self, level: int) -> tuple[NestedProfile, ...]:
        """Level-``level`` nested profile of every vertex's subtree."""
        if level < 1:
            raise TreeError("nested profile level must be at least 1")
        cur = tuple(NestedProfile(1, p) for p in self.profiles)
        for k in range(2, level + 1):
            nxt: list[NestedProfile | None] = [None] * len(self.parent)
            members: list[list[NestedProfile]] = [[] for _ in self.parent]
            for v in reversed(self.preorder):
                members[v].append(cur[v])
                nxt[v] = NestedProfile(k, tuple(members[v]))
                p = self.parent[v]
                if p is not None:
                    members[p].extend(members[v])
            cur = tuple(nxt)  # type: ignore[arg-type]
        return cur

    def nested_profile(self, level: int) -> NestedProfile:
        return self.nested_profiles(level)[self.root]

    # canonical form

    @cached_property
    def codes(self) -> tuple[str, ...]:
        """Sorted-children parenthesis code of every subtree."""
        code: list[str] = [""] * len(self.parent)
        for v in reversed(self.preorder):
            code[v] = "(" + "".join(sorted(code[c] for c in self.children[v])) + ")"
        return tuple(code)

    def canonical_code(self) -> str:
        return self.codes[self.root]

    def is_isomorphic(self, other: RootedTree) -> bool:
        return self.canonical_code() == other.canonical_code()

    def to_text(self) -> str:
        """Parenthesis text in storage order."""
        out: list[str] = []

        def walk(v: int) -> None:
            out.append("(")
            for c in self.children[v]:
                walk(c)
            out.append(")")

        walk(self.root)
        return "".join(out)

    def canonical(self) -> RootedTree:
        return RootedTree.parse(self.canonical_code())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootedTree):
            return NotImplemented
        return self.parent == other.parent

    def __hash__(self) -> int:
        return hash(self.parent)

    def __repr__(self) -> str:
        return f"RootedTree.parse({self.to_text()!r})"


def coheight(t: RootedTree, v: int) -> int:
    return t.coheight(v)


def layer(t: RootedTree, n: int) -> tuple[int, ...]:
    return t.layer(n)


def subtree_vertices(t: RootedTree, v: int) -> frozenset[int]:
    return t.subtree_vertices(v)


def coheight_profile(t: RootedTree, v: int | None = None) -> LaurentMonomial:
    return t.coheight_profile(v)


def nested_profile(t: RootedTree, level: int) -> NestedProfile:
    return t.nested_profile(level)


def canonical_code(t: RootedTree) -> str:
    return t.canonical_code()


def is_isomorphic(a: RootedTree, b: RootedTree) -> bool:
    return a.is_isomorphic(b)


@total_ordering
class NestedProfile:
    """A level-1 profile (a monomial) or a sorted multiset of lower-level profiles."""

    __slots__ = ("level", "value", "_key", "_base", "_hash")

    def __init__(self, level: int, value: LaurentMonomial | Iterable[NestedProfile]):
        if level < 1:
            raise TreeError("nested profile level must be at least 1")
        if level == 1:
            if not isinstance(value, LaurentMonomial):
                raise TreeError("a level-1 nested profile holds a monomial")
            if not value.is_nonnegative():
                raise TreeError("profile exponents are nonnegative")
            self.value = value
            # With nonnegative exponents, tuple order on the dense exponents
            # equals lex order on monomials.
            self._key = value.dense(value.max_index + 1)
            self._base = value
        else:
            items = list(value)  # type: ignore[arg-type]
            for it in items:
                if not isinstance(it, NestedProfile) or it.level != level - 1:
                    raise TreeError(f"level-{level} profile needs level-{level - 1} members")
            items.sort(key=lambda it: it._key)
            self.value = tuple(items)
            self._key = tuple(it._key for it in items)
            self._base = max((it._base for it in items), default=None)
        self.level = level
        self._hash = hash((level, self._key))

    @property
    def members(self) -> tuple[NestedProfile, ...]:
        if self.level == 1:
            raise TreeError("level-1 profiles have no members")
        return self.value  # type: ignore[return-value]

    def base_monomial(self) -> LaurentMonomial:
        """The level-1 profile of the subtree this profile describes.

        The subtree root's own profile is the lex-largest level-1 profile
        inside, since it alone has an exponent at the root's coheight.
        """
        if self._base is None:
            raise TreeError("an empty profile has no base monomial")
        return self._base

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NestedProfile):
            return NotImplemented
        return self.level == other.level and self._key == other._key

    def __lt__(self, other: NestedProfile) -> bool:
        return nested_compare(self, other) < 0

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if self.level == 1:
            return str(self.value)
        return "{" + ", ".join(str(m) for m in self.members) + "}"

    def __repr__(self) -> str:
        return f"NestedProfile({self.level}, {str(self)})"

    def to_structured(self):
        if self.level == 1:
            return self.value.to_structured()  # type: ignore[union-attr]
        return [m.to_structured() for m in self.members]


def nested_compare(a: NestedProfile, b: NestedProfile) -> int:
    if a.level != b.level:
        raise TreeError(f"cannot compare levels {a.level} and {b.level}")
    if a.level == 1:
        return lex_compare(a.value, b.value)  # type: ignore[arg-type]
    return (a._key > b._key) - (a._key < b._key)


# enumeration


@lru_cache(maxsize=None)
def _codes_of_size(d: int) -> tuple[str, ...]:
    """Canonical codes of all rooted trees with d vertices."""
    if d == 1:
        return ("()",)
    out = set()
    for forest in _forests(d - 1, d - 1, None):
        out.add("(" + "".join(sorted(forest)) + ")")
    return tuple(sorted(out))


def _forests(total: int, max_size: int, max_code: str | None):
    """Multisets of subtree codes with the given vertex total.

    Members come in non-increasing (size, code) order so each multiset is
    produced once.
    """
    if total == 0:
        yield ()
        return
    for size in range(min(total, max_size), 0, -1):
        for code in reversed(_codes_of_size(size)):
            if size == max_size and max_code is not None and code > max_code:
                continue
            for rest in _forests(total - size, size, code):
                yield (code,) + rest


def enumerate_rooted_trees(d: int, cap: int = ENUMERATION_CAP) -> list[RootedTree]:
    """One representative per isomorphism class of rooted trees on d vertices."""
    if d < 1:
        raise TreeError("d must be at least 1")
    if d > cap:
        raise TreeError(f"enumeration capped at d = {cap}")
    return [RootedTree.parse(c) for c in _codes_of_size(d)]


def random_tree(d: int, seed: int | None = None) -> RootedTree:
    """Random recursive tree: each new vertex picks a uniform earlier parent."""
    if d < 1:
        raise TreeError("d must be at least 1")
    rng = random.Random(seed)
    return RootedTree([None] + [rng.randrange(v) for v in range(1, d)])
