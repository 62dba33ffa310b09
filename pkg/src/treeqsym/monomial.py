"""Sparse Laurent monomials in the indeterminates x_0, x_1, x_2, ...

Monomials are immutable and hashable.  They are ordered lexicographically on
their exponent tuples (e_0, e_1, ...): the first index where two monomials
differ decides, and the larger exponent wins.  This is a group order, so
multiplying both sides by the same monomial preserves comparisons.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Mapping


class MonomialError(ValueError):
    """Raised for malformed monomials or operator domain violations."""


_FACTOR = re.compile(r"x(\d+)(?:\^(-?\d+))?")


@total_ordering
class LaurentMonomial:
    """A monomial prod x_i^{e_i} with finitely many nonzero integer exponents."""

    __slots__ = ("_items", "_hash")

    def __init__(self, exponents: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(exponents, Mapping):
            pairs = exponents.items()
        else:
            pairs = exponents
        acc: dict[int, int] = {}
        for i, e in pairs:
            i, e = int(i), int(e)
            if i < 0:
                raise MonomialError(f"negative index {i}")
            acc[i] = acc.get(i, 0) + e
        self._items = tuple(sorted((i, e) for i, e in acc.items() if e != 0))
        self._hash = hash(self._items)

    # construction helpers

    @classmethod
    def one(cls) -> LaurentMonomial:
        return _ONE

    @classmethod
    def var(cls, i: int, e: int = 1) -> LaurentMonomial:
        return cls({i: e})

    @classmethod
    def from_dense(cls, exps: Iterable[int], start: int = 0) -> LaurentMonomial:
        return cls((start + k, e) for k, e in enumerate(exps))

    @classmethod
    def parse(cls, text: str) -> LaurentMonomial:
        """Parse "x1 x2^4 x3^6" (or "1" for the identity)."""
        return cls(_parse_factors(text))

    @classmethod
    def from_structured(cls, data: Mapping[str, int]) -> LaurentMonomial:
        return cls({int(k): int(v) for k, v in data.items()})

    # accessors

    def exponent(self, i: int) -> int:
        for j, e in self._items:
            if j == i:
                return e
            if j > i:
                break
        return 0

    def items(self) -> tuple[tuple[int, int], ...]:
        return self._items

    def as_dict(self) -> dict[int, int]:
        return dict(self._items)

    def to_structured(self) -> dict[str, int]:
        return {str(i): e for i, e in self._items}

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self._items)

    @property
    def max_index(self) -> int:
        """Largest index with a nonzero exponent, or -1 for the identity."""
        return self._items[-1][0] if self._items else -1

    @property
    def degree(self) -> int:
        return sum(e for _, e in self._items)

    def is_one(self) -> bool:
        return not self._items

    def is_nonnegative(self) -> bool:
        return all(e > 0 for _, e in self._items)

    def dense(self, width: int) -> tuple[int, ...]:
        """Exponents at indices 0..width-1; raises if support does not fit."""
        out = [0] * width
        for i, e in self._items:
            if i >= width:
                raise MonomialError(f"index {i} does not fit in width {width}")
            out[i] = e
        return tuple(out)

    # group operations

    def __mul__(self, other: LaurentMonomial) -> LaurentMonomial:
        if not isinstance(other, LaurentMonomial):
            return NotImplemented
        return LaurentMonomial(self._items + other._items)

    def __truediv__(self, other: LaurentMonomial) -> LaurentMonomial:
        if not isinstance(other, LaurentMonomial):
            return NotImplemented
        return LaurentMonomial(self._items + tuple((i, -e) for i, e in other._items))

    def __pow__(self, k: int) -> LaurentMonomial:
        return LaurentMonomial((i, e * k) for i, e in self._items)

    def inverse(self) -> LaurentMonomial:
        return self ** -1

    def divides(self, other: LaurentMonomial) -> bool:
        """True when other / self has no negative exponent."""
        return all(e >= 0 for _, e in (other / self)._items)

    # shift operators

    def sigma(self, s: int = 1) -> LaurentMonomial:
        if s < 0:
            raise MonomialError("shift count must be nonnegative")
        return LaurentMonomial((i + s, e) for i, e in self._items)

    def sigma_inverse(self, s: int = 1) -> LaurentMonomial:
        if s < 0:
            raise MonomialError("shift count must be nonnegative")
        if self._items and self._items[0][0] < s:
            raise MonomialError(f"{self} has a nonzero exponent below index {s}")
        return LaurentMonomial((i - s, e) for i, e in self._items)

    def tau(self) -> LaurentMonomial:
        return self.sigma() / self

    def tau_inverse(self) -> LaurentMonomial:
        # tau(prod x_i^{e_i}) = prod x_i^{e_{i-1} - e_i}, so e_i = e_{i-1} - m_i.
        if not self._items:
            return self
        e = 0
        out = []
        m = dict(self._items)
        for i in range(self.max_index + 1):
            e -= m.get(i, 0)
            out.append((i, e))
        if e != 0:
            raise MonomialError(f"{self} is not in the image of tau")
        return LaurentMonomial(out)

    def truncate(self, n: int) -> LaurentMonomial:
        return LaurentMonomial((i, e) for i, e in self._items if i <= n)

    # ordering

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentMonomial):
            return NotImplemented
        return self._items == other._items

    def __lt__(self, other: LaurentMonomial) -> bool:
        if not isinstance(other, LaurentMonomial):
            return NotImplemented
        return lex_compare(self, other) < 0

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return format_factors(self._items)

    def __repr__(self) -> str:
        return f"LaurentMonomial({str(self)!r})"


_ONE = LaurentMonomial()


def lex_compare(a: LaurentMonomial, b: LaurentMonomial) -> int:
    """Return -1, 0 or 1 as a is lex-less, equal or greater than b."""
    x, y = a._items, b._items
    for (i, e), (j, f) in zip(x, y):
        if (i, e) == (j, f):
            continue
        if i < j:
            return 1 if e > 0 else -1
        if j < i:
            return -1 if f > 0 else 1
        return 1 if e > f else -1
    if len(x) > len(y):
        return 1 if x[len(y)][1] > 0 else -1
    if len(y) > len(x):
        return -1 if y[len(x)][1] > 0 else 1
    return 0


def sigma(m: LaurentMonomial, s: int = 1) -> LaurentMonomial:
    return m.sigma(s)


def sigma_inverse(m: LaurentMonomial, s: int = 1) -> LaurentMonomial:
    return m.sigma_inverse(s)


def tau(m: LaurentMonomial) -> LaurentMonomial:
    return m.tau()


def tau_inverse(m: LaurentMonomial) -> LaurentMonomial:
    return m.tau_inverse()


def truncate(m: LaurentMonomial, n: int) -> LaurentMonomial:
    return m.truncate(n)


def format_factors(items: Iterable[tuple[int, int]], keep_zero_at: int | None = None) -> str:
    parts = []
    for i, e in items:
        if e == 0 and i != keep_zero_at:
            continue
        parts.append(f"x{i}" if e == 1 else f"x{i}^{e}")
    return " ".join(parts) if parts else "1"


def _parse_factors(text: str) -> list[tuple[int, int]]:
    text = text.strip()
    if text in ("", "1"):
        return []
    out = []
    for tok in text.replace("*", " ").split():
        m = _FACTOR.fullmatch(tok)
        if m is None:
            raise MonomialError(f"cannot parse factor {tok!r}")
        out.append((int(m.group(1)), int(m.group(2)) if m.group(2) is not None else 1))
    return out


@dataclass(frozen=True)
class PrefixCondition:
    """Exact exponent constraints on x_0..x_bound, zeros included.

    A monomial matches when its exponent at every index i <= bound equals
    ``exponents[i]``.  Indices above the bound are unconstrained.
    """

    exponents: tuple[int, ...]

    def __post_init__(self):
        if not self.exponents:
            raise MonomialError("a prefix condition covers at least index 0")
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))

    @property
    def bound(self) -> int:
        return len(self.exponents) - 1

    @classmethod
    def empty(cls) -> PrefixCondition:
        return cls((0,))

    @classmethod
    def from_monomial(cls, m: LaurentMonomial, bound: int | None = None) -> PrefixCondition:
        if bound is None:
            bound = max(m.max_index, 0)
        if m.max_index > bound:
            raise MonomialError(f"{m} has support beyond bound {bound}")
        return cls(m.dense(bound + 1))

    @classmethod
    def parse(cls, text: str) -> PrefixCondition:
        """Parse query text; the largest written index sets the bound.

        "x1 x2^0" constrains x_0, x_1 and x_2; "1" is the empty condition.
        """
        items = _parse_factors(text)
        if not items:
            return cls.empty()
        bound = max(i for i, _ in items)
        exps = [0] * (bound + 1)
        for i, e in items:
            exps[i] += e
        return cls(tuple(exps))

    def monomial(self) -> LaurentMonomial:
        return LaurentMonomial.from_dense(self.exponents)

    def matches(self, m: LaurentMonomial) -> bool:
        return all(m.exponent(i) == e for i, e in enumerate(self.exponents))

    def is_nonnegative(self) -> bool:
        return all(e >= 0 for e in self.exponents)

    def __str__(self) -> str:
        if self.bound == 0 and self.exponents[0] == 0:
            return "1"
        return format_factors(enumerate(self.exponents), keep_zero_at=self.bound)


def matches_prefix(m: LaurentMonomial, c: PrefixCondition) -> bool:
    return c.matches(m)
