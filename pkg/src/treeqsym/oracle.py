"""The strict order quasisymmetric function as a queryable object.

Two independent ways to answer the sampling query F(q), the lex-greatest
term whose exponents on x_0..x_n equal the prefix q:

* ``brute`` builds the bounded term table by dynamic programming over
  increasing colorings and scans it;
* ``structured`` searches gap multisets for the minimal gap product with a
  prefix determined by q, then maps it back through the product formula.

Answers are monomials or ``None`` for an empty prefix class.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Protocol

from .coloring import enumerate_increasing_colorings, profile_of_coloring
from .monomial import LaurentMonomial, MonomialError, PrefixCondition
from .tree import RootedTree

BACKENDS = ("brute", "structured", "both")


class OracleInconsistency(RuntimeError):
    """An answer that no genuine tree could have produced."""


# term tables


@dataclass(frozen=True)
class TermTable:
    tree: RootedTree
    max_color: int
    terms: dict[LaurentMonomial, int]

    def coefficient(self, m: LaurentMonomial) -> int:
        return self.terms.get(m, 0)

    def total(self) -> int:
        return sum(self.terms.values())

    def sorted_terms(self) -> list[tuple[LaurentMonomial, int]]:
        """Terms in lex-descending order."""
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def max_matching(self, q: PrefixCondition) -> LaurentMonomial | None:
        best = None
        for m in self.terms:
            if q.matches(m) and (best is None or best < m):
                best = m
        return best


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, 0) + ca * cb
    return out


def _poly_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + c
    return out


def build_term_table(t: RootedTree, max_color: int, method: str = "dp") -> TermTable:
    """Every term of the strict order function with colors <= max_color.

    ``method="enumerate"`` walks the colorings one by one; ``"dp"`` multiplies
    per-color generating polynomials up the tree and is far faster.
    """
    if method == "enumerate":
        terms = Counter(
            profile_of_coloring(t, f) for f in enumerate_increasing_colorings(t, max_color)
        )
        return TermTable(t, max_color, dict(terms))
    if method != "dp":
        raise ValueError(f"unknown method {method!r}")
    if max_color < t.num_layers:
        # same signal as the enumerator
        list(enumerate_increasing_colorings(t, max_color))
    K = max_color
    zero = (0,) * (K + 1)
    memo: dict[str, list[dict]] = {}
    below: list[list[dict] | None] = [None] * t.size  # below[v][c]: subtree of v, v colored > c

    for v in reversed(t.preorder):
        code = t.codes[v]
        if code not in memo:
            per_color = []
            for c in range(1, K + 1):
                unit = list(zero)
                unit[c] = 1
                poly = {tuple(unit): 1}
                for w in t.children[v]:
                    poly = _poly_mul(poly, below[w][c])  # type: ignore[index]
                    if not poly:
                        break
                per_color.append(poly)
            # suffix sums: sums[c] = sum of per_color over colors > c
            sums: list[dict] = [dict() for _ in range(K + 1)]
            for c in range(K - 1, -1, -1):
                sums[c] = _poly_add(sums[c + 1], per_color[c])
            memo[code] = sums
        below[v] = memo[code]
    top = below[t.root][0]  # type: ignore[index]
    terms = {LaurentMonomial.from_dense(k): c for k, c in top.items()}
    return TermTable(t, max_color, terms)


# structured search


def minimal_gap_product(t: RootedTree, target: PrefixCondition) -> LaurentMonomial | None:
    """min over gap multisets S of prod sigma^{h_S(g)}(x_h|_g), prefix fixed.

    Only members with h_S(g) + h_g <= n can touch the prefix, and any other
    member would only make the product larger, so the search is finite.
    """
    n = target.bound
    width = t.num_layers + n + 1
    best = min_gap_search(
        t.parent,
        t.coheights,
        [t.profiles[v].dense(width) for v in range(t.size)],
        [v for layer in t.layers[: n + 1] for v in layer],
        target.exponents,
    )
    return None if best is None else LaurentMonomial.from_dense(best)


class GapTableTooLarge(RuntimeError):
    """A gap table would hold more prefixes than the caller allows."""


_FIELD = 12  # bits per prefix exponent in a packed key
_TAIL = 24  # bits per tail exponent in a packed value


@dataclass(frozen=True)
class GapTable:
    """Least gap product for every prefix up to a cap, from one pass.

    Keys pack the exponents at 0..bound into one integer and values pack
    the exponents past the bound, both most significant first, so integer
    order is lex order.  Every stored prefix is the exact minimum over all
    gap multisets with that prefix.
    """

    bound: int
    width: int
    packed: dict[int, int]

    def key(self, goal: tuple[int, ...]) -> int:
        k = 0
        for e in goal:
            k = (k << _FIELD) | e
        return k

    def goal(self, key: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.bound + 1):
            out.append(key & ((1 << _FIELD) - 1))
            key >>= _FIELD
        return tuple(reversed(out))

    def vector(self, key: int) -> tuple[int, ...] | None:
        """Full dense product for a packed prefix, or None if unreachable."""
        tail = self.packed.get(key)
        if tail is None:
            return None
        rest = []
        for _ in range(self.width - self.bound - 1):
            rest.append(tail & ((1 << _TAIL) - 1))
            tail >>= _TAIL
        return self.goal(key) + tuple(reversed(rest))

    def lookup(self, goal: tuple[int, ...]) -> tuple[int, ...] | None:
        if len(goal) != self.bound + 1 or any(e < 0 for e in goal):
            return None
        if any(e >= 1 << (_FIELD - 1) for e in goal):
            return None
        return self.vector(self.key(goal))

    def __len__(self) -> int:
        return len(self.packed)


def gap_table(parent, coheight, prof, order, cap, limit: int | None = None) -> GapTable:
    """Least tail for every reachable prefix bounded by ``cap`` componentwise.

    Lex order is invariant under adding a common vector, so the least sum
    over independent parts is the sum of the least parts.  That makes a
    bottom-up pass exact: each (subtree, elevation) gets a table from
    prefix to least tail, and children merge by pairwise sums.  Subtrees
    with equal shape and profiles share one table.
    """
    n = len(cap) - 1
    width = len(prof[order[0]])
    if any(c >= 1 << (_FIELD - 1) for c in cap):
        raise ValueError("cap too large for packed prefixes")
    inset = set(order)
    kids: dict[int, list[int]] = {v: [] for v in order}
    root = order[0]
    for v in order:
        p = parent[v]
        if p is not None and p in inset:
            kids[p].append(v)
    # a packed prefix exceeds the cap exactly when adding ``guard`` sets a high bit
    high = guard = 0
    for i, c in enumerate(cap):
        shift = _FIELD * (n - i)
        high |= (1 << (_FIELD - 1)) << shift
        guard |= ((1 << (_FIELD - 1)) - 1 - c) << shift

    def encode(vec) -> tuple[int, int]:
        pk = tk = 0
        for i in range(n + 1):
            pk = (pk << _FIELD) | vec[i]
        for i in range(n + 1, width):
            tk = (tk << _TAIL) | vec[i]
        return pk, tk

    kind: dict[int, int] = {}
    intern: dict = {}
    for v in reversed(order):
        sig = (tuple(prof[v]), coheight[v], tuple(sorted(kind[c] for c in kids[v])))
        kind[v] = intern.setdefault(sig, len(intern))

    shifted: dict[tuple[int, int], tuple[int, int]] = {}

    def copy_at(v: int, s: int) -> tuple[int, int]:
        key = (kind[v], s)
        if key not in shifted:
            vec = [0] * width
            pv = prof[v]
            for i in range(width - s):
                vec[i + s] = pv[i]
            shifted[key] = encode(vec)
        return shifted[key]

    memo: dict[tuple[int, int], dict[int, int]] = {}

    def table(v: int, a: int) -> dict[int, int]:
        key = (kind[v], a)
        if key in memo:
            return memo[key]
        out: dict[int, int] = {}
        k = 0
        pk0 = tk0 = 0
        while True:
            cur = {pk0: tk0}
            for c in kids[v]:
                if coheight[c] + a + k > n:
                    break  # siblings share a layer, so all are past the bound
                sub = table(c, a + k)
                nxt: dict[int, int] = {}
                for p1, t1 in cur.items():
                    for p2, t2 in sub.items():
                        p = p1 + p2
                        if (p + guard) & high:
                            continue
                        t = t1 + t2
                        old = nxt.get(p)
                        if old is None or t < old:
                            nxt[p] = t
                if limit is not None and len(nxt) > limit:
                    raise GapTableTooLarge(f"more than {limit} prefixes")
                cur = nxt
            for p, t in cur.items():
                old = out.get(p)
                if old is None or t < old:
                    out[p] = t
            # one more copy of v, at elevation a + k
            s = a + k
            if coheight[v] + s > n:
                break
            dp, dt = copy_at(v, s)
            pk0 += dp
            tk0 += dt
            if (pk0 + guard) & high:
                break
            k += 1
        memo[key] = out
        return out

    return GapTable(n, width, table(root, 0))


def min_gap_search(parent, coheight, prof, order, goal) -> tuple[int, ...] | None:
    """Lex-least dense gap product whose exponents 0..n equal ``goal``.

    ``order`` lists the vertices of coheight <= n, root first.  ``prof``
    holds dense profiles of one common width.
    """
    if any(e < 0 for e in goal):
        return None
    return gap_table(parent, coheight, prof, order, tuple(goal)).lookup(tuple(goal))


def structured_F(t: RootedTree, q: PrefixCondition) -> LaurentMonomial | None:
    xh = t.coheight_profile()
    E = q.exponents
    if any(e < 0 for e in E) or E[0] != 0:
        return None
    if q.bound == 0:
        return xh.sigma()
    hd = xh.dense(max(xh.max_index + 1, q.bound + 1))
    P, prev = [], 0
    for i in range(q.bound):
        prev = prev + hd[i] - E[i + 1]
        if prev < 0:
            return None
        P.append(prev)
    M = minimal_gap_product(t, PrefixCondition(tuple(P)))
    if M is None:
        return None
    return (xh * M.tau()).sigma()


# oracles and ledgers


@dataclass(frozen=True)
class LedgerEntry:
    query: PrefixCondition
    answer: LaurentMonomial | None
    backend: str
    derived: tuple[PrefixCondition, LaurentMonomial | None] | None = None

    def line(self) -> str:
        return f"Q {self.query} => A {format_answer(self.answer)}"


def format_answer(a: LaurentMonomial | None) -> str:
    return "EMPTY" if a is None else str(a)


def parse_answer(text: str) -> LaurentMonomial | None:
    text = text.strip()
    return None if text == "EMPTY" else LaurentMonomial.parse(text)


@dataclass
class SampleLedger:
    entries: list[LedgerEntry] = field(default_factory=list)

    def append(self, e: LedgerEntry) -> None:
        self.entries.append(e)

    def __len__(self) -> int:
        return len(self.entries)

    def transcript(self) -> list[str]:
        return [e.line() for e in self.entries]


@dataclass(frozen=True)
class LedgerReport:
    query_count: int
    distinct_terms: int
    empty_answers: int
    transcript: tuple[str, ...]


def ledger_report(ledger: SampleLedger) -> LedgerReport:
    answers = [e.answer for e in ledger.entries]
    return LedgerReport(
        query_count=len(answers),
        distinct_terms=len({a for a in answers if a is not None}),
        empty_answers=sum(a is None for a in answers),
        transcript=tuple(ledger.transcript()),
    )


class Oracle(Protocol):
    ledger: SampleLedger

    def F(self, q: PrefixCondition) -> LaurentMonomial | None: ...


class TreeOracle:
    """Answers sampling queries for a hidden tree and records each one."""

    def __init__(self, tree: RootedTree, backend: str = "structured", ledger: SampleLedger | None = None):
        if backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}")
        self._tree = tree
        self.backend = backend
        self.ledger = ledger if ledger is not None else SampleLedger()
        self._tables: dict[int, TermTable] = {}

    def brute_bound(self, q: PrefixCondition) -> int:
        # In a lex-greatest term every vertex colored above n sits exactly one
        # above max(n, parent color), so colors never exceed n + layer count.
        return max(q.bound, 1) + self._tree.num_layers

    def _table(self, K: int) -> TermTable:
        if K not in self._tables:
            self._tables[K] = build_term_table(self._tree, K)
        return self._tables[K]

    def answer(self, q: PrefixCondition, backend: str | None = None) -> LaurentMonomial | None:
        """Answer without recording."""
        backend = backend or self.backend
        if backend == "brute":
            if not q.is_nonnegative():
                return None
            return self._table(self.brute_bound(q)).max_matching(q)
        if backend == "structured":
            return structured_F(self._tree, q)
        a = self.answer(q, "brute")
        b = self.answer(q, "structured")
        if a != b:
            raise OracleInconsistency(
                f"backends disagree on {q}: brute {format_answer(a)}, structured {format_answer(b)}"
            )
        return a

    def F(self, q: PrefixCondition) -> LaurentMonomial | None:
        a = self.answer(q)
        self.ledger.append(LedgerEntry(q, a, self.backend))
        return a


class ReplayOracle:
    """Answers queries from a recorded transcript."""

    def __init__(self, lines: Iterable[str]):
        self.ledger = SampleLedger()
        self._answers: dict[PrefixCondition, LaurentMonomial | None] = {}
        for raw in lines:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if not line.startswith("Q ") or " => A " not in line:
                raise ValueError(f"bad transcript line: {line!r}")
            q, _, a = line[2:].partition(" => A ")
            self._answers[PrefixCondition.parse(q)] = parse_answer(a)

    def F(self, q: PrefixCondition) -> LaurentMonomial | None:
        if q not in self._answers:
            raise OracleInconsistency(f"query {q} is not in the transcript")
        a = self._answers[q]
        self.ledger.append(LedgerEntry(q, a, "replay"))
        return a


def sample_F(t: RootedTree, q: PrefixCondition, backend: str = "structured") -> LaurentMonomial | None:
    return TreeOracle(t, backend).answer(q)


def F_tilde_query(xh: LaurentMonomial, q: PrefixCondition) -> PrefixCondition:
    """The F query whose answer encodes the minimal gap product for prefix q.

    It is sigma(phi_n(x_h) * prod_{i<=n} x_i^{e_{i-1} - e_i}) with bound n + 1.
    """
    e = q.exponents
    W = [xh.exponent(i) + (e[i - 1] if i else 0) - e[i] for i in range(len(e))]
    return PrefixCondition((0, *W))


def sample_F_tilde(oracle: Oracle, xh: LaurentMonomial, q: PrefixCondition) -> LaurentMonomial | None:
    """Minimal gap product with prefix q, obtained from one F query."""
    fq = F_tilde_query(xh, q)
    a = oracle.F(fq)
    if a is None:
        m = None
    else:
        try:
            m = (a.sigma_inverse() / xh).tau_inverse()
        except MonomialError as exc:
            raise OracleInconsistency(f"cannot recover a gap product from {a}: {exc}") from exc
        if not q.matches(m):
            raise OracleInconsistency(f"recovered {m} does not match {q}")
    entries = oracle.ledger.entries
    if entries and entries[-1].query == fq:
        last = entries[-1]
        entries[-1] = LedgerEntry(last.query, last.answer, last.backend, (q, m))
    return m
