"""Reconstruct a rooted tree from sampling queries.

The pipeline:

1. ``x_h`` from a single query, F(1) = sigma(x_h).
2. The sorted subtree profiles of each layer from F~(x_n^m), m = 1..|L_n|;
   consecutive answers differ by exactly one profile.
3. Parents layer by layer.  The layer-n vertices are attached below layer
   n-1 in every way their subtree profiles allow, giving a set of
   hypotheses.  A hypothesis that fixes layers 0..n predicts every F~
   answer of bound n exactly.  One pass over each hypothesis tabulates
   its F~ answer for every bound-n goal up to a cap; we ask a goal on
   which the tables disagree and keep the hypotheses that predicted the
   answer.  Hypotheses no such goal separates are carried to the next
   layer.
4. The nested profile of the finished structure, and the tree rebuilt from
   that nested profile.

Every answer the engine acts on is checked against what a genuine tree
could produce, and an inconsistent oracle raises ``ReconstructionError``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .monomial import LaurentMonomial, PrefixCondition
from .oracle import (
    GapTable,
    GapTableTooLarge,
    Oracle,
    OracleInconsistency,
    SampleLedger,
    gap_table,
    min_gap_search,
    sample_F_tilde,
)
from .tree import NestedProfile, RootedTree, TreeError


class ReconstructionError(RuntimeError):
    pass


# data records


@dataclass(frozen=True)
class Padding:
    value: LaurentMonomial


@dataclass(frozen=True)
class Stack:
    """Addable profiles for a candidate set, ascending, up to the pending one.

    ``from_below[i]`` marks elements that come from layer-(n-1) descendants of
    the candidate set; on ties these precede free layer-n elements.  Only the
    elements not larger than the pending profile are known, and the pending
    vertex is assumed present at ``pending_index``.
    """

    elements: tuple[LaurentMonomial, ...]
    from_below: tuple[bool, ...]
    pending_index: int

    @property
    def known(self) -> int:
        return len(self.elements)


@dataclass
class CandidateState:
    candidates: list[int]
    positions: dict[int, int] = field(default_factory=dict)
    pending: LaurentMonomial | None = None


@dataclass
class ReconstructionResult:
    tree: RootedTree
    xh: LaurentMonomial
    layer_profiles: dict[int, list[LaurentMonomial]]
    nested: dict[int, NestedProfile]
    ledger: SampleLedger
    stats: dict[str, int]

    def to_document(self) -> dict:
        return {
            "tree": self.tree.to_text(),
            "query_count": len(self.ledger),
            "levels": [
                {"level": k, "profiles": p.to_structured()} for k, p in sorted(self.nested.items())
            ],
            "transcript": self.ledger.transcript(),
            "stats": dict(self.stats),
        }


# levels one and two


def reconstruct_xh(oracle: Oracle) -> LaurentMonomial:
    a = oracle.F(PrefixCondition.empty())
    if a is None:
        raise ReconstructionError("F(1) is empty; no tree has an empty strict order function")
    try:
        xh = a.sigma_inverse()
    except ValueError as exc:
        raise ReconstructionError(f"F(1) = {a} has an x_0 factor") from exc
    if xh.exponent(0) != 1 or not xh.is_nonnegative() or xh.support != tuple(range(len(xh.support))):
        raise ReconstructionError(f"F(1) = {a} is not sigma of a coheight profile")
    return xh


def _tilde(oracle: Oracle, xh: LaurentMonomial, q: LaurentMonomial, bound: int) -> LaurentMonomial | None:
    try:
        return sample_F_tilde(oracle, xh, PrefixCondition.from_monomial(q, bound))
    except OracleInconsistency as exc:
        raise ReconstructionError(str(exc)) from exc


def reconstruct_layer_profiles(oracle: Oracle, xh: LaurentMonomial, n: int) -> list[LaurentMonomial]:
    """Ascending subtree profiles of the coheight-n vertices."""
    k = xh.exponent(n)
    if n < 1 or k == 0:
        raise ReconstructionError(f"layer {n} is empty or not queryable")
    if n == xh.max_index:
        return [LaurentMonomial.var(n)] * k
    out = []
    prev = LaurentMonomial.one()
    for m in range(1, k + 1):
        a = _tilde(oracle, xh, LaurentMonomial.var(n, m), n)
        if a is None:
            raise ReconstructionError(f"F~(x{n}^{m}) is empty but layer {n} has {k} vertices")
        step = a / prev
        if not step.is_nonnegative() or step.exponent(n) != 1 or step.max_index > xh.max_index:
            raise ReconstructionError(f"F~(x{n}^{m}) = {a} does not extend {prev} by one profile")
        if out and step < out[-1]:
            raise ReconstructionError(f"layer {n} profiles are not ascending")
        out.append(step)
        prev = a
    return out


def assemble_level2(xh: LaurentMonomial, layer_profiles: dict[int, list[LaurentMonomial]]) -> NestedProfile:
    members = [NestedProfile(1, xh)]
    for n in sorted(layer_profiles):
        members.extend(NestedProfile(1, p) for p in layer_profiles[n])
    return NestedProfile(2, members)


# nested profiles back to trees


def rebase(p: NestedProfile, shift: int) -> NestedProfile:
    """Shift every index of a nested profile down by ``shift``."""
    if p.level == 1:
        return NestedProfile(1, p.value.sigma_inverse(shift))  # type: ignore[union-attr]
    return NestedProfile(p.level, [rebase(m, shift) for m in p.members])


def tree_from_nested(p: NestedProfile) -> RootedTree:
    """The tree whose nested profile at p's level is p.

    The root's own level-1 profile is the largest inside p, its children are
    the members whose profiles start one index deeper, and each child's
    member is that child's nested profile one level down.
    """
    base = p.base_monomial()
    if base.is_one():
        raise ReconstructionError("empty profile")
    b = base.support[0]
    if b:
        p = rebase(p, b)
    parent: list[int | None] = []
    try:
        _build(p, None, parent)
    except _LevelTooLow:
        return _search_tree(p)
    tree = RootedTree(parent)
    if tree.nested_profile(p.level) != p:
        raise ReconstructionError("nested profile is inconsistent: rebuilt tree does not reproduce it")
    return tree


class _LevelTooLow(ReconstructionError):
    pass


def _search_tree(p: NestedProfile) -> RootedTree:
    """Try every tree with p's vertex profiles; p must single out one of them."""
    if p.level == 1:
        raise ReconstructionError("a level-1 profile pins down only trees with at most two layers")
    profiles = sorted(m.base_monomial() for m in p.members)
    xh = profiles.pop()
    layers: dict[int, list[LaurentMonomial]] = {}
    for x in profiles:
        layers.setdefault(x.support[0], []).append(x)
    N = xh.max_index + 1
    if sorted(layers) != list(range(1, N)) or any(len(layers[n]) != xh.exponent(n) for n in layers):
        raise ReconstructionError("vertex profiles do not match the layer sizes of the root profile")
    hyps = [PartialStructure(xh, layers)]
    for n in range(2, N):
        grown: dict[str, PartialStructure] = {}
        for h in hyps:
            for h2 in layer_completions(h, n):
                grown.setdefault(h2.label_code(), h2)
        hyps = list(grown.values())
    matches = {}
    for h in hyps:
        t = h.to_tree()
        if t.nested_profile(p.level) == p:
            matches.setdefault(t.canonical_code(), t)
    if len(matches) != 1:
        raise ReconstructionError(f"{len(matches)} trees have this level-{p.level} profile")
    return next(iter(matches.values()))


def _build(p: NestedProfile, par: int | None, parent: list[int | None]) -> None:
    me = len(parent)
    parent.append(par)
    base = p.base_monomial()
    b = base.support[0]
    if base.exponent(b) != 1:
        raise ReconstructionError(f"profile {base} has more than one root")
    if p.level == 1:
        if base.max_index > b + 1:
            raise _LevelTooLow(
                f"level-1 profile {base} spans more than two layers; the level is too low"
            )
        for _ in range(base.exponent(b + 1)):
            parent.append(me)
        return
    kids = [m for m in p.members if m.base_monomial().support[0] == b + 1]
    prod = LaurentMonomial.var(b)
    for m in kids:
        prod = prod * m.base_monomial()
    if prod != base:
        raise ReconstructionError(f"children profiles multiply to {prod}, expected {base}")
    for m in kids:
        _build(m, me, parent)


# the position engine


INF = None  # an empty answer, larger than every monomial


def _le(a, b) -> bool:
    if b is INF:
        return True
    if a is INF:
        return False
    return a <= b


def _lt(a, b) -> bool:
    return _le(a, b) and a != b


def _add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


class PartialStructure:
    """The shallow layers of a tree, with the profiles of the rest pending.

    Vertex ids grow layer by layer.  ``unassigned[n]`` holds the profiles of
    layer-n vertices not yet attached.
    """

    def __init__(self, xh: LaurentMonomial, layer_profiles: dict[int, list[LaurentMonomial]]):
        self.xh = xh
        self.N = xh.max_index + 1
        self.width = 2 * self.N + 3
        self.parent: list[int | None] = [None]
        self.layer: list[int] = [0]
        self.profile: list[LaurentMonomial] = [xh]
        self.children: list[list[int]] = [[]]
        self.by_layer: list[list[int]] = [[0]] + [[] for _ in range(self.N - 1)]
        self.ancmask: list[int] = [1]
        self.unassigned: dict[int, list[LaurentMonomial]] = {
            n: sorted(ps) for n, ps in layer_profiles.items()
        }
        for prof in list(self.unassigned.get(1, [])):
            self.add(1, prof, 0)

    def copy(self) -> PartialStructure:
        new = object.__new__(PartialStructure)
        new.xh, new.N, new.width = self.xh, self.N, self.width
        new.parent = list(self.parent)
        new.layer = list(self.layer)
        new.profile = list(self.profile)
        new.children = [list(c) for c in self.children]
        new.by_layer = [list(x) for x in self.by_layer]
        new.ancmask = list(self.ancmask)
        new.unassigned = {n: list(x) for n, x in self.unassigned.items()}
        return new

    def add(self, n: int, prof: LaurentMonomial, parent: int) -> int:
        v = len(self.parent)
        self.parent.append(parent)
        self.layer.append(n)
        self.profile.append(prof)
        self.children.append([])
        self.children[parent].append(v)
        self.by_layer[n].append(v)
        self.ancmask.append(self.ancmask[parent] | (1 << v))
        if n in self.unassigned:
            self.unassigned[n].remove(prof)
        return v

    @property
    def depth(self) -> int:
        """Number of layers attached so far."""
        return max(self.layer) + 1

    def residual(self, p: int) -> LaurentMonomial:
        r = self.profile[p] / LaurentMonomial.var(self.layer[p])
        for c in self.children[p]:
            r = r / self.profile[c]
        return r

    def dense(self, m: LaurentMonomial) -> tuple[int, ...]:
        return m.dense(self.width)

    def is_under(self, v: int, a: int) -> bool:
        return bool(self.ancmask[v] >> a & 1)

    def label_code(self, v: int = 0) -> str:
        inner = "".join(sorted(self.label_code(c) for c in self.children[v]))
        return f"[{self.profile[v]}{inner}]"

    def to_tree(self) -> RootedTree:
        return RootedTree(self.parent)

    def gap_minimum(self, goal: tuple[int, ...]) -> tuple[int, ...] | None:
        """Exact F~(goal) when every layer up to the goal's bound is attached."""
        b = len(goal) - 1
        if b >= self.depth and any(self.unassigned.get(n) for n in range(self.depth, self.N)):
            raise ReconstructionError(f"layers up to {b} are not all attached")
        order = [v for L in range(min(b, self.N - 1) + 1) for v in self.by_layer[L]]
        prof = [self.dense(x) for x in self.profile]
        return min_gap_search(self.parent, self.layer, prof, order, goal)

    def gap_table(self, cap: tuple[int, ...], limit: int | None = None) -> GapTable:
        """F~ for every goal of bound len(cap) - 1 up to ``cap``."""
        b = len(cap) - 1
        if b >= self.depth and any(self.unassigned.get(n) for n in range(self.depth, self.N)):
            raise ReconstructionError(f"layers up to {b} are not all attached")
        order = [v for L in range(min(b, self.N - 1) + 1) for v in self.by_layer[L]]
        prof = [self.dense(x) for x in self.profile]
        return gap_table(self.parent, self.layer, prof, order, cap, limit)


def _completion_exists(residuals: list[LaurentMonomial], items: list[LaurentMonomial]) -> bool:
    """Can the items be split among the parents so each residual is used up exactly?"""
    items = sorted(items, reverse=True)
    memo: dict = {}

    def rec(i: int, res: tuple[LaurentMonomial, ...]) -> bool:
        if i == len(items):
            return all(r.is_one() for r in res)
        key = (i, tuple(sorted(res)))
        if key in memo:
            return memo[key]
        ok = False
        for r in set(res):
            if items[i].divides(r):
                j = res.index(r)
                if rec(i + 1, res[:j] + (r / items[i],) + res[j + 1:]):
                    ok = True
                    break
        memo[key] = ok
        return ok

    return rec(0, tuple(residuals))


def layer_completions(K: PartialStructure, n: int, limit: int = 200_000) -> list[PartialStructure]:
    """Every way to attach the unplaced layer-n vertices, one per labelled isomorphism class."""
    parents = K.by_layer[n - 1]
    items = sorted(K.unassigned.get(n, []), reverse=True)
    raw = 0
    seen: dict[str, PartialStructure] = {}
    assign: list[int] = [0] * len(items)

    def rec(i: int, res: list[LaurentMonomial], lo: int) -> None:
        nonlocal raw
        if i == len(items):
            if all(r.is_one() for r in res):
                raw += 1
                if raw > limit:
                    raise ReconstructionError(f"layer {n} admits too many arrangements to search")
                h = K.copy()
                for it, j in zip(items, assign):
                    h.add(n, it, parents[j])
                seen.setdefault(h.label_code(), h)
            return
        # equal profiles are interchangeable, so give them non-decreasing parents
        start = lo if i and items[i] == items[i - 1] else 0
        for j in range(start, len(parents)):
            if items[i].divides(res[j]):
                assign[i] = j
                old = res[j]
                res[j] = old / items[i]
                rec(i + 1, res, j)
                res[j] = old

    rec(0, [K.residual(p) for p in parents], 0)
    return list(seen.values())


class PositionEngine:
    """Attaches layers 2..N-1 of the hidden tree below layer 1.

    Hypotheses are partial structures, one per labelled isomorphism class.
    Each round extends every hypothesis by one layer in all ways that fit
    the subtree profiles and drops those that cannot host the next layer.
    For each survivor it then tabulates F~ at the new bound for every goal
    up to a cap, asks a goal on which the tables disagree, and keeps the
    hypotheses that predicted the oracle's answer.  Hypotheses that agree
    on every such goal are carried into the next round, and a last round
    uses deeper bounds, a wider cap and a fixed query family on the
    finished trees.
    """

    def __init__(
        self,
        oracle: Oracle,
        xh: LaurentMonomial,
        layer_profiles: dict[int, list[LaurentMonomial]],
        max_hypotheses: int = 200_000,
        table_limit: int = 400_000,
    ):
        self.oracle = oracle
        self.xh = xh
        self.layer_profiles = layer_profiles
        self.K = PartialStructure(xh, layer_profiles)
        self.max_hypotheses = max_hypotheses
        self.table_limit = table_limit
        self.stats = {"rounds_with_choices": 0, "max_hypotheses": 1, "queries": 0}
        self._answers: dict[tuple[int, ...], tuple[int, ...] | None] = {}

    def run(self) -> RootedTree:
        hyps = [self.K]
        N = self.K.N
        for n in range(2, N):
            grown: dict[str, PartialStructure] = {}
            for h in hyps:
                for h2 in layer_completions(h, n, self.max_hypotheses):
                    grown.setdefault(h2.label_code(), h2)
            hyps = list(grown.values())
            if n + 1 < N:
                hyps = [
                    h for h in hyps
                    if _completion_exists([h.residual(p) for p in h.by_layer[n]], h.unassigned[n + 1])
                ]
            if not hyps:
                raise ReconstructionError(f"no arrangement of layer {n} fits the subtree profiles")
            self.stats["max_hypotheses"] = max(self.stats["max_hypotheses"], len(hyps))
            if len(hyps) > 1:
                self.stats["rounds_with_choices"] += 1
                hyps = self.eliminate_by_tables(hyps, n, wide=False)
        if len(hyps) > 1:
            for b in (N, N + 1):
                hyps = self.eliminate_by_tables(hyps, b, wide=False)
        for b in range(2, N + 2):
            if len(hyps) > 1:
                hyps = self.eliminate_by_tables(hyps, b, wide=True)
        if len(hyps) > 1:
            hyps = self.eliminate(hyps, list(range(2, 2 * N + 1)))
        if len(hyps) > 1:
            raise ReconstructionError(
                f"{len(hyps)} non-isomorphic trees answer every tried query alike"
            )
        self.K = hyps[0]
        return self.K.to_tree()

    def table_cap(self, b: int, wide: bool) -> tuple[int, ...]:
        """Goal caps: the layer sizes below the bound, with room at the bound itself.

        The wide cap adds the layer above at every index.
        """
        e = self.xh.exponent
        cap = [1]
        for i in range(1, b + 1):
            c = e(i) + (e(i - 1) if wide or i == b else 0) + (1 if i == b else 0)
            cap.append(c)
        return tuple(cap)

    def eliminate_by_tables(
        self, hyps: list[PartialStructure], b: int, wide: bool
    ) -> list[PartialStructure]:
        """Ask bound-b goals on which the hypotheses' gap tables disagree."""
        cap = self.table_cap(b, wide)
        try:
            tables = [h.gap_table(cap, self.table_limit) for h in hyps]
        except GapTableTooLarge:
            return hyps
        while len(hyps) > 1:
            keys = set()
            for t in tables:
                keys.update(t.packed)
            best = None
            for k in sorted(keys):
                spread = len({t.packed.get(k) for t in tables})
                if spread > 1 and (best is None or spread > best[0]):
                    best = (spread, k)
                    if spread == len(tables):
                        break
            if best is None:
                return hyps
            goal = tables[0].goal(best[1])
            ans = self._ask(goal)
            keep = [i for i, t in enumerate(tables) if t.vector(best[1]) == ans]
            if not keep:
                raise ReconstructionError(
                    f"answer to F~({LaurentMonomial.from_dense(goal)}) fits no remaining hypothesis"
                )
            hyps = [hyps[i] for i in keep]
            tables = [tables[i] for i in keep]
        return hyps

    def eliminate(self, hyps: list[PartialStructure], bounds: list[int]) -> list[PartialStructure]:
        """Ask separating goals from the fixed query family while any exist."""
        while len(hyps) > 1:
            found = self._separating_query(hyps, bounds)
            if found is None:
                return hyps
            goal, preds = found
            ans = self._ask(goal)
            hyps = [h for h, v in zip(hyps, preds) if v == ans]
            if not hyps:
                raise ReconstructionError(
                    f"answer to F~({LaurentMonomial.from_dense(goal)}) fits no remaining hypothesis"
                )
        return hyps

    def query_family(self, b: int):
        """Queries phi_b(P(S_0)) x_b^m for S_0 of one or two profiles above layer b."""
        K = self.K
        layer_size = lambda L: len(self.layer_profiles.get(L, [])) if L > 0 else 1  # noqa: E731
        mmax = layer_size(b) + layer_size(b - 1) + 1
        pools = []
        for n0 in range(min(b, K.N) - 1, 0, -1):
            pools.append(sorted(set(self.layer_profiles.get(n0, []))))
        for size in (1, 2):
            for pool in pools:
                for combo in itertools.combinations_with_replacement(pool, size):
                    acc = LaurentMonomial.one()
                    for x in combo:
                        acc = acc * x
                    head = list(acc.truncate(b).dense(b + 1))
                    for m in range(mmax + 1):
                        goal = list(head)
                        goal[b] += m
                        yield tuple(goal)

    def _separating_query(self, hyps: list[PartialStructure], bounds: list[int]):
        tried = set()
        for b in bounds:
            for goal in self.query_family(b):
                if goal in tried or goal in self._answers:
                    continue
                tried.add(goal)
                preds = [h.gap_minimum(goal) for h in hyps]
                if len(set(preds)) > 1:
                    return goal, preds
        return None

    def _ask(self, goal: tuple[int, ...]):
        if goal not in self._answers:
            q = LaurentMonomial.from_dense(goal)
            a = _tilde(self.oracle, self.xh, q, len(goal) - 1)
            self.stats["queries"] += 1
            self._answers[goal] = None if a is None else self.K.dense(a)
        return self._answers[goal]


# the candidate machinery in its original form


def padding(K: PartialStructure, S0: tuple[int, ...]) -> Padding:
    acc = LaurentMonomial.one()
    for g in S0:
        acc = acc * K.profile[g]
    return Padding(acc)


def candidates_C0(K: PartialStructure, n0: int, c: int | tuple[int, ...], n: int, m: int | None = None):
    """Candidate sets S_0 at layer n0 with the forced truncated form.

    Returns (S_0, m') pairs where phi_n(P(S_0)) = phi_n(P(ref)) * x_n^{m'},
    ``ref`` being the given vertex or set.  Negative m' are kept so the
    reference need not be the least candidate; pass m to bound m' to 0..m.
    """
    ref = (c,) if isinstance(c, int) else tuple(c)
    target = padding(K, ref).value.truncate(n)
    out = []
    for S0 in itertools.combinations(K.by_layer[n0], len(ref)):
        diff = padding(K, S0).value.truncate(n) / target
        if diff.is_one():
            mp = 0
        elif diff.support == (n,):
            mp = diff.exponent(n)
        else:
            continue
        if m is not None and not 0 <= mp <= m:
            continue
        out.append((S0, mp))
    return out


def build_stack(K: PartialStructure, S0: tuple[int, ...], n: int, pending: LaurentMonomial) -> Stack:
    """Known part of the stack of S_0 with the pending profile assumed free."""
    below: list[LaurentMonomial] = []
    for u in K.by_layer[n - 1]:
        e = sum(1 for g in S0 if K.is_under(u, g))
        if e:
            below.append(K.profile[u].sigma(e))
    free = [K.profile[w] for w in K.by_layer[n] if not any(K.is_under(w, g) for g in S0)]
    items = [(x, 0) for x in below] + [(x, 1) for x in free] + [(pending, 2)]
    items = [it for it in items if it[0] <= pending]
    items.sort(key=lambda it: (it[0], it[1]))
    elements = tuple(x for x, _ in items)
    return Stack(elements, tuple(t == 0 for _, t in items), len(items) - 1)


def _partial(pad: LaurentMonomial, st: Stack, k: int) -> LaurentMonomial:
    acc = pad
    for x in st.elements[:k]:
        acc = acc * x
    return acc


def minimal_gap(K: PartialStructure, C0, n: int, pending: LaurentMonomial, m: int):
    """The candidate minimizing P(g) times its first m (lifted) stack elements."""
    best = None
    for S0, mp in C0:
        st = build_stack(K, S0, n, pending)
        k = m - mp
        if not 0 <= k <= st.known:
            continue
        val = _partial(padding(K, S0).value, st, k)
        if best is None or val < best[0]:
            best = (val, S0, mp, st)
    return best


def critical_index(st: Stack, mp: int) -> int:
    """Largest lifted index whose stack element is the pending profile."""
    return mp + st.pending_index + 1


def find_nice_m(K: PartialStructure, n: int, C0, pending: LaurentMonomial):
    """First m whose minimal gap has critical index m, as (nice S_0, m).

    Indices are lifted relative to the reference candidate of ``C0`` (the
    one with m' = 0), so the matching query is phi_n(P(reference)) x_n^m.
    Returns None when no m qualifies within the known part of the stacks.
    A minimal gap whose critical index falls below m is counted in
    ``NICE_M_LOG`` since the search expects that never to happen.
    """
    if not C0:
        return None
    stacks = [(S0, mp, build_stack(K, S0, n, pending)) for S0, mp in C0]
    start = min(mp for _, mp, _ in stacks)
    top = max(critical_index(st, mp) for _, mp, st in stacks)
    for m in range(start, top + 1):
        best = minimal_gap(K, C0, n, pending, m)
        if best is None:
            continue
        _, S0, mp, st = best
        mg = critical_index(st, mp)
        if mg == m:
            return S0, m
        if mg < m:
            NICE_M_LOG["violations"] += 1
    return None


NICE_M_LOG = {"violations": 0}


def predict_and_verify(
    oracle: Oracle,
    K: PartialStructure,
    n: int,
    S0: tuple[int, ...],
    m: int,
    pending: LaurentMonomial,
) -> bool:
    """Does F~(phi_n(P(S_0)) x_n^m) match the prediction made with the pending vertex outside S_0?

    The prediction ranges over every arrangement of the unplaced layer-n
    vertices in which some copy of the pending profile avoids the subtrees
    of S_0.  Raises if those arrangements disagree, since then there is no
    single prediction to verify.
    """
    engine = PositionEngine(oracle, K.xh, {})
    engine.K = K
    placed = set(K.by_layer[n])
    goal = _goal(K, n, S0, m)
    preds = set()
    for h in layer_completions(K, n):
        fresh = [w for w in h.by_layer[n] if w not in placed and h.profile[w] == pending]
        if any(not any(h.is_under(w, g) for g in S0) for w in fresh):
            preds.add(h.gap_minimum(goal))
    if len(preds) != 1:
        raise ReconstructionError("the prediction is not determined by the known structure")
    return engine._ask(goal) == preds.pop()


def _goal(K: PartialStructure, n: int, S0: tuple[int, ...], m: int) -> tuple[int, ...]:
    acc = LaurentMonomial.one()
    for g in S0:
        acc = acc * K.profile[g]
    goal = list(acc.truncate(n).dense(n + 1))
    goal[n] += m
    return tuple(goal)


# whole pipeline


def reconstruct_nested(oracle: Oracle, level: int, xh: LaurentMonomial | None = None) -> NestedProfile:
    if level < 1:
        raise ReconstructionError("level must be at least 1")
    return _pipeline(oracle, level, xh)[0]


def _pipeline(oracle: Oracle, level: int, xh: LaurentMonomial | None = None):
    if xh is None:
        xh = reconstruct_xh(oracle)
    N = xh.max_index + 1
    if level == 1:
        return NestedProfile(1, xh), None, {}, {}
    profiles = {n: reconstruct_layer_profiles(oracle, xh, n) for n in range(1, N)}
    if level == 2 or N <= 3:
        p2 = assemble_level2(xh, profiles)
        if level == 2:
            return p2, None, profiles, {}
        tree = tree_from_nested(p2)
        return tree.nested_profile(level), tree, profiles, {}
    engine = PositionEngine(oracle, xh, profiles)
    tree = engine.run()
    if tree.nested_profile(2) != assemble_level2(xh, profiles):
        raise ReconstructionError("placed structure disagrees with the layer profiles")
    return tree.nested_profile(level), tree, profiles, engine.stats


def reconstruct_tree(oracle: Oracle) -> ReconstructionResult:
    xh = reconstruct_xh(oracle)
    N = xh.max_index + 1
    level = max(N - 1, 1)
    top, built, profiles, stats = _pipeline(oracle, level, xh)
    try:
        tree = tree_from_nested(top)
    except TreeError as exc:
        raise ReconstructionError(str(exc)) from exc
    if built is not None and not built.is_isomorphic(tree):
        raise ReconstructionError("nested profile does not pin down the placed structure")
    nested = {k: tree.nested_profile(k) for k in range(1, level + 1)}
    return ReconstructionResult(
        tree=tree,
        xh=xh,
        layer_profiles=profiles,
        nested=nested,
        ledger=oracle.ledger,
        stats=dict(stats),
    )
