"""l-th smallest perfect matchings by forced-edge enumeration, and the
exact-weight / bounded-correct-parity decision procedures built on top.

For every matching ``F`` of at most ``2(l - 1)`` edges (``l - 1`` on
bipartite graphs) the minimum weight of a perfect matching containing ``F``
is computed; the ``l`` smallest distinct values among these are exactly the
``l`` smallest distinct perfect-matching weights of the graph.

Two search strategies produce identical weights:

``"exhaustive"``
    The plain sweep over forced sets by size, then lexicographically. Two
    exact prunings apply: a child ``F + e`` with ``e`` already in the
    parent's witness reuses that witness, and a set whose forced minimum
    exceeds the current ``l``-th smallest value is dropped together with all
    its supersets (forced minima are monotone under inclusion).

``"chain"``
    Grows forced sets along strictly increasing chains: from ``F`` add a
    single edge whose forced minimum is larger, or a pair of edges that are
    each individually free but jointly raise the minimum. The l-th smallest
    weight is always reached after at most ``l - 1`` such steps, so this
    visits far fewer sets on large graphs. On bipartite graphs only single
    edges are needed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .exceptions import SizeLimitError
from .graph import Graph, Kind, WeightedInstance, is_bipartite
from .matching import PmResult, _all_perfect_matchings, _forced, _propagate, min_weight_pm

METHODS = ("exhaustive", "chain")

DEFAULT_BRUTE_LIMIT = 12


def brute_limit() -> int:
    """Vertex cap for brute-force oracles (``MATCHKIT_BRUTE_LIMIT``, default 12)."""
    raw = os.environ.get("MATCHKIT_BRUTE_LIMIT")
    return int(raw) if raw else DEFAULT_BRUTE_LIMIT


@dataclass(frozen=True)
class RankEntry:
    rank: int
    weight: int
    witness: frozenset[int]
    forced_set: frozenset[int]


@dataclass(frozen=True)
class RankTable:
    """The smallest distinct perfect-matching weights with witnesses.

    ``complete`` is True when the table lists every distinct perfect-matching
    weight of the graph.
    """

    entries: tuple[RankEntry, ...]
    complete: bool

    @property
    def weights(self) -> list[int]:
        return [e.weight for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> RankEntry:
        return self.entries[i]


@dataclass(frozen=True)
class Found:
    result: PmResult
    status = "yes"


@dataclass(frozen=True)
class DefiniteNo:
    status = "no"


@dataclass(frozen=True)
class BudgetExceeded:
    ranks_explored: int
    status = "unknown"


SolveOutcome = Union[Found, DefiniteNo, BudgetExceeded]


class _ForcedMinima:
    """Memoised forced minimum-weight perfect matchings on one graph."""

    def __init__(self, graph: Graph, weights: Sequence[int]):
        self.graph = graph
        self.weights = weights
        self.cache: dict[frozenset[int], Optional[PmResult]] = {}
        self.solver_calls = 0
        self.memo: dict = {}

    def __call__(self, forced: frozenset[int]) -> Optional[PmResult]:
        try:
            return self.cache[forced]
        except KeyError:
            pass
        self.solver_calls += 1
        res = _forced(self.graph, self.weights, forced, self.memo)
        self.cache[forced] = res
        return res

    def closure(self, forced: frozenset[int]) -> tuple[int, ...]:
        """Sorted degree-one closure of a feasible forced set."""
        closed = _propagate(self.graph, forced)
        assert closed is not None
        return tuple(sorted(closed[0]))


class _Found:
    """Distinct weights seen so far, keeping the first witness of each."""

    def __init__(self, keep: Optional[int], cap: Optional[int]):
        self.keep = keep
        self.cap = cap
        self.by_weight: dict[int, tuple[frozenset[int], frozenset[int]]] = {}
        self._sorted: list[int] = []

    def threshold(self) -> Optional[int]:
        t = self.cap
        if self.keep is not None and len(self._sorted) >= self.keep:
            kth = self._sorted[self.keep - 1]
            t = kth if t is None else min(t, kth)
        return t

    def admits(self, weight: int) -> bool:
        t = self.threshold()
        return t is None or weight <= t

    def record(self, forced: frozenset[int], res: PmResult) -> None:
        if res.weight in self.by_weight:
            return
        self.by_weight[res.weight] = (forced, res.matching)
        # keep a sorted copy; the number of distinct weights stays small
        lo, hi = 0, len(self._sorted)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._sorted[mid] < res.weight:
                lo = mid + 1
            else:
                hi = mid
        self._sorted.insert(lo, res.weight)

    @property
    def sorted_weights(self) -> list[int]:
        return self._sorted


def _use_bipartite_bound(graph: Graph, bipartite_bound) -> bool:
    if bipartite_bound in ("auto", None):
        return is_bipartite(graph)[0]
    if bipartite_bound in (True, "on"):
        return True
    if bipartite_bound in (False, "off"):
        return False
    raise ValueError(f"bipartite_bound must be 'auto', 'on' or 'off', got {bipartite_bound!r}")


def _sweep_exhaustive(oracle: _ForcedMinima, found: _Found, max_size: int,
                      bipartite: bool) -> Iterator[tuple[int, bool]]:
    """Level-by-level sweep; yields ``(certified_ranks, exhausted)`` per level."""
    graph = oracle.graph
    edges = graph.edges
    m = graph.m
    root = oracle(frozenset())
    if root is None:
        yield (1, True)
        return
    # (forced edges in increasing order, covered-vertex bitmask, result)
    level = [((), 0, root)]
    size = 0
    while True:
        nxt = []
        for forced, mask, res in level:
            if not found.admits(res.weight):
                continue
            found.record(frozenset(forced), res)
            if size == max_size:
                continue
            start = forced[-1] + 1 if forced else 0
            for e in range(start, m):
                u, v = edges[e]
                if mask >> u & 1 or mask >> v & 1:
                    continue
                child = forced + (e,)
                if e in res.matching:
                    child_res = res
                else:
                    child_res = oracle(frozenset(child))
                    if child_res is None or not found.admits(child_res.weight):
                        continue
                nxt.append((child, mask | 1 << u | 1 << v, child_res))
        certified = size + 1 if bipartite else size // 2 + 1
        yield (certified, not nxt and size < max_size)
        if not nxt:
            return
        level = nxt
        size += 1


def _cycle_span(edges: Sequence[tuple[int, int]], base: frozenset[int], e: int,
                witness: frozenset[int]) -> frozenset[int]:
    """Vertices of the cycle of ``base ^ witness`` through ``e`` (its endpoints if ``e`` is in ``base``)."""
    if e in base:
        return frozenset(edges[e])
    diff = base ^ witness
    touching: dict[int, list[int]] = {}
    for d in diff:
        for x in edges[d]:
            touching.setdefault(x, []).append(d)
    seen = {edges[e][0]}
    stack = [edges[e][0]]
    while stack:
        x = stack.pop()
        for d in touching[x]:
            for y in edges[d]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return frozenset(seen)


def _sweep_chain(oracle: _ForcedMinima, found: _Found, max_depth: int,
                 bipartite: bool) -> Iterator[tuple[int, bool]]:
    """Strictly increasing forced-set chains; yields ``(certified_ranks, exhausted)``."""
    graph = oracle.graph
    edges = graph.edges
    root = oracle(frozenset())
    if root is None or not found.admits(root.weight):
        yield (1, True)
        return
    found.record(frozenset(), root)
    # States are keyed by their degree-one closure, which admits the same
    # matchings; each keeps the small generating set that reached it.
    states: dict[tuple[int, ...], tuple[tuple[int, ...], PmResult]] = {
        oracle.closure(frozenset()): ((), root)}
    expanded: set[tuple[int, ...]] = set()
    depth = 0
    yield (1, False)
    while depth < max_depth:
        nxt: dict[tuple[int, ...], tuple[tuple[int, ...], PmResult]] = {}
        for forced in sorted(states):
            gen, res = states[forced]
            if not found.admits(res.weight):
                continue
            expanded.add(forced)
            fset = frozenset(forced)
            used = graph.covered(forced)
            base = res.weight
            # edges whose forcing keeps the minimum, with a witness each
            free: list[tuple[int, frozenset[int]]] = []
            for e, (u, v) in enumerate(edges):
                if u in used or v in used:
                    continue
                if e in res.matching:
                    free.append((e, res.matching))
                    continue
                r = oracle(fset | {e})
                if r is None:
                    continue
                if r.weight > base:
                    if found.admits(r.weight):
                        nxt.setdefault(oracle.closure(fset | {e}), (gen + (e,), r))
                else:
                    free.append((e, r.matching))
            if bipartite:
                continue
            # Each free edge changes the state witness along one zero-delta
            # alternating cycle; disjoint cycles combine into a witness for both.
            spans = [_cycle_span(edges, res.matching, e, we) for e, we in free]
            for i, (e, we) in enumerate(free):
                eu, ev = edges[e]
                for j in range(i + 1, len(free)):
                    f, wf = free[j]
                    if f in we or e in wf or not spans[i] & spans[j]:
                        continue
                    fu, fv = edges[f]
                    if fu == eu or fu == ev or fv == eu or fv == ev:
                        continue
                    r = oracle(fset | {e, f})
                    if r is not None and r.weight > base and found.admits(r.weight):
                        nxt.setdefault(oracle.closure(fset | {e, f}), (gen + (e, f), r))
        for forced in sorted(nxt):
            gen, res = nxt[forced]
            if found.admits(res.weight):
                found.record(frozenset(gen), res)
        depth += 1
        states = {f: item for f, item in nxt.items() if f not in expanded}
        yield (depth + 1, not states)
        if not states:
            return


def _forced_size_bound(l: int, bipartite: bool) -> int:
    return l - 1 if bipartite else 2 * (l - 1)


def _search(graph: Graph, weights: Sequence[int], ranks: int, *, cap: Optional[int] = None,
            method: str = "exhaustive", bipartite_bound="auto"):
    """Set up a rank search for the ``ranks`` smallest weights not above ``cap``.

    Returns ``(found, steps)`` where iterating ``steps`` advances the search
    and yields ``(certified_ranks, exhausted)``. After a step, the smallest
    ``certified_ranks`` distinct values of ``found`` (if that many exist) are
    the true smallest perfect-matching weights; when ``exhausted`` is True,
    ``found`` holds every such weight not above the pruning threshold.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    bipartite = _use_bipartite_bound(graph, bipartite_bound)
    oracle = _ForcedMinima(graph, weights)
    found = _Found(keep=ranks, cap=cap)
    if method == "exhaustive":
        steps = _sweep_exhaustive(oracle, found, _forced_size_bound(ranks, bipartite), bipartite)
    else:
        steps = _sweep_chain(oracle, found, ranks - 1, bipartite)
    return found, steps


def _max_pm_weight(graph: Graph, weights: Sequence[int]) -> Optional[int]:
    heaviest = min_weight_pm(graph, [-w for w in weights])
    return None if heaviest is None else -heaviest.weight


def _table(found: _Found, l: int, graph: Graph, weights: Sequence[int]) -> RankTable:
    ws = found.sorted_weights
    entries = []
    for r, w in enumerate(ws[:l], start=1):
        forced, witness = found.by_weight[w]
        entries.append(RankEntry(r, w, witness, forced))
    # every weight up to the last entry is listed, so the table is complete
    # exactly when no perfect matching is heavier than that entry
    complete = len(ws) < l or _max_pm_weight(graph, weights) == ws[l - 1]
    return RankTable(tuple(entries), complete=complete)


def _graph_and_weights(instance) -> tuple[Graph, Sequence[int]]:
    return instance.graph, instance.weights


def spm_ranks(instance: WeightedInstance, l: int, *, method: str = "exhaustive",
              bipartite_bound="auto") -> RankTable:
    """The ``l`` smallest distinct perfect-matching weights, with witnesses.

    Parameters
    ----------
    instance : WeightedInstance
        Only the graph and weights are used.
    l : int
        Number of ranks wanted, at least 1.
    method : {"exhaustive", "chain"}
        Forced-set search strategy; both return the same weights.
    bipartite_bound : {"auto", "on", "off"}
        Whether to use the smaller ``l - 1`` forced-set bound. ``"auto"``
        enables it exactly when the graph is bipartite. Forcing it on a
        non-bipartite graph may miss ranks.

    Returns
    -------
    RankTable
        Entry ``r`` carries the r-th smallest distinct weight, a witness
        matching and the forced set that produced it. A graph without perfect
        matchings gives an empty, complete table.
    """
    if l < 1:
        raise ValueError(f"l must be at least 1, got {l}")
    graph, weights = _graph_and_weights(instance)
    found, steps = _search(graph, weights, l, method=method, bipartite_bound=bipartite_bound)
    for _ in steps:
        pass
    return _table(found, l, graph, weights)


def spm_ranks_bruteforce(instance: WeightedInstance, l: int, *, max_vertices: Optional[int] = None) -> RankTable:
    """Ground-truth rank table from exhaustive perfect-matching enumeration.

    Raises :class:`SizeLimitError` above ``max_vertices`` (default from
    :func:`brute_limit`). Forced sets in the table are empty.
    """
    graph, weights = _graph_and_weights(instance)
    limit = brute_limit() if max_vertices is None else max_vertices
    if graph.vertex_count > limit:
        raise SizeLimitError(f"{graph.vertex_count} vertices exceeds the brute-force limit {limit}")
    best: dict[int, frozenset[int]] = {}
    for pm in _all_perfect_matchings(graph):
        w = sum(weights[e] for e in pm)
        if w not in best or sorted(pm) < sorted(best[w]):
            best[w] = pm
    ws = sorted(best)
    entries = tuple(RankEntry(r, w, best[w], frozenset()) for r, w in enumerate(ws[:l], start=1))
    return RankTable(entries, complete=len(ws) <= l)


def spm_decide(instance: WeightedInstance, *, method: str = "exhaustive", bipartite_bound="auto") -> bool:
    """Whether the graph has an l-th smallest perfect matching of weight exactly k."""
    if instance.rank_l is None:
        raise ValueError("spm_decide needs an instance with a rank")
    l = instance.rank_l
    table = spm_ranks(instance, l, method=method, bipartite_bound=bipartite_bound)
    return len(table) >= l and table[l - 1].weight == instance.target_k


def spm_solve(instance: WeightedInstance, *, method: str = "exhaustive", bipartite_bound="auto") -> SolveOutcome:
    """Like :func:`spm_decide` but returns the rank-l witness on success."""
    if instance.rank_l is None:
        raise ValueError("spm_solve needs an instance with a rank")
    l = instance.rank_l
    table = spm_ranks(instance, l, method=method, bipartite_bound=bipartite_bound)
    if len(table) >= l and table[l - 1].weight == instance.target_k:
        entry = table[l - 1]
        return Found(PmResult(entry.witness, entry.weight))
    return DefiniteNo()


def _rank_solve(graph: Graph, weights: Sequence[int], k: int, budget_l: int, accept, *,
                method: str, bipartite_bound) -> SolveOutcome:
    """Walk ranks 1, 2, ... up to ``budget_l`` and return the first accepted one.

    The outcome depends only on the true rank sequence and the budget:
    ``Found`` for the first rank r <= budget_l whose weight is accepted,
    ``DefiniteNo`` when fewer than ``budget_l`` distinct weights are <= k and
    none is accepted, ``BudgetExceeded`` otherwise.
    """
    if budget_l < 1:
        raise ValueError(f"budget must be at least 1, got {budget_l}")
    found, steps = _search(graph, weights, budget_l, cap=k, method=method,
                           bipartite_bound=bipartite_bound)
    for certified, exhausted in steps:
        ws = found.sorted_weights
        known = ws[:budget_l] if exhausted else ws[:min(certified, budget_l)]
        for w in known:
            if accept(w):
                forced, witness = found.by_weight[w]
                return Found(PmResult(witness, w))
        all_below_known = exhausted or len(ws) < certified
        if all_below_known:
            return DefiniteNo() if len(ws) < budget_l else BudgetExceeded(budget_l)
        if certified >= budget_l:
            return BudgetExceeded(budget_l)
    raise AssertionError("rank search ended without certifying the budget")


def ewpm_solve(instance: WeightedInstance, budget_l: int = 8, *, method: str = "chain",
               bipartite_bound="auto") -> SolveOutcome:
    """Search for a perfect matching of weight exactly k among the first ranks.

    Returns ``Found`` if k is one of the ``budget_l`` smallest distinct
    perfect-matching weights, ``DefiniteNo`` if the ranks run past k (or run
    out) within the budget, and ``BudgetExceeded`` otherwise.
    """
    k = instance.target_k
    return _rank_solve(instance.graph, instance.weights, k, budget_l, lambda w: w == k,
                       method=method, bipartite_bound=bipartite_bound)


def bcpm_solve(instance: WeightedInstance, budget_l: int = 8, *, method: str = "chain",
               bipartite_bound="auto") -> SolveOutcome:
    """Search for a perfect matching of weight at most k with the parity of k.

    The first qualifying rank is returned, so a ``Found`` witness has the
    minimum weight among all qualifying perfect matchings.
    """
    k = instance.target_k
    return _rank_solve(instance.graph, instance.weights, k, budget_l,
                       lambda w: w <= k and (k - w) % 2 == 0,
                       method=method, bipartite_bound=bipartite_bound)


def solve_matching_instance(instance: WeightedInstance, budget_l: int = 8, *, method: str = "chain",
                            bipartite_bound="auto") -> SolveOutcome:
    """Dispatch on the instance kind (EWPM, BCPM or SPM)."""
    if instance.kind is Kind.EWPM:
        return ewpm_solve(instance, budget_l, method=method, bipartite_bound=bipartite_bound)
    if instance.kind is Kind.BCPM:
        return bcpm_solve(instance, budget_l, method=method, bipartite_bound=bipartite_bound)
    if instance.kind is Kind.SPM:
        return spm_solve(instance, method=method, bipartite_bound=bipartite_bound)
    raise ValueError(f"not a matching instance: {instance.kind.value}")
