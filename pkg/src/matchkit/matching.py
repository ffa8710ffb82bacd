"""Minimum-weight perfect matching, its forced-edge variant, and an
exhaustive perfect-matching oracle.

The optimisation itself is delegated to the blossom implementation in
networkx (:func:`networkx.max_weight_matching` with ``maxcardinality=True``
on shifted weights). Everything here works on exact Python integers.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

import networkx as nx

from .exceptions import ForcedSetError, InstanceError
from .graph import Graph, is_matching


class PmResult(NamedTuple):
    matching: frozenset[int]
    weight: int


def _mwpm(n: int, edges: Sequence[tuple[int, int]], weights: Sequence[int]) -> Optional[list[int]]:
    """Positions (into ``edges``) of a minimum-weight perfect matching, or None."""
    if n % 2:
        return None
    if n == 0:
        return []
    degree = [0] * n
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    if 0 in degree:
        return None
    # Shift to strictly positive weights and maximise; among maximum-cardinality
    # matchings this picks one of minimum original weight.
    top = max(weights) + 1
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_weighted_edges_from((u, v, top - w) for (u, v), w in zip(edges, weights))
    mate = nx.max_weight_matching(g, maxcardinality=True)
    if 2 * len(mate) != n:
        return None
    position = {pair: i for i, pair in enumerate(edges)}
    return sorted(position[(u, v) if u < v else (v, u)] for u, v in mate)


def min_weight_pm(graph: Graph, weights: Sequence[int]) -> Optional[PmResult]:
    """Return a minimum-weight perfect matching of ``graph``, or None if none exists.

    Negative weights are allowed. The result is a pure function of the input.

    Examples
    --------
    >>> g = Graph(2, [(0, 1)])
    >>> min_weight_pm(g, [7])
    PmResult(matching=frozenset({0}), weight=7)
    """
    picked = _mwpm(graph.vertex_count, graph.edges, weights)
    if picked is None:
        return None
    return PmResult(frozenset(picked), sum(weights[e] for e in picked))


def check_forced_set(graph: Graph, forced: Iterable[int]) -> frozenset[int]:
    forced = frozenset(forced)
    for e in forced:
        if not 0 <= e < graph.m:
            raise ForcedSetError(f"forced edge index {e} out of range")
    if not is_matching(graph, forced):
        raise ForcedSetError("forced edges share a vertex")
    return forced


def min_weight_pm_forced(graph: Graph, weights: Sequence[int], forced: Iterable[int]) -> Optional[PmResult]:
    """Minimum-weight perfect matching among those containing every edge of ``forced``.

    Both endpoints of each forced edge are deleted together with their
    incident edges; the remaining graph is solved and ``w(forced)`` is added.
    Returns None when no perfect matching contains ``forced``.
    """
    forced = check_forced_set(graph, forced)
    if not forced:
        return min_weight_pm(graph, weights)
    return _forced(graph, weights, forced)


def _propagate(graph: Graph, forced: frozenset[int]) -> Optional[tuple[frozenset[int], list[bool]]]:
    """Close ``forced`` under degree-one implications.

    Returns the closed set with the still-uncovered vertex mask, or None
    when some vertex is left without a partner.
    """
    n = graph.vertex_count
    adj = graph.adjacency
    alive = [True] * n
    for x in graph.covered(forced):
        alive[x] = False
    degree = [0] * n
    for x in range(n):
        if alive[x]:
            degree[x] = sum(1 for y, _ in adj[x] if alive[y])
    chosen = set(forced)
    queue = [x for x in range(n) if alive[x] and degree[x] <= 1]
    while queue:
        x = queue.pop()
        if not alive[x]:
            continue
        if degree[x] == 0:
            return None
        y, e = next((y, e) for y, e in adj[x] if alive[y])
        chosen.add(e)
        for z in (x, y):
            alive[z] = False
            for t, _ in adj[z]:
                if alive[t]:
                    degree[t] -= 1
                    if degree[t] <= 1:
                        queue.append(t)
    return frozenset(chosen), alive


def _forced(graph: Graph, weights: Sequence[int], forced: frozenset[int],
            memo: Optional[dict] = None) -> Optional[PmResult]:
    """Solve with ``forced`` fixed, after unit propagation and per component.

    ``memo`` caches component solutions keyed by their edge sets; callers
    issuing many related forced queries on one graph should share it.
    """
    if memo is None:
        memo = {}
    closed = _propagate(graph, forced)
    if closed is None:
        return None
    chosen, alive = closed
    chosen = set(chosen)
    n = graph.vertex_count
    adj = graph.adjacency
    seen = [not a for a in alive]
    for s in range(n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        comp_edges = []
        for x in comp:
            for y, e in adj[x]:
                if alive[y]:
                    if x < y:
                        comp_edges.append(e)
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
        if len(comp) % 2:
            return None
        key = frozenset(comp_edges)
        if key not in memo:
            memo[key] = _solve_component(graph, weights, sorted(comp), sorted(comp_edges))
        picked = memo[key]
        if picked is None:
            return None
        chosen.update(picked)
    matching = frozenset(chosen)
    return PmResult(matching, sum(weights[e] for e in matching))


def _solve_component(graph: Graph, weights: Sequence[int], vertices: list[int],
                     edge_ids: list[int]) -> Optional[tuple[int, ...]]:
    relabel = {x: i for i, x in enumerate(vertices)}
    sub_edges = [(relabel[graph.edges[e][0]], relabel[graph.edges[e][1]]) for e in edge_ids]
    picked = _mwpm(len(vertices), sub_edges, [weights[e] for e in edge_ids])
    return None if picked is None else tuple(edge_ids[j] for j in picked)


def _all_perfect_matchings(graph: Graph) -> Iterator[frozenset[int]]:
    n = graph.vertex_count
    if n % 2:
        return
    adj = graph.adjacency
    covered = [False] * n
    chosen: list[int] = []

    def extend(remaining: int) -> Iterator[frozenset[int]]:
        if remaining == 0:
            yield frozenset(chosen)
            return
        # branch on the most constrained uncovered vertex
        best, options = -1, None
        for x in range(n):
            if covered[x]:
                continue
            free = [(y, e) for y, e in adj[x] if not covered[y]]
            if not free:
                return
            if options is None or len(free) < len(options):
                best, options = x, free
                if len(free) == 1:
                    break
        covered[best] = True
        for y, e in options:
            covered[y] = True
            chosen.append(e)
            yield from extend(remaining - 2)
            chosen.pop()
            covered[y] = False
        covered[best] = False

    yield from extend(n)


def enumerate_perfect_matchings(graph: Graph) -> Iterator[frozenset[int]]:
    """Yield every perfect matching exactly once.

    Matchings come in lexicographic order of their sorted edge-index tuples.
    Exponential; intended for small graphs (about 12 vertices, more when
    the graph is sparse).
    """
    found = sorted(_all_perfect_matchings(graph), key=sorted)
    yield from found


def verify_perfect_matching(graph: Graph, weights: Sequence[int], matching: Iterable[int]) -> Optional[int]:
    """Weight of ``matching`` if it is a perfect matching of ``graph``, else None."""
    matching = list(matching)
    for e in matching:
        if not 0 <= e < graph.m:
            raise InstanceError(f"edge index {e} out of range", "bad_id")
    if len(set(matching)) != len(matching):
        return None
    if 2 * len(matching) != graph.vertex_count or not is_matching(graph, matching):
        return None
    return sum(weights[e] for e in matching)


def perfect_matching_weights(graph: Graph, weights: Sequence[int]) -> list[int]:
    """Sorted distinct weights of all perfect matchings (brute force)."""
    return sorted({sum(weights[e] for e in m) for m in _all_perfect_matchings(graph)})
