"""Brute-force cycle oracles and the cycle-problem pipelines that run
through the gadget reductions and the rank search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .exceptions import SizeLimitError
from .graph import CycleSet, Graph, WeightedInstance
from .reductions import project_matching_to_cycles, reduce_ecs_to_ewpm, reduce_soc_to_bcpm
from .spm import BudgetExceeded, DefiniteNo, Found, bcpm_solve, brute_limit, ewpm_solve


@dataclass(frozen=True)
class CycleFound:
    cycles: CycleSet
    weight: int
    status = "yes"


CycleSolveOutcome = Union[CycleFound, DefiniteNo, BudgetExceeded]


def enumerate_simple_cycles(graph: Graph) -> Iterator[tuple[int, ...]]:
    """Yield every simple cycle once, as a cyclic edge-index sequence.

    Each cycle starts at its smallest vertex and is traversed in the
    direction whose second vertex is smaller than its last.
    """
    n = graph.vertex_count
    adj = graph.adjacency
    for s in range(n):
        on_path = [False] * n
        on_path[s] = True
        path = [s]
        path_edges: list[int] = []

        def walk(x: int) -> Iterator[tuple[int, ...]]:
            for y, e in adj[x]:
                if y == s:
                    if len(path) >= 3 and path[1] < path[-1]:
                        yield tuple(path_edges) + (e,)
                elif y > s and not on_path[y]:
                    on_path[y] = True
                    path.append(y)
                    path_edges.append(e)
                    yield from walk(y)
                    path_edges.pop()
                    path.pop()
                    on_path[y] = False

        yield from walk(s)


def _check_size(graph: Graph, max_vertices: Optional[int]) -> None:
    limit = brute_limit() if max_vertices is None else max_vertices
    if graph.vertex_count > limit:
        raise SizeLimitError(f"{graph.vertex_count} vertices exceeds the brute-force limit {limit}")


def _cycle_table(graph: Graph, weights: Sequence[int]):
    """Cycles grouped by smallest vertex: ``{v: [(mask, weight, edges), ...]}``."""
    table: dict[int, list[tuple[int, int, tuple[int, ...]]]] = {}
    for cyc in enumerate_simple_cycles(graph):
        mask = 0
        for e in cyc:
            u, v = graph.edges[e]
            mask |= 1 << u | 1 << v
        low = (mask & -mask).bit_length() - 1
        table.setdefault(low, []).append((mask, sum(weights[e] for e in cyc), cyc))
    return table


def _cycle_set_options(graph: Graph, weights: Sequence[int]) -> dict[int, tuple[tuple[int, ...], ...]]:
    """Every achievable cycle-set weight mapped to one witness (tuple of cycles)."""
    table = _cycle_table(graph, weights)
    memo: dict[int, dict[int, tuple[tuple[int, ...], ...]]] = {}

    def options(avail: int) -> dict[int, tuple[tuple[int, ...], ...]]:
        if avail == 0:
            return {0: ()}
        if avail in memo:
            return memo[avail]
        low_bit = avail & -avail
        v = low_bit.bit_length() - 1
        out = dict(options(avail & ~low_bit))
        for mask, w, cyc in table.get(v, ()):
            if mask & avail != mask:
                continue
            for rest_w, rest in options(avail & ~mask).items():
                out.setdefault(w + rest_w, (cyc,) + rest)
        memo[avail] = out
        return out

    return options((1 << graph.vertex_count) - 1)


def cycle_set_weights(graph: Graph, weights: Sequence[int], *, max_vertices: Optional[int] = None) -> list[int]:
    """Sorted distinct weights of vertex-disjoint cycle sets (empty set included)."""
    _check_size(graph, max_vertices)
    return sorted(_cycle_set_options(graph, weights))


def ecs_bruteforce(instance: WeightedInstance, *, max_vertices: Optional[int] = None) -> Optional[CycleSet]:
    """A vertex-disjoint cycle set of total weight exactly k, or None.

    The empty set counts, with weight 0.
    """
    _check_size(instance.graph, max_vertices)
    witness = _cycle_set_options(instance.graph, instance.weights).get(instance.target_k)
    return None if witness is None else CycleSet(witness)


def min_odd_cycle(graph: Graph, weights: Sequence[int]) -> Optional[tuple[int, tuple[int, ...]]]:
    """``(weight, cycle)`` of a minimum odd-weight simple cycle, or None."""
    best = None
    for cyc in enumerate_simple_cycles(graph):
        w = sum(weights[e] for e in cyc)
        if w % 2 and (best is None or w < best[0]):
            best = (w, cyc)
    return best


def soc_bruteforce(instance: WeightedInstance, *, max_vertices: Optional[int] = None) -> Optional[CycleSet]:
    """A minimum odd-weight cycle if its weight is at most k, else None.

    The cycle is returned as a one-element :class:`CycleSet`.
    """
    _check_size(instance.graph, max_vertices)
    best = min_odd_cycle(instance.graph, instance.weights)
    if best is None or best[0] > instance.target_k:
        return None
    return CycleSet((best[1],))


def has_negative_cycle(graph: Graph, weights: Sequence[int]) -> bool:
    """Brute-force check for a simple cycle of negative weight."""
    return any(sum(weights[e] for e in cyc) < 0 for cyc in enumerate_simple_cycles(graph))


def ecs_solve(instance: WeightedInstance, budget_l: int = 8, *, method: str = "chain") -> CycleSolveOutcome:
    """Exact cycle sum through the gadget reduction and the rank search.

    Weights must be conservative. A found gadget matching is projected back
    to a cycle set of weight exactly k.
    """
    red = reduce_ecs_to_ewpm(instance)
    outcome = ewpm_solve(red.instance, budget_l, method=method)
    if not isinstance(outcome, Found):
        return outcome
    cycles = project_matching_to_cycles(outcome.result.matching, red.context)
    weight = cycles.weight(instance.weights)
    assert weight == instance.target_k
    return CycleFound(cycles, weight)


def soc_solve(instance: WeightedInstance, budget_l: int = 8, *, method: str = "chain") -> CycleSolveOutcome:
    """Shortest odd cycle through the gadget reduction and the rank search.

    The gadget matching projects to a cycle set of odd total weight at most
    k. With conservative weights every member weighs at least 0, so any
    odd-weight member is itself at most k; the first one is returned.
    """
    red = reduce_soc_to_bcpm(instance)
    outcome = bcpm_solve(red.instance, budget_l, method=method)
    if not isinstance(outcome, Found):
        return outcome
    cycles = project_matching_to_cycles(outcome.result.matching, red.context)
    for cyc in cycles:
        w = sum(instance.weights[e] for e in cyc)
        if w % 2:
            assert w <= instance.target_k
            return CycleFound(CycleSet((cyc,)), w)
    raise AssertionError("odd gadget matching projected to cycles of even weight only")
