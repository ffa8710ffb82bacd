"""Seeded random instances and the forced-set tightness families."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Optional, Union

from .cycles import cycle_set_weights, enumerate_simple_cycles
from .graph import INT64_MAX, INT64_MIN, Graph, Kind, WeightedInstance, is_bipartite
from .matching import _all_perfect_matchings
from .reductions import is_conservative

#: Four-cycle with perfect matchings of weight 0 and 2.
SQUARE_EDGES = ((0, 1), (1, 2), (2, 3), (0, 3))
SQUARE_WEIGHTS = (0, 1, 0, 1)

#: Non-bipartite graph with perfect-matching weights {1, 3} in which every
#: single forced edge still admits a weight-1 perfect matching: two
#: zero-weight triangles joined by three unit-weight rungs. First hit of
#: :func:`find_tightness_witness`.
TIGHTNESS_WITNESS_N = 6
TIGHTNESS_WITNESS_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (3, 5), (4, 5))
TIGHTNESS_WITNESS_WEIGHTS = (0, 0, 1, 0, 1, 1, 0, 0, 0)

# exhaustive oracles only run below these sizes when sampling targets
MATCHING_ORACLE_LIMIT = 12
CYCLE_ORACLE_LIMIT = 9

_RESAMPLES = 64


def _check_range(weight_range: tuple[int, int]) -> tuple[int, int]:
    lo, hi = weight_range
    if lo > hi:
        raise ValueError(f"empty weight range [{lo}, {hi}]")
    if lo < INT64_MIN or hi > INT64_MAX:
        raise ValueError("weight range exceeds the signed 64-bit range")
    return lo, hi


def _random_graph(rng: random.Random, n: int, edge_prob: Fraction, n_edges: Optional[int]) -> Graph:
    pairs = list(itertools.combinations(range(n), 2))
    if n_edges is not None:
        if not 0 <= n_edges <= len(pairs):
            raise ValueError(f"{n_edges} edges do not fit a simple graph on {n} vertices")
        chosen = sorted(rng.sample(pairs, n_edges))
    else:
        chosen = [p for p in pairs if rng.random() < edge_prob]
    return Graph(n, tuple(chosen))


def _sample_target(rng: random.Random, kind: Kind, graph: Graph, weights: tuple[int, ...],
                   lo: int, hi: int, rank_l: Optional[int]) -> int:
    n = graph.vertex_count
    achievable: list[int] = []
    if kind.is_matching_kind and n <= MATCHING_ORACLE_LIMIT:
        achievable = sorted({sum(weights[e] for e in pm) for pm in _all_perfect_matchings(graph)})
        if kind is Kind.SPM and len(achievable) >= rank_l and rng.random() < 0.5:
            return achievable[rank_l - 1]
    elif kind is Kind.ECS and n <= CYCLE_ORACLE_LIMIT:
        achievable = cycle_set_weights(graph, weights, max_vertices=CYCLE_ORACLE_LIMIT)
    elif kind is Kind.SOC and n <= CYCLE_ORACLE_LIMIT:
        achievable = sorted({sum(weights[e] for e in c) for c in enumerate_simple_cycles(graph)})
    if achievable:
        return rng.randint(achievable[0], achievable[-1])
    # declared fallback interval
    if kind.is_matching_kind:
        half = n // 2
        return rng.randint(half * lo, half * hi)
    return rng.randint(min(0, n * lo), max(0, n * hi))


def gen_random_instance(n: int, edge_prob: Union[float, Fraction, str], weight_range: tuple[int, int],
                        kind: Union[Kind, str], seed: int, *, n_edges: Optional[int] = None,
                        rank_l: Optional[int] = None) -> WeightedInstance:
    """A reproducible random instance.

    Each vertex pair becomes an edge with probability ``edge_prob`` (or,
    when ``n_edges`` is given, exactly that many pairs are drawn). Weights
    are uniform in ``weight_range``. Cycle kinds are resampled up to 64
    times until the weights are conservative; after that every negative
    weight is clamped to 0. The target is uniform over the span of
    achievable values when an exhaustive oracle fits, else over a fixed
    interval derived from ``n`` and the weight range. SPM instances get
    ``rank_l`` (default 2), and half of the time the true rank weight.

    Examples
    --------
    >>> inst = gen_random_instance(4, 1.0, (0, 0), "ewpm", 7)
    >>> inst.graph.m, set(inst.weights)
    (6, {0})
    """
    if n < 1:
        raise ValueError("n must be positive")
    kind = Kind(kind)
    lo, hi = _check_range(weight_range)
    prob = Fraction(edge_prob)
    if not 0 <= prob <= 1:
        raise ValueError(f"edge probability {edge_prob} outside [0, 1]")
    if kind is Kind.SPM:
        rank_l = 2 if rank_l is None else rank_l
    elif rank_l is not None:
        raise ValueError("rank_l only applies to SPM instances")
    rng = random.Random(seed)
    graph = _random_graph(rng, n, prob, n_edges)
    weights = tuple(rng.randint(lo, hi) for _ in graph.edges)
    if kind.is_cycle_kind:
        for _ in range(_RESAMPLES):
            if is_conservative(graph, weights):
                break
            weights = tuple(rng.randint(lo, hi) for _ in graph.edges)
        else:
            weights = tuple(max(0, w) for w in weights)
    k = _sample_target(rng, kind, graph, weights, lo, hi, rank_l)
    return WeightedInstance(graph, weights, kind, k, rank_l)


def _disjoint_copies(n: int, edges, weights, copies: int) -> tuple[Graph, tuple[int, ...]]:
    all_edges = [(u + i * n, v + i * n) for i in range(copies) for u, v in edges]
    return Graph(n * copies, tuple(all_edges)), tuple(weights) * copies


def gen_tightness_family(l: int, side: str) -> WeightedInstance:
    """``l - 1`` disjoint copies of a tightness example, as an SPM instance of rank ``l``.

    ``side="bipartite"`` copies the weighted square (matching weights 0, 2),
    so ``2(l - 1)`` is the rank-l weight. ``side="general"`` copies the
    two-triangle witness (matching weights 1, 3), whose rank-l weight is
    ``3(l - 1)``.
    """
    if l < 2:
        raise ValueError("the tightness family starts at l = 2")
    if side == "bipartite":
        graph, weights = _disjoint_copies(4, SQUARE_EDGES, SQUARE_WEIGHTS, l - 1)
        k = 2 * (l - 1)
    elif side == "general":
        graph, weights = _disjoint_copies(TIGHTNESS_WITNESS_N, TIGHTNESS_WITNESS_EDGES,
                                          TIGHTNESS_WITNESS_WEIGHTS, l - 1)
        k = 3 * (l - 1)
    else:
        raise ValueError(f"side must be 'bipartite' or 'general', got {side!r}")
    return WeightedInstance(graph, weights, Kind.SPM, k, l)


def find_tightness_witness(max_n: int = 8, max_weight: int = 3):
    """Exhaustive search for the general-side tightness example.

    Candidates run over even vertex counts, then edge counts, then edge sets
    in lexicographic order, then weight vectors over ``0..max_weight`` in
    lexicographic order. The first non-bipartite weighted graph whose
    perfect matchings weigh exactly {1, 3} and where every edge lies in a
    weight-1 perfect matching is returned as ``(n, edges, weights)``, or
    None. Takes roughly 10 seconds for the default bounds.
    """
    import numpy as np

    for n in range(4, max_n + 1, 2):
        pairs = list(itertools.combinations(range(n), 2))
        for m in range(n // 2, len(pairs) + 1):
            grid = None
            for edges in itertools.combinations(pairs, m):
                graph = Graph(n, edges)
                if is_bipartite(graph)[0]:
                    continue
                pms = list(_all_perfect_matchings(graph))
                if len(pms) < 2 or len(set().union(*pms)) != m:
                    continue
                incidence = np.zeros((len(pms), m), dtype=np.int64)
                for i, pm in enumerate(pms):
                    incidence[i, sorted(pm)] = 1
                if grid is None:
                    grid = np.array(list(itertools.product(range(max_weight + 1), repeat=m)), dtype=np.int64)
                sums = grid @ incidence.T
                ok = np.all((sums == 1) | (sums == 3), axis=1)
                ok &= np.any(sums == 1, axis=1) & np.any(sums == 3, axis=1)
                ok &= np.all(((sums == 1).astype(np.int64) @ incidence) > 0, axis=1)
                hits = np.flatnonzero(ok)
                if hits.size:
                    return n, edges, tuple(int(x) for x in grid[hits[0]])
    return None
