"""Resolving solution certificates against a graph and checking them."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .exceptions import InstanceError, VerificationError
from .graph import CycleSet, Graph, Kind, WeightedInstance
from .io import Solution
from .matching import verify_perfect_matching


def matching_from_pairs(graph: Graph, pairs: Iterable[tuple[int, int]]) -> frozenset[int]:
    """Edge indices for vertex pairs; raises :class:`VerificationError` on non-edges or repeats."""
    out: list[int] = []
    for u, v in pairs:
        e = graph.edge_index(u, v) if 0 <= u < graph.n and 0 <= v < graph.n else None
        if e is None:
            raise VerificationError(f"({u + 1}, {v + 1}) is not an edge")
        out.append(e)
    if len(set(out)) != len(out):
        raise VerificationError("repeated matching edge")
    return frozenset(out)


def cycles_from_sequences(graph: Graph, sequences: Iterable[Sequence[int]]) -> CycleSet:
    """A checked :class:`CycleSet` from vertex sequences."""
    try:
        cycles = CycleSet.from_vertex_sequences(graph, sequences)
        cycles.check(graph)
    except InstanceError as exc:
        raise VerificationError(str(exc)) from exc
    return cycles


def matching_solution(graph: Graph, matching: Iterable[int], weight: int) -> Solution:
    return Solution("yes", weight, tuple(graph.edges[e] for e in sorted(matching)))


def cycle_solution(graph: Graph, cycles: CycleSet, weight: int) -> Solution:
    return Solution("yes", weight, cycles=tuple(tuple(s) for s in cycles.vertex_sequences(graph)))


def _matching_predicate(inst: WeightedInstance, weight: int) -> bool:
    k = inst.target_k
    if inst.kind is Kind.EWPM:
        return weight == k
    if inst.kind is Kind.BCPM:
        return weight <= k and (k - weight) % 2 == 0
    from .spm import spm_ranks

    l = inst.rank_l
    table = spm_ranks(inst, l, method="chain")
    return weight == k and len(table) >= l and table[l - 1].weight == k


def verify_solution(inst: WeightedInstance, sol: Solution) -> Optional[int]:
    """Check a YES certificate against the instance's problem predicate.

    Returns the certified weight, or None for ``no``/``unknown`` answers,
    which carry nothing to check. Raises :class:`VerificationError` when
    the certificate is malformed, has the wrong type, disagrees with the
    reported weight or fails the predicate.
    """
    if sol.status != "yes":
        return None
    graph = inst.graph
    if inst.kind.is_matching_kind:
        if sol.cycles:
            raise VerificationError("a matching problem needs matching edges, not cycles")
        matching = matching_from_pairs(graph, sol.pairs)
        weight = verify_perfect_matching(graph, inst.weights, matching)
        if weight is None:
            raise VerificationError("certificate is not a perfect matching")
        ok = _matching_predicate(inst, weight)
    else:
        if sol.pairs:
            raise VerificationError("a cycle problem needs cycles, not matching edges")
        cycles = cycles_from_sequences(graph, sol.cycles)
        weight = cycles.weight(inst.weights)
        if inst.kind is Kind.ECS:
            ok = weight == inst.target_k
        else:
            ok = len(cycles) == 1 and weight % 2 == 1 and weight <= inst.target_k
    if weight != sol.weight:
        raise VerificationError(f"reported weight {sol.weight} but the certificate weighs {weight}")
    if not ok:
        raise VerificationError(f"certificate of weight {weight} fails the {inst.kind.value} predicate")
    return weight
