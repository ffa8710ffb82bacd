"""Core data model: simple undirected graphs, weighted problem instances,
matchings and vertex-disjoint cycle collections.

Vertices are 0-based internally; instance files use 1-based ids. Edges are
identified by their position in ``Graph.edges`` for the lifetime of a graph.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .exceptions import InstanceError

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)

#: A matching is a set of edge indices into a graph.
Matching = frozenset

Edge = tuple[int, int]


class Kind(str, enum.Enum):
    EWPM = "ewpm"
    BCPM = "bcpm"
    ECS = "ecs"
    SOC = "soc"
    SPM = "spm"

    @property
    def is_cycle_kind(self) -> bool:
        return self in (Kind.ECS, Kind.SOC)

    @property
    def is_matching_kind(self) -> bool:
        return not self.is_cycle_kind


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph with positionally indexed edges.

    Parameters
    ----------
    vertex_count : int
        Number of vertices; vertices are ``0 .. vertex_count - 1``.
    edges : sequence of (int, int)
        Unordered vertex pairs. Each pair is stored as ``(min, max)``.
    """

    vertex_count: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        n = self.vertex_count
        if not isinstance(n, int) or n < 0:
            raise InstanceError(f"vertex count must be a non-negative integer, got {n!r}", "bad_id")
        normalized = []
        seen = set()
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise InstanceError(f"edge {i} = ({u}, {v}) has an endpoint outside [0, {n})", "bad_id")
            if u == v:
                raise InstanceError(f"edge {i} is a self-loop on vertex {u}", "non_simple")
            pair = (u, v) if u < v else (v, u)
            if pair in seen:
                raise InstanceError(f"edge {i} = {pair} duplicates an earlier edge", "non_simple")
            seen.add(pair)
            normalized.append(pair)
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_lookup(self) -> dict[Edge, int]:
        return {pair: i for i, pair in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the ``(neighbour, edge_index)`` pairs in edge order."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for i, (u, v) in enumerate(self.edges):
            adj[u].append((v, i))
            adj[v].append((u, i))
        return tuple(tuple(a) for a in adj)

    def edge_index(self, u: int, v: int) -> Optional[int]:
        return self.edge_lookup.get((u, v) if u < v else (v, u))

    def endpoints(self, edge: int) -> Edge:
        return self.edges[edge]

    def covered(self, edge_indices: Iterable[int]) -> set[int]:
        out: set[int] = set()
        for e in edge_indices:
            out.update(self.edges[e])
        return out

    def disjoint_union(self, other: Graph) -> Graph:
        shift = self.vertex_count
        return Graph(
            self.vertex_count + other.vertex_count,
            self.edges + tuple((u + shift, v + shift) for u, v in other.edges),
        )


@dataclass(frozen=True)
class WeightedInstance:
    """A graph with integer edge weights, a problem kind and a target value.

    ``rank_l`` is present exactly when ``kind`` is :attr:`Kind.SPM`.
    Conservativeness of cycle-kind weights is not checked here since it
    requires a matching computation; see
    :func:`matchkit.utils.validation.validate_instance`.
    """

    graph: Graph
    weights: tuple[int, ...]
    kind: Kind
    target_k: int
    rank_l: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.weights) != self.graph.m:
            raise InstanceError(
                f"expected {self.graph.m} weights, got {len(self.weights)}", "bad_weights")
        if self.kind is Kind.SPM:
            if self.rank_l is None:
                raise InstanceError("SPM instance needs a rank", "missing_rank")
            if self.rank_l < 1:
                raise InstanceError(f"rank must be positive, got {self.rank_l}", "missing_rank")
        elif self.rank_l is not None:
            raise InstanceError(f"rank given for a {self.kind.value} instance", "unexpected_rank")

    @property
    def n(self) -> int:
        return self.graph.vertex_count

    @property
    def m(self) -> int:
        return self.graph.m

    def replace(self, **changes) -> WeightedInstance:
        fields = dict(graph=self.graph, weights=self.weights, kind=self.kind,
                      target_k=self.target_k, rank_l=self.rank_l)
        fields.update(changes)
        if Kind(fields["kind"]) is not Kind.SPM and "rank_l" not in changes:
            fields["rank_l"] = None
        return WeightedInstance(**fields)


def edge_weight(weights: Sequence[int], edge_indices: Iterable[int]) -> int:
    return sum(weights[e] for e in edge_indices)


def is_matching(graph: Graph, edge_indices: Iterable[int]) -> bool:
    seen: set[int] = set()
    for e in edge_indices:
        u, v = graph.edges[e]
        if u in seen or v in seen:
            return False
        seen.add(u)
        seen.add(v)
    return True


def is_perfect_matching(graph: Graph, edge_indices: Iterable[int]) -> bool:
    edge_indices = list(edge_indices)
    return is_matching(graph, edge_indices) and 2 * len(edge_indices) == graph.vertex_count


def symmetric_difference_cycles(graph: Graph, edge_indices: Iterable[int]) -> list[tuple[int, ...]]:
    """Split an edge set in which every vertex has degree 0 or 2 into cycles.

    Each cycle is returned as an edge-index sequence in traversal order,
    starting from its smallest edge index. Cycles are ordered by their first
    edge. Raises :class:`InstanceError` if some vertex has another degree.
    """
    incident: dict[int, list[int]] = {}
    edge_indices = sorted(set(edge_indices))
    for e in edge_indices:
        for x in graph.edges[e]:
            incident.setdefault(x, []).append(e)
    for x, es in incident.items():
        if len(es) != 2:
            raise InstanceError(f"vertex {x} has degree {len(es)} in the edge set", "not_cycles")
    cycles = []
    used: set[int] = set()
    for start in edge_indices:
        if start in used:
            continue
        cycle = [start]
        used.add(start)
        u, v = graph.edges[start]
        current, at = start, v
        while True:
            a, b = incident[at]
            nxt = b if a == current else a
            if nxt == start:
                break
            cycle.append(nxt)
            used.add(nxt)
            x, y = graph.edges[nxt]
            at = y if x == at else x
            current = nxt
        cycles.append(tuple(cycle))
    return cycles


def cycle_vertex_sequence(graph: Graph, cycle: Sequence[int]) -> list[int]:
    """Vertex sequence ``v0 v1 ... v(t-1)`` traced by a cyclic edge sequence.

    Edge ``cycle[i]`` joins ``v(i)`` and ``v(i+1)`` (indices mod t).
    """
    t = len(cycle)
    if t < 3:
        raise InstanceError(f"a cycle needs at least 3 edges, got {t}", "bad_cycle")
    a, b = graph.edges[cycle[0]]
    nxt = graph.edges[cycle[1]]
    if b in nxt:
        start = a
    elif a in nxt:
        start = b
    else:
        raise InstanceError("consecutive cycle edges do not share a vertex", "bad_cycle")
    seq = [start]
    at = start
    for e in cycle:
        x, y = graph.edges[e]
        if at == x:
            at = y
        elif at == y:
            at = x
        else:
            raise InstanceError("consecutive cycle edges do not share a vertex", "bad_cycle")
        seq.append(at)
    if seq[-1] != start:
        raise InstanceError("edge sequence does not close into a cycle", "bad_cycle")
    seq.pop()
    if len(set(seq)) != t:
        raise InstanceError("cycle repeats a vertex", "bad_cycle")
    return seq


def cycle_from_vertices(graph: Graph, vertices: Sequence[int]) -> tuple[int, ...]:
    t = len(vertices)
    if t < 3 or len(set(vertices)) != t:
        raise InstanceError(f"not a simple cycle: {list(vertices)}", "bad_cycle")
    out = []
    for i in range(t):
        e = graph.edge_index(vertices[i], vertices[(i + 1) % t])
        if e is None:
            raise InstanceError(
                f"({vertices[i]}, {vertices[(i + 1) % t]}) is not an edge", "bad_cycle")
        out.append(e)
    return tuple(out)


def _canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    t = len(cycle)
    i = min(range(t), key=lambda j: cycle[j])
    fwd = tuple(cycle[(i + j) % t] for j in range(t))
    bwd = tuple(cycle[(i - j) % t] for j in range(t))
    return min(fwd, bwd)


@dataclass(frozen=True)
class CycleSet:
    """Vertex-disjoint simple cycles, each a cyclic edge-index sequence.

    The empty collection is a valid cycle set of weight 0.
    """

    cycles: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(tuple(c) for c in self.cycles))

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    @property
    def edges(self) -> frozenset[int]:
        return frozenset(e for c in self.cycles for e in c)

    def weight(self, weights: Sequence[int]) -> int:
        return sum(weights[e] for c in self.cycles for e in c)

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        """Representation invariant under rotation, reflection and reordering."""
        return tuple(sorted(_canonical_cycle(c) for c in self.cycles))

    def vertex_sequences(self, graph: Graph) -> list[list[int]]:
        return [cycle_vertex_sequence(graph, c) for c in self.cycles]

    @classmethod
    def from_vertex_sequences(cls, graph: Graph, sequences: Iterable[Sequence[int]]) -> CycleSet:
        return cls(tuple(cycle_from_vertices(graph, s) for s in sequences))

    def check(self, graph: Graph) -> None:
        """Raise :class:`InstanceError` unless the cycles are simple and disjoint."""
        seen: set[int] = set()
        for c in self.cycles:
            for e in c:
                if not 0 <= e < graph.m:
                    raise InstanceError(f"edge index {e} out of range", "bad_cycle")
            verts = cycle_vertex_sequence(graph, c)
            if seen.intersection(verts):
                raise InstanceError("cycles are not vertex-disjoint", "not_disjoint")
            seen.update(verts)


def is_bipartite(graph: Graph) -> tuple[bool, Optional[list[int]]]:
    """Breadth-first two-colouring.

    Returns ``(True, colours)`` with a proper 0/1 colouring, or
    ``(False, None)`` when the graph has an odd cycle.
    """
    colour = [-1] * graph.vertex_count
    adj = graph.adjacency
    for s in range(graph.vertex_count):
        if colour[s] != -1:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y, _ in adj[x]:
                if colour[y] == -1:
                    colour[y] = 1 - colour[x]
                    queue.append(y)
                elif colour[y] == colour[x]:
                    return False, None
    return True, colour
