"""Weight-preserving reductions between matching and cycle problems.

Matching to cycles (EWPM -> ECS, BCPM -> SOC) keeps the graph and reweights
it around a minimum-weight perfect matching ``M`` so that every cheap cycle
alternates with respect to ``M``. Cycles to matchings (ECS -> EWPM,
SOC -> BCPM) replaces each vertex by a matched pair and each edge by a
four-vertex chain whose middle edge carries the original weight.

Each reduction returns a :class:`Reduction` with the reduced instance and a
context that translates solutions back to the source instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import InstanceError, VerificationError
from .graph import (
    INT64_MAX,
    CycleSet,
    Graph,
    Kind,
    WeightedInstance,
    cycle_vertex_sequence,
    symmetric_difference_cycles,
)
from .matching import PmResult, min_weight_pm, verify_perfect_matching

EWPM_TO_ECS = "ewpm-ecs"
BCPM_TO_SOC = "bcpm-soc"
ECS_TO_EWPM = "ecs-ewpm"
SOC_TO_BCPM = "soc-bcpm"

DIRECTIONS = {
    (Kind.EWPM, Kind.ECS): EWPM_TO_ECS,
    (Kind.BCPM, Kind.SOC): BCPM_TO_SOC,
    (Kind.ECS, Kind.EWPM): ECS_TO_EWPM,
    (Kind.SOC, Kind.BCPM): SOC_TO_BCPM,
}


def _check_int64(values, what: str) -> None:
    for x in values:
        if abs(x) > INT64_MAX:
            raise InstanceError(f"{what} {x} overflows a signed 64-bit integer", "overflow")


def canonical_no_instance(kind: Kind) -> WeightedInstance:
    """A single isolated vertex with target 1: no cycle set weighs 1."""
    return WeightedInstance(Graph(1, ()), (), kind, 1)


def canonical_yes_soc_instance() -> WeightedInstance:
    """The unit-weight triangle with target 3."""
    return WeightedInstance(Graph(3, ((0, 1), (1, 2), (0, 2))), (1, 1, 1), Kind.SOC, 3)


@dataclass(frozen=True)
class AlternatingContext:
    """Translation data for the matching-to-cycle reductions.

    ``base_weight`` and ``r`` are expressed in the shifted (non-negative)
    weights; ``shift`` is the constant added to every source weight.
    ``resolved`` is ``"yes"``/``"no"`` when the reduction decided the
    instance on its own and emitted a canonical instance instead.
    """

    direction: str
    source: WeightedInstance
    base_matching: Optional[frozenset[int]]
    base_weight: Optional[int]
    r: Optional[int]
    shift: int
    resolved: Optional[str] = None


@dataclass(frozen=True)
class GadgetContext:
    """Translation data for the cycle-to-matching reductions.

    ``vertex_map[v] = (v1, v2)``; ``edge_map[i] = (e_u, e_uv, e_vu, e_v, middle)``
    for source edge ``i = {u, v}`` with ``u < v``, where ``middle`` is the
    gadget edge index of ``{e_uv, e_vu}``.
    """

    direction: str
    source: WeightedInstance
    gadget: Graph
    canonical_matching: frozenset[int]
    vertex_map: tuple[tuple[int, int], ...]
    edge_map: tuple[tuple[int, int, int, int, int], ...]

    @property
    def middle_edges(self) -> dict[int, int]:
        return {em[4]: i for i, em in enumerate(self.edge_map)}


ReductionContext = Union[AlternatingContext, GadgetContext]


@dataclass(frozen=True)
class Reduction:
    instance: WeightedInstance
    context: ReductionContext

    @property
    def resolved(self) -> Optional[str]:
        return getattr(self.context, "resolved", None)


# matching -> cycles ---------------------------------------------------------

def alternating_weights(weights: Sequence[int], matching: frozenset[int], r: int) -> tuple[int, ...]:
    """Negate-and-lift reweighting around a perfect matching.

    Edges of ``matching`` get ``-w - r - 1``, all others ``w + r + 1``.
    For ``r >= w(matching)`` with ``matching`` of minimum weight, the result
    is conservative and any cycle of weight at most ``r - w(matching)``
    alternates with respect to ``matching``.
    """
    return tuple(-w - r - 1 if i in matching else w + r + 1 for i, w in enumerate(weights))


def _nonnegative_shift(instance: WeightedInstance) -> tuple[int, tuple[int, ...], int]:
    c = -min(0, min(instance.weights, default=0))
    shifted = tuple(w + c for w in instance.weights)
    k = instance.target_k + c * (instance.n // 2)
    return c, shifted, k


def _matching_to_cycles(instance: WeightedInstance, direction: str) -> Reduction:
    target_kind = Kind.ECS if direction == EWPM_TO_ECS else Kind.SOC
    c, shifted, k = _nonnegative_shift(instance)
    base = min_weight_pm(instance.graph, shifted)

    def resolved(answer: str) -> Reduction:
        if answer == "yes":
            canon = canonical_yes_soc_instance()
        else:
            canon = canonical_no_instance(target_kind)
        ctx = AlternatingContext(direction, instance,
                                 base.matching if base else None,
                                 base.weight if base else None,
                                 None, c, answer)
        return Reduction(canon, ctx)

    if base is None or instance.n % 2:
        return resolved("no")
    if direction == BCPM_TO_SOC and (k - base.weight) % 2 == 0:
        return resolved("yes" if base.weight <= k else "no")
    if base.weight > k:
        return resolved("no")
    r = k
    new_weights = alternating_weights(shifted, base.matching, r)
    _check_int64(new_weights, "transformed weight")
    reduced = WeightedInstance(instance.graph, new_weights, target_kind, k - base.weight)
    return Reduction(reduced, AlternatingContext(direction, instance, base.matching, base.weight, r, c))


def reduce_ewpm_to_ecs(instance: WeightedInstance) -> Reduction:
    """Reduce an exact-weight perfect matching instance to an exact cycle sum instance.

    Weights are first shifted to be non-negative (the target moves by
    ``shift * n / 2``). If the graph has no perfect matching or its minimum
    exceeds k, the reduction resolves to the canonical NO instance.
    Otherwise the same graph is returned with :func:`alternating_weights`
    (``r = k``) and target ``k - w(M)``.
    """
    return _matching_to_cycles(instance, EWPM_TO_ECS)


def reduce_bcpm_to_soc(instance: WeightedInstance) -> Reduction:
    """Reduce a bounded correct-parity matching instance to a shortest odd cycle instance.

    If the minimum-weight perfect matching already has the parity of k the
    instance is decided directly and a canonical YES/NO instance returned.
    """
    return _matching_to_cycles(instance, BCPM_TO_SOC)


def _is_alternating(graph: Graph, cycle: Sequence[int], matching: frozenset[int]) -> bool:
    if len(cycle) % 2:
        return False
    flags = [e in matching for e in cycle]
    return all(flags[i] != flags[(i + 1) % len(flags)] for i in range(len(flags)))


def lift_cycles_to_matching(cycles: CycleSet, ctx: AlternatingContext) -> PmResult:
    """Switch the base matching along each cycle: ``M ^ C1 ^ ... ^ Cp``.

    The result's weight is in the source instance's original weights and
    equals ``w(M) + sum of the reduced weights of the cycles``. Raises
    :class:`VerificationError` for non-alternating or overlapping cycles.
    """
    if ctx.base_matching is None:
        raise VerificationError("context has no base matching to lift against")
    source = ctx.source
    graph = source.graph
    try:
        cycles.check(graph)
    except InstanceError as exc:
        raise VerificationError(str(exc)) from exc
    result = set(ctx.base_matching)
    for cycle in cycles:
        if not _is_alternating(graph, cycle, ctx.base_matching):
            raise VerificationError(f"cycle {cycle_vertex_sequence(graph, cycle)} does not alternate")
        result.symmetric_difference_update(cycle)
    weight = verify_perfect_matching(graph, source.weights, result)
    if weight is None:
        raise VerificationError("lifted edge set is not a perfect matching")
    if ctx.r is not None:
        shifted = [w + ctx.shift for w in source.weights]
        reduced = alternating_weights(shifted, ctx.base_matching, ctx.r)
        base_original = ctx.base_weight - ctx.shift * (source.n // 2)
        if weight != base_original + cycles.weight(reduced):
            raise VerificationError("lifted weight disagrees with the cycle weights")
    return PmResult(frozenset(result), weight)


# cycles -> matching ---------------------------------------------------------

def build_gadget(graph: Graph, weights: Sequence[int]):
    """Vertex-pair and edge-chain gadget graph.

    Returns ``(gadget, gadget_weights, vertex_map, edge_map, canonical)``.
    Source vertex ``v`` becomes ``(2v, 2v + 1)``; source edge ``i = {u, v}``
    becomes chain vertices ``2n + 4i + (0, 1, 2, 3)`` = ``(e_u, e_uv, e_vu, e_v)``.
    Gadget edges: first ``{v1, v2}`` for every v, then per source edge the
    seven edges ``u1-e_u, u2-e_u, e_u-e_uv, e_uv-e_vu, e_vu-e_v, e_v-v1, e_v-v2``.
    Only the middle edge ``e_uv-e_vu`` carries the source weight.
    """
    n = graph.vertex_count
    vertex_map = tuple((2 * v, 2 * v + 1) for v in range(n))
    gedges: list[tuple[int, int]] = [vertex_map[v] for v in range(n)]
    gweights: list[int] = [0] * n
    canonical = set(range(n))
    edge_map = []
    for i, (u, v) in enumerate(graph.edges):
        eu, euv, evu, ev = (2 * n + 4 * i + j for j in range(4))
        u1, u2 = vertex_map[u]
        v1, v2 = vertex_map[v]
        base = len(gedges)
        gedges += [(u1, eu), (u2, eu), (eu, euv), (euv, evu), (evu, ev), (ev, v1), (ev, v2)]
        gweights += [0, 0, 0, weights[i], 0, 0, 0]
        canonical.update((base + 2, base + 4))
        edge_map.append((eu, euv, evu, ev, base + 3))
    gadget = Graph(2 * n + 4 * graph.m, tuple(gedges))
    return gadget, tuple(gweights), vertex_map, tuple(edge_map), frozenset(canonical)


def _cycles_to_matching(instance: WeightedInstance, direction: str) -> Reduction:
    gadget, gweights, vmap, emap, canonical = build_gadget(instance.graph, instance.weights)
    if direction == ECS_TO_EWPM:
        kind, k = Kind.EWPM, instance.target_k
    else:
        kind = Kind.BCPM
        k = instance.target_k if instance.target_k % 2 else instance.target_k - 1
    _check_int64([k], "target")
    reduced = WeightedInstance(gadget, gweights, kind, k)
    ctx = GadgetContext(direction, instance, gadget, canonical, vmap, emap)
    return Reduction(reduced, ctx)


def reduce_ecs_to_ewpm(instance: WeightedInstance) -> Reduction:
    """Reduce an exact cycle sum instance to exact-weight perfect matching on the gadget.

    The gadget has ``2|V| + 4|E|`` vertices and ``|V| + 7|E|`` edges; its
    canonical perfect matching weighs 0 and the target stays k.
    """
    return _cycles_to_matching(instance, ECS_TO_EWPM)


def reduce_soc_to_bcpm(instance: WeightedInstance) -> Reduction:
    """Reduce shortest odd cycle to bounded correct-parity matching on the gadget.

    An even target k is first lowered to k - 1.
    """
    return _cycles_to_matching(instance, SOC_TO_BCPM)


def project_matching_to_cycles(matching: frozenset[int], ctx: GadgetContext) -> CycleSet:
    """Translate a gadget perfect matching into vertex-disjoint source cycles.

    The symmetric difference with the canonical matching splits into
    alternating cycles; each maps to the source edges whose middle gadget
    edge it uses, in traversal order.
    """
    gadget = ctx.gadget
    if verify_perfect_matching(gadget, [0] * gadget.m, matching) is None:
        raise VerificationError("not a perfect matching of the gadget graph")
    middle = ctx.middle_edges
    diff = ctx.canonical_matching.symmetric_difference(matching)
    out = []
    for gcycle in symmetric_difference_cycles(gadget, diff):
        source_cycle = tuple(middle[e] for e in gcycle if e in middle)
        if len(source_cycle) < 3:
            raise VerificationError("alternating gadget cycle does not map to a source cycle")
        out.append(source_cycle)
    cycles = CycleSet(tuple(out))
    try:
        cycles.check(ctx.source.graph)
    except InstanceError as exc:
        raise VerificationError(str(exc)) from exc
    return cycles


def is_conservative(graph: Graph, weights: Sequence[int]) -> bool:
    """True iff no cycle of ``graph`` has negative total weight.

    The minimum-weight perfect matching of the gadget equals the minimum
    weight of a vertex-disjoint cycle set (the empty set weighs 0), which is
    negative exactly when some single cycle is.
    """
    if not any(w < 0 for w in weights):
        return True
    gadget, gweights, *_ = build_gadget(graph, weights)
    best = min_weight_pm(gadget, gweights)
    return best.weight >= 0


# odd length <-> odd weight ----------------------------------------------------

def soc_odd_weight_to_odd_length(instance: WeightedInstance) -> WeightedInstance:
    """Subdivide every even-weight edge so that all weights become odd.

    An even edge ``{u, v}`` of weight w becomes ``u - x - v`` through a fresh
    vertex, weighted ``(1, w - 1)``. Cycle weights are unchanged and a cycle
    has odd weight iff it has odd length in the output. The two path edges
    replace the original edge in place; fresh vertices are appended.
    """
    graph = instance.graph
    n = graph.vertex_count
    edges: list[tuple[int, int]] = []
    weights: list[int] = []
    for (u, v), w in zip(graph.edges, instance.weights):
        if w % 2:
            edges.append((u, v))
            weights.append(w)
        else:
            x = n
            n += 1
            edges += [(u, x), (x, v)]
            weights += [1, w - 1]
    _check_int64(weights, "weight")
    return instance.replace(graph=Graph(n, tuple(edges)), weights=tuple(weights))


def soc_odd_length_to_odd_weight(instance: WeightedInstance) -> WeightedInstance:
    """Reweight ``w -> 2|V|w + 1`` so that weight parity equals length parity.

    A cycle of length t and weight W gets weight ``2|V|W + t``; the target
    becomes ``2|V|k + |V|``, so an odd-length cycle of weight at most k maps
    to an odd-weight cycle below the new target and vice versa.
    """
    n = instance.n
    weights = tuple(2 * n * w + 1 for w in instance.weights)
    k = 2 * n * instance.target_k + n
    _check_int64(weights + (k,), "weight")
    return instance.replace(weights=weights, target_k=k)


def reduce(instance: WeightedInstance, to: Union[Kind, str]) -> Reduction:
    """Dispatch to the reduction from ``instance.kind`` to ``to``."""
    to = Kind(to)
    direction = DIRECTIONS.get((instance.kind, to))
    if direction is None:
        raise InstanceError(
            f"no reduction from {instance.kind.value} to {to.value}", "unsupported_pairing")
    return {
        EWPM_TO_ECS: reduce_ewpm_to_ecs,
        BCPM_TO_SOC: reduce_bcpm_to_soc,
        ECS_TO_EWPM: reduce_ecs_to_ewpm,
        SOC_TO_BCPM: reduce_soc_to_bcpm,
    }[direction](instance)


# estimator wrappers -------------------------------------------------------------

class _ReductionTransformer(TransformerMixin, BaseEstimator):
    _directions: dict = {}

    def _check_source(self, X) -> WeightedInstance:
        from .utils.validation import check_instance

        return check_instance(X, kinds=tuple(self._directions))

    def fit(self, X, y=None):
        X = self._check_source(X)
        self.reduction_ = reduce(X, self._directions[X.kind])
        self.source_ = X
        return self

    def transform(self, X):
        check_is_fitted(self, "reduction_")
        X = self._check_source(X)
        if X != self.source_:
            raise ValueError("transform expects the instance the reduction was fitted on")
        return self.reduction_.instance

    @property
    def context_(self):
        check_is_fitted(self, "reduction_")
        return self.reduction_.context


class MatchingToCycles(_ReductionTransformer):
    """EWPM -> ECS or BCPM -> SOC, chosen by the fitted instance's kind.

    ``inverse_transform`` lifts a cycle solution of the reduced instance to a
    perfect matching of the source instance.

    Examples
    --------
    >>> from matchkit.graph import Graph, WeightedInstance
    >>> square = WeightedInstance(Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]), (0, 1, 0, 1), "ewpm", 2)
    >>> red = MatchingToCycles().fit(square)
    >>> red.transform(square).weights
    (-3, 4, -3, 4)
    """

    _directions = {Kind.EWPM: Kind.ECS, Kind.BCPM: Kind.SOC}

    def inverse_transform(self, cycles: CycleSet) -> PmResult:
        ctx = self.context_
        if ctx.resolved == "yes":
            return PmResult(ctx.base_matching, sum(ctx.source.weights[e] for e in ctx.base_matching))
        if ctx.resolved == "no":
            raise VerificationError("the reduction resolved the source instance as NO")
        return lift_cycles_to_matching(cycles, ctx)


class CyclesToMatching(_ReductionTransformer):
    """ECS -> EWPM or SOC -> BCPM on the vertex-pair/edge-chain gadget.

    ``inverse_transform`` projects a gadget perfect matching to source cycles.
    """

    _directions = {Kind.ECS: Kind.EWPM, Kind.SOC: Kind.BCPM}

    def inverse_transform(self, matching: frozenset[int]) -> CycleSet:
        return project_matching_to_cycles(frozenset(matching), self.context_)
