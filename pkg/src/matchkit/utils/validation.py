"""Input validation helpers shared by the estimators, the file parser and the CLI."""

from __future__ import annotations

from typing import Iterable, Optional

from ..exceptions import InstanceError
from ..graph import INT64_MAX, Graph, Kind, WeightedInstance


def _check_graph(graph: Graph) -> None:
    n = graph.vertex_count
    seen = set()
    for u, v in graph.edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InstanceError(f"edge ({u + 1}, {v + 1}) has an id outside 1..{n}", "bad_id")
        if u == v:
            raise InstanceError(f"self-loop at vertex {u + 1}", "non_simple")
        pair = (min(u, v), max(u, v))
        if pair in seen:
            raise InstanceError(f"duplicate edge ({pair[0] + 1}, {pair[1] + 1})", "non_simple")
        seen.add(pair)


def check_overflow(inst: WeightedInstance) -> None:
    """Reject instances whose reductions would leave the signed 64-bit range.

    Matching kinds are bounded through the alternating reweighting
    ``|w| + r + 1`` (after the non-negative shift), cycle kinds through the
    odd-length transform ``2|V||w| + 1`` and its target ``2|V||k| + |V|``.
    """
    big = max((abs(w) for w in inst.weights), default=0)
    k = abs(inst.target_k)
    if big > INT64_MAX or k > INT64_MAX:
        raise InstanceError("weight or target outside the signed 64-bit range", "overflow")
    n = inst.n
    if inst.kind.is_matching_kind:
        shift = -min(0, min(inst.weights, default=0))
        r = k + shift * (n // 2)
        worst = big + shift + r + 1
    else:
        worst = max(2 * n * big + 1, 2 * n * k + n)
    if worst > INT64_MAX:
        raise InstanceError("transformed weights would overflow a signed 64-bit integer", "overflow")


def validate_instance(inst: WeightedInstance) -> None:
    """Raise :class:`InstanceError` unless ``inst`` satisfies every instance invariant.

    Cycle kinds (ECS, SOC) must also carry conservative weights. Error codes:
    ``bad_id``, ``non_simple``, ``bad_weights``, ``missing_rank``,
    ``unexpected_rank``, ``overflow`` and ``non_conservative``.

    Examples
    --------
    >>> tri = Graph(3, [(0, 1), (1, 2), (0, 2)])
    >>> validate_instance(WeightedInstance(tri, (1, 1, -3), "ewpm", 0))
    >>> validate_instance(WeightedInstance(tri, (1, 1, -3), "ecs", 0))
    Traceback (most recent call last):
    ...
    matchkit.exceptions.InstanceError: weights have a negative cycle
    """
    from ..reductions import is_conservative

    if not isinstance(inst, WeightedInstance):
        raise InstanceError(f"expected a WeightedInstance, got {type(inst).__name__}")
    _check_graph(inst.graph)
    if len(inst.weights) != inst.graph.m:
        raise InstanceError(f"expected {inst.graph.m} weights, got {len(inst.weights)}", "bad_weights")
    if inst.kind is Kind.SPM and (inst.rank_l is None or inst.rank_l < 1):
        raise InstanceError("SPM instance needs a positive rank", "missing_rank")
    if inst.kind is not Kind.SPM and inst.rank_l is not None:
        raise InstanceError(f"rank given for a {inst.kind.value} instance", "unexpected_rank")
    check_overflow(inst)
    if inst.kind.is_cycle_kind and not is_conservative(inst.graph, inst.weights):
        raise InstanceError("weights have a negative cycle", "non_conservative")


def check_instance(X, kinds: Optional[Iterable[Kind]] = None) -> WeightedInstance:
    """Validate an estimator input and return it.

    ``kinds`` restricts the accepted problem kinds; anything else raises
    :class:`InstanceError` with code ``wrong_kind``.
    """
    validate_instance(X)
    if kinds is not None:
        allowed = tuple(Kind(k) for k in kinds)
        if X.kind not in allowed:
            names = ", ".join(k.value for k in allowed)
            raise InstanceError(f"expected one of {names}, got {X.kind.value}", "wrong_kind")
    return X


def check_budget(budget_l) -> int:
    if isinstance(budget_l, bool) or not isinstance(budget_l, int) or budget_l < 1:
        raise ValueError(f"budget must be a positive integer, got {budget_l!r}")
    return budget_l
