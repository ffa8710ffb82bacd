"""One entry point for every problem kind, its brute-force counterpart and
an estimator wrapper.
"""

from __future__ import annotations

from typing import Optional

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .cycles import CycleFound, ecs_bruteforce, ecs_solve, soc_bruteforce, soc_solve
from .exceptions import SizeLimitError
from .graph import Kind, WeightedInstance
from .io import Solution
from .matching import _all_perfect_matchings
from .solution import cycle_solution, matching_solution
from .spm import (
    METHODS,
    BudgetExceeded,
    DefiniteNo,
    Found,
    brute_limit,
    solve_matching_instance,
)
from .utils.validation import check_budget, check_instance

BIPARTITE_BOUNDS = ("auto", "on", "off")


def outcome_to_solution(instance: WeightedInstance, outcome) -> Solution:
    if isinstance(outcome, Found):
        res = outcome.result
        return matching_solution(instance.graph, res.matching, res.weight)
    if isinstance(outcome, CycleFound):
        return cycle_solution(instance.graph, outcome.cycles, outcome.weight)
    if isinstance(outcome, DefiniteNo):
        return Solution("no")
    if isinstance(outcome, BudgetExceeded):
        return Solution("unknown")
    raise TypeError(f"not a solve outcome: {outcome!r}")


def solve_outcome(instance: WeightedInstance, budget_l: int = 8, *, method: str = "chain",
                  bipartite_bound="auto"):
    """Raw outcome object from the solver matching ``instance.kind``."""
    if instance.kind is Kind.ECS:
        return ecs_solve(instance, budget_l, method=method)
    if instance.kind is Kind.SOC:
        return soc_solve(instance, budget_l, method=method)
    return solve_matching_instance(instance, budget_l, method=method, bipartite_bound=bipartite_bound)


def solve(instance: WeightedInstance, budget_l: int = 8, *, method: str = "chain",
          bipartite_bound="auto") -> Solution:
    """Solve any instance kind and return a :class:`Solution` with certificate.

    SPM instances ignore ``budget_l``: their rank is part of the instance.

    Examples
    --------
    >>> from matchkit.graph import Graph
    >>> square = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    >>> solve(WeightedInstance(square, (0, 1, 0, 1), "ewpm", 2))
    Solution(status='yes', weight=2, pairs=((1, 2), (0, 3)), cycles=())
    """
    return outcome_to_solution(instance, solve_outcome(instance, budget_l, method=method,
                                                       bipartite_bound=bipartite_bound))


def _lex_first(pms, weights, accept):
    best = None
    for pm in pms:
        w = sum(weights[e] for e in pm)
        if accept(w) and (best is None or (w, sorted(pm)) < (best[0], sorted(best[1]))):
            best = (w, pm)
    return best


def oracle_solve(instance: WeightedInstance, *, max_vertices: Optional[int] = None) -> Solution:
    """Brute-force answer by exhaustive enumeration.

    EWPM and SPM witnesses are the lexicographically first matching of the
    target weight; BCPM returns a minimum qualifying weight. Raises
    :class:`SizeLimitError` above ``max_vertices`` (default from the
    ``MATCHKIT_BRUTE_LIMIT`` environment variable).
    """
    limit = brute_limit() if max_vertices is None else max_vertices
    graph, weights, k = instance.graph, instance.weights, instance.target_k
    if graph.vertex_count > limit:
        raise SizeLimitError(f"{graph.vertex_count} vertices exceeds the brute-force limit {limit}")
    if instance.kind is Kind.ECS:
        cycles = ecs_bruteforce(instance, max_vertices=limit)
        return Solution("no") if cycles is None else cycle_solution(graph, cycles, cycles.weight(weights))
    if instance.kind is Kind.SOC:
        cycles = soc_bruteforce(instance, max_vertices=limit)
        return Solution("no") if cycles is None else cycle_solution(graph, cycles, cycles.weight(weights))
    pms = list(_all_perfect_matchings(graph))
    if instance.kind is Kind.EWPM:
        best = _lex_first(pms, weights, lambda w: w == k)
    elif instance.kind is Kind.BCPM:
        qualifying = [w for w in (sum(weights[e] for e in pm) for pm in pms)
                      if w <= k and (k - w) % 2 == 0]
        best = _lex_first(pms, weights, lambda w: w == min(qualifying)) if qualifying else None
    else:
        ws = sorted({sum(weights[e] for e in pm) for pm in pms})
        l = instance.rank_l
        hit = len(ws) >= l and ws[l - 1] == k
        best = _lex_first(pms, weights, lambda w: w == k) if hit else None
    return Solution("no") if best is None else matching_solution(graph, best[1], best[0])


class InstanceSolver(BaseEstimator):
    """Estimator-style front end to :func:`solve`.

    ``fit`` only checks the hyper-parameters (there is nothing to learn);
    ``predict`` maps instances to ``"yes"``/``"no"``/``"unknown"`` and
    ``solve`` to full :class:`Solution` objects.

    Parameters
    ----------
    budget_l : int, default=8
        Highest rank the search may certify before answering ``unknown``.
    method : {"chain", "exhaustive"}, default="chain"
        Forced-set search strategy.
    bipartite_bound : {"auto", "on", "off"}, default="auto"
        Forced-set size bound selection.
    """

    def __init__(self, budget_l: int = 8, method: str = "chain", bipartite_bound: str = "auto"):
        self.budget_l = budget_l
        self.method = method
        self.bipartite_bound = bipartite_bound

    def fit(self, X=None, y=None):
        check_budget(self.budget_l)
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.bipartite_bound not in BIPARTITE_BOUNDS:
            raise ValueError(f"bipartite_bound must be one of {BIPARTITE_BOUNDS}, got {self.bipartite_bound!r}")
        if X is not None:
            for inst in _as_list(X):
                check_instance(inst)
        self.is_fitted_ = True
        return self

    def solve(self, X) -> list[Solution]:
        check_is_fitted(self, "is_fitted_")
        return [solve(check_instance(inst), self.budget_l, method=self.method,
                      bipartite_bound=self.bipartite_bound) for inst in _as_list(X)]

    def predict(self, X) -> list[str]:
        return [sol.status for sol in self.solve(X)]


def _as_list(X) -> list[WeightedInstance]:
    return [X] if isinstance(X, WeightedInstance) else list(X)
