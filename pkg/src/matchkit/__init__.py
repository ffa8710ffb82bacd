"""Exact-weight perfect matching, l-th smallest perfect matchings and the
reductions between matching and conservative-weight cycle problems.
"""

from .cycles import (
    CycleFound,
    ecs_bruteforce,
    ecs_solve,
    enumerate_simple_cycles,
    soc_bruteforce,
    soc_solve,
)
from .exceptions import ForcedSetError, InstanceError, SizeLimitError, VerificationError
from .generators import gen_random_instance, gen_tightness_family
from .graph import CycleSet, Graph, Kind, WeightedInstance, is_bipartite
from .io import (
    Solution,
    parse_context,
    parse_instance,
    parse_solution,
    serialize_context,
    serialize_instance,
    serialize_solution,
)
from .matching import (
    PmResult,
    enumerate_perfect_matchings,
    min_weight_pm,
    min_weight_pm_forced,
    verify_perfect_matching,
)
from .reductions import (
    CyclesToMatching,
    MatchingToCycles,
    is_conservative,
    lift_cycles_to_matching,
    project_matching_to_cycles,
    reduce,
    reduce_bcpm_to_soc,
    reduce_ecs_to_ewpm,
    reduce_ewpm_to_ecs,
    reduce_soc_to_bcpm,
    soc_odd_length_to_odd_weight,
    soc_odd_weight_to_odd_length,
)
from .solution import verify_solution
from .solve import InstanceSolver, oracle_solve, solve
from .spm import (
    BudgetExceeded,
    DefiniteNo,
    Found,
    RankTable,
    bcpm_solve,
    ewpm_solve,
    spm_decide,
    spm_ranks,
    spm_ranks_bruteforce,
    spm_solve,
)
from .utils.validation import validate_instance

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CycleFound",
    "CycleSet",
    "CyclesToMatching",
    "DefiniteNo",
    "ForcedSetError",
    "Found",
    "Graph",
    "InstanceError",
    "InstanceSolver",
    "Kind",
    "MatchingToCycles",
    "PmResult",
    "RankTable",
    "SizeLimitError",
    "Solution",
    "VerificationError",
    "WeightedInstance",
    "bcpm_solve",
    "ecs_bruteforce",
    "ecs_solve",
    "enumerate_perfect_matchings",
    "enumerate_simple_cycles",
    "ewpm_solve",
    "gen_random_instance",
    "gen_tightness_family",
    "is_bipartite",
    "is_conservative",
    "lift_cycles_to_matching",
    "min_weight_pm",
    "min_weight_pm_forced",
    "oracle_solve",
    "parse_context",
    "parse_instance",
    "parse_solution",
    "project_matching_to_cycles",
    "reduce",
    "reduce_bcpm_to_soc",
    "reduce_ecs_to_ewpm",
    "reduce_ewpm_to_ecs",
    "reduce_soc_to_bcpm",
    "serialize_context",
    "serialize_instance",
    "serialize_solution",
    "soc_bruteforce",
    "soc_odd_length_to_odd_weight",
    "soc_odd_weight_to_odd_length",
    "soc_solve",
    "solve",
    "spm_decide",
    "spm_ranks",
    "spm_ranks_bruteforce",
    "spm_solve",
    "validate_instance",
    "verify_perfect_matching",
    "verify_solution",
]
