"""Two-party protocols: objects, baselines, audits, reductions, analysis."""

from .analysis import (
    BridgeReport,
    CENSUS_STRUCTURAL,
    CENSUS_TRANSCRIPT,
    CostProfile,
    LeafRectangle,
    LeafReport,
    MODE_EXACT,
    MODE_MONTE_CARLO,
    SuccessReport,
    accepting_rectangle_weights,
    check_weights_against_lp,
    cost_profile,
    leaf_rectangle_check,
    success_probability,
)
from .core import (
    ALICE,
    BOB,
    AnyProtocol,
    DeterministicProtocol,
    Leaf,
    Node,
    ProgramProtocol,
    RandomizedProtocol,
    RunResult,
    TreeProtocol,
    as_randomized,
    constant_protocol,
    run_protocol,
    tree_from_records,
    tree_records,
)
from .library import index_bits, trivial_ndisj, trivial_ndisj_kfold, trivial_search_kfold
from .reductions import (
    ChooseBound,
    CostBreakdown,
    choose_success_bound,
    ndisj_to_search_cost,
    reduce_ndisj_to_search,
    reduce_search_from_kfold,
)
from .tasks import (
    KIND_NDISJ_KFOLD,
    KIND_SEARCH_CHOOSE,
    KIND_SEARCH_KFOLD,
    TASK_KINDS,
    TaskSpec,
    Verdict,
    block,
    blocks,
    classify,
    enumerate_inputs,
    intersecting_blocks,
    ndisj_truth,
)
from .verify import VERIFY_EXPLICIT, VERIFY_TWO_BIT, make_verified

__all__ = [
    "ALICE",
    "BOB",
    "AnyProtocol",
    "BridgeReport",
    "CENSUS_STRUCTURAL",
    "CENSUS_TRANSCRIPT",
    "ChooseBound",
    "CostBreakdown",
    "CostProfile",
    "DeterministicProtocol",
    "KIND_NDISJ_KFOLD",
    "KIND_SEARCH_CHOOSE",
    "KIND_SEARCH_KFOLD",
    "Leaf",
    "LeafRectangle",
    "LeafReport",
    "MODE_EXACT",
    "MODE_MONTE_CARLO",
    "Node",
    "ProgramProtocol",
    "RandomizedProtocol",
    "RunResult",
    "SuccessReport",
    "TASK_KINDS",
    "TaskSpec",
    "TreeProtocol",
    "VERIFY_EXPLICIT",
    "VERIFY_TWO_BIT",
    "Verdict",
    "accepting_rectangle_weights",
    "as_randomized",
    "block",
    "blocks",
    "check_weights_against_lp",
    "choose_success_bound",
    "classify",
    "constant_protocol",
    "cost_profile",
    "enumerate_inputs",
    "index_bits",
    "intersecting_blocks",
    "leaf_rectangle_check",
    "make_verified",
    "ndisj_to_search_cost",
    "ndisj_truth",
    "reduce_ndisj_to_search",
    "reduce_search_from_kfold",
    "run_protocol",
    "success_probability",
    "tree_from_records",
    "tree_records",
    "trivial_ndisj",
    "trivial_ndisj_kfold",
    "trivial_search_kfold",
]
