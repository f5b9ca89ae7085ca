"""Fair splitting of colored bead sequences, static and dynamic.

Exact algorithms keep every agent at exactly its per-color quota while
bounding the number of owner-change boundaries; the approximate path trades
exactness for polylogarithmic updates.  See README for the CLI.
"""

from .core import (
    Bead,
    CutSet,
    FairnessReport,
    Necklace,
    NeighborhoodGraph,
    build_necklace,
    build_neighborhood_graph,
    colors_from_string,
    derive_cuts,
    is_peelable,
    partial_rebuild,
    peel_order,
    verify_fair,
)
from .offline import (
    SplitResult,
    adversarial_necklace,
    offline_split,
    offline_split_range,
)
from .dynamic2 import (
    ColoredDigraph,
    FencePolicy,
    FenceResult,
    UpdateResult,
    baseline_split,
    build_colored_digraph,
    default_fence_budget,
    relocate_colorpath,
    relocate_fence,
    relocate_path,
    swap,
)
from .batch import (
    BatchResult,
    FlowNetwork,
    MoveBatch,
    NeighborhoodTree,
    TreeFlowResult,
    batch_relocate,
    build_flow_network,
    build_move_batch,
    build_neighborhood_tree,
    delete_batch,
    insert_batch,
    prune_active,
    solve_tree_flow,
)
from .dense import (
    DenseIndex,
    DenseResult,
    dense_jump,
    dense_offline_split,
    dense_swap,
)
from .approx import (
    ApproxConfig,
    ApproxResult,
    ExclusionSet,
    OrderIndex,
    approx_cuts,
    approx_maintain,
    approx_static,
    epsilon_sample_size,
    sample_complement,
)
from .oracle import (
    INFEASIBLE,
    StatReport,
    brute_force_min_cuts,
    exact_min_node_max_flow,
)
from .ordertree import BACKEND, OrderStatTree, available_backends

__version__ = "0.1.0"
