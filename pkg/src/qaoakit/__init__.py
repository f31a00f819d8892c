"""Simulation and analysis of the quantum approximate optimization algorithm.

Exact state-vector runs of the level-p MaxCut circuit, F_p by subgraph
decomposition, angle search, worst-case ratio analysis on 2- and 3-regular
graphs, and the independent-set variant on legal strings.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExceededError,
    GraphParseError,
    InfeasibleError,
    QaoaError,
    ResourceLimitError,
    SpecialCaseError,
)
from .graph import (  # noqa: E402
    Graph,
    RootedSubgraph,
    SubgraphDecomposition,
    canonical_key,
    count_crossed_squares,
    count_isolated_triangles,
    decompose,
    edge_neighborhood,
    parse_graph,
    q_tree,
    random_regular_graph,
    ring_graph,
)
from .optimizer import OptimizationResult, OptimizerConfig, maximize_fp  # noqa: E402
from .qaoa import concentration_bound, f_subgraph, fp, fp_decomposed, fp_full  # noqa: E402
from .statevector import AngleSchedule  # noqa: E402
