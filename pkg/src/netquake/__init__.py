"""netquake: attack-robustness estimation for large undirected networks."""

from .attack import (
    AttackSequence,
    RobustnessCurve,
    StrategySpec,
    compute_R,
    evaluate_samples,
    interactive_attack,
    materialize_step,
    merge_min,
    metric_scores,
    run_strategy,
    static_attack,
)
from .centrality import (
    PivotSample,
    betweenness_approx,
    betweenness_exact,
    collective_influence,
    degree_scores,
    draw_pivots,
    literal_budget,
    pagerank_scores,
    rank_descending,
    scaled_budget,
)
from .graph import (
    ComponentSummary,
    Graph,
    GraphFormatError,
    RemovalState,
    components_summary,
    gc_fraction,
    load_edge_list,
    load_gml,
    sq_curve_full,
    write_edge_list,
)
from .netgen import generate_ba, generate_er
from .qre import (
    QreParams,
    QreState,
    equi_depth_boundaries,
    equi_length_positions,
    qre_estimate,
    stage1_degree_shaping,
    stage2_iteration,
)

__version__ = "0.1.0"

__all__ = [
    "AttackSequence",
    "ComponentSummary",
    "Graph",
    "GraphFormatError",
    "PivotSample",
    "QreParams",
    "QreState",
    "RemovalState",
    "RobustnessCurve",
    "StrategySpec",
    "betweenness_approx",
    "betweenness_exact",
    "collective_influence",
    "components_summary",
    "compute_R",
    "degree_scores",
    "draw_pivots",
    "equi_depth_boundaries",
    "equi_length_positions",
    "evaluate_samples",
    "gc_fraction",
    "generate_ba",
    "generate_er",
    "interactive_attack",
    "literal_budget",
    "load_edge_list",
    "load_gml",
    "materialize_step",
    "merge_min",
    "metric_scores",
    "pagerank_scores",
    "qre_estimate",
    "rank_descending",
    "run_strategy",
    "scaled_budget",
    "sq_curve_full",
    "stage1_degree_shaping",
    "stage2_iteration",
    "static_attack",
    "write_edge_list",
    "__version__",
]
