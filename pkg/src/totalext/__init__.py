"""Total-coloring extension on embedded planar graphs.

Decide and construct extensions of precolored subgraphs, run the
constructive bipartite pipeline, generate and verify the sharpness
constructions, and audit the three discharging schemes with exact
arithmetic.
"""

from .coloring import (
    GreedyFailure,
    ListAssignment,
    PartialTotalColoring,
    Verdict,
    Violation,
    check_total_coloring,
    derive_lists,
    greedy_extend,
    parse_precoloring,
    serialize_precoloring,
)
from .constructions import (
    EXAMPLE_IDS,
    NamedExample,
    SharpnessReport,
    gen_example,
    verify_sharpness,
)
from .discharging import (
    AuditReport,
    ChargeLedger,
    ConfigReport,
    HelpfulFaceReport,
    InstanceParams,
    NeedyReport,
    PredicateResult,
    Transfer,
    apply_scheme,
    audit,
    configurations,
    helpful_faces,
    initial_charges,
    needy_faces,
    replay_transfers,
    tilde_face_counts,
)
from .embedding import (
    DegreeClassification,
    Face,
    PlanarEmbedding,
    PrecoloredShape,
    Subgraph,
    analyze_precolored_shape,
    canonical_edge,
    classify_degrees,
    pairwise_distance,
    parse_embedding,
    serialize_embedding,
)
from .solver import (
    CycleImpossibility,
    SolveOutcome,
    SolveStatus,
    bipartite_extension,
    bipartite_list_edge_color,
    bipartite_list_edge_color_exhaustive,
    bipartite_total_pipeline,
    color_even_cycle_from_2_lists,
    extend_exact,
    list_total_color_exact,
    planar_bipartite_vertex_3list,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
