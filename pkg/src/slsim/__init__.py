"""Agent-based simulation of uncertain opinions spreading over social graphs."""

from .evidence import (
    EvidenceClass,
    EvidenceMatrix,
    PerceivedCounts,
    build_matrix,
    map_evidence,
    perceived_opinion,
)
from .network import Graph, GraphStats, compute_stats, generate_synthetic, parse_edge_list, seed_originators
from .opinion import (
    EvidenceCounts,
    Opinion,
    adjust_base_rate,
    consensus,
    decay,
    discount,
    expectation,
    from_evidence,
    similarity,
)
from .simulation import (
    Agent,
    Population,
    Role,
    RunResult,
    SimConfig,
    Status,
    StepMetrics,
    classify_status,
    init_population,
    run,
    step,
)

__version__ = "0.1.0"
