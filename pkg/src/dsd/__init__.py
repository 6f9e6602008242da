"""Parallel densest-subgraph discovery: batch peeling, core-based
augmentation, and exact oracles."""

from .augment import AugmentResult, GainTerms, augment, cross_edges, density_gain, filter_legit, find_eligible
from .coredec import CoreDecomposition, LevelRecord, core_members, decompose
from .errors import (
    DSDError,
    EmptyGraphError,
    EmptySubgraphError,
    GraphSizeError,
    InvariantError,
    ParseError,
)
from .exact import ExactResult, FlowNetwork, brute_force_densest, flow_exact_densest, max_flow
from .graph import (
    DensityValue,
    Graph,
    density,
    induced_density,
    induced_edge_count,
    load_edge_list,
    parse_edge_list,
    write_edge_list,
)
from .peel import PeelConfig, PeelResult, peel_densest, threshold

__version__ = "0.1.0"
