"""Dimer configurations, alternating-cycle flips and their state spaces on boxes."""
from __future__ import annotations

from .canonical import (
    AlternatingReachability,
    FlipSequence,
    apply_flip_sequence,
    canonicalize,
    canonicalize_hypercube,
    canonicalize_triangular,
    hypercube_canonical_config,
    triangular_canonical_config,
)
from .cycles import (
    VertexClassification,
    classify_vertices,
    count_authorised,
    cycle_near_authorised,
    dense_unit_cube,
    disjoint_flip_packing,
    enumerate_alternating_cycles,
)
from .dynamics import (
    ChainState,
    ProposalTable,
    build_proposals,
    glauber_step,
    run_chain,
    transition_matrix,
    tv_to_uniform,
)
from .errors import (
    CanonicalizationError,
    CapExceeded,
    ConfigError,
    CycleError,
    DimerError,
    LatticeError,
)
from .invariants import (
    Colour,
    HarperDecomposition,
    boundary_oracle,
    colour,
    diameter_lower_bound,
    even_boundary_oracle,
    expansion_sequences,
    harper_decomposition,
    harper_phi,
    pyramid,
    red_count,
)
from .lattice import Lattice, build_custom, build_hypercubic, build_triangular
from .matching import (
    AlternatingCycle,
    DimerConfig,
    ValidationReport,
    canonical_key,
    config_from_json,
    config_to_json,
    is_alternating,
    switch,
    validate,
)
from .statespace import (
    ConfigGraph,
    build_flip_graph,
    components,
    diameter,
    enumerate_matchings,
    isolated_vertices,
    min_degree,
)

__version__ = "0.1.0"
