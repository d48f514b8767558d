"""Triangular 4.8.8 colour-code decoding and threshold estimation."""

__version__ = "0.1.0"

from .lattice import CodeLattice, CodeParams, Plaquette, build_lattice, validate
from .noise import (
    Collator,
    DetectionEvents,
    ErrorModel,
    PauliFrame,
    SyndromeHistory,
    apply_memory_noise,
    detection_events,
    extract_circuit,
    extract_ideal,
)
from .syndrome_graph import SyndromeHypergraph, build_hypergraph, min_chain
from .matcher import (
    MatchOutcome,
    assign_pairs,
    build_mimic,
    collapse_to_trial,
    decode_match,
    exact_hypermatch,
    exact_min_error_decode,
)
from .decoder import (
    Correction,
    LogicalOperatorBasis,
    is_codeword,
    is_logical_failure,
    matching_to_correction,
)
from .montecarlo import (
    SimConfig,
    SimResult,
    estimate_rk,
    logical_rate_polynomial,
    run_instance,
    sweep,
    unencoded_lifetime,
)
from .combinatorics import (
    asymptotic_threshold,
    bound_AdFk,
    bound_Nd,
    bound_pL,
    count_AdF,
    enumerate_logical_operators,
    gradient_check,
)
