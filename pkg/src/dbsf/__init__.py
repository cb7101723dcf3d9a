"""Online degree-bounded Steiner forest: greedy, exact oracle, dual certificates, adversaries."""

from .graph import (
    UNBOUNDED,
    Graph,
    Instance,
    UnionFind,
    as_bound,
    connected_components,
    format_rational,
    load,
    parse_rational,
    uptick,
)
from .greedy import (
    ExtensionPath,
    ForestState,
    GaTranscript,
    NoPath,
    attach_dummy_terminals,
    find_min_uptick_path,
    replay,
    run_ga,
    serve_demand,
)
from .oracle import CapExceeded, Infeasible, OfflineSolution, brute_force_opt, brute_force_weighted_opt
from .certify import (
    DualCertificate,
    LemmaViolation,
    BoundViolation,
    EmptyCut,
    DegenerateRange,
    build_dual_certificate,
    certified_lower_bound,
    check_excess_bound,
    check_ratio_bound,
    check_separation,
    find_witness_interval,
    verify_dual_certificate,
)
from .generate import generate_random
from .formats import ParseError, format_instance, format_transcript, parse_instance, parse_transcript
from .harness import check_transcript, evaluate_instance
from .algorithms import OnlineSteinerAlgorithm, GreedyOnline, LowestIdGreedy
from .adversaries import (
    AdversaryTranscript,
    build_tree_lb_instance,
    build_weighted_gadget,
    run_group_star_adversary,
    run_tree_adversary,
    run_weighted_adversary,
)

__version__ = "0.1.0"
