"""Anonymous-network graph algorithms with a constant signal alphabet.

A leader-rooted BFS tree, a twice-visiting token walk that numbers the
vertices, anonymous waves timed by those numbers, and unary convergecasts
together compute all-pairs distances, diameter, girth, cut-edges and
cut-vertices in O(n) synchronous rounds.
"""

from ._jit import JIT_ENABLED
from .bfs import TreeView, run_bfs
from .engine import Metrics, Protocol, RoundEngine, Trace, run_protocol
from .errors import (
    ArrivalOutsideWindow,
    ChannelOverflow,
    EndpointDisagreement,
    FramingViolation,
    ParityViolation,
    ProtocolViolation,
    RoundBudgetExceeded,
    ScheduleInfeasible,
    WaveCountMismatch,
)
from .graph import (
    Graph,
    GraphError,
    PortMap,
    assign_ports,
    build_graph,
    generate,
    parse_edge_list,
    parse_generator_spec,
    read_graph,
)
from .network import Network, Phase, Phases
from .numbering import number_from_counts, run_enumeration, trav_next
from .oracles import (
    check_cube_path,
    oracle_apsp,
    oracle_cuts,
    oracle_girth,
    oracle_report,
    reference_trav,
)
from .pipeline import PipelineResult, run_pipeline
from .signals import Signal
from .unary import run_dist_cal, unary_broadcast, unary_max_convergecast
from .waves import (
    cut_edge_flags,
    cut_vertex_partition,
    detect_cycle_length,
    finalize_distances,
    girth_pipeline,
    run_waves,
    start_schedule,
)

__all__ = [
    "JIT_ENABLED",
    "ArrivalOutsideWindow",
    "ChannelOverflow",
    "EndpointDisagreement",
    "FramingViolation",
    "Graph",
    "GraphError",
    "Metrics",
    "Network",
    "ParityViolation",
    "Phase",
    "Phases",
    "PipelineResult",
    "PortMap",
    "Protocol",
    "ProtocolViolation",
    "RoundBudgetExceeded",
    "RoundEngine",
    "ScheduleInfeasible",
    "Signal",
    "Trace",
    "TreeView",
    "WaveCountMismatch",
    "assign_ports",
    "build_graph",
    "check_cube_path",
    "cut_edge_flags",
    "cut_vertex_partition",
    "detect_cycle_length",
    "finalize_distances",
    "generate",
    "girth_pipeline",
    "number_from_counts",
    "oracle_apsp",
    "oracle_cuts",
    "oracle_girth",
    "oracle_report",
    "parse_edge_list",
    "parse_generator_spec",
    "read_graph",
    "reference_trav",
    "run_bfs",
    "run_dist_cal",
    "run_enumeration",
    "run_pipeline",
    "run_protocol",
    "run_waves",
    "start_schedule",
    "trav_next",
    "unary_broadcast",
    "unary_max_convergecast",
]
