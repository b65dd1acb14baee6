"""SAT-based reversible pebbling for quantum memory management."""

from .encode import CnfInstance, Mode, build_cnf, emit_cardinality, to_dimacs
from .graph import Dag, DagError, Node, gen_and_tree, gen_random_dag, parse_dag, render_dag, topological_order
from .schedule import Schedule, emit_schedule, memory_profile, op_counts
from .search import SearchOutcome, SearchStatus, lower_bound_steps, min_pebbles, min_steps
from .solve import SolveResult, Status, solve_embedded, solve_external
from .strategy import Move, PebblingStrategy, bennett, decode_model, oracle_min_steps, to_moves, validate

__all__ = [
    "CnfInstance",
    "Dag",
    "DagError",
    "Mode",
    "Move",
    "Node",
    "PebblingStrategy",
    "Schedule",
    "SearchOutcome",
    "SearchStatus",
    "SolveResult",
    "Status",
    "bennett",
    "build_cnf",
    "decode_model",
    "emit_schedule",
    "emit_cardinality",
    "gen_and_tree",
    "gen_random_dag",
    "lower_bound_steps",
    "memory_profile",
    "min_pebbles",
    "min_steps",
    "op_counts",
    "oracle_min_steps",
    "parse_dag",
    "render_dag",
    "solve_embedded",
    "solve_external",
    "to_dimacs",
    "to_moves",
    "topological_order",
    "validate",
]
