"""Deterministic dataflow execution driven by token markings.

Compositions wire operators to data nodes; tokens on the nodes gate which
operators may fire. A sequential processor fires one operator per step with
a rotating scan; a concurrent processor overlaps operators with disjoint
neighborhoods over virtual time. Both produce identical final states.
"""
from .concurrent import (
    ScheduleEntry,
    schedule_tsv,
    simulate_concurrent,
    startable_set,
)
from .dot import to_dot
from .dsl import (
    CompositionDocument,
    emit_composition,
    format_value,
    parse_composition,
    serialize_trace,
)
from .errors import (
    ArityMismatch,
    DuplicateName,
    FlowError,
    InputOutputOverlap,
    NoNewToken,
    NotEnabled,
    OutputArityMismatch,
    ParseError,
    TypeMismatch,
    UnknownDataReference,
    UnknownKind,
    UnknownProcess,
    ValidationError,
    ValueMissingForToken,
)
from .model import (
    BipartiteGraph,
    Composition,
    DataNode,
    ExecutionState,
    OperatorSpec,
    TokenState,
    Value,
    as_bipartite_graph,
    build_composition,
    initial_state,
    neighborhood,
)
from .patterns import PatternInstance, build_ifelse_pattern, build_loop_pattern
from .semantics import (
    FiringOutcome,
    ProcessRegistry,
    TraceEvent,
    apply_user_process,
    can_fire,
    const,
    default_registry,
    eval_ifelse,
    eval_increment,
    eval_less_than,
    eval_merge,
    eval_sync,
    fire,
    update_general,
)
from .sequential import (
    RunLimits,
    RunResult,
    enabled_set,
    run_to_convergence,
    select_next,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "ArityMismatch",
    "BipartiteGraph",
    "Composition",
    "CompositionDocument",
    "DataNode",
    "DuplicateName",
    "ExecutionState",
    "FiringOutcome",
    "FlowError",
    "InputOutputOverlap",
    "NoNewToken",
    "NotEnabled",
    "OperatorSpec",
    "OutputArityMismatch",
    "ParseError",
    "PatternInstance",
    "ProcessRegistry",
    "RunLimits",
    "RunResult",
    "ScheduleEntry",
    "TokenState",
    "TraceEvent",
    "TypeMismatch",
    "UnknownDataReference",
    "UnknownKind",
    "UnknownProcess",
    "ValidationError",
    "Value",
    "ValueMissingForToken",
    "apply_user_process",
    "as_bipartite_graph",
    "build_composition",
    "build_ifelse_pattern",
    "build_loop_pattern",
    "can_fire",
    "const",
    "default_registry",
    "emit_composition",
    "enabled_set",
    "eval_ifelse",
    "eval_increment",
    "eval_less_than",
    "eval_merge",
    "eval_sync",
    "fire",
    "format_value",
    "initial_state",
    "neighborhood",
    "parse_composition",
    "run_to_convergence",
    "schedule_tsv",
    "select_next",
    "serialize_trace",
    "simulate_concurrent",
    "startable_set",
    "step",
    "to_dot",
    "update_general",
]
