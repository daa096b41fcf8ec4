"""Core composition model.

A composition is a bipartite structure: data nodes that hold a value and a
token, and operators wired to read some data nodes and write others. All
structural types are immutable once built; the mutable part of an execution
lives in ExecutionState.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Mapping, Sequence

from .errors import (
    ArityMismatch,
    DuplicateName,
    InputOutputOverlap,
    TypeMismatch,
    UnknownDataReference,
    ValidationError,
    ValueMissingForToken,
)


class TokenState(IntEnum):
    """Marking of a single data node.

    The numeric codes are meaningful: a data node carries a token iff its
    marking is greater than VOID, and only NEW tokens trigger firings.
    """

    VOID = 0
    OLD = 1
    NEW = 2

    @property
    def code(self) -> str:
        return _CODES[self]


_CODES = {TokenState.VOID: "V", TokenState.OLD: "O", TokenState.NEW: "N"}

# Values carried by data nodes: booleans, binary64 numbers, text.
# None stands for "no value" (a node that never held a token).
Value = bool | float | str | None

SORTS = ("bool", "num", "text", "any")

KIND_PROCESS = "process"
KIND_IFELSE = "ifelse"
KIND_MERGE = "merge"
KIND_SYNC = "sync"
KIND_INCR = "incr"
KIND_LT = "lt"

# kind -> (input arity, output arity); None means any count (process outputs
# still need at least one, checked in build_composition).
KIND_ARITIES = {
    KIND_PROCESS: (None, None),
    KIND_IFELSE: (2, 2),
    KIND_MERGE: (2, 1),
    KIND_SYNC: (2, 2),
    KIND_INCR: (0, 1),
    KIND_LT: (2, 1),
}


def value_sort(value: Value) -> str | None:
    """Sort tag of a value, or None for the absent value."""
    if value is None:
        return None
    if isinstance(value, bool):
        return "bool"
    if isinstance(value, float):
        return "num"
    if isinstance(value, str):
        return "text"
    raise TypeMismatch(f"unsupported value type {type(value).__name__!r}")


def coerce_value(value) -> Value:
    """Normalize a value for storage; plain ints become binary64 numbers."""
    if isinstance(value, bool) or value is None or isinstance(value, (float, str)):
        return value
    if isinstance(value, int):
        return float(value)
    raise TypeMismatch(f"unsupported value type {type(value).__name__!r}")


def check_sort(node: "DataNode", value: Value) -> None:
    if node.sort == "any" or value is None:
        return
    actual = value_sort(value)
    if actual != node.sort:
        raise TypeMismatch(
            f"data {node.name!r} is declared {node.sort} but got a {actual} value"
        )


@dataclass(frozen=True)
class DataNode:
    index: int
    name: str
    sort: str = "any"


@dataclass(frozen=True)
class OperatorSpec:
    index: int
    name: str
    kind: str
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    process_name: str | None = None


@dataclass(frozen=True)
class Composition:
    data: tuple[DataNode, ...]
    operators: tuple[OperatorSpec, ...]

    def data_named(self, name: str) -> DataNode:
        for node in self.data:
            if node.name == name:
                return node
        raise UnknownDataReference(f"no data node named {name!r}")

    def operator_named(self, name: str) -> OperatorSpec:
        for op in self.operators:
            if op.name == name:
                return op
        raise UnknownDataReference(f"no operator named {name!r}")


def build_composition(data_decls: Iterable, op_decls: Iterable) -> Composition:
    """Validate declarations and assemble a Composition.

    data_decls: names, or (name, sort) pairs.
    op_decls: (name, kind, input_names, output_names[, process_name]) tuples.
    Declaration order is preserved and defines the operator scan order.
    """
    nodes: list[DataNode] = []
    by_name: dict[str, int] = {}
    for decl in data_decls:
        if isinstance(decl, str):
            name, sort = decl, "any"
        else:
            name, sort = (decl[0], "any") if len(decl) == 1 else (decl[0], decl[1])
        if sort not in SORTS:
            raise ValidationError(f"data {name!r}: unknown sort {sort!r}")
        if name in by_name:
            raise DuplicateName(f"data name {name!r} declared twice")
        by_name[name] = len(nodes)
        nodes.append(DataNode(len(nodes), name, sort))

    ops: list[OperatorSpec] = []
    op_names: set[str] = set()
    for decl in op_decls:
        name, kind, in_names, out_names = decl[0], decl[1], decl[2], decl[3]
        process_name = decl[4] if len(decl) > 4 else None
        if name in op_names:
            raise DuplicateName(f"operator name {name!r} declared twice")
        op_names.add(name)
        if kind not in KIND_ARITIES:
            raise ValidationError(f"operator {name!r}: unknown kind {kind!r}")
        if kind == KIND_PROCESS:
            if not process_name:
                raise ValidationError(
                    f"operator {name!r}: process operators need a process name"
                )
        elif process_name:
            raise ValidationError(
                f"operator {name!r}: kind {kind!r} does not take a process name"
            )

        def resolve(names: Sequence[str], role: str) -> tuple[int, ...]:
            out = []
            for ref in names:
                if ref not in by_name:
                    raise UnknownDataReference(
                        f"operator {name!r} {role} references unknown data {ref!r}"
                    )
                out.append(by_name[ref])
            return tuple(out)

        inputs = resolve(in_names, "input")
        outputs = resolve(out_names, "output")
        want_in, want_out = KIND_ARITIES[kind]
        if want_in is not None and len(inputs) != want_in:
            raise ArityMismatch(
                f"operator {name!r}: kind {kind!r} takes {want_in} inputs, got {len(inputs)}"
            )
        if want_out is not None and len(outputs) != want_out:
            raise ArityMismatch(
                f"operator {name!r}: kind {kind!r} writes {want_out} outputs, got {len(outputs)}"
            )
        if not outputs:
            raise ArityMismatch(f"operator {name!r}: needs at least one output")
        if len(set(outputs)) != len(outputs):
            raise ValidationError(f"operator {name!r}: duplicate output data node")
        overlap = set(inputs) & set(outputs)
        if overlap:
            names = ", ".join(nodes[i].name for i in sorted(overlap))
            raise InputOutputOverlap(
                f"operator {name!r} reads and writes the same data: {names}"
            )
        ops.append(OperatorSpec(len(ops), name, kind, inputs, outputs, process_name))

    return Composition(tuple(nodes), tuple(ops))


def neighborhood(comp: Composition, op: OperatorSpec | int) -> frozenset[int]:
    """All data indices an operator touches: inputs plus outputs."""
    spec = comp.operators[op] if isinstance(op, int) else op
    return frozenset(spec.inputs) | frozenset(spec.outputs)


@dataclass(frozen=True)
class BipartiteGraph:
    """Composition viewed as a directed bipartite graph.

    Vertices are ("data", index) and ("op", index) pairs; arcs run data->op
    for reads and op->data for writes.
    """

    data_vertices: tuple[tuple[str, int], ...]
    operator_vertices: tuple[tuple[str, int], ...]
    arcs: tuple[tuple[tuple[str, int], tuple[str, int]], ...]


def as_bipartite_graph(comp: Composition) -> BipartiteGraph:
    data_vs = tuple(("data", n.index) for n in comp.data)
    op_vs = tuple(("op", o.index) for o in comp.operators)
    arcs: list[tuple[tuple[str, int], tuple[str, int]]] = []
    for op in comp.operators:
        for d in op.inputs:
            arcs.append((("data", d), ("op", op.index)))
    for op in comp.operators:
        for d in op.outputs:
            arcs.append((("op", op.index), ("data", d)))
    return BipartiteGraph(data_vs, op_vs, tuple(arcs))


@dataclass
class ExecutionState:
    """Mutable execution snapshot: markings, values, firing counters.

    enabled_since maps operator index -> step at which the operator most
    recently went from disabled to enabled; presence in the map means the
    operator is currently enabled. scan_start is the declaration index at
    which the sequential scheduler begins its next scan.
    """

    marking: dict[int, TokenState]
    values: dict[int, Value]
    exec_counts: dict[int, int]
    enabled_since: dict[int, int] = field(default_factory=dict)
    step: int = 0
    scan_start: int = 0

    def copy(self) -> "ExecutionState":
        return ExecutionState(
            dict(self.marking),
            dict(self.values),
            dict(self.exec_counts),
            dict(self.enabled_since),
            self.step,
            self.scan_start,
        )


def initial_state(
    comp: Composition,
    markings: Mapping[int, TokenState] | None = None,
    values: Mapping[int, Value] | None = None,
) -> ExecutionState:
    """Build the step-0 state. Unlisted data nodes start Void with no value.

    Every tokened node needs a value of its declared sort; putting a value on
    a Void node is rejected.
    """
    markings = dict(markings or {})
    values = dict(values or {})
    n = len(comp.data)
    for idx in list(markings) + list(values):
        if not (0 <= idx < n):
            raise UnknownDataReference(f"no data node with index {idx}")

    marking = {node.index: TokenState.VOID for node in comp.data}
    vals: dict[int, Value] = {node.index: None for node in comp.data}
    for idx, mark in markings.items():
        marking[idx] = TokenState(mark)
    for idx, value in values.items():
        node = comp.data[idx]
        value = coerce_value(value)
        if marking[idx] == TokenState.VOID:
            if value is not None:
                raise ValidationError(
                    f"data {node.name!r} is Void and cannot carry a value"
                )
            continue
        check_sort(node, value)
        vals[idx] = value
    for idx, mark in marking.items():
        if mark != TokenState.VOID and vals[idx] is None:
            raise ValueMissingForToken(
                f"data {comp.data[idx].name!r} holds a token but no value"
            )

    state = ExecutionState(marking, vals, {op.index: 0 for op in comp.operators})
    from .semantics import refresh_enabled  # deferred, semantics imports this module

    refresh_enabled(comp, state)
    return state
