"""Sequential processor: fire one operator at a time until nothing is enabled.

Selection is a rotating scan. The scheduler walks the operators in
declaration order starting just past the previously fired one, wrapping
around, and fires the first enabled operator it meets. The scan position
lives in ExecutionState.scan_start, so runs are a pure function of the
initial state. On a fresh state the scan starts at declaration index 0,
which makes simultaneously enabled operators resolve to the lowest index.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .model import Composition, ExecutionState
from .semantics import ProcessRegistry, TraceEvent, can_fire, fire


@dataclass(frozen=True)
class RunLimits:
    """Safety valve for non-terminating compositions."""

    max_steps: int = 100_000

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


@dataclass
class RunResult:
    final_state: ExecutionState
    trace: list[TraceEvent] = field(default_factory=list)
    converged: bool = True

    @property
    def steps_taken(self) -> int:
        return len(self.trace)


def enabled_set(comp: Composition, state: ExecutionState) -> list[int]:
    """Indices of every enabled operator, in declaration order."""
    return [
        op.index for op in comp.operators if can_fire(comp, op, state.marking)
    ]


def select_next(comp: Composition, state: ExecutionState) -> int | None:
    """Operator the scheduler will fire next, or None at convergence."""
    n = len(comp.operators)
    for offset in range(n):
        idx = (state.scan_start + offset) % n
        if can_fire(comp, comp.operators[idx], state.marking):
            return idx
    return None


def step(
    comp: Composition, state: ExecutionState, registry: ProcessRegistry
) -> tuple[ExecutionState, TraceEvent] | None:
    """Fire the scheduler's choice once. None when nothing is enabled."""
    choice = select_next(comp, state)
    if choice is None:
        return None
    return fire(comp, choice, state, registry)


def run_to_convergence(
    comp: Composition,
    initial: ExecutionState,
    registry: ProcessRegistry,
    limits: RunLimits = RunLimits(),
) -> RunResult:
    """Run until no operator is enabled or the step limit is hit.

    Hitting the limit is not an error: the result carries the partial trace
    with converged=False.
    """
    state = initial
    trace: list[TraceEvent] = []
    while True:
        outcome = step(comp, state, registry)
        if outcome is None:
            return RunResult(state, trace, converged=True)
        state, event = outcome
        trace.append(event)
        if len(trace) >= limits.max_steps and select_next(comp, state) is not None:
            return RunResult(state, trace, converged=False)
