"""Shared builders, oracles, and hypothesis strategies for the test suite."""
from __future__ import annotations

from pathlib import Path

import hypothesis.strategies as st

from tokenflow import (
    Composition,
    ExecutionState,
    PatternInstance,
    RunLimits,
    RunResult,
    TokenState,
    build_composition,
    build_ifelse_pattern,
    build_loop_pattern,
    default_registry,
    initial_state,
    run_to_convergence,
)

REPO = Path(__file__).resolve().parent.parent
FLOWS = REPO / "flows"

V, O, N = TokenState.VOID, TokenState.OLD, TokenState.NEW

# (number, verdict, description) tuples collected by the acceptance tests.
ACCEPTANCE_VERDICTS: list[tuple[int, str, str]] = []


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion, past any capture."""
    if not ACCEPTANCE_VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, verdict, description in sorted(ACCEPTANCE_VERDICTS):
        terminalreporter.write_line(
            f"criterion {number}: {verdict} ({description})"
        )


def state_of(comp: Composition, marks: dict, values: dict) -> ExecutionState:
    """initial_state with data names instead of indices."""
    to_idx = {n.name: n.index for n in comp.data}
    return initial_state(
        comp,
        {to_idx[k]: v for k, v in marks.items()},
        {to_idx[k]: v for k, v in values.items()},
    )


def branch_structure(op2_reads: str = "d2") -> Composition:
    """The 7-node branch wiring with plain operators (no special kinds).

    op2_reads selects what the second process reads; the published structural
    example has it sharing d2 with op1.
    """
    return build_composition(
        ["d0", "d1", "d2", "d3", "d4", "d5", "d6"],
        [
            ("op0", "process", ("d0", "d1"), ("d2", "d3"), "identity"),
            ("op1", "process", ("d2",), ("d4",), "add1"),
            ("op2", "process", (op2_reads,), ("d5",), "add1"),
            ("op3", "process", ("d4", "d5"), ("d6",), "add"),
        ],
    )


def stalled_marks() -> tuple[dict, dict]:
    """Marking where the branch structure has nothing enabled."""
    marks = {"d0": O, "d1": O, "d2": O, "d3": V, "d4": N, "d5": V, "d6": V}
    values = {"d0": True, "d1": 5.0, "d2": 5.0, "d4": 6.0}
    return marks, values


def loop_state(pattern: PatternInstance, bound: float, seed) -> ExecutionState:
    """Seed the counted-loop pattern: bound on d0, seed value on d3."""
    return state_of(
        pattern.composition,
        {"d0": N, "d3": N},
        {"d0": float(bound), "d3": seed},
    )


def run_loop(
    bound: float,
    seed,
    process: str = "add1",
    registry=None,
    max_steps: int = 100_000,
) -> tuple[PatternInstance, RunResult]:
    pattern = build_loop_pattern(process)
    result = run_to_convergence(
        pattern.composition,
        loop_state(pattern, bound, seed),
        registry or default_registry(),
        RunLimits(max_steps),
    )
    return pattern, result


def branch_state(pattern: PatternInstance, condition: bool, value) -> ExecutionState:
    """Seed the branch pattern: condition on d0, routed value on d1."""
    return state_of(
        pattern.composition, {"d0": N, "d1": N}, {"d0": condition, "d1": value}
    )


def run_branch(
    condition: bool, value, p1: str = "add1", p2: str = "identity"
) -> tuple[PatternInstance, RunResult]:
    pattern = build_ifelse_pattern(p1, p2)
    result = run_to_convergence(
        pattern.composition,
        branch_state(pattern, condition, value),
        default_registry(),
    )
    return pattern, result


def loop_oracle(bound: float, seed, fn) -> tuple[object, int]:
    """Imperative reference: v = seed; for (i = 1; i < bound; i++) v = fn(v)."""
    v, i, count = seed, 1.0, 0
    while i < bound:
        v = fn(v)
        i += 1.0
        count += 1
    return v, count


_KIND_SHAPES = {
    "incr": (0, 1),
    "merge": (2, 1),
    "lt": (2, 1),
    "ifelse": (2, 2),
    "sync": (2, 2),
}


@st.composite
def small_compositions(draw, max_data: int = 6, max_ops: int = 4) -> Composition:
    """Random valid compositions within the small-structure envelope."""
    n_data = draw(st.integers(min_value=1, max_value=max_data))
    names = [f"d{i}" for i in range(n_data)]
    n_ops = draw(st.integers(min_value=1, max_value=max_ops))
    decls = []
    for k in range(n_ops):
        allowed = ["incr", "process"]
        if n_data >= 3:
            allowed += ["merge", "lt"]
        if n_data >= 4:
            allowed += ["ifelse", "sync"]
        kind = draw(st.sampled_from(allowed))
        if kind == "process":
            n_in = draw(st.integers(min_value=0, max_value=min(2, n_data - 1)))
            n_out = 1
        else:
            n_in, n_out = _KIND_SHAPES[kind]
        picks = draw(st.permutations(range(n_data)))
        ins = tuple(names[i] for i in picks[:n_in])
        outs = tuple(names[i] for i in picks[n_in : n_in + n_out])
        decl = (f"op{k}", kind, ins, outs)
        if kind == "process":
            decl += ("add",)
        decls.append(decl)
    return build_composition(names, decls)


# Text payloads avoid characters str.splitlines treats as line breaks, so
# documents carrying them stay line-oriented.
_TEXT = st.text(
    alphabet=st.characters(
        blacklist_categories=("Cs",),
        blacklist_characters="\x85  ",
    ),
    max_size=6,
)


@st.composite
def marked_states(draw, comp: Composition, with_text: bool = False):
    """A valid state for comp: random markings, numbers everywhere except
    data feeding an if/else condition port, which gets booleans."""
    cond_ports = {
        op.inputs[1] for op in comp.operators if op.kind == "ifelse"
    }
    marks, values = {}, {}
    for node in comp.data:
        mark = draw(st.sampled_from([V, O, N]))
        marks[node.index] = mark
        if mark != V:
            if node.index in cond_ports:
                values[node.index] = draw(st.booleans())
            elif with_text and draw(st.booleans()):
                values[node.index] = draw(_TEXT)
            else:
                values[node.index] = float(draw(st.integers(-50, 50)))
    return initial_state(comp, marks, values)
