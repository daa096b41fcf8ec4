"""Graphviz rendering of a composition.

Data nodes are small circles colored by marking (Void white, Old green,
New blue); operators are full-size labeled circles.
"""
from __future__ import annotations

from typing import Mapping

from .model import Composition, TokenState

_FILL = {
    TokenState.VOID: "white",
    TokenState.OLD: "green",
    TokenState.NEW: "blue",
}


def to_dot(
    comp: Composition, marking: Mapping[int, TokenState] | None = None
) -> str:
    lines = ["digraph composition {", "  rankdir=LR;"]
    for node in comp.data:
        fill = _FILL[marking[node.index]] if marking else "white"
        lines.append(
            f'  "d:{node.name}" [label="{node.name}", shape=circle, width=0.2,'
            f" fixedsize=true, style=filled, fillcolor={fill}];"
        )
    for op in comp.operators:
        label = f"{op.name}\\n{op.process_name}" if op.process_name else op.name
        lines.append(f'  "op:{op.name}" [label="{label}", shape=circle];')
    for op in comp.operators:
        for d in op.inputs:
            lines.append(f'  "d:{comp.data[d].name}" -> "op:{op.name}";')
        for d in op.outputs:
            lines.append(f'  "op:{op.name}" -> "d:{comp.data[d].name}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
