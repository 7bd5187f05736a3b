"""Deterministic DOT rendering of process models and goal graphs.

Places are circles labeled "Ik: label", fragments are boxes carrying their
strategy, and deficient strategies are drawn dashed.  Goal-graph nodes are
shaped by kind.  Output is a pure function of the input, so two exports of
the same value are byte-identical.
"""

from __future__ import annotations

from .goals import EdgeKind, GoalGraph, NodeKind, Owner
from .net import ProcessModel, Role, id_sort_key

_GOAL_SHAPES = {
    NodeKind.NEED: "ellipse",
    NodeKind.GOAL: "box",
    NodeKind.OBJECTIVE: "hexagon",
    NodeKind.REQUIREMENT: "note",
}


def _dot_quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_process_dot(model: ProcessModel) -> str:
    lines = [f"digraph {_dot_quote(model.name)} {{", "  rankdir=LR;"]
    for place in model.places:
        attrs = [
            "shape=circle",
            f"label={_dot_quote(f'{place.id}: {place.label}')}",
        ]
        if place.role is Role.START:
            attrs.append("penwidth=2")
        elif place.role is Role.EXIT:
            attrs.append("peripheries=2")
        lines.append(f"  {_dot_quote('place:' + place.id)} [{', '.join(attrs)}];")
    for fragment in model.fragments:
        attrs = [
            "shape=box",
            f"label={_dot_quote(fragment.id + chr(10) + fragment.strategy.text)}",
        ]
        if fragment.strategy.deficiency:
            attrs.append("style=dashed")
        lines.append(f"  {_dot_quote('frag:' + fragment.id)} [{', '.join(attrs)}];")
    for fragment in model.fragments:
        for pid in sorted(fragment.sources, key=id_sort_key):
            lines.append(
                f"  {_dot_quote('place:' + pid)} -> {_dot_quote('frag:' + fragment.id)};"
            )
        for pid in sorted(fragment.targets, key=id_sort_key):
            lines.append(
                f"  {_dot_quote('frag:' + fragment.id)} -> {_dot_quote('place:' + pid)};"
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_goals_dot(graph: GoalGraph) -> str:
    lines = ["digraph goals {", "  rankdir=BT;"]
    for node in graph.nodes:
        attrs = [
            f"shape={_GOAL_SHAPES[node.kind]}",
            f"label={_dot_quote(f'{node.id}: {node.label}')}",
        ]
        styles = []
        if node.owner is Owner.ERP:
            styles.append("filled")
            attrs.append("fillcolor=lightgrey")
        if node.change:
            styles.append("dashed")
        if styles:
            attrs.append(f"style={_dot_quote(','.join(styles))}")
        lines.append(f"  {_dot_quote('node:' + node.id)} [{', '.join(attrs)}];")

    refs = sorted(
        {str(e.realises) for e in graph.edges if e.kind is EdgeKind.REALISED_BY and e.realises}
    )
    for ref in refs:
        lines.append(
            f"  {_dot_quote('ref:' + ref)} [shape=component, label={_dot_quote(ref)}];"
        )
    for edge in graph.edges:
        if edge.kind is EdgeKind.REALISED_BY:
            if edge.realises is None:
                continue
            src = _dot_quote("node:" + edge.src)
            dst = _dot_quote("ref:" + str(edge.realises))
            label = "realisedby"
        else:
            src = _dot_quote("node:" + edge.src)
            dst = _dot_quote("node:" + edge.dst)
            label = edge.kind.value
            if edge.kind is EdgeKind.DETERMINED_BY:
                label = f"determinedby {edge.stakeholder}"
        lines.append(f"  {src} -> {dst} [label={_dot_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(value: ProcessModel | GoalGraph) -> str:
    """Render either artifact kind; dispatches on the value's type."""
    if isinstance(value, ProcessModel):
        return export_process_dot(value)
    if isinstance(value, GoalGraph):
        return export_goals_dot(value)
    raise TypeError(f"cannot export {type(value).__name__} to DOT")
