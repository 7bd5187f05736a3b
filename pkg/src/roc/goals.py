"""Goal graphs: needs, goals, objectives, requirements and their typed edges.

The graph traces intent from high-level organisational needs down to the
process fragments that realise them.  Decomposition edges point from the
part to the whole (child -> parent), derivation edges from the derived node
to its origin, and support edges from the ERP side to the enterprise side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .errors import UnknownNodeError, Violation
from .net import ProcessModel, id_sort_key


class NodeKind(str, Enum):
    NEED = "need"
    GOAL = "goal"
    OBJECTIVE = "objective"
    REQUIREMENT = "requirement"


class Level(str, Enum):
    STRATEGIC = "strategic"
    OPERATIONAL = "operational"
    UNSPECIFIED = "unspecified"


class Owner(str, Enum):
    ENTERPRISE = "enterprise"
    ERP = "erp"


class EdgeKind(str, Enum):
    DERIVES = "derives"
    DECOMPOSES_AND = "decomposes-and"
    DECOMPOSES_OR = "decomposes-or"
    SUPPORTS = "supports"
    DETERMINED_BY = "determinedby"
    REALISED_BY = "realisedby"


DECOMPOSES = (EdgeKind.DECOMPOSES_AND, EdgeKind.DECOMPOSES_OR)

# (src kind, dst kind) pairs a derives edge may connect
_DERIVES_TABLE = {
    (NodeKind.GOAL, NodeKind.NEED),
    (NodeKind.OBJECTIVE, NodeKind.NEED),
    (NodeKind.REQUIREMENT, NodeKind.OBJECTIVE),
}


@dataclass(frozen=True)
class Stakeholder:
    id: str
    name: str
    category: str = ""


@dataclass(frozen=True)
class GoalNode:
    """`change` marks a change goal and is only legal on kind goal."""

    id: str
    label: str
    kind: NodeKind
    level: Level = Level.UNSPECIFIED
    owner: Owner = Owner.ENTERPRISE
    change: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", NodeKind(self.kind))
        object.__setattr__(self, "level", Level(self.level))
        object.__setattr__(self, "owner", Owner(self.owner))


@dataclass(frozen=True)
class Ref:
    """Realisation target: a whole process model, or one fragment of it."""

    model: str
    fragment: str | None = None

    def __str__(self) -> str:
        return self.model if self.fragment is None else f"{self.model}:{self.fragment}"

    @classmethod
    def parse(cls, text: str) -> "Ref":
        model, sep, fragment = text.partition(":")
        return cls(model, fragment if sep else None)


@dataclass(frozen=True)
class GoalEdge:
    """A typed edge; `stakeholder` and `realises` apply to their own kinds."""

    src: str
    kind: EdgeKind
    dst: str = ""
    stakeholder: str = ""
    realises: Ref | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", EdgeKind(self.kind))

    def sort_key(self) -> tuple:
        return (
            id_sort_key(self.src),
            self.kind.value,
            id_sort_key(self.dst),
            self.stakeholder,
            str(self.realises or ""),
        )


@dataclass(frozen=True)
class GoalGraph:
    nodes: tuple[GoalNode, ...]
    edges: tuple[GoalEdge, ...]
    stakeholders: tuple[Stakeholder, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self,
            "nodes",
            tuple(sorted(set(self.nodes), key=lambda n: id_sort_key(n.id))),
        )
        object.__setattr__(
            self,
            "edges",
            tuple(sorted(set(self.edges), key=GoalEdge.sort_key)),
        )
        object.__setattr__(
            self,
            "stakeholders",
            tuple(sorted(set(self.stakeholders), key=lambda s: id_sort_key(s.id))),
        )

    def node_map(self) -> dict[str, GoalNode]:
        return {n.id: n for n in self.nodes}

    def node_ids(self) -> frozenset[str]:
        return frozenset(n.id for n in self.nodes)


@dataclass(frozen=True)
class TraceReport:
    """Simple paths from a node up to its root needs and down to fragments.

    Down paths end in realisation references rendered as "model" or
    "model:fragment" strings.
    """

    node: str
    up: tuple[tuple[str, ...], ...]
    down: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class SupportReport:
    """Which enterprise leaf goals the ERP side supports, and which not."""

    supported: dict[str, tuple[str, ...]]
    unsupported: tuple[str, ...]


def _find_cycle(adjacency: dict[str, list[str]]) -> str | None:
    """Return a node on a cycle of the given edge relation, or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {node: WHITE for node in adjacency}

    for start in sorted(adjacency, key=id_sort_key):
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, Iterable[str]]] = [(start, iter(adjacency[start]))]
        color[start] = GREY
        while stack:
            node, neighbours = stack[-1]
            advanced = False
            for nxt in neighbours:
                if nxt not in color:
                    continue
                if color[nxt] == GREY:
                    return nxt
                if color[nxt] == WHITE:
                    color[nxt] = GREY
                    stack.append((nxt, iter(adjacency[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return None


def validate_graph(graph: GoalGraph) -> list[Violation]:
    """Check node invariants, the edge-kind table, and acyclicity."""
    violations: list[Violation] = []
    nodes = graph.node_map()
    stakeholder_ids = {s.id for s in graph.stakeholders}

    id_counts: dict[str, int] = {}
    for node in graph.nodes:
        id_counts[node.id] = id_counts.get(node.id, 0) + 1
    # GoalGraph dedupes equal nodes; distinct nodes sharing an id remain
    for node_id, count in sorted(id_counts.items()):
        if count > 1:
            violations.append(Violation("DuplicateId", node_id, "duplicate node id"))

    sh_counts: dict[str, int] = {}
    for sh in graph.stakeholders:
        sh_counts[sh.id] = sh_counts.get(sh.id, 0) + 1
    for sh_id, count in sorted(sh_counts.items()):
        if count > 1:
            violations.append(
                Violation("DuplicateId", sh_id, "duplicate stakeholder id")
            )

    for node in graph.nodes:
        if node.kind is NodeKind.NEED and node.owner is not Owner.ENTERPRISE:
            violations.append(
                Violation("BadNeedOwner", node.id, "needs must be enterprise-owned")
            )
        if node.change and node.kind is not NodeKind.GOAL:
            violations.append(
                Violation(
                    "BadChangeFlag", node.id, "change applies to goal nodes only"
                )
            )

    for edge in graph.edges:
        if edge.src not in nodes:
            violations.append(
                Violation("UnknownNode", edge.src, "edge source does not exist")
            )
            continue
        if edge.kind is EdgeKind.REALISED_BY:
            if edge.realises is None or not edge.realises.model:
                violations.append(
                    Violation(
                        "MissingRealisation",
                        edge.src,
                        "realisedby edge carries no reference",
                    )
                )
            if nodes[edge.src].kind not in (NodeKind.GOAL, NodeKind.OBJECTIVE):
                violations.append(
                    Violation(
                        "BadRealisedBySource",
                        edge.src,
                        "only goals and objectives may be realised",
                    )
                )
            continue
        if edge.dst not in nodes:
            violations.append(
                Violation("UnknownNode", edge.dst, "edge target does not exist")
            )
            continue
        src, dst = nodes[edge.src], nodes[edge.dst]
        if edge.kind is EdgeKind.DERIVES:
            if (src.kind, dst.kind) not in _DERIVES_TABLE:
                violations.append(
                    Violation(
                        "BadDerivesKinds",
                        edge.src,
                        f"derives may not connect {src.kind.value} to {dst.kind.value}",
                    )
                )
        elif edge.kind in DECOMPOSES:
            if src.kind is not dst.kind:
                violations.append(
                    Violation(
                        "BadDecomposesKinds",
                        edge.src,
                        "decomposition must stay within one node kind",
                    )
                )
        elif edge.kind is EdgeKind.SUPPORTS:
            if src.owner is not Owner.ERP or dst.owner is not Owner.ENTERPRISE:
                violations.append(
                    Violation(
                        "BadSupportsDirection",
                        edge.src,
                        "supports must run from an erp node to an enterprise node",
                    )
                )
        elif edge.kind is EdgeKind.DETERMINED_BY:
            if edge.stakeholder not in stakeholder_ids:
                violations.append(
                    Violation(
                        "UnknownStakeholder",
                        edge.src,
                        f"stakeholder {edge.stakeholder} does not exist",
                    )
                )

    for kinds, code in ((DECOMPOSES, "DecompositionCycle"), ((EdgeKind.DERIVES,), "DerivesCycle")):
        adjacency: dict[str, list[str]] = {n.id: [] for n in graph.nodes}
        for edge in graph.edges:
            if edge.kind in kinds and edge.src in adjacency and edge.dst in adjacency:
                adjacency[edge.src].append(edge.dst)
        on_cycle = _find_cycle(adjacency)
        if on_cycle is not None:
            violations.append(
                Violation(code, on_cycle, "edge relation must be acyclic")
            )
    return violations


def leaves(graph: GoalGraph, kind: NodeKind | str) -> frozenset[str]:
    """Nodes of the kind that are not decomposed any further."""
    kind = NodeKind(kind)
    decomposed = {e.dst for e in graph.edges if e.kind in DECOMPOSES}
    return frozenset(
        n.id for n in graph.nodes if n.kind is kind and n.id not in decomposed
    )


def _trace_paths(
    start: str, adjacency: dict[str, list[str]]
) -> tuple[tuple[str, ...], ...]:
    """All maximal simple paths following the adjacency, sorted."""
    paths: list[tuple[str, ...]] = []

    def walk(path: list[str]) -> None:
        extensions = [
            nxt for nxt in adjacency.get(path[-1], ()) if nxt not in path
        ]
        if not extensions:
            paths.append(tuple(path))
            return
        for nxt in extensions:
            walk(path + [nxt])

    walk([start])
    return tuple(sorted(paths))


def trace(graph: GoalGraph, node_id: str) -> TraceReport:
    """Follow derivation, decomposition and realisation edges both ways."""
    if node_id not in graph.node_ids():
        raise UnknownNodeError(f"unknown node {node_id}")

    chain_kinds = (EdgeKind.DERIVES,) + DECOMPOSES
    up: dict[str, list[str]] = {}
    down: dict[str, list[str]] = {}
    for edge in graph.edges:
        if edge.kind in chain_kinds:
            up.setdefault(edge.src, []).append(edge.dst)
            down.setdefault(edge.dst, []).append(edge.src)
        elif edge.kind is EdgeKind.REALISED_BY and edge.realises is not None:
            down.setdefault(edge.src, []).append(str(edge.realises))
    for adjacency in (up, down):
        for key in adjacency:
            adjacency[key] = sorted(set(adjacency[key]), key=id_sort_key)

    return TraceReport(
        node=node_id,
        up=_trace_paths(node_id, up),
        down=_trace_paths(node_id, down),
    )


def support_check(
    graph: GoalGraph, to_be: ProcessModel | Iterable[ProcessModel]
) -> SupportReport:
    """Check that every enterprise leaf goal has a realised ERP supporter.

    A goal counts as supported when a supports edge reaches it from an ERP
    node that is realised by one of the given to-be models (a whole-model
    reference) or by a fragment present in one of them.
    """
    models = (to_be,) if isinstance(to_be, ProcessModel) else tuple(to_be)
    model_names = {m.name for m in models}
    fragments_by_model = {m.name: m.fragment_ids() for m in models}

    nodes = graph.node_map()
    realised: set[str] = set()
    for edge in graph.edges:
        if edge.kind is not EdgeKind.REALISED_BY or edge.realises is None:
            continue
        ref = edge.realises
        if ref.fragment is None:
            hit = ref.model in model_names
        else:
            hit = ref.fragment in fragments_by_model.get(ref.model, frozenset())
        if hit and nodes.get(edge.src) is not None and nodes[edge.src].owner is Owner.ERP:
            realised.add(edge.src)

    supporters: dict[str, set[str]] = {}
    for edge in graph.edges:
        if edge.kind is EdgeKind.SUPPORTS and edge.src in realised:
            supporters.setdefault(edge.dst, set()).add(edge.src)

    enterprise_leaves = sorted(
        (
            gid
            for gid in leaves(graph, NodeKind.GOAL)
            if nodes[gid].owner is Owner.ENTERPRISE
        ),
        key=id_sort_key,
    )
    supported: dict[str, tuple[str, ...]] = {}
    unsupported: list[str] = []
    for gid in enterprise_leaves:
        found = sorted(supporters.get(gid, ()), key=id_sort_key)
        if found:
            supported[gid] = tuple(found)
        else:
            unsupported.append(gid)
    return SupportReport(supported=supported, unsupported=tuple(unsupported))
