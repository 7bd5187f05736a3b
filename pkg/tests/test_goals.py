from __future__ import annotations

import pytest
from hypothesis import given, settings

from modelgen import goal_edge_soups
from roc.errors import UnknownNodeError
from roc.goals import (
    DECOMPOSES,
    EdgeKind,
    GoalEdge,
    GoalGraph,
    GoalNode,
    NodeKind,
    Owner,
    Ref,
    Stakeholder,
    leaves,
    support_check,
    trace,
    validate_graph,
)


def graph_of(nodes=(), edges=(), stakeholders=()):
    return GoalGraph(tuple(nodes), tuple(edges), tuple(stakeholders))


def test_electrotech_graph_is_valid(electrotech_goals):
    assert validate_graph(electrotech_goals) == []


def test_bad_supports_direction():
    graph = graph_of(
        nodes=(
            GoalNode("E1", "erp goal", NodeKind.GOAL, owner=Owner.ERP),
            GoalNode("G1", "enterprise goal", NodeKind.GOAL),
        ),
        edges=(GoalEdge("G1", EdgeKind.SUPPORTS, "E1"),),
    )
    assert [v.code for v in validate_graph(graph)] == ["BadSupportsDirection"]


def test_decomposition_cycle():
    graph = graph_of(
        nodes=(
            GoalNode("A", "a", NodeKind.GOAL),
            GoalNode("B", "b", NodeKind.GOAL),
        ),
        edges=(
            GoalEdge("A", EdgeKind.DECOMPOSES_AND, "B"),
            GoalEdge("B", EdgeKind.DECOMPOSES_AND, "A"),
        ),
    )
    assert [v.code for v in validate_graph(graph)] == ["DecompositionCycle"]


def test_need_owner_and_change_flags():
    graph = graph_of(
        nodes=(
            GoalNode("N1", "bad need", NodeKind.NEED, owner=Owner.ERP),
            GoalNode("O1", "objective", NodeKind.OBJECTIVE, change=True),
        ),
    )
    codes = {v.code for v in validate_graph(graph)}
    assert codes == {"BadNeedOwner", "BadChangeFlag"}


def test_unknown_edge_endpoints_and_stakeholder():
    graph = graph_of(
        nodes=(GoalNode("G1", "g", NodeKind.GOAL),),
        edges=(
            GoalEdge("G1", EdgeKind.DERIVES, "N9"),
            GoalEdge("G1", EdgeKind.DETERMINED_BY, "G1", stakeholder="SH9"),
        ),
    )
    codes = {v.code for v in validate_graph(graph)}
    assert "UnknownNode" in codes and "UnknownStakeholder" in codes


def test_bad_derives_kinds():
    graph = graph_of(
        nodes=(
            GoalNode("N1", "need", NodeKind.NEED),
            GoalNode("G1", "goal", NodeKind.GOAL),
        ),
        edges=(GoalEdge("N1", EdgeKind.DERIVES, "G1"),),
    )
    assert [v.code for v in validate_graph(graph)] == ["BadDerivesKinds"]


def test_leaves_electrotech(electrotech_goals):
    labels = {n.id: n.label for n in electrotech_goals.nodes}
    assert {labels[i] for i in leaves(electrotech_goals, NodeKind.GOAL)} == {
        "automate payroll",
        "automate invoicing",
        "update inventory",
        "satisfy customer need for information from suppliers",
    }


def test_leaves_empty_graph():
    assert leaves(graph_of(), NodeKind.GOAL) == frozenset()


def test_leaves_single_need_queried_for_goal():
    graph = graph_of(nodes=(GoalNode("N1", "need", NodeKind.NEED),))
    assert leaves(graph, NodeKind.GOAL) == frozenset()


def test_leaves_excludes_decomposed_nodes(alveo_goals):
    assert "N0" not in leaves(alveo_goals, NodeKind.NEED)
    assert leaves(alveo_goals, NodeKind.NEED) == {"NA", "NB", "NC", "ND", "NE"}


def test_trace_up_to_root_need(electrotech_goals):
    report = trace(electrotech_goals, "G1")
    assert ("G1", "N1") in report.up


def test_trace_singleton():
    graph = graph_of(nodes=(GoalNode("G1", "lonely", NodeKind.GOAL),))
    report = trace(graph, "G1")
    assert report.up == (("G1",),)
    assert report.down == (("G1",),)


def test_trace_down_to_fragments(alveo_goals):
    report = trace(alveo_goals, "GB")
    assert ("GB", "alveo-accounting-tobe:PF4") in report.down
    assert ("GB", "alveo-accounting-tobe:PF5") in report.down
    assert ("GB", "NB", "N0") in report.up


def test_trace_unknown_node(electrotech_goals):
    with pytest.raises(UnknownNodeError):
        trace(electrotech_goals, "nope")


def test_support_check_all_supported(alveo_goals, alveo_tobe_models):
    report = support_check(alveo_goals, alveo_tobe_models)
    assert report.unsupported == ()
    assert set(report.supported) == {"GA", "GB", "GC", "GD", "GE"}
    assert report.supported["GD"] == ("OMM", "OPP")


def test_support_check_removing_fi_edges(alveo_goals, alveo_tobe_models):
    pruned = GoalGraph(
        alveo_goals.nodes,
        tuple(
            e
            for e in alveo_goals.edges
            if not (e.src == "OFI" and e.kind is EdgeKind.REALISED_BY)
        ),
        alveo_goals.stakeholders,
    )
    report = support_check(pruned, alveo_tobe_models)
    assert report.unsupported == ("GB",)
    labels = {n.id: n.label for n in alveo_goals.nodes}
    assert labels["GB"] == "better production cost transparency"


def test_support_check_no_erp_nodes(electrotech_goals, electrotech_tobe):
    enterprise_only = GoalGraph(
        tuple(n for n in electrotech_goals.nodes if n.owner is Owner.ENTERPRISE),
        tuple(
            e
            for e in electrotech_goals.edges
            if e.src != "E1" and e.dst != "E1"
        ),
        electrotech_goals.stakeholders,
    )
    report = support_check(enterprise_only, electrotech_tobe)
    assert set(report.unsupported) == {"G1", "G2", "G3", "G4"}


def test_support_check_single_model(electrotech_goals, electrotech_tobe):
    report = support_check(electrotech_goals, electrotech_tobe)
    assert report.unsupported == ()


_RULES = {
    "DuplicateId": lambda g, v: True,
    "BadNeedOwner": lambda g, v: any(
        n.id == v.subject and n.kind is NodeKind.NEED and n.owner is not Owner.ENTERPRISE
        for n in g.nodes
    ),
    "BadChangeFlag": lambda g, v: any(
        n.id == v.subject and n.change and n.kind is not NodeKind.GOAL for n in g.nodes
    ),
    "UnknownNode": lambda g, v: v.subject not in g.node_ids(),
    "UnknownStakeholder": lambda g, v: any(
        e.kind is EdgeKind.DETERMINED_BY
        and e.src == v.subject
        and e.stakeholder not in {s.id for s in g.stakeholders}
        for e in g.edges
    ),
    "BadDerivesKinds": lambda g, v: any(
        e.kind is EdgeKind.DERIVES and e.src == v.subject for e in g.edges
    ),
    "BadDecomposesKinds": lambda g, v: any(
        e.kind in DECOMPOSES and e.src == v.subject for e in g.edges
    ),
    "BadSupportsDirection": lambda g, v: any(
        e.kind is EdgeKind.SUPPORTS and e.src == v.subject for e in g.edges
    ),
    "BadRealisedBySource": lambda g, v: any(
        e.kind is EdgeKind.REALISED_BY and e.src == v.subject for e in g.edges
    ),
    "MissingRealisation": lambda g, v: True,
    "DecompositionCycle": lambda g, v: v.subject in g.node_ids(),
    "DerivesCycle": lambda g, v: v.subject in g.node_ids(),
}


@settings(max_examples=120)
@given(graph=goal_edge_soups())
def test_every_violation_cites_a_real_rule(graph):
    for violation in validate_graph(graph):
        check = _RULES.get(violation.code)
        assert check is not None, f"unexpected violation code {violation.code}"
        assert check(graph, violation), violation


@settings(max_examples=80)
@given(graph=goal_edge_soups())
def test_trace_terminates_and_paths_are_simple(graph):
    for node in graph.nodes:
        report = trace(graph, node.id)
        for path in report.up + report.down:
            assert len(path) == len(set(path))


@settings(max_examples=60)
@given(graph=goal_edge_soups())
def test_support_is_monotone(graph, alveo_tobe_models):
    base = support_check(graph, alveo_tobe_models)
    # adding a supports edge plus a realisation never shrinks the supported set
    erp_nodes = [n for n in graph.nodes if n.owner is Owner.ERP]
    goals = [n for n in graph.nodes if n.kind is NodeKind.GOAL and n.owner is Owner.ENTERPRISE]
    if not erp_nodes or not goals:
        return
    extended = GoalGraph(
        graph.nodes,
        graph.edges
        + (
            GoalEdge(erp_nodes[0].id, EdgeKind.SUPPORTS, goals[0].id),
            GoalEdge(
                erp_nodes[0].id,
                EdgeKind.REALISED_BY,
                realises=Ref("alveo-sd-tobe"),
            ),
        ),
        graph.stakeholders,
    )
    richer = support_check(extended, alveo_tobe_models)
    assert set(base.supported) <= set(richer.supported)
