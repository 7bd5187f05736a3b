from __future__ import annotations

import dataclasses

import pytest

from roc.net import (
    Fragment,
    Marking,
    ModelKind,
    Place,
    ProcessModel,
    RefinementTree,
    StrategyLabel,
    Role,
    validate_refinement,
)


def mutate_targets(model, fragment_id, new_targets):
    frags = tuple(
        dataclasses.replace(f, targets=frozenset(new_targets))
        if f.id == fragment_id
        else f
        for f in model.fragments
    )
    return dataclasses.replace(model, fragments=frags)


def test_logistics_refinement_is_valid(refined_logistics, logistics_refinement):
    assert validate_refinement(refined_logistics, logistics_refinement) == []
    assert logistics_refinement.roots == ("PF1",)


@pytest.mark.parametrize("child", ["PF1.1", "PF1.2", "PF1.1.1", "PF1.1.2"])
def test_endpoint_mutation_yields_one_mismatch(
    refined_logistics, logistics_refinement, child
):
    mutated = mutate_targets(refined_logistics, child, {"I4"})
    violations = validate_refinement(mutated, logistics_refinement)
    assert [(v.code, v.subject) for v in violations] == [("EndpointMismatch", child)]


def test_id_mismatch_for_foreign_child():
    places = (Place("P0", "a", Role.START), Place("P1", "b", Role.EXIT))
    model = ProcessModel(
        "m",
        ModelKind.TO_BE,
        places,
        (
            Fragment("PF1", {"P0"}, {"P1"}, StrategyLabel("planning strategy")),
            Fragment("PF2.1", {"P0"}, {"P1"}, StrategyLabel("forward strategy")),
        ),
        Marking({"P0": 1}),
    )
    tree = RefinementTree({"PF1": ["PF2.1"]})
    assert [(v.code, v.subject) for v in validate_refinement(model, tree)] == [
        ("IdMismatch", "PF2.1")
    ]


def test_id_mismatch_for_deep_segment():
    places = (Place("P0", "a", Role.START), Place("P1", "b", Role.EXIT))
    model = ProcessModel(
        "m",
        ModelKind.TO_BE,
        places,
        (
            Fragment("PF1", {"P0"}, {"P1"}, StrategyLabel("planning strategy")),
            Fragment("PF1.1.1", {"P0"}, {"P1"}, StrategyLabel("forward strategy")),
        ),
        Marking({"P0": 1}),
    )
    tree = RefinementTree({"PF1": ["PF1.1.1"]})
    codes = [(v.code, v.subject) for v in validate_refinement(model, tree)]
    assert codes == [("IdMismatch", "PF1.1.1")]


def test_unknown_fragment_in_tree(refined_logistics):
    tree = RefinementTree({"PF1": ["PF1.9"]})
    codes = {(v.code, v.subject) for v in validate_refinement(refined_logistics, tree)}
    assert ("UnknownFragment", "PF1.9") in codes


def test_multiple_parents(refined_logistics):
    tree = RefinementTree({"PF1": ["PF1.1"], "PF1.1": ["PF1.1"]})
    codes = {v.code for v in validate_refinement(refined_logistics, tree)}
    assert "MultipleParents" in codes


def test_refinement_cycle(refined_logistics):
    tree = RefinementTree({"PF1": ["PF1.1"], "PF1.1": ["PF1"]})
    codes = {v.code for v in validate_refinement(refined_logistics, tree)}
    assert "RefinementCycle" in codes
