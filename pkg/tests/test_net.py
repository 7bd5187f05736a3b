from __future__ import annotations

import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modelgen import process_models
from oracles import brute_force_fulfilment, brute_force_markings, marking_keys
from roc.errors import NotEnabledError, UnknownFragmentError
from roc.net import (
    Fragment,
    Marking,
    ModelKind,
    Place,
    ProcessModel,
    Role,
    StrategyLabel,
    check_fulfilment,
    default_deficiency,
    enabled,
    fire,
    reachable,
    triplet,
    validate_net,
)


def marking_set(*place_sets):
    return {frozenset(tokens.items()) for tokens in place_sets}


def test_validate_electrotech_asis_is_clean(electrotech_asis):
    assert validate_net(electrotech_asis) == []


def test_validate_reports_dangling_place_ref(electrotech_asis):
    bad_fragment = Fragment(
        "PF9", {"I9"}, {"I1"}, StrategyLabel("manual strategy")
    )
    model = dataclasses.replace(
        electrotech_asis, fragments=electrotech_asis.fragments + (bad_fragment,)
    )
    violations = validate_net(model)
    assert [(v.code, v.subject) for v in violations] == [("DanglingPlaceRef", "PF9")]
    assert "I9" in violations[0].message


def test_validate_rejects_resolves_on_asis(electrotech_asis):
    frags = list(electrotech_asis.fragments)
    frags[1] = dataclasses.replace(
        frags[1], problems=frozenset(), resolves=frozenset({"b"})
    )
    model = dataclasses.replace(electrotech_asis, fragments=tuple(frags))
    assert [(v.code, v.subject) for v in validate_net(model)] == [
        ("KindMismatch", "PF2")
    ]


def test_validate_start_and_exit_rules():
    intermediate = Place("P0", "zero")
    model = ProcessModel("m", ModelKind.TO_BE, (intermediate,), ())
    codes = {v.code for v in validate_net(model)}
    assert codes == {"NoStartPlace", "NoExitPlace"}

    two_starts = ProcessModel(
        "m",
        ModelKind.TO_BE,
        (Place("P0", "a", Role.START), Place("P1", "b", Role.START)),
        (),
    )
    codes = {v.code for v in validate_net(two_starts)}
    assert "MultipleStartPlaces" in codes and "NoExitPlace" in codes


def test_validate_rejects_both_problem_links():
    model = ProcessModel(
        "m",
        ModelKind.AS_IS,
        (Place("P0", "a", Role.START), Place("P1", "b", Role.EXIT)),
        (
            Fragment(
                "PF1",
                {"P0"},
                {"P1"},
                StrategyLabel("manual strategy"),
                problems=frozenset({"a"}),
                resolves=frozenset({"a"}),
            ),
        ),
    )
    codes = {v.code for v in validate_net(model)}
    assert "ProblemResolveClash" in codes


def test_enabled_at_start(electrotech_asis):
    assert enabled(electrotech_asis, Marking({"I0": 1})) == {"PF1"}


def test_enabled_alternative_strategies(electrotech_tobe):
    assert enabled(electrotech_tobe, Marking({"I1": 1})) == {"PF2", "PF3"}


def test_enabled_empty_marking(electrotech_tobe):
    assert enabled(electrotech_tobe, Marking()) == frozenset()


def test_fire_moves_one_token(electrotech_asis):
    assert fire(electrotech_asis, Marking({"I0": 1}), "PF1") == Marking({"I1": 1})


def test_fire_self_loop_keeps_marking(electrotech_tobe):
    marking = Marking({"I3": 1})
    assert fire(electrotech_tobe, marking, "PF6") == marking


def test_fire_not_enabled(electrotech_asis):
    with pytest.raises(NotEnabledError):
        fire(electrotech_asis, Marking({"I1": 1}), "PF1")


def test_fire_unknown_fragment(electrotech_asis):
    with pytest.raises(UnknownFragmentError):
        fire(electrotech_asis, Marking({"I0": 1}), "PF99")


def test_reachable_electrotech_asis_chain(electrotech_asis):
    markings = reachable(electrotech_asis, 100)
    assert marking_keys(markings) == marking_set(
        {"I0": 1}, {"I1": 1}, {"I2": 1}, {"I3": 1}, {"X": 1}
    )


def test_reachable_no_fragments():
    model = ProcessModel(
        "m",
        ModelKind.TO_BE,
        (Place("P0", "a", Role.START), Place("P1", "b", Role.EXIT)),
        (),
        Marking({"P0": 1}),
    )
    assert reachable(model, 10) == frozenset({Marking({"P0": 1})})


def test_reachable_tobe_self_loops_add_nothing(electrotech_tobe):
    markings = reachable(electrotech_tobe, 100)
    assert marking_keys(markings) == marking_set(
        {"I0": 1}, {"I1": 1}, {"I2": 1}, {"I3": 1}, {"X": 1}
    )


def test_fulfilment_electrotech_tobe(electrotech_tobe):
    report = check_fulfilment(electrotech_tobe)
    assert report.exit_reachable
    assert report.dead_fragments == frozenset()
    assert not report.bound_hit
    assert report.explored_markings == 5


def test_fulfilment_detached_exit():
    model = ProcessModel(
        "m",
        ModelKind.TO_BE,
        (
            Place("P0", "a", Role.START),
            Place("P1", "b"),
            Place("P2", "c", Role.EXIT),
        ),
        (Fragment("PF1", {"P0"}, {"P1"}, StrategyLabel("planning strategy")),),
        Marking({"P0": 1}),
    )
    report = check_fulfilment(model)
    assert not report.exit_reachable


def test_fulfilment_alveo_sd_chain(alveo_sd_tobe):
    report = check_fulfilment(alveo_sd_tobe)
    assert report.exit_reachable
    assert report.dead_fragments == frozenset()


def test_bound_hit_on_growing_net():
    # a fragment that duplicates its token grows forever
    model = ProcessModel(
        "grow",
        ModelKind.TO_BE,
        (Place("P0", "a", Role.START), Place("P1", "b", Role.EXIT)),
        (Fragment("PF1", {"P0"}, {"P0", "P1"}, StrategyLabel("planning strategy")),),
        Marking({"P0": 1}),
    )
    report = check_fulfilment(model, bound=10)
    assert report.bound_hit
    assert report.explored_markings == 10
    small = reachable(model, 5)
    large = reachable(model, 10)
    assert small < large


def test_triplet_renderings(electrotech_asis, electrotech_tobe):
    assert (
        triplet(electrotech_asis, "PF1")
        == "PF1 :<(start), (support material), manual strategy>"
    )
    assert (
        triplet(electrotech_asis, "PF4")
        == "PF4 :<(Stock), exit, manual order processing strategy>"
    )
    assert triplet(electrotech_tobe, "PF6") == "PF6 :<(Stock), (Stock), Reservation Strategy>"


def test_triplet_unknown_fragment(electrotech_asis):
    with pytest.raises(UnknownFragmentError):
        triplet(electrotech_asis, "PF42")


def test_default_deficiency_heuristic():
    assert default_deficiency("Not demand management strategy")
    assert default_deficiency("manual strategy")
    assert default_deficiency("  MANUAL   order entry ")
    assert not default_deficiency("planning strategy")
    assert StrategyLabel("manual strategy").deficiency
    assert not StrategyLabel("planning strategy").deficiency
    assert StrategyLabel("planning strategy", True).deficiency


def test_marking_drops_zero_entries():
    assert Marking({"P0": 0, "P1": 2}) == Marking({"P1": 2})
    assert Marking().total() == 0
    with pytest.raises(ValueError):
        Marking({"P0": -1})


@settings(max_examples=80)
@given(model=process_models(conservative=True))
def test_firing_conservation(model):
    for marking in reachable(model, 500):
        for fid in enabled(model, marking):
            fragment = model.fragment_map()[fid]
            after = fire(model, marking, fid)
            assert after.total() == marking.total() - len(fragment.sources) + len(
                fragment.targets
            )
            if fragment.is_self_loop():
                assert after == marking


@settings(max_examples=60)
@given(model=process_models(conservative=True), bounds=st.tuples(
    st.integers(1, 30), st.integers(1, 30)
))
def test_monotone_bound_and_determinism(model, bounds):
    b1, b2 = min(bounds), max(bounds)
    first = reachable(model, b1)
    again = reachable(model, b1)
    assert first == again
    assert first <= reachable(model, b2)


@settings(max_examples=100)
@given(model=process_models(conservative=True))
def test_reachable_matches_brute_force(model):
    oracle = brute_force_markings(model)
    assert marking_keys(reachable(model, 10_000)) == set(oracle)

    exit_reachable, dead, count = brute_force_fulfilment(model)
    report = check_fulfilment(model, 10_000)
    assert not report.bound_hit
    assert report.exit_reachable == exit_reachable
    assert report.dead_fragments == frozenset(dead)
    assert report.explored_markings == count
