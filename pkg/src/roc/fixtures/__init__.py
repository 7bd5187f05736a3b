"""Bundled fixture models: the Electro Tech process pair and the three
ALVEO targeted processes, with their problem registers, component maps,
goal graphs, and the logistics refinement.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .. import dsl
from ..alignment import ComponentMap, PlaceCorrespondence, Problem, align
from ..casebase import Scenario
from ..goals import GoalGraph
from ..net import ProcessModel, RefinementTree

#: Scenario id -> (goals, as-is, to-be, cmap, problems, metadata)
SCENARIOS = {
    "electrotech": (
        "electrotech.goals",
        "electrotech-asis.proc",
        "electrotech-tobe.proc",
        "electrotech.cmap",
        "electrotech.problems",
        {"planning": "make-to-stock"},
    ),
    "alveo-sd": (
        "alveo.goals",
        "alveo-sd-asis.proc",
        "alveo-sd-tobe.proc",
        "alveo-sd.cmap",
        "alveo.problems",
        {"implementation": "step-by-step", "deployment": "roll-out"},
    ),
    "alveo-accounting": (
        "alveo.goals",
        "alveo-accounting-asis.proc",
        "alveo-accounting-tobe.proc",
        "alveo-accounting.cmap",
        "alveo.problems",
        {"implementation": "step-by-step", "deployment": "roll-out"},
    ),
    "alveo-logistics": (
        "alveo.goals",
        "alveo-logistics-asis.proc",
        "alveo-logistics-tobe.proc",
        "alveo-logistics.cmap",
        "alveo.problems",
        {
            "implementation": "step-by-step",
            "deployment": "roll-out",
            "planning": "make-to-stock",
        },
    ),
}


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled fixture file."""
    path = resources.files(__package__) / name
    return Path(str(path))


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


def load_process(name: str) -> ProcessModel:
    return dsl.parse_process(fixture_text(name), name)


def load_goals(name: str) -> GoalGraph:
    return dsl.parse_goals(fixture_text(name), name)


def load_registry(name: str) -> list[Problem]:
    return dsl.parse_registry(fixture_text(name), name)


def load_components(name: str) -> ComponentMap:
    return dsl.parse_components(fixture_text(name), name)


def load_refinement(name: str) -> RefinementTree:
    return dsl.parse_refinement(fixture_text(name), name)


def load_correspondence(name: str) -> PlaceCorrespondence:
    return dsl.parse_correspondence(fixture_text(name), name)


def load_scenario(scenario_id: str) -> Scenario:
    """Assemble one of the bundled scenarios, report included."""
    goals_file, asis_file, tobe_file, cmap_file, problems_file, metadata = SCENARIOS[
        scenario_id
    ]
    as_is = load_process(asis_file)
    to_be = load_process(tobe_file)
    report = align(as_is, to_be, registry=load_registry(problems_file))
    return Scenario(
        id=scenario_id,
        name=to_be.name,
        goal_graph=load_goals(goals_file),
        as_is=as_is,
        to_be=to_be,
        report=report,
        component_map=load_components(cmap_file),
        metadata=dict(metadata),
    )
