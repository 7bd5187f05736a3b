from __future__ import annotations

import os
from pathlib import Path

import pytest

from roc import fixtures

GOLDEN_DIR = Path(__file__).parent / "golden"


def assert_golden(name: str, text: str) -> None:
    """Compare against a frozen golden file, byte for byte.

    Set ROC_UPDATE_GOLDENS=1 to rewrite the files after a reviewed change.
    """
    path = GOLDEN_DIR / name
    if os.environ.get("ROC_UPDATE_GOLDENS"):
        path.write_text(text, encoding="utf-8")
    assert path.exists(), f"golden file {name} missing; set ROC_UPDATE_GOLDENS=1"
    assert text == path.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def electrotech_asis():
    return fixtures.load_process("electrotech-asis.proc")


@pytest.fixture(scope="session")
def electrotech_tobe():
    return fixtures.load_process("electrotech-tobe.proc")


@pytest.fixture(scope="session")
def electrotech_registry():
    return fixtures.load_registry("electrotech.problems")


@pytest.fixture(scope="session")
def electrotech_goals():
    return fixtures.load_goals("electrotech.goals")


@pytest.fixture(scope="session")
def alveo_sd_asis():
    return fixtures.load_process("alveo-sd-asis.proc")


@pytest.fixture(scope="session")
def alveo_sd_tobe():
    return fixtures.load_process("alveo-sd-tobe.proc")


@pytest.fixture(scope="session")
def alveo_goals():
    return fixtures.load_goals("alveo.goals")


@pytest.fixture(scope="session")
def alveo_tobe_models():
    return [
        fixtures.load_process(name)
        for name in (
            "alveo-sd-tobe.proc",
            "alveo-accounting-tobe.proc",
            "alveo-logistics-tobe.proc",
        )
    ]


@pytest.fixture(scope="session")
def refined_logistics():
    return fixtures.load_process("alveo-logistics-refined.proc")


@pytest.fixture(scope="session")
def logistics_refinement():
    return fixtures.load_refinement("alveo-logistics.refine")
