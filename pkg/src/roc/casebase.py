"""Scenario repository with similarity-based retrieval and reuse.

A scenario is one completed project: goal graph, both process models, the
alignment report, and the component map.  Scenarios persist as one JSON
file each (embedding the canonical DSL texts) next to an index file; writes
are atomic (write-then-rename) and guarded by an advisory lock file, so
reads can run concurrently with a single writer.
"""

from __future__ import annotations

import json
import os
import re
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from . import dsl, reports
from .alignment import AlignmentReport, ComponentMap, PlaceCorrespondence, align
from .errors import (
    DuplicateIdError,
    EmptyCaseBaseError,
    StorageError,
    ValidationError,
    Violation,
)
from .goals import GoalGraph, NodeKind, Owner, validate_graph
from .net import (
    DEFAULT_BOUND,
    FulfilmentReport,
    ModelKind,
    Place,
    ProcessModel,
    check_fulfilment,
    id_sort_key,
    normalize_strategy,
    validate_net,
)

try:  # advisory locking is POSIX-only; fall back to no-op elsewhere
    import fcntl
except ImportError:  # pragma: no cover
    fcntl = None

SCENARIO_ID_RE = re.compile(r"[A-Za-z][A-Za-z0-9_.\-]*\Z")
INDEX_FILE = "index.json"
LOCK_FILE = ".lock"


@dataclass(frozen=True)
class SimilarityWeights:
    """Nonnegative weights over the four label sets; normalized before use."""

    goals: float = 1.0
    places: float = 1.0
    strategies: float = 1.0
    components: float = 1.0

    def __post_init__(self):
        values = (self.goals, self.places, self.strategies, self.components)
        if any(v < 0 for v in values):
            raise ValueError("similarity weights must be nonnegative")
        if not any(v > 0 for v in values):
            raise ValueError("at least one similarity weight must be positive")

    def normalized(self) -> tuple[float, float, float, float]:
        total = self.goals + self.places + self.strategies + self.components
        return (
            self.goals / total,
            self.places / total,
            self.strategies / total,
            self.components / total,
        )


EQUAL_WEIGHTS = SimilarityWeights()


@dataclass(frozen=True)
class Scenario:
    """One stored project; `metadata` holds free-text keys such as the
    implementation approach ("step-by-step", "roll-out")."""

    id: str
    name: str
    goal_graph: GoalGraph
    as_is: ProcessModel
    to_be: ProcessModel
    report: AlignmentReport
    component_map: ComponentMap
    metadata: dict[str, str] = field(default_factory=dict)

    def label_sets(
        self,
    ) -> tuple[frozenset[str], frozenset[str], frozenset[str], frozenset[str]]:
        """Enterprise goal labels, to-be place labels, to-be strategy labels
        (normalized), and component names."""
        goal_labels = frozenset(
            n.label
            for n in self.goal_graph.nodes
            if n.kind is NodeKind.GOAL and n.owner is Owner.ENTERPRISE
        )
        place_labels = frozenset(p.label for p in self.to_be.places)
        strategy_labels = frozenset(
            normalize_strategy(f.strategy.text) for f in self.to_be.fragments
        )
        return goal_labels, place_labels, strategy_labels, self.component_map.all_components()


@dataclass(frozen=True)
class ReuseDraft:
    """A relabeled copy of a retrieved to-be model; `review` lists the place
    ids whose labels were not mapped and still carry the source wording."""

    model: ProcessModel
    review: frozenset[str]


def scenario_violations(scenario: Scenario) -> list[Violation]:
    """Validity of the embedded artifacts plus report consistency."""
    violations: list[Violation] = []
    if not SCENARIO_ID_RE.match(scenario.id):
        violations.append(
            Violation("BadScenarioId", scenario.id, "id is not filename-safe")
        )
    if scenario.as_is.kind is not ModelKind.AS_IS:
        violations.append(
            Violation("KindMismatch", scenario.as_is.name, "as_is model must be as-is")
        )
    if scenario.to_be.kind is not ModelKind.TO_BE:
        violations.append(
            Violation("KindMismatch", scenario.to_be.name, "to_be model must be to-be")
        )
    violations.extend(validate_net(scenario.as_is))
    violations.extend(validate_net(scenario.to_be))
    violations.extend(validate_graph(scenario.goal_graph))
    unknown = sorted(
        set(scenario.component_map.entries) - scenario.to_be.fragment_ids(),
        key=id_sort_key,
    )
    for fid in unknown:
        violations.append(
            Violation("UnknownFragment", fid, "component map references unknown fragment")
        )
    if not violations:
        recomputed = align(scenario.as_is, scenario.to_be)
        consistent = (
            recomputed.matches == scenario.report.matches
            and recomputed.coverage == scenario.report.coverage
            and recomputed.uncovered == scenario.report.uncovered
        )
        if not consistent:
            violations.append(
                Violation(
                    "ReportMismatch",
                    scenario.id,
                    "stored report does not match re-running the alignment",
                )
            )
    return violations


def _jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 1.0
    union = a | b
    return len(a & b) / len(union)


def similarity(
    a: Scenario, b: Scenario, weights: SimilarityWeights = EQUAL_WEIGHTS
) -> float:
    """Weighted Jaccard over the four label sets; 1.0 on identical scenarios."""
    wg, wp, ws, wc = weights.normalized()
    sets_a = a.label_sets()
    sets_b = b.label_sets()
    parts = (wg, wp, ws, wc)
    return sum(w * _jaccard(sa, sb) for w, sa, sb in zip(parts, sets_a, sets_b))


def reuse(retrieved: Scenario, corr: PlaceCorrespondence) -> ReuseDraft:
    """Adapt a retrieved to-be model to a new vocabulary.

    `corr` maps place ids of the retrieved to-be model to labels in the new
    problem's vocabulary.  Unmapped places keep their source labels and are
    flagged for review.  Topology, fragment ids and strategies are untouched.
    """
    corr.check_injective()
    model = retrieved.to_be
    relabeled = []
    review = []
    for place in model.places:
        new_label = corr.get(place.id)
        if new_label is None:
            review.append(place.id)
            relabeled.append(place)
        else:
            relabeled.append(Place(place.id, new_label, place.role))
    draft = replace(model, places=tuple(relabeled))
    return ReuseDraft(model=draft, review=frozenset(review))


def relabel_identity(model: ProcessModel) -> PlaceCorrespondence:
    """The reuse correspondence that keeps every place label as it is."""
    return PlaceCorrespondence({p.id: p.label for p in model.places})


def test_reuse(
    draft: ReuseDraft | ProcessModel, bound: int = DEFAULT_BOUND
) -> FulfilmentReport:
    """Step E of the reuse loop: fulfilment check of the adapted draft."""
    model = draft.model if isinstance(draft, ReuseDraft) else draft
    return check_fulfilment(model, bound)


@dataclass(frozen=True)
class CaseBase:
    """Immutable snapshot of a scenario store."""

    scenarios: dict[str, Scenario]
    root: Path | None = None

    def __len__(self) -> int:
        return len(self.scenarios)

    def ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.scenarios, key=id_sort_key))


def retrieve(
    casebase: CaseBase,
    query: Scenario,
    k: int,
    weights: SimilarityWeights = EQUAL_WEIGHTS,
) -> list[tuple[str, float]]:
    """Top-k scenarios by similarity, ties broken by ascending id."""
    if not casebase.scenarios:
        raise EmptyCaseBaseError("case base holds no scenarios")
    if k < 1:
        raise ValueError("k must be a positive integer")
    scored = [
        (sid, similarity(scenario, query, weights))
        for sid, scenario in casebase.scenarios.items()
    ]
    scored.sort(key=lambda pair: (-pair[1], id_sort_key(pair[0])))
    return scored[:k]


def scenario_to_document(scenario: Scenario) -> dict:
    return {
        "id": scenario.id,
        "name": scenario.name,
        "metadata": dict(sorted(scenario.metadata.items())),
        "goal_graph": dsl.serialize_goals(scenario.goal_graph),
        "as_is": dsl.serialize_process(scenario.as_is),
        "to_be": dsl.serialize_process(scenario.to_be),
        "component_map": dsl.serialize_components(scenario.component_map),
        "report": reports.alignment_to_document(scenario.report),
    }


def scenario_from_document(document: dict, file: str = "<case>") -> Scenario:
    return Scenario(
        id=document["id"],
        name=document["name"],
        goal_graph=dsl.parse_goals(document["goal_graph"], file, validate=False),
        as_is=dsl.parse_process(document["as_is"], file, validate=False),
        to_be=dsl.parse_process(document["to_be"], file, validate=False),
        report=reports.alignment_from_document(document["report"]),
        component_map=dsl.parse_components(document["component_map"], file),
        metadata=dict(document.get("metadata", {})),
    )


def _render_case(scenario: Scenario) -> str:
    return json.dumps(scenario_to_document(scenario), indent=2) + "\n"


def load_scenario_file(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        raise StorageError(f"cannot read scenario file {path}: {err}") from None
    return scenario_from_document(document, str(path))


def _atomic_write(path: Path, content: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


@contextmanager
def _store_lock(root: Path):
    lock_path = root / LOCK_FILE
    handle = open(lock_path, "w")
    try:
        if fcntl is not None:
            fcntl.flock(handle.fileno(), fcntl.LOCK_EX)
        yield
    finally:
        if fcntl is not None:
            fcntl.flock(handle.fileno(), fcntl.LOCK_UN)
        handle.close()


def load(root: str | Path) -> CaseBase:
    """Load a case base; a missing directory or index is an empty base."""
    root = Path(root)
    index_path = root / INDEX_FILE
    if not index_path.exists():
        return CaseBase(scenarios={}, root=root)
    try:
        index = json.loads(index_path.read_text(encoding="utf-8"))
        entries = index["scenarios"]
    except (OSError, json.JSONDecodeError, KeyError) as err:
        raise StorageError(f"cannot read case-base index {index_path}: {err}") from None
    scenarios: dict[str, Scenario] = {}
    for sid in sorted(entries, key=id_sort_key):
        scenario = load_scenario_file(root / entries[sid])
        if scenario.id != sid:
            raise StorageError(
                f"scenario file {entries[sid]} carries id {scenario.id}, index says {sid}"
            )
        scenarios[sid] = scenario
    return CaseBase(scenarios=scenarios, root=root)


def save(casebase: CaseBase, root: str | Path | None = None) -> CaseBase:
    """Write every scenario and the index; returns the saved snapshot."""
    target = Path(root) if root is not None else casebase.root
    if target is None:
        raise StorageError("case base has no storage location")
    try:
        target.mkdir(parents=True, exist_ok=True)
        with _store_lock(target):
            index = {"scenarios": {}}
            for sid in sorted(casebase.scenarios, key=id_sort_key):
                filename = f"{sid}.case"
                _atomic_write(target / filename, _render_case(casebase.scenarios[sid]))
                index["scenarios"][sid] = filename
            _atomic_write(target / INDEX_FILE, json.dumps(index, indent=2) + "\n")
    except OSError as err:
        raise StorageError(f"cannot write case base at {target}: {err}") from None
    return CaseBase(scenarios=dict(casebase.scenarios), root=target)


def retain(
    casebase: CaseBase, scenario: Scenario, overwrite: bool = False
) -> CaseBase:
    """Step F: add a validated scenario and persist it atomically."""
    violations = scenario_violations(scenario)
    if violations:
        raise ValidationError(violations)
    if scenario.id in casebase.scenarios and not overwrite:
        raise DuplicateIdError(f"scenario {scenario.id} already retained")
    scenarios = dict(casebase.scenarios)
    scenarios[scenario.id] = scenario
    updated = CaseBase(scenarios=scenarios, root=casebase.root)
    if updated.root is not None:
        try:
            updated.root.mkdir(parents=True, exist_ok=True)
            with _store_lock(updated.root):
                filename = f"{scenario.id}.case"
                _atomic_write(
                    updated.root / filename, _render_case(scenario)
                )
                index_path = updated.root / INDEX_FILE
                if index_path.exists():
                    index = json.loads(index_path.read_text(encoding="utf-8"))
                else:
                    index = {"scenarios": {}}
                index["scenarios"][scenario.id] = filename
                index["scenarios"] = dict(
                    sorted(index["scenarios"].items(), key=lambda kv: id_sort_key(kv[0]))
                )
                _atomic_write(index_path, json.dumps(index, indent=2) + "\n")
        except OSError as err:
            raise StorageError(
                f"cannot persist scenario {scenario.id}: {err}"
            ) from None
    return updated
