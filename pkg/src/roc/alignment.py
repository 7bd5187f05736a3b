"""Gap analysis between an as-is and a to-be process model.

Fragments are matched by their endpoint sets under a place correspondence;
the strategy level then decides whether a match is unchanged or an upgrade.
Problem coverage joins the as-is problems links with the to-be resolves
links.  The report is purely descriptive: nothing here modifies models.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import (
    CorrespondenceError,
    ModelKindError,
    UnknownFragmentError,
    UnknownProblemError,
    ValidationError,
)
from .net import Fragment, ModelKind, ProcessModel, id_sort_key, validate_net


@dataclass(frozen=True)
class Problem:
    id: str
    category: str
    description: str = ""


class MatchKind(str, Enum):
    UNCHANGED = "unchanged"
    STRATEGY_UPGRADE = "strategy-upgrade"
    ADDED = "added"
    REMOVED = "removed"


@dataclass(frozen=True, init=False)
class PlaceCorrespondence:
    """Injective mapping between as-is and to-be place ids.

    The same type carries the relabeling map used by scenario reuse, where
    values are new place labels instead of ids.
    """

    _pairs: tuple[tuple[str, str], ...]

    def __init__(self, pairs: Mapping[str, str] | Iterable[tuple[str, str]] = ()):
        mapping = dict(pairs.items() if isinstance(pairs, Mapping) else pairs)
        items = tuple(sorted(mapping.items(), key=lambda kv: id_sort_key(kv[0])))
        object.__setattr__(self, "_pairs", items)

    @property
    def pairs(self) -> dict[str, str]:
        return dict(self._pairs)

    def get(self, place_id: str, default: str | None = None) -> str | None:
        for src, dst in self._pairs:
            if src == place_id:
                return dst
        return default

    def check_injective(self) -> None:
        values = [dst for _, dst in self._pairs]
        if len(values) != len(set(values)):
            raise CorrespondenceError("correspondence is not injective")

    def validate(self, as_is: ProcessModel, to_be: ProcessModel) -> None:
        self.check_injective()
        as_is_ids = as_is.place_ids()
        to_be_ids = to_be.place_ids()
        for src, dst in self._pairs:
            if src not in as_is_ids:
                raise CorrespondenceError(f"unknown as-is place {src}")
            if dst not in to_be_ids:
                raise CorrespondenceError(f"unknown to-be place {dst}")

    @classmethod
    def identity(cls, as_is: ProcessModel, to_be: ProcessModel) -> "PlaceCorrespondence":
        """Pair every place id the two models share."""
        shared = as_is.place_ids() & to_be.place_ids()
        return cls({pid: pid for pid in shared})

    def inverse(self) -> "PlaceCorrespondence":
        self.check_injective()
        return PlaceCorrespondence({dst: src for src, dst in self._pairs})


@dataclass(frozen=True)
class FragmentMatch:
    """One classified pairing; strategies are carried for reporting."""

    kind: MatchKind
    as_is: str | None = None
    to_be: str | None = None
    as_is_strategy: str | None = None
    to_be_strategy: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", MatchKind(self.kind))

    def sort_key(self) -> tuple:
        anchor = self.to_be if self.to_be is not None else self.as_is
        return (id_sort_key(anchor or ""), 0 if self.to_be is not None else 1)


@dataclass(frozen=True)
class AlignmentReport:
    """Matches plus problem coverage; every fragment appears exactly once."""

    matches: tuple[FragmentMatch, ...]
    coverage: dict[str, frozenset[str]]
    uncovered: frozenset[str]
    category_summary: dict[str, frozenset[str]]

    def count(self, kind: MatchKind) -> int:
        return sum(1 for m in self.matches if m.kind is kind)


@dataclass(frozen=True)
class CoverageSummary:
    """Per-problem and per-category rollup of resolving to-be fragments."""

    problems: dict[str, frozenset[str]]
    categories: dict[str, frozenset[str]]
    uncovered: frozenset[str]


@dataclass(frozen=True, init=False)
class ComponentMap:
    """To-be fragment id -> component names, plus components that apply to all."""

    entries: dict[str, frozenset[str]]
    global_components: frozenset[str]

    def __init__(
        self,
        entries: Mapping[str, Iterable[str]] = (),
        global_components: Iterable[str] = (),
    ):
        mapping = dict(entries.items() if isinstance(entries, Mapping) else entries)
        object.__setattr__(
            self, "entries", {fid: frozenset(names) for fid, names in mapping.items()}
        )
        object.__setattr__(self, "global_components", frozenset(global_components))

    def all_components(self) -> frozenset[str]:
        names = set(self.global_components)
        for values in self.entries.values():
            names.update(values)
        return frozenset(names)


@dataclass(frozen=True)
class ComponentRow:
    fragment: str
    components: tuple[str, ...]


def _endpoint_key(
    fragment: Fragment, corr: PlaceCorrespondence | None
) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Endpoint signature; unmapped as-is places get an unmatchable marker."""

    def translate(pid: str) -> str:
        if corr is None:
            return pid
        return corr.get(pid) or "\x00" + pid

    return (
        tuple(sorted(translate(p) for p in fragment.sources)),
        tuple(sorted(translate(p) for p in fragment.targets)),
    )


def classify(
    a: Fragment, b: Fragment, corr: PlaceCorrespondence | None = None
) -> MatchKind | None:
    """Unchanged or upgrade when endpoints correspond; None otherwise."""
    if _endpoint_key(a, corr) != _endpoint_key(b, None):
        return None
    if a.strategy.normalized() == b.strategy.normalized():
        return MatchKind.UNCHANGED
    return MatchKind.STRATEGY_UPGRADE


def _pair_group(
    as_is_frags: Sequence[Fragment], to_be_frags: Sequence[Fragment]
) -> list[FragmentMatch]:
    """Pair fragments sharing one endpoint signature.

    Strategy-equal pairs become unchanged matches first; the remaining
    fragments pair up in natural id order as upgrades, and the leftovers
    are added (to-be only) or removed (as-is only).
    """
    a_sorted = sorted(as_is_frags, key=lambda f: id_sort_key(f.id))
    b_sorted = sorted(to_be_frags, key=lambda f: id_sort_key(f.id))

    matches: list[FragmentMatch] = []
    used_a: set[str] = set()
    used_b: set[str] = set()

    strategies = {f.strategy.normalized() for f in a_sorted} & {
        f.strategy.normalized() for f in b_sorted
    }
    for strategy in sorted(strategies):
        a_pool = [f for f in a_sorted if f.strategy.normalized() == strategy]
        b_pool = [f for f in b_sorted if f.strategy.normalized() == strategy]
        for fa, fb in zip(a_pool, b_pool):
            matches.append(
                FragmentMatch(
                    MatchKind.UNCHANGED,
                    as_is=fa.id,
                    to_be=fb.id,
                    as_is_strategy=fa.strategy.text,
                    to_be_strategy=fb.strategy.text,
                )
            )
            used_a.add(fa.id)
            used_b.add(fb.id)

    a_rest = [f for f in a_sorted if f.id not in used_a]
    b_rest = [f for f in b_sorted if f.id not in used_b]
    for fa, fb in zip(a_rest, b_rest):
        matches.append(
            FragmentMatch(
                MatchKind.STRATEGY_UPGRADE,
                as_is=fa.id,
                to_be=fb.id,
                as_is_strategy=fa.strategy.text,
                to_be_strategy=fb.strategy.text,
            )
        )
    for fb in b_rest[len(a_rest) :]:
        matches.append(
            FragmentMatch(MatchKind.ADDED, to_be=fb.id, to_be_strategy=fb.strategy.text)
        )
    for fa in a_rest[len(b_rest) :]:
        matches.append(
            FragmentMatch(MatchKind.REMOVED, as_is=fa.id, as_is_strategy=fa.strategy.text)
        )
    return matches


def align(
    as_is: ProcessModel,
    to_be: ProcessModel,
    corr: PlaceCorrespondence | None = None,
    registry: Sequence[Problem] | None = None,
) -> AlignmentReport:
    """Classify every fragment of both models and compute problem coverage.

    With no correspondence the place ids the models share are paired.
    Passing a problem registry additionally fills the per-category rollup.
    """
    if as_is.kind is not ModelKind.AS_IS:
        raise ModelKindError(f"{as_is.name} must be an as-is model")
    if to_be.kind is not ModelKind.TO_BE:
        raise ModelKindError(f"{to_be.name} must be a to-be model")
    for model in (as_is, to_be):
        violations = validate_net(model)
        if violations:
            raise ValidationError(violations)
    if corr is None:
        corr = PlaceCorrespondence.identity(as_is, to_be)
    corr.validate(as_is, to_be)

    groups: dict[tuple, tuple[list[Fragment], list[Fragment]]] = {}
    for fragment in as_is.fragments:
        key = _endpoint_key(fragment, corr)
        groups.setdefault(key, ([], []))[0].append(fragment)
    for fragment in to_be.fragments:
        key = _endpoint_key(fragment, None)
        groups.setdefault(key, ([], []))[1].append(fragment)

    matches: list[FragmentMatch] = []
    for key in sorted(groups):
        a_frags, b_frags = groups[key]
        matches.extend(_pair_group(a_frags, b_frags))
    matches.sort(key=FragmentMatch.sort_key)

    problem_ids: set[str] = set()
    for fragment in as_is.fragments:
        problem_ids.update(fragment.problems)
    for fragment in to_be.fragments:
        problem_ids.update(fragment.resolves)
    coverage = {
        pid: frozenset(f.id for f in to_be.fragments if pid in f.resolves)
        for pid in problem_ids
    }
    uncovered = frozenset(pid for pid, frags in coverage.items() if not frags)

    category_summary: dict[str, frozenset[str]] = {}
    if registry is not None:
        summary = problem_coverage_for(coverage, registry)
        category_summary = summary.categories

    return AlignmentReport(
        matches=tuple(matches),
        coverage=coverage,
        uncovered=uncovered,
        category_summary=category_summary,
    )


def problem_coverage_for(
    coverage: Mapping[str, frozenset[str]], registry: Sequence[Problem]
) -> CoverageSummary:
    """Roll a coverage map up against a problem registry."""
    known = {p.id for p in registry}
    unknown = sorted(set(coverage) - known, key=id_sort_key)
    if unknown:
        raise UnknownProblemError(f"problem ids not in registry: {', '.join(unknown)}")
    problems = {p.id: coverage.get(p.id, frozenset()) for p in registry}
    categories: dict[str, frozenset[str]] = {}
    for problem in registry:
        merged = categories.get(problem.category, frozenset()) | problems[problem.id]
        categories[problem.category] = merged
    uncovered = frozenset(pid for pid, frags in problems.items() if not frags)
    return CoverageSummary(problems=problems, categories=categories, uncovered=uncovered)


def problem_coverage(
    report: AlignmentReport, registry: Sequence[Problem]
) -> CoverageSummary:
    """Per-problem resolving fragments, category rollup, and uncovered list."""
    return problem_coverage_for(report.coverage, registry)


def component_table(
    to_be: ProcessModel, cmap: ComponentMap
) -> tuple[ComponentRow, ...]:
    """One row per to-be fragment plus the "All" row of global components."""
    fragment_ids = to_be.fragment_ids()
    unknown = sorted(set(cmap.entries) - fragment_ids, key=id_sort_key)
    if unknown:
        raise UnknownFragmentError(
            f"component map references unknown fragments: {', '.join(unknown)}"
        )
    rows = [
        ComponentRow(
            fragment=fragment.id,
            components=tuple(sorted(cmap.entries.get(fragment.id, frozenset()))),
        )
        for fragment in to_be.fragments
    ]
    rows.append(ComponentRow(fragment="All", components=tuple(sorted(cmap.global_components))))
    return tuple(rows)
