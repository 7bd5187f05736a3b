"""Strategy-labeled place/transition nets with token-game semantics.

A process model is a bipartite net: places are business states, fragments are
the transitions between them, and every fragment carries the strategy by
which the step is performed.  Arcs are unweighted (weight 1).  All values are
immutable after construction and every operation is a pure function of its
inputs, so models can be shared freely between threads.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping

from .errors import NotEnabledError, UnknownFragmentError, Violation

#: Default cap on the number of markings explored by `reachable`.
DEFAULT_BOUND = 10_000

_DIGIT_RUN = re.compile(r"(\d+)")


def id_sort_key(identifier: str) -> tuple:
    """Natural ordering key for ids: digit runs compare numerically.

    Guarantees PF2 < PF10 and PF1.1.2 < PF1.2.  Splitting on digit runs
    keeps string parts at even indices and ints at odd indices, so tuples
    from different ids never compare str-to-int.
    """
    return tuple(
        int(part) if idx % 2 else part
        for idx, part in enumerate(_DIGIT_RUN.split(identifier))
    )


class Role(str, Enum):
    START = "start"
    INTERMEDIATE = "intermediate"
    EXIT = "exit"


class ModelKind(str, Enum):
    AS_IS = "asis"
    TO_BE = "tobe"


@dataclass(frozen=True)
class Place:
    """One business state; `role` marks the unique start and the exits."""

    id: str
    label: str
    role: Role = Role.INTERMEDIATE


def normalize_strategy(text: str) -> str:
    """Comparison form of a strategy label: collapsed whitespace, casefolded."""
    return " ".join(text.split()).casefold()


def default_deficiency(text: str) -> bool:
    """Heuristic for problem strategies: labels starting "not " or "manual"."""
    normalized = normalize_strategy(text)
    return normalized.startswith("not ") or normalized.startswith("manual")


@dataclass(frozen=True)
class StrategyLabel:
    """The named manner in which a transition is performed.

    `deficiency` marks a problem strategy in an as-is model; when omitted it
    defaults via :func:`default_deficiency`.  Dataclass equality is exact so
    serialization round-trips; use :meth:`normalized` for comparisons.
    """

    text: str
    deficiency: bool | None = None

    def __post_init__(self):
        if self.deficiency is None:
            object.__setattr__(self, "deficiency", default_deficiency(self.text))

    def normalized(self) -> str:
        return normalize_strategy(self.text)


@dataclass(frozen=True)
class Fragment:
    """A transition in triplet form: sources, targets, strategy.

    `problems` lists the problem ids an as-is fragment exhibits; `resolves`
    lists the problem ids a to-be fragment treats.  A fragment never carries
    both.
    """

    id: str
    sources: frozenset[str]
    targets: frozenset[str]
    strategy: StrategyLabel
    problems: frozenset[str] = frozenset()
    resolves: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "sources", frozenset(self.sources))
        object.__setattr__(self, "targets", frozenset(self.targets))
        object.__setattr__(self, "problems", frozenset(self.problems))
        object.__setattr__(self, "resolves", frozenset(self.resolves))

    def is_self_loop(self) -> bool:
        return self.sources == self.targets


@dataclass(frozen=True, init=False)
class Marking:
    """Token counts keyed by place id; absent places hold zero tokens."""

    _items: tuple[tuple[str, int], ...]

    def __init__(self, tokens: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        pairs = tokens.items() if isinstance(tokens, Mapping) else tokens
        counts: dict[str, int] = {}
        for place, count in pairs:
            counts[place] = counts.get(place, 0) + int(count)
        if any(count < 0 for count in counts.values()):
            raise ValueError("token counts must be nonnegative")
        items = tuple(
            sorted(
                ((p, c) for p, c in counts.items() if c),
                key=lambda item: id_sort_key(item[0]),
            )
        )
        object.__setattr__(self, "_items", items)

    @property
    def tokens(self) -> dict[str, int]:
        return dict(self._items)

    def __getitem__(self, place: str) -> int:
        return self.get(place)

    def get(self, place: str, default: int = 0) -> int:
        for p, c in self._items:
            if p == place:
                return c
        return default

    def items(self) -> tuple[tuple[str, int], ...]:
        return self._items

    def total(self) -> int:
        return sum(c for _, c in self._items)

    def __iter__(self) -> Iterator[str]:
        return iter(p for p, _ in self._items)

    def __bool__(self) -> bool:
        return bool(self._items)


@dataclass(frozen=True)
class ProcessModel:
    """A named net tagged as-is or to-be, with its initial marking."""

    name: str
    kind: ModelKind
    places: tuple[Place, ...]
    fragments: tuple[Fragment, ...]
    initial_marking: Marking = Marking()

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        object.__setattr__(
            self,
            "places",
            tuple(sorted(self.places, key=lambda p: id_sort_key(p.id))),
        )
        object.__setattr__(
            self,
            "fragments",
            tuple(sorted(self.fragments, key=lambda f: id_sort_key(f.id))),
        )

    def place_map(self) -> dict[str, Place]:
        return {p.id: p for p in self.places}

    def fragment_map(self) -> dict[str, Fragment]:
        return {f.id: f for f in self.fragments}

    def place_ids(self) -> frozenset[str]:
        return frozenset(p.id for p in self.places)

    def fragment_ids(self) -> frozenset[str]:
        return frozenset(f.id for f in self.fragments)

    def exit_place_ids(self) -> frozenset[str]:
        return frozenset(p.id for p in self.places if p.role is Role.EXIT)


@dataclass(frozen=True, init=False)
class RefinementTree:
    """A forest of fragment refinements: parent id -> ordered child ids."""

    _children: tuple[tuple[str, tuple[str, ...]], ...]

    def __init__(self, children: Mapping[str, Iterable[str]]):
        items = tuple(
            sorted(
                ((parent, tuple(kids)) for parent, kids in children.items()),
                key=lambda item: id_sort_key(item[0]),
            )
        )
        object.__setattr__(self, "_children", items)

    @property
    def children(self) -> dict[str, tuple[str, ...]]:
        return dict(self._children)

    @property
    def roots(self) -> tuple[str, ...]:
        child_ids = {c for _, kids in self._children for c in kids}
        return tuple(
            sorted(
                (parent for parent, _ in self._children if parent not in child_ids),
                key=id_sort_key,
            )
        )

    def all_ids(self) -> frozenset[str]:
        ids = {parent for parent, _ in self._children}
        ids.update(c for _, kids in self._children for c in kids)
        return frozenset(ids)


@dataclass(frozen=True)
class FulfilmentReport:
    """Outcome of the bounded reachability check.

    When `bound_hit` is False the results are exact for the net.
    """

    exit_reachable: bool
    dead_fragments: frozenset[str]
    explored_markings: int
    bound_hit: bool


def validate_net(model: ProcessModel) -> list[Violation]:
    """Check every structural invariant; an empty list means the net is valid."""
    violations: list[Violation] = []

    seen_places: set[str] = set()
    for place in model.places:
        if place.id in seen_places:
            violations.append(
                Violation("DuplicateId", place.id, "duplicate place id")
            )
        seen_places.add(place.id)

    starts = [p.id for p in model.places if p.role is Role.START]
    exits = [p.id for p in model.places if p.role is Role.EXIT]
    if not starts:
        violations.append(
            Violation("NoStartPlace", model.name, "model has no start place")
        )
    elif len(starts) > 1:
        violations.append(
            Violation(
                "MultipleStartPlaces",
                ", ".join(starts),
                "model has more than one start place",
            )
        )
    if not exits:
        violations.append(
            Violation("NoExitPlace", model.name, "model has no exit place")
        )

    seen_fragments: set[str] = set()
    for fragment in model.fragments:
        if fragment.id in seen_fragments:
            violations.append(
                Violation("DuplicateId", fragment.id, "duplicate fragment id")
            )
        seen_fragments.add(fragment.id)

        if not fragment.sources or not fragment.targets:
            violations.append(
                Violation(
                    "EmptyEndpoints",
                    fragment.id,
                    "fragment must have at least one source and one target",
                )
            )
        for pid in sorted(fragment.sources | fragment.targets, key=id_sort_key):
            if pid not in seen_places:
                violations.append(
                    Violation(
                        "DanglingPlaceRef",
                        fragment.id,
                        f"fragment references unknown place {pid}",
                    )
                )
        if not fragment.strategy.text.strip():
            violations.append(
                Violation("EmptyStrategy", fragment.id, "strategy text is empty")
            )
        if fragment.problems and fragment.resolves:
            violations.append(
                Violation(
                    "ProblemResolveClash",
                    fragment.id,
                    "fragment carries both problems and resolves links",
                )
            )
        if model.kind is ModelKind.AS_IS and fragment.resolves:
            violations.append(
                Violation(
                    "KindMismatch",
                    fragment.id,
                    "as-is fragment must not carry resolves links",
                )
            )
        if model.kind is ModelKind.TO_BE and fragment.problems:
            violations.append(
                Violation(
                    "KindMismatch",
                    fragment.id,
                    "to-be fragment must not carry problems links",
                )
            )

    place_ids = {p.id for p in model.places}
    for pid in model.initial_marking:
        if pid not in place_ids:
            violations.append(
                Violation(
                    "DanglingPlaceRef",
                    "marking",
                    f"initial marking references unknown place {pid}",
                )
            )
    return violations


def enabled(model: ProcessModel, marking: Marking) -> frozenset[str]:
    """Fragment ids whose every source place holds at least one token."""
    return frozenset(
        f.id
        for f in model.fragments
        if f.sources and all(marking.get(p) >= 1 for p in f.sources)
    )


def fire(model: ProcessModel, marking: Marking, fragment_id: str) -> Marking:
    """Fire one fragment: a token leaves each source, one lands on each target."""
    fragment = model.fragment_map().get(fragment_id)
    if fragment is None:
        raise UnknownFragmentError(f"unknown fragment {fragment_id}")
    if not all(marking.get(p) >= 1 for p in fragment.sources):
        raise NotEnabledError(
            f"fragment {fragment_id} is not enabled in marking {marking.tokens}"
        )
    counts = marking.tokens
    for pid in fragment.sources:
        counts[pid] = counts.get(pid, 0) - 1
    for pid in fragment.targets:
        counts[pid] = counts.get(pid, 0) + 1
    return Marking(counts)


def _explore(model: ProcessModel, bound: int) -> tuple[list[Marking], bool]:
    """Deterministic breadth-first closure, capped at `bound` markings.

    Fragments are tried in natural id order and the frontier is FIFO, so the
    discovered prefix is identical across runs and reachable(b1) is always a
    subset of reachable(b2) for b1 <= b2.
    """
    if bound < 1:
        raise ValueError("bound must be a positive integer")
    initial = model.initial_marking
    seen: set[Marking] = {initial}
    order: list[Marking] = [initial]
    queue: deque[Marking] = deque([initial])
    bound_hit = False
    while queue:
        marking = queue.popleft()
        for fragment in model.fragments:
            if not fragment.sources:
                continue
            if not all(marking.get(p) >= 1 for p in fragment.sources):
                continue
            successor = fire(model, marking, fragment.id)
            if successor in seen:
                continue
            if len(seen) >= bound:
                bound_hit = True
                continue
            seen.add(successor)
            order.append(successor)
            queue.append(successor)
        if bound_hit and len(seen) >= bound:
            break
    return order, bound_hit


def reachable(model: ProcessModel, bound: int = DEFAULT_BOUND) -> frozenset[Marking]:
    """All markings reachable from the initial marking, up to `bound`."""
    order, _ = _explore(model, bound)
    return frozenset(order)


def check_fulfilment(
    model: ProcessModel, bound: int = DEFAULT_BOUND
) -> FulfilmentReport:
    """Can the process reach an exit state, and is every fragment live?"""
    order, bound_hit = _explore(model, bound)
    exit_ids = model.exit_place_ids()
    exit_reachable = any(
        any(marking.get(pid) >= 1 for pid in exit_ids) for marking in order
    )
    ever_enabled: set[str] = set()
    for marking in order:
        ever_enabled.update(enabled(model, marking))
    dead = frozenset(model.fragment_ids() - ever_enabled)
    return FulfilmentReport(
        exit_reachable=exit_reachable,
        dead_fragments=dead,
        explored_markings=len(order),
        bound_hit=bound_hit,
    )


def triplet(model: ProcessModel, fragment_id: str) -> str:
    """Render a fragment in textual triplet notation using place labels.

    Targets consisting solely of exit places render as the bare word
    ``exit``, e.g. ``PF4 :<(Stock), exit, manual order processing strategy>``.
    """
    fragment = model.fragment_map().get(fragment_id)
    if fragment is None:
        raise UnknownFragmentError(f"unknown fragment {fragment_id}")
    places = model.place_map()

    def label_list(pids: frozenset[str]) -> str:
        labels = [
            places[p].label if p in places else p
            for p in sorted(pids, key=id_sort_key)
        ]
        return "({})".format(", ".join(labels))

    all_exit = fragment.targets and all(
        p in places and places[p].role is Role.EXIT for p in fragment.targets
    )
    target_text = "exit" if all_exit else label_list(fragment.targets)
    return "{} :<{}, {}, {}>".format(
        fragment.id, label_list(fragment.sources), target_text, fragment.strategy.text
    )


def _refinement_root(
    child_to_parent: dict[str, str], fragment_id: str
) -> str | None:
    """Topmost ancestor of a fragment, or None when the chain is cyclic."""
    seen = {fragment_id}
    current = fragment_id
    while current in child_to_parent:
        current = child_to_parent[current]
        if current in seen:
            return None
        seen.add(current)
    return current


def validate_refinement(model: ProcessModel, tree: RefinementTree) -> list[Violation]:
    """Check the dotted-id, forest, and endpoint-preservation invariants.

    Endpoints are compared against the root of each refinement chain: every
    refinement, however deep, must keep the original fragment's sources and
    targets.
    """
    violations: list[Violation] = []
    fragments = model.fragment_map()
    children = tree.children

    for fid in sorted(tree.all_ids(), key=id_sort_key):
        if fid not in fragments:
            violations.append(
                Violation(
                    "UnknownFragment", fid, "refinement id not present in model"
                )
            )

    child_to_parent: dict[str, str] = {}
    for parent, kids in children.items():
        seen_kids: set[str] = set()
        for child in kids:
            if child in seen_kids or child in child_to_parent:
                violations.append(
                    Violation(
                        "MultipleParents",
                        child,
                        "fragment is listed as a child more than once",
                    )
                )
                continue
            seen_kids.add(child)
            child_to_parent[child] = parent

    for child in sorted(child_to_parent, key=id_sort_key):
        if _refinement_root(child_to_parent, child) is None:
            violations.append(
                Violation(
                    "RefinementCycle", child, "refinement chain contains a cycle"
                )
            )
            # one report per cycle is enough
            break

    for parent, kids in children.items():
        for child in kids:
            prefix = parent + "."
            remainder = child[len(prefix) :] if child.startswith(prefix) else ""
            if not remainder or "." in remainder:
                violations.append(
                    Violation(
                        "IdMismatch",
                        child,
                        f"child id must extend {parent} by one dotted segment",
                    )
                )

    for child in sorted(child_to_parent, key=id_sort_key):
        root = _refinement_root(child_to_parent, child)
        if root is None or root not in fragments or child not in fragments:
            continue
        child_frag = fragments[child]
        root_frag = fragments[root]
        if (
            child_frag.sources != root_frag.sources
            or child_frag.targets != root_frag.targets
        ):
            violations.append(
                Violation(
                    "EndpointMismatch",
                    child,
                    f"refinement must keep the endpoints of {root}",
                )
            )
    return violations
