"""Independent brute-force oracles used to cross-check the library.

These deliberately share no code with the package internals: the
reachability oracle is a dict-based fixpoint closure rather than a queue
BFS, and the similarity oracle re-extracts label sets from scenario fields
by hand.
"""

from __future__ import annotations


def _freeze(marking: dict) -> frozenset:
    return frozenset((place, count) for place, count in marking.items() if count)


def brute_force_markings(model) -> dict[frozenset, dict]:
    """All markings reachable by repeated firing, as a fixpoint closure."""
    initial = {place: count for place, count in model.initial_marking.items()}
    seen: dict[frozenset, dict] = {_freeze(initial): initial}
    changed = True
    while changed:
        changed = False
        for key in list(seen):
            marking = seen[key]
            for fragment in model.fragments:
                if not fragment.sources:
                    continue
                if not all(marking.get(p, 0) >= 1 for p in fragment.sources):
                    continue
                successor = dict(marking)
                for p in fragment.sources:
                    successor[p] = successor.get(p, 0) - 1
                for p in fragment.targets:
                    successor[p] = successor.get(p, 0) + 1
                successor_key = _freeze(successor)
                if successor_key not in seen:
                    seen[successor_key] = successor
                    changed = True
    return seen


def brute_force_fulfilment(model) -> tuple[bool, set[str], int]:
    """(exit reachable, dead fragment ids, marking count) by brute force."""
    markings = brute_force_markings(model)
    exits = {p.id for p in model.places if p.role.value == "exit"}
    exit_reachable = any(
        any(count >= 1 for place, count in key if place in exits)
        for key in markings
    )
    alive: set[str] = set()
    for marking in markings.values():
        for fragment in model.fragments:
            if fragment.sources and all(
                marking.get(p, 0) >= 1 for p in fragment.sources
            ):
                alive.add(fragment.id)
    dead = {f.id for f in model.fragments} - alive
    return exit_reachable, dead, len(markings)


def marking_keys(markings) -> set[frozenset]:
    """Freeze roc Marking values for comparison with the oracle."""
    return {frozenset(m.items()) for m in markings}


def brute_jaccard(a: set, b: set) -> float:
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def scenario_label_sets(scenario) -> tuple[set, set, set, set]:
    """Label extraction done by hand, independent of Scenario.label_sets."""
    goal_labels = set()
    for node in scenario.goal_graph.nodes:
        if node.kind.value == "goal" and node.owner.value == "enterprise":
            goal_labels.add(node.label)
    place_labels = {p.label for p in scenario.to_be.places}
    strategy_labels = {
        " ".join(f.strategy.text.split()).casefold() for f in scenario.to_be.fragments
    }
    components = set(scenario.component_map.global_components)
    for names in scenario.component_map.entries.values():
        components |= set(names)
    return goal_labels, place_labels, strategy_labels, components


def brute_similarity(a, b, weights=(1.0, 1.0, 1.0, 1.0)) -> float:
    total = sum(weights)
    sets_a = scenario_label_sets(a)
    sets_b = scenario_label_sets(b)
    return sum(
        (w / total) * brute_jaccard(sa, sb)
        for w, sa, sb in zip(weights, sets_a, sets_b)
    )


def brute_retrieve(scenarios: dict, query, k: int, weights=(1.0, 1.0, 1.0, 1.0)):
    """Full sort of all pairwise similarities with the ascending-id tie-break."""
    import re

    def natural(sid):
        return tuple(
            int(part) if part.isdigit() else part
            for part in re.split(r"(\d+)", sid)
        )

    scored = [
        (sid, brute_similarity(scenario, query, weights))
        for sid, scenario in scenarios.items()
    ]
    scored.sort(key=lambda pair: (-pair[1], natural(pair[0])))
    return scored[:k]
