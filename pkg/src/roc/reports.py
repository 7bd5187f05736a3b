"""Rendering and parse-back of analysis results.

Two formats: ``plain`` is a fixed-layout text table meant for terminals and
golden files; ``structured`` is a JSON document mirroring the report fields
exactly, with stable ordering, and can be parsed back into an equal report.
"""

from __future__ import annotations

import json

from .alignment import (
    AlignmentReport,
    ComponentRow,
    FragmentMatch,
    MatchKind,
)
from .errors import ParseError, SourceSpan, UnknownFormatError
from .goals import SupportReport
from .net import FulfilmentReport, id_sort_key

FORMATS = ("plain", "structured")


def _match_strategy_cell(match: FragmentMatch) -> str:
    if match.kind is MatchKind.STRATEGY_UPGRADE:
        return f"{match.as_is_strategy} -> {match.to_be_strategy}"
    if match.kind is MatchKind.ADDED:
        return match.to_be_strategy or ""
    return match.as_is_strategy or ""


def _render_alignment_plain(report: AlignmentReport) -> str:
    header = ("kind", "as-is", "to-be", "strategy")
    rows = [
        (
            match.kind.value,
            match.as_is or "-",
            match.to_be or "-",
            _match_strategy_cell(match),
        )
        for match in report.matches
    ]
    widths = [
        max(len(header[col]), *(len(row[col]) for row in rows), 1) if rows else len(header[col])
        for col in range(4)
    ]

    def format_row(cells) -> str:
        return "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(cells)).rstrip()

    lines = [format_row(header)]
    lines.extend(format_row(row) for row in rows)
    lines.append(
        "summary  unchanged={}  strategy-upgrade={}  added={}  removed={}".format(
            report.count(MatchKind.UNCHANGED),
            report.count(MatchKind.STRATEGY_UPGRADE),
            report.count(MatchKind.ADDED),
            report.count(MatchKind.REMOVED),
        )
    )
    if report.coverage:
        lines.append("coverage")
        for pid in sorted(report.coverage, key=id_sort_key):
            frags = sorted(report.coverage[pid], key=id_sort_key)
            lines.append(f"  {pid} <- {', '.join(frags) if frags else '(none)'}")
        uncovered = sorted(report.uncovered, key=id_sort_key)
        lines.append(f"uncovered  {', '.join(uncovered) if uncovered else '(none)'}")
    if report.category_summary:
        lines.append("categories")
        for category in sorted(report.category_summary):
            frags = sorted(report.category_summary[category], key=id_sort_key)
            lines.append(
                f"  {category} <- {', '.join(frags) if frags else '(none)'}"
            )
    return "\n".join(lines) + "\n"


def alignment_to_document(report: AlignmentReport) -> dict:
    """The structured form: plain data mirroring the report fields."""
    return {
        "matches": [
            {
                "kind": match.kind.value,
                "as_is": match.as_is,
                "to_be": match.to_be,
                "as_is_strategy": match.as_is_strategy,
                "to_be_strategy": match.to_be_strategy,
            }
            for match in report.matches
        ],
        "coverage": {
            pid: sorted(report.coverage[pid], key=id_sort_key)
            for pid in sorted(report.coverage, key=id_sort_key)
        },
        "uncovered": sorted(report.uncovered, key=id_sort_key),
        "category_summary": {
            category: sorted(frags, key=id_sort_key)
            for category, frags in sorted(report.category_summary.items())
        },
    }


def alignment_from_document(document: dict) -> AlignmentReport:
    matches = tuple(
        FragmentMatch(
            kind=MatchKind(entry["kind"]),
            as_is=entry.get("as_is"),
            to_be=entry.get("to_be"),
            as_is_strategy=entry.get("as_is_strategy"),
            to_be_strategy=entry.get("to_be_strategy"),
        )
        for entry in document["matches"]
    )
    return AlignmentReport(
        matches=matches,
        coverage={
            pid: frozenset(frags) for pid, frags in document["coverage"].items()
        },
        uncovered=frozenset(document["uncovered"]),
        category_summary={
            category: frozenset(frags)
            for category, frags in document["category_summary"].items()
        },
    )


def render_alignment(report: AlignmentReport, format: str = "plain") -> str:
    if format == "plain":
        return _render_alignment_plain(report)
    if format == "structured":
        return json.dumps(alignment_to_document(report), indent=2) + "\n"
    raise UnknownFormatError(f"unknown report format {format!r}")


def parse_alignment(text: str, file: str = "<input>") -> AlignmentReport:
    """Parse the structured format back into an alignment report."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(
            SourceSpan(file, err.lineno, err.colno),
            "a structured alignment report",
            "malformed JSON",
        ) from None
    try:
        return alignment_from_document(document)
    except (KeyError, TypeError, ValueError) as err:
        raise ParseError(
            SourceSpan(file, 1, 1), "a structured alignment report", str(err)
        ) from None


def render_components(rows: tuple[ComponentRow, ...]) -> str:
    lines = [
        f"{row.fragment} -> {', '.join(row.components)}".rstrip() for row in rows
    ]
    return "\n".join(lines) + "\n"


def render_fulfilment(report: FulfilmentReport) -> str:
    dead = ", ".join(sorted(report.dead_fragments, key=id_sort_key)) or "(none)"
    lines = [
        f"exit reachable: {'yes' if report.exit_reachable else 'no'}",
        f"dead fragments: {dead}",
        f"explored markings: {report.explored_markings}",
        f"bound hit: {'yes' if report.bound_hit else 'no'}",
    ]
    return "\n".join(lines) + "\n"


def render_support(report: SupportReport) -> str:
    lines = []
    for goal in sorted(report.supported, key=id_sort_key):
        supporters = ", ".join(report.supported[goal])
        lines.append(f"supported  {goal} <- {supporters}")
    for goal in report.unsupported:
        lines.append(f"unsupported  {goal}")
    if not lines:
        lines.append("no enterprise leaf goals to check")
    return "\n".join(lines) + "\n"
