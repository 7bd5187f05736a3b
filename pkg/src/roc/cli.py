"""Command-line front end driving the elicit -> specify -> validate -> reuse
pipeline.

Exit codes: 0 success, 1 validation findings (violations, gaps, unsupported
goals, case-base conflicts), 2 usage or parse errors.  Results go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import casebase as cb
from . import dsl, reports
from .alignment import align, component_table
from .dot import export_dot
from .errors import ParseError, RocError, ValidationError
from .goals import support_check, validate_graph
from .net import DEFAULT_BOUND, check_fulfilment, validate_net, validate_refinement

DEFAULT_CASEBASE = "./casebase"


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_process(path: str, validate: bool = True):
    return dsl.parse_process(_read(path), path, validate=validate)


def _load_goals(path: str, validate: bool = True):
    return dsl.parse_goals(_read(path), path, validate=validate)


def _casebase_dir(args) -> str:
    return args.casebase or os.environ.get("ROC_CASEBASE") or DEFAULT_CASEBASE


def cmd_validate(args) -> int:
    findings = 0
    for path in args.models:
        suffix = Path(path).suffix
        if suffix == ".proc":
            violations = validate_net(_load_process(path, validate=False))
        elif suffix == ".goals":
            violations = validate_graph(_load_goals(path, validate=False))
        else:
            print(f"error: cannot validate {path}: unknown extension", file=sys.stderr)
            return 2
        if violations:
            findings += len(violations)
            print(f"{path}: {len(violations)} violation(s)")
            for violation in violations:
                print(f"{path}: {violation}", file=sys.stderr)
        else:
            print(f"{path}: ok")
    return 1 if findings else 0


def cmd_fulfil(args) -> int:
    report = check_fulfilment(_load_process(args.model), args.bound)
    sys.stdout.write(reports.render_fulfilment(report))
    return 0 if report.exit_reachable and not report.dead_fragments else 1


def cmd_align(args) -> int:
    as_is = _load_process(args.asis)
    to_be = _load_process(args.tobe)
    corr = (
        dsl.parse_correspondence(_read(args.corr), args.corr) if args.corr else None
    )
    registry = (
        dsl.parse_registry(_read(args.problems), args.problems)
        if args.problems
        else None
    )
    report = align(as_is, to_be, corr, registry)
    sys.stdout.write(reports.render_alignment(report, args.format))
    return 1 if report.uncovered else 0


def cmd_components(args) -> int:
    to_be = _load_process(args.tobe)
    cmap = dsl.parse_components(_read(args.map), args.map)
    sys.stdout.write(reports.render_components(component_table(to_be, cmap)))
    return 0


def cmd_goals_check(args) -> int:
    graph = _load_goals(args.goals)
    models = [_load_process(path) for path in args.tobe]
    report = support_check(graph, models)
    sys.stdout.write(reports.render_support(report))
    return 1 if report.unsupported else 0


def cmd_refine_check(args) -> int:
    model = _load_process(args.model)
    tree = dsl.parse_refinement(_read(args.tree), args.tree)
    violations = validate_refinement(model, tree)
    if violations:
        for violation in violations:
            print(violation, file=sys.stderr)
        print(f"{len(violations)} violation(s)")
        return 1
    print("ok")
    return 0


def cmd_export_dot(args) -> int:
    suffix = Path(args.input).suffix
    if suffix == ".proc":
        text = export_dot(_load_process(args.input))
    elif suffix == ".goals":
        text = export_dot(_load_goals(args.input))
    else:
        print(f"error: cannot export {args.input}: unknown extension", file=sys.stderr)
        return 2
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_case_retain(args) -> int:
    as_is = _load_process(args.asis)
    to_be = _load_process(args.tobe)
    registry = (
        dsl.parse_registry(_read(args.problems), args.problems)
        if args.problems
        else None
    )
    metadata = {}
    for item in args.meta or ():
        key, sep, value = item.partition("=")
        if not sep:
            print(f"error: --meta expects KEY=VALUE, got {item!r}", file=sys.stderr)
            return 2
        metadata[key] = value
    scenario = cb.Scenario(
        id=args.id,
        name=args.name or to_be.name,
        goal_graph=_load_goals(args.goals),
        as_is=as_is,
        to_be=to_be,
        report=align(as_is, to_be, registry=registry),
        component_map=dsl.parse_components(_read(args.cmap), args.cmap),
        metadata=metadata,
    )
    base = cb.load(_casebase_dir(args))
    base = cb.retain(base, scenario, overwrite=args.overwrite)
    print(f"retained {scenario.id} ({len(base)} scenario(s))")
    return 0


def _query_scenario(args) -> cb.Scenario:
    if args.query:
        return cb.load_scenario_file(args.query)
    empty_report = reports.alignment_from_document(
        {"matches": [], "coverage": {}, "uncovered": [], "category_summary": {}}
    )
    goal_graph = (
        _load_goals(args.goals) if args.goals else dsl.parse_goals("goals { }")
    )
    to_be = (
        _load_process(args.tobe)
        if args.tobe
        else dsl.parse_process('process "query" kind tobe { }', validate=False)
    )
    cmap = (
        dsl.parse_components(_read(args.cmap), args.cmap)
        if args.cmap
        else dsl.parse_components("")
    )
    as_is = dsl.parse_process('process "query" kind asis { }', validate=False)
    return cb.Scenario(
        id="query",
        name="query",
        goal_graph=goal_graph,
        as_is=as_is,
        to_be=to_be,
        report=empty_report,
        component_map=cmap,
        metadata={},
    )


def cmd_case_retrieve(args) -> int:
    weights = cb.EQUAL_WEIGHTS
    if args.weights:
        parts = args.weights.split(",")
        if len(parts) != 4:
            print(
                "error: --weights expects four comma-separated numbers g,p,s,c",
                file=sys.stderr,
            )
            return 2
        weights = cb.SimilarityWeights(*(float(p) for p in parts))
    base = cb.load(_casebase_dir(args))
    ranked = cb.retrieve(base, _query_scenario(args), args.k, weights)
    for sid, score in ranked:
        print(f"{sid} {score:.6f}")
    return 0


def cmd_case_reuse(args) -> int:
    base = cb.load(_casebase_dir(args))
    scenario = base.scenarios.get(args.id)
    if scenario is None:
        print(f"error: no scenario {args.id} in case base", file=sys.stderr)
        return 1
    corr = (
        dsl.parse_correspondence(_read(args.corr), args.corr)
        if args.corr
        else cb.relabel_identity(scenario.to_be)
    )
    draft = cb.reuse(scenario, corr)
    for pid in sorted(draft.review):
        print(f"review: place {pid} kept its source label", file=sys.stderr)
    text = dsl.serialize_process(draft.model)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roc",
        description="Model, align, and reuse strategy-labeled business processes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check .proc/.goals files for violations")
    p.add_argument("models", nargs="+", metavar="FILE")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("fulfil", help="bounded reachability and liveness check")
    p.add_argument("model", metavar="MODEL.proc")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.set_defaults(handler=cmd_fulfil)

    p = sub.add_parser("align", help="gap analysis between an as-is and a to-be model")
    p.add_argument("asis", metavar="ASIS.proc")
    p.add_argument("tobe", metavar="TOBE.proc")
    p.add_argument("--corr", metavar="FILE.corr")
    p.add_argument("--problems", metavar="FILE.problems")
    p.add_argument("--format", choices=reports.FORMATS, default="plain")
    p.set_defaults(handler=cmd_align)

    p = sub.add_parser("components", help="fragment-to-component table")
    p.add_argument("tobe", metavar="TOBE.proc")
    p.add_argument("map", metavar="FILE.cmap")
    p.set_defaults(handler=cmd_components)

    p = sub.add_parser("goals-check", help="enterprise goal support check")
    p.add_argument("goals", metavar="FILE.goals")
    p.add_argument("tobe", nargs="+", metavar="TOBE.proc")
    p.set_defaults(handler=cmd_goals_check)

    p = sub.add_parser("refine-check", help="validate a fragment refinement tree")
    p.add_argument("model", metavar="MODEL.proc")
    p.add_argument("tree", metavar="FILE.refine")
    p.set_defaults(handler=cmd_refine_check)

    p = sub.add_parser("export-dot", help="render a model or goal graph as DOT")
    p.add_argument("input", metavar="FILE")
    p.add_argument("-o", "--output", metavar="FILE.dot")
    p.set_defaults(handler=cmd_export_dot)

    case = sub.add_parser("case", help="case-base operations (retain/retrieve/reuse)")
    case_sub = case.add_subparsers(dest="case_command", required=True)

    p = case_sub.add_parser("retain", help="store a completed scenario")
    p.add_argument("--casebase", "-C", metavar="DIR")
    p.add_argument("--id", required=True)
    p.add_argument("--name")
    p.add_argument("--goals", required=True, metavar="FILE.goals")
    p.add_argument("--asis", required=True, metavar="FILE.proc")
    p.add_argument("--tobe", required=True, metavar="FILE.proc")
    p.add_argument("--cmap", required=True, metavar="FILE.cmap")
    p.add_argument("--problems", metavar="FILE.problems")
    p.add_argument("--meta", action="append", metavar="KEY=VALUE")
    p.add_argument("--overwrite", action="store_true")
    p.set_defaults(handler=cmd_case_retain)

    p = case_sub.add_parser("retrieve", help="rank stored scenarios against a query")
    p.add_argument("--casebase", "-C", metavar="DIR")
    p.add_argument("--query", metavar="FILE.case")
    p.add_argument("--goals", metavar="FILE.goals")
    p.add_argument("--tobe", metavar="FILE.proc")
    p.add_argument("--cmap", metavar="FILE.cmap")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--weights", metavar="G,P,S,C")
    p.set_defaults(handler=cmd_case_retrieve)

    p = case_sub.add_parser("reuse", help="adapt a stored to-be model to new labels")
    p.add_argument("--casebase", "-C", metavar="DIR")
    p.add_argument("id", metavar="SCENARIO-ID")
    p.add_argument("--corr", metavar="FILE.corr")
    p.add_argument("-o", "--output", metavar="FILE.proc")
    p.set_defaults(handler=cmd_case_reuse)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as err:
        print(err, file=sys.stderr)
        return 2
    except ValidationError as err:
        for violation in err.violations:
            print(violation, file=sys.stderr)
        return 1
    except RocError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
