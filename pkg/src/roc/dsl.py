"""Text formats for every artifact kind, one small DSL per file extension.

    .proc      process "name" kind (asis|tobe) { place/marking/fragment ... }
    .goals     goals { stakeholder/node/edge ... }
    .problems  problem <id> <category-string> <description-string>
    .cmap      map <fragment-id> <string>,...  |  map-all <string>,...
    .corr      corr <from-id> (<to-id> | <label-string>)
    .refine    refine <parent-id> { <child-id>; ... }

Comments run from ``#`` to end of line in every format.  Ids match
``[A-Za-z][A-Za-z0-9_.]*``; strings are double-quoted with backslash
escapes.  Parsing either succeeds or raises exactly one ParseError with a
1-based source span; semantic problems surface as ValidationError carrying
the violations.  Serializers emit a canonical form: parse-then-serialize is
idempotent, and serializing a parsed value reproduces it exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .alignment import ComponentMap, PlaceCorrespondence, Problem
from .errors import ParseError, SourceSpan, ValidationError
from .goals import (
    EdgeKind,
    GoalEdge,
    GoalGraph,
    GoalNode,
    Level,
    NodeKind,
    Owner,
    Ref,
    Stakeholder,
    validate_graph,
)
from .net import (
    Fragment,
    Marking,
    ModelKind,
    Place,
    ProcessModel,
    RefinementTree,
    Role,
    StrategyLabel,
    default_deficiency,
    id_sort_key,
    validate_net,
)

ID_RE = re.compile(r"[A-Za-z][A-Za-z0-9_.]*\Z")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9_.\-]*")
_INT_RE = re.compile(r"[0-9]+")
_PUNCT = {"{", "}", "(", ")", ":", ";", ","}

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}
_UNESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t"}


@dataclass(frozen=True)
class Token:
    kind: str  # word | string | int | punct | eof
    text: str
    value: object
    line: int
    column: int

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        if self.kind == "string":
            shown = self.text if len(self.text) <= 22 else self.text[:19] + "..."
            return f"string {shown}"
        return f"'{self.text}'"


def _tokenize(text: str, file: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, col = 0, 1, 1
    size = len(text)

    def span(ln: int, cl: int) -> SourceSpan:
        return SourceSpan(file, ln, cl)

    while pos < size:
        ch = text[pos]
        if ch == "\n":
            pos += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            pos += 1
            col += 1
            continue
        if ch == "#":
            while pos < size and text[pos] != "\n":
                pos += 1
            continue
        start_line, start_col = line, col
        if ch == "-" and text.startswith("->", pos):
            tokens.append(Token("punct", "->", "->", start_line, start_col))
            pos += 2
            col += 2
            continue
        if ch in _PUNCT:
            tokens.append(Token("punct", ch, ch, start_line, start_col))
            pos += 1
            col += 1
            continue
        if ch == '"':
            pos += 1
            col += 1
            value_chars: list[str] = []
            while True:
                if pos >= size:
                    raise ParseError(span(line, col), "closing '\"'", "end of input")
                ch = text[pos]
                if ch == "\n":
                    raise ParseError(span(line, col), "closing '\"'", "end of line")
                if ch == '"':
                    pos += 1
                    col += 1
                    break
                if ch == "\\":
                    if pos + 1 >= size:
                        raise ParseError(
                            span(line, col), "an escape character", "end of input"
                        )
                    esc = text[pos + 1]
                    if esc not in _ESCAPES:
                        raise ParseError(
                            span(line, col), "a valid escape", f"'\\{esc}'"
                        )
                    value_chars.append(_ESCAPES[esc])
                    pos += 2
                    col += 2
                    continue
                value_chars.append(ch)
                pos += 1
                col += 1
            value = "".join(value_chars)
            tokens.append(
                Token("string", serialize_string(value), value, start_line, start_col)
            )
            continue
        match = _WORD_RE.match(text, pos)
        if match:
            word = match.group(0)
            tokens.append(Token("word", word, word, start_line, start_col))
            pos = match.end()
            col += len(word)
            continue
        match = _INT_RE.match(text, pos)
        if match:
            digits = match.group(0)
            tokens.append(Token("int", digits, int(digits), start_line, start_col))
            pos = match.end()
            col += len(digits)
            continue
        raise ParseError(span(line, col), "a token", f"{ch!r}")
    tokens.append(Token("eof", "", None, line, col))
    return tokens


def serialize_string(value: str) -> str:
    return '"' + "".join(_UNESCAPES.get(ch, ch) for ch in value) + '"'


class _Parser:
    def __init__(self, text: str, file: str):
        self.file = file
        self.tokens = _tokenize(text, file)
        self.index = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        if token.kind != "eof":
            self.index += 1
        return token

    def fail(self, expected: str, token: Token | None = None) -> "ParseError":
        token = token or self.peek()
        raise ParseError(
            SourceSpan(self.file, token.line, token.column), expected, token.describe()
        )

    def expect_punct(self, symbol: str) -> Token:
        token = self.peek()
        if token.kind == "punct" and token.value == symbol:
            return self.advance()
        self.fail(f"'{symbol}'")

    def accept_punct(self, symbol: str) -> bool:
        token = self.peek()
        if token.kind == "punct" and token.value == symbol:
            self.advance()
            return True
        return False

    def expect_word(self, *choices: str) -> str:
        token = self.peek()
        if token.kind == "word" and (not choices or token.value in choices):
            self.advance()
            return str(token.value)
        self.fail(" or ".join(f"'{c}'" for c in choices) or "a word")

    def at_word(self, *choices: str) -> bool:
        token = self.peek()
        return token.kind == "word" and token.value in choices

    def expect_id(self) -> str:
        token = self.peek()
        if token.kind == "word" and ID_RE.match(str(token.value)):
            self.advance()
            return str(token.value)
        self.fail("an identifier")

    def expect_string(self) -> str:
        token = self.peek()
        if token.kind == "string":
            self.advance()
            return str(token.value)
        self.fail("a string")

    def expect_int(self) -> int:
        token = self.peek()
        if token.kind == "int":
            self.advance()
            return int(token.value)
        self.fail("an integer")

    def expect_eof(self) -> None:
        token = self.peek()
        if token.kind != "eof":
            self.fail("end of input")

    def id_list(self) -> list[str]:
        ids = [self.expect_id()]
        while self.accept_punct(","):
            ids.append(self.expect_id())
        return ids

    def string_list(self) -> list[str]:
        values = [self.expect_string()]
        while self.accept_punct(","):
            values.append(self.expect_string())
        return values


_EXIT_TARGET = ("__exit__",)


def parse_process(
    text: str, file: str = "<input>", validate: bool = True
) -> ProcessModel:
    """Parse a .proc file; the result passes validate_net or this raises."""
    parser = _Parser(text, file)
    parser.expect_word("process")
    name = parser.expect_string()
    parser.expect_word("kind")
    kind = ModelKind(parser.expect_word("asis", "tobe"))
    parser.expect_punct("{")

    places: list[Place] = []
    fragments: list[tuple] = []
    marking_entries: list[tuple[str, int]] | None = None

    while not parser.accept_punct("}"):
        keyword_token = parser.peek()
        keyword = parser.expect_word("place", "marking", "fragment")
        if keyword == "place":
            pid = parser.expect_id()
            label = parser.expect_string()
            role = Role.INTERMEDIATE
            if parser.at_word("start", "exit"):
                role = Role(parser.expect_word("start", "exit"))
            parser.expect_punct(";")
            places.append(Place(pid, label, role))
        elif keyword == "marking":
            if marking_entries is not None:
                parser.fail("at most one marking block", keyword_token)
            marking_entries = []
            parser.expect_punct("{")
            while not parser.accept_punct("}"):
                pid = parser.expect_id()
                parser.expect_punct(":")
                marking_entries.append((pid, parser.expect_int()))
        else:
            fid = parser.expect_id()
            parser.expect_punct(":")
            parser.expect_punct("(")
            sources = parser.id_list()
            parser.expect_punct(")")
            parser.expect_punct("->")
            if parser.at_word("exit"):
                parser.expect_word("exit")
                targets: tuple | list = _EXIT_TARGET
            else:
                parser.expect_punct("(")
                targets = parser.id_list()
                parser.expect_punct(")")
            parser.expect_word("strategy")
            strategy_text = parser.expect_string()
            deficient = False
            problems: list[str] = []
            resolves: list[str] = []
            seen_flags: set[str] = set()
            while parser.at_word("deficient", "problems", "resolves"):
                flag_token = parser.peek()
                flag = parser.expect_word("deficient", "problems", "resolves")
                if flag in seen_flags:
                    parser.fail("';'", flag_token)
                seen_flags.add(flag)
                if flag == "deficient":
                    deficient = True
                elif flag == "problems":
                    problems = parser.id_list()
                else:
                    resolves = parser.id_list()
            parser.expect_punct(";")
            fragments.append(
                (fid, sources, targets, strategy_text, deficient, problems, resolves)
            )
    parser.expect_eof()

    exit_ids = [p.id for p in places if p.role is Role.EXIT]
    built = []
    for fid, sources, targets, strategy_text, deficient, problems, resolves in fragments:
        resolved_targets = exit_ids if targets is _EXIT_TARGET else targets
        built.append(
            Fragment(
                id=fid,
                sources=frozenset(sources),
                targets=frozenset(resolved_targets),
                strategy=StrategyLabel(
                    strategy_text, True if deficient else None
                ),
                problems=frozenset(problems),
                resolves=frozenset(resolves),
            )
        )
    model = ProcessModel(
        name=name,
        kind=kind,
        places=tuple(places),
        fragments=tuple(built),
        initial_marking=Marking(marking_entries or ()),
    )
    if validate:
        violations = validate_net(model)
        if violations:
            raise ValidationError(violations)
    return model


def serialize_process(model: ProcessModel) -> str:
    """Canonical .proc text: sorted places and fragments, minimal flags."""
    lines = [
        f"process {serialize_string(model.name)} kind {model.kind.value} {{"
    ]
    for place in model.places:
        role = "" if place.role is Role.INTERMEDIATE else f" {place.role.value}"
        lines.append(
            f"  place {place.id} {serialize_string(place.label)}{role};"
        )
    if model.initial_marking:
        entries = " ".join(f"{p}:{c}" for p, c in model.initial_marking.items())
        lines.append(f"  marking {{ {entries} }}")
    exit_ids = frozenset(p.id for p in model.places if p.role is Role.EXIT)
    for fragment in model.fragments:
        sources = ", ".join(sorted(fragment.sources, key=id_sort_key))
        if fragment.targets and fragment.targets == exit_ids:
            target_text = "exit"
        else:
            target_text = "({})".format(
                ", ".join(sorted(fragment.targets, key=id_sort_key))
            )
        parts = [
            f"  fragment {fragment.id} : ({sources}) -> {target_text}",
            f"strategy {serialize_string(fragment.strategy.text)}",
        ]
        if fragment.strategy.deficiency and not default_deficiency(
            fragment.strategy.text
        ):
            parts.append("deficient")
        if fragment.problems:
            parts.append(
                "problems " + ", ".join(sorted(fragment.problems, key=id_sort_key))
            )
        if fragment.resolves:
            parts.append(
                "resolves " + ", ".join(sorted(fragment.resolves, key=id_sort_key))
            )
        lines.append(" ".join(parts) + ";")
    lines.append("}")
    return "\n".join(lines) + "\n"


_NODE_KINDS = tuple(k.value for k in NodeKind)


def parse_goals(text: str, file: str = "<input>", validate: bool = True) -> GoalGraph:
    """Parse a .goals file; the result passes validate_graph or this raises."""
    parser = _Parser(text, file)
    parser.expect_word("goals")
    parser.expect_punct("{")

    stakeholders: list[Stakeholder] = []
    nodes: list[GoalNode] = []
    edges: list[GoalEdge] = []

    while not parser.accept_punct("}"):
        keyword = parser.expect_word("stakeholder", "node", "edge")
        if keyword == "stakeholder":
            sid = parser.expect_id()
            name = parser.expect_string()
            category = ""
            if parser.peek().kind == "string":
                category = parser.expect_string()
            parser.expect_punct(";")
            stakeholders.append(Stakeholder(sid, name, category))
        elif keyword == "node":
            nid = parser.expect_id()
            kind = NodeKind(parser.expect_word(*_NODE_KINDS))
            label = parser.expect_string()
            level = Level.UNSPECIFIED
            owner = Owner.ENTERPRISE
            change = False
            seen: set[str] = set()
            while parser.at_word(
                "strategic", "operational", "enterprise", "erp", "change"
            ):
                flag_token = parser.peek()
                flag = parser.expect_word(
                    "strategic", "operational", "enterprise", "erp", "change"
                )
                group = (
                    "level"
                    if flag in ("strategic", "operational")
                    else "owner"
                    if flag in ("enterprise", "erp")
                    else "change"
                )
                if group in seen:
                    parser.fail("';'", flag_token)
                seen.add(group)
                if group == "level":
                    level = Level(flag)
                elif group == "owner":
                    owner = Owner(flag)
                else:
                    change = True
            parser.expect_punct(";")
            nodes.append(GoalNode(nid, label, kind, level, owner, change))
        else:
            src = parser.expect_id()
            kind = EdgeKind(
                parser.expect_word(*(k.value for k in EdgeKind))
            )
            if kind is EdgeKind.REALISED_BY:
                ref = Ref.parse(parser.expect_string())
                parser.expect_punct(";")
                edges.append(GoalEdge(src, kind, realises=ref))
            elif kind is EdgeKind.DETERMINED_BY:
                stakeholder = parser.expect_id()
                dst = parser.expect_id()
                parser.expect_punct(";")
                edges.append(GoalEdge(src, kind, dst, stakeholder=stakeholder))
            else:
                dst = parser.expect_id()
                parser.expect_punct(";")
                edges.append(GoalEdge(src, kind, dst))
    parser.expect_eof()

    graph = GoalGraph(tuple(nodes), tuple(edges), tuple(stakeholders))
    if validate:
        violations = validate_graph(graph)
        if violations:
            raise ValidationError(violations)
    return graph


def serialize_goals(graph: GoalGraph) -> str:
    """Canonical .goals text: stakeholders, nodes, then edges, each sorted."""
    lines = ["goals {"]
    for sh in graph.stakeholders:
        category = f" {serialize_string(sh.category)}" if sh.category else ""
        lines.append(f"  stakeholder {sh.id} {serialize_string(sh.name)}{category};")
    for node in graph.nodes:
        parts = [f"  node {node.id} {node.kind.value} {serialize_string(node.label)}"]
        if node.level is not Level.UNSPECIFIED:
            parts.append(node.level.value)
        if node.owner is Owner.ERP:
            parts.append("erp")
        if node.change:
            parts.append("change")
        lines.append(" ".join(parts) + ";")
    for edge in graph.edges:
        if edge.kind is EdgeKind.REALISED_BY:
            rendered = f"  edge {edge.src} realisedby {serialize_string(str(edge.realises))}"
        elif edge.kind is EdgeKind.DETERMINED_BY:
            rendered = f"  edge {edge.src} determinedby {edge.stakeholder} {edge.dst}"
        else:
            rendered = f"  edge {edge.src} {edge.kind.value} {edge.dst}"
        lines.append(rendered + ";")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_registry(text: str, file: str = "<input>") -> list[Problem]:
    """Parse a .problems file into a problem registry (order preserved)."""
    parser = _Parser(text, file)
    problems: list[Problem] = []
    seen: set[str] = set()
    while parser.peek().kind != "eof":
        parser.expect_word("problem")
        id_token = parser.peek()
        pid = parser.expect_id()
        if pid in seen:
            parser.fail("a fresh problem id", id_token)
        seen.add(pid)
        category = parser.expect_string()
        description = parser.expect_string()
        problems.append(Problem(pid, category, description))
    return problems


def serialize_registry(problems: list[Problem]) -> str:
    lines = [
        f"problem {p.id} {serialize_string(p.category)} {serialize_string(p.description)}"
        for p in problems
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_components(text: str, file: str = "<input>") -> ComponentMap:
    """Parse a .cmap file of per-fragment and global component names."""
    parser = _Parser(text, file)
    entries: dict[str, frozenset[str]] = {}
    global_components: frozenset[str] | None = None
    while parser.peek().kind != "eof":
        keyword_token = parser.peek()
        keyword = parser.expect_word("map", "map-all")
        if keyword == "map":
            id_token = parser.peek()
            fid = parser.expect_id()
            if fid in entries:
                parser.fail("a fresh fragment id", id_token)
            entries[fid] = frozenset(parser.string_list())
        else:
            if global_components is not None:
                parser.fail("at most one map-all line", keyword_token)
            global_components = frozenset(parser.string_list())
    return ComponentMap(entries, global_components or frozenset())


def serialize_components(cmap: ComponentMap) -> str:
    lines = []
    for fid in sorted(cmap.entries, key=id_sort_key):
        names = ", ".join(serialize_string(n) for n in sorted(cmap.entries[fid]))
        lines.append(f"map {fid} {names}")
    if cmap.global_components:
        names = ", ".join(
            serialize_string(n) for n in sorted(cmap.global_components)
        )
        lines.append(f"map-all {names}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_correspondence(text: str, file: str = "<input>") -> PlaceCorrespondence:
    """Parse a .corr file; values may be place ids or quoted new labels."""
    parser = _Parser(text, file)
    pairs: dict[str, str] = {}
    while parser.peek().kind != "eof":
        parser.expect_word("corr")
        id_token = parser.peek()
        src = parser.expect_id()
        if src in pairs:
            parser.fail("a fresh place id", id_token)
        if parser.peek().kind == "string":
            pairs[src] = parser.expect_string()
        else:
            pairs[src] = parser.expect_id()
    return PlaceCorrespondence(pairs)


def serialize_correspondence(corr: PlaceCorrespondence) -> str:
    lines = []
    for src, dst in corr.pairs.items():
        rendered = dst if ID_RE.match(dst) else serialize_string(dst)
        lines.append(f"corr {src} {rendered}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_refinement(text: str, file: str = "<input>") -> RefinementTree:
    """Parse a .refine file of parent -> ordered children blocks."""
    parser = _Parser(text, file)
    children: dict[str, tuple[str, ...]] = {}
    while parser.peek().kind != "eof":
        parser.expect_word("refine")
        id_token = parser.peek()
        parent = parser.expect_id()
        if parent in children:
            parser.fail("a fresh parent id", id_token)
        parser.expect_punct("{")
        kids: list[str] = []
        while not parser.accept_punct("}"):
            kids.append(parser.expect_id())
            parser.expect_punct(";")
        children[parent] = tuple(kids)
    return RefinementTree(children)


def serialize_refinement(tree: RefinementTree) -> str:
    lines = []
    for parent, kids in tree.children.items():
        body = " ".join(f"{kid};" for kid in kids)
        lines.append(f"refine {parent} {{ {body} }}")
    return "\n".join(lines) + ("\n" if lines else "")
