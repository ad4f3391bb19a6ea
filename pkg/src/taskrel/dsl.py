"""A small declaration language for finite tasks and substrates.

A source file is a sequence of declarations and queries:

    set Bit = {0, 1}
    rel flip : Bit -> Bit = { 0 |-> 1, 1 |-> 0 }
    attr on1 on Bit = { 1 }
    antichain parts on Bit = { {0}, {1} }
    substrate B states Bit
    process cnot : B * B -> B * B = { (0,0) |-> (0,0), ... }
    task roundtrip = flip ; flip
    check possible flip with (B, on1, cnot)
    coarse flip via parts, parts

Task terms combine named relations with the structural generators:
id, swap, copy, discard, match, unit, state, test, sequencing `;`,
tensor `*` and transposition `^T`.  `;` binds looser than `*`; `^T` is
postfix.  Comments run from `#` to end of line.

Resolution is two-pass, so declarations may refer to names introduced
later in the file.  Declaration names share one case-sensitive
namespace; element labels live in their own namespace and may shadow
declaration names freely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from . import coarse as coarse_mod
from . import relcore, substrate
from .coarse import Antichain, CoarseTask
from .errors import (
    DeclarationError,
    LexError,
    ParseError,
    TypecheckError,
    UnknownIdentifier,
)
from .relcore import Atom, Attribute, Elem, FinObject, Task, UNIT
from .substrate import ConstructorCandidate, Process, Substrate, SubstrateAtom

SOURCE_EXTENSION = ".ct"

KEYWORDS = {
    "set", "rel", "attr", "antichain", "on", "substrate", "states",
    "process", "task", "check", "possible", "with", "coarse", "via",
}
STRUCTURAL_BUILTINS = {
    "id": 1, "swap": 2, "copy": 1, "discard": 1, "match": 1, "unit": 1,
}
ATTRIBUTE_BUILTINS = {"state", "test"}
RESERVED = KEYWORDS | set(STRUCTURAL_BUILTINS) | ATTRIBUTE_BUILTINS | {"I"}


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int

    def __repr__(self):
        return f"{self.file}:{self.line}:{self.column}"


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<skip>[ \t\r]+|\#[^\n]*)
      | (?P<newline>\n)
      | (?P<mapsto>\|->)
      | (?P<arrow>->)
      | (?P<transpose>\^T)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<number>[0-9]+)
      | (?P<lbrace>\{) | (?P<rbrace>\})
      | (?P<lparen>\() | (?P<rparen>\))
      | (?P<comma>,) | (?P<semi>;) | (?P<star>\*)
      | (?P<colon>:) | (?P<equals>=)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


def tokenize(text: str, filename: str = "<input>") -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(filename, line, pos - line_start + 1, 1)
            raise LexError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind != "skip":
            span = SourceSpan(filename, line, m.start() - line_start + 1, len(m.group()))
            tokens.append(Token(kind, m.group(), span))
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(filename, line, pos - line_start + 1, 0)))
    return tokens


# ---------------------------------------------------------------------------
# Syntax tree
# ---------------------------------------------------------------------------


def _span_field():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ObjExpr:
    """A word of set or substrate names; the empty word is the unit I."""

    names: tuple[str, ...]
    span: Optional[SourceSpan] = _span_field()

    def format(self) -> str:
        return " * ".join(self.names) if self.names else "I"


@dataclass(frozen=True)
class NamedTerm:
    name: str
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class StructuralTerm:
    kind: str
    objects: tuple[ObjExpr, ...]
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class AttributeTerm:
    kind: str
    attribute: str
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class SeqTerm:
    left: "TermExpr"
    right: "TermExpr"
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class ParTerm:
    left: "TermExpr"
    right: "TermExpr"
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class TransposeTerm:
    inner: "TermExpr"
    span: Optional[SourceSpan] = _span_field()


TermExpr = Union[NamedTerm, StructuralTerm, AttributeTerm, SeqTerm, ParTerm, TransposeTerm]


@dataclass(frozen=True)
class SetDecl:
    name: str
    labels: tuple[str, ...]
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class RelDecl:
    name: str
    dom: ObjExpr
    cod: ObjExpr
    maplets: tuple[tuple[Elem, Elem], ...]
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class AttrDecl:
    name: str
    carrier: ObjExpr
    members: tuple[Elem, ...]
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class AntichainDecl:
    name: str
    carrier: ObjExpr
    families: tuple[tuple[Elem, ...], ...]
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class SubstrateDecl:
    name: str
    state_set: str
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class ProcessDecl:
    name: str
    dom: ObjExpr
    cod: ObjExpr
    maplets: tuple[tuple[Elem, Elem], ...]
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class TaskDecl:
    name: str
    term: TermExpr
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class CheckPossibleQuery:
    task: str
    constructor: ObjExpr
    attribute: str
    process: str
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class CoarseQuery:
    task: str
    dom: str
    cod: str
    span: Optional[SourceSpan] = _span_field()


Declaration = Union[
    SetDecl, RelDecl, AttrDecl, AntichainDecl, SubstrateDecl, ProcessDecl, TaskDecl
]
Query = Union[CheckPossibleQuery, CoarseQuery]


@dataclass(frozen=True)
class Program:
    items: tuple[Union[Declaration, Query], ...]

    @property
    def declarations(self) -> tuple[Declaration, ...]:
        return tuple(i for i in self.items if not isinstance(i, (CheckPossibleQuery, CoarseQuery)))

    @property
    def queries(self) -> tuple[Query, ...]:
        return tuple(i for i in self.items if isinstance(i, (CheckPossibleQuery, CoarseQuery)))


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            shown = tok.text if tok.kind != "eof" else "end of input"
            raise ParseError(f"expected {what or kind}, found {shown!r}", tok.span)
        return self.advance()

    def at_word(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.text == text

    def expect_word(self, text: str) -> Token:
        tok = self.peek()
        if not self.at_word(text):
            shown = tok.text if tok.kind != "eof" else "end of input"
            raise ParseError(f"expected {text!r}, found {shown!r}", tok.span)
        return self.advance()

    def declared_name(self) -> Token:
        tok = self.expect("ident", "a name")
        if tok.text in RESERVED:
            raise ParseError(f"{tok.text!r} is reserved and cannot be declared", tok.span)
        return tok

    # -- programs ----------------------------------------------------------

    def program(self) -> Program:
        items = []
        while self.peek().kind != "eof":
            items.append(self.item())
        return Program(tuple(items))

    def item(self):
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError(f"expected a declaration, found {tok.text!r}", tok.span)
        handlers = {
            "set": self.set_decl,
            "rel": self.rel_decl,
            "attr": self.attr_decl,
            "antichain": self.antichain_decl,
            "substrate": self.substrate_decl,
            "process": self.process_decl,
            "task": self.task_decl,
            "check": self.check_query,
            "coarse": self.coarse_query,
        }
        handler = handlers.get(tok.text)
        if handler is None:
            raise ParseError(f"expected a declaration, found {tok.text!r}", tok.span)
        return handler()

    def set_decl(self) -> SetDecl:
        start = self.expect_word("set")
        name = self.declared_name()
        self.expect("equals", "'='")
        self.expect("lbrace", "'{'")
        labels = self.label_list()
        self.expect("rbrace", "'}'")
        return SetDecl(name.text, labels, span=start.span)

    def rel_decl(self) -> RelDecl:
        start = self.expect_word("rel")
        name = self.declared_name()
        self.expect("colon", "':'")
        dom = self.objexpr()
        self.expect("arrow", "'->'")
        cod = self.objexpr()
        self.expect("equals", "'='")
        maplets = self.maplet_block()
        return RelDecl(name.text, dom, cod, maplets, span=start.span)

    def attr_decl(self) -> AttrDecl:
        start = self.expect_word("attr")
        name = self.declared_name()
        self.expect_word("on")
        carrier = self.objexpr()
        self.expect("equals", "'='")
        self.expect("lbrace", "'{'")
        members = []
        while self.peek().kind != "rbrace":
            if members:
                self.expect("comma", "','")
            members.append(self.elem())
        self.expect("rbrace", "'}'")
        return AttrDecl(name.text, carrier, tuple(members), span=start.span)

    def antichain_decl(self) -> AntichainDecl:
        start = self.expect_word("antichain")
        name = self.declared_name()
        self.expect_word("on")
        carrier = self.objexpr()
        self.expect("equals", "'='")
        self.expect("lbrace", "'{'")
        families = []
        while self.peek().kind != "rbrace":
            if families:
                self.expect("comma", "','")
            self.expect("lbrace", "'{'")
            members = []
            while self.peek().kind != "rbrace":
                if members:
                    self.expect("comma", "','")
                members.append(self.elem())
            self.expect("rbrace", "'}'")
            families.append(tuple(members))
        self.expect("rbrace", "'}'")
        return AntichainDecl(name.text, carrier, tuple(families), span=start.span)

    def substrate_decl(self) -> SubstrateDecl:
        start = self.expect_word("substrate")
        name = self.declared_name()
        self.expect_word("states")
        state_set = self.expect("ident", "a set name")
        return SubstrateDecl(name.text, state_set.text, span=start.span)

    def process_decl(self) -> ProcessDecl:
        start = self.expect_word("process")
        name = self.declared_name()
        self.expect("colon", "':'")
        dom = self.objexpr()
        self.expect("arrow", "'->'")
        cod = self.objexpr()
        self.expect("equals", "'='")
        maplets = self.maplet_block()
        return ProcessDecl(name.text, dom, cod, maplets, span=start.span)

    def task_decl(self) -> TaskDecl:
        start = self.expect_word("task")
        name = self.declared_name()
        self.expect("equals", "'='")
        term = self.termexpr()
        return TaskDecl(name.text, term, span=start.span)

    def check_query(self) -> CheckPossibleQuery:
        start = self.expect_word("check")
        self.expect_word("possible")
        target = self.expect("ident", "a task name")
        self.expect_word("with")
        self.expect("lparen", "'('")
        constructor = self.objexpr()
        self.expect("comma", "','")
        attr = self.expect("ident", "an attribute name")
        self.expect("comma", "','")
        proc = self.expect("ident", "a process name")
        self.expect("rparen", "')'")
        return CheckPossibleQuery(
            target.text, constructor, attr.text, proc.text, span=start.span
        )

    def coarse_query(self) -> CoarseQuery:
        start = self.expect_word("coarse")
        target = self.expect("ident", "a task name")
        self.expect_word("via")
        dom = self.expect("ident", "an antichain name")
        self.expect("comma", "','")
        cod = self.expect("ident", "an antichain name")
        return CoarseQuery(target.text, dom.text, cod.text, span=start.span)

    # -- fragments ---------------------------------------------------------

    def label_list(self) -> tuple[str, ...]:
        labels = []
        while self.peek().kind != "rbrace":
            if labels:
                self.expect("comma", "','")
            tok = self.peek()
            if tok.kind not in ("ident", "number"):
                raise ParseError(f"expected a label, found {tok.text!r}", tok.span)
            labels.append(self.advance().text)
        return tuple(labels)

    def elem(self) -> Elem:
        tok = self.peek()
        if tok.kind == "star":
            self.advance()
            return ()
        if tok.kind == "lparen":
            self.advance()
            parts = [self.label()]
            while self.peek().kind == "comma":
                self.advance()
                parts.append(self.label())
            self.expect("rparen", "')'")
            return tuple(parts)
        return (self.label(),)

    def label(self) -> str:
        tok = self.peek()
        if tok.kind not in ("ident", "number"):
            raise ParseError(f"expected a label, found {tok.text!r}", tok.span)
        return self.advance().text

    def maplet_block(self) -> tuple[tuple[Elem, Elem], ...]:
        self.expect("lbrace", "'{'")
        maplets = []
        while self.peek().kind != "rbrace":
            if maplets:
                self.expect("comma", "','")
            x = self.elem()
            self.expect("mapsto", "'|->'")
            y = self.elem()
            maplets.append((x, y))
        self.expect("rbrace", "'}'")
        return tuple(maplets)

    def objexpr(self) -> ObjExpr:
        start = self.expect("ident", "an object")
        names = [] if start.text == "I" else [start.text]
        while self.peek().kind == "star":
            self.advance()
            part = self.expect("ident", "an object")
            if part.text != "I":
                names.append(part.text)
        return ObjExpr(tuple(names), span=start.span)

    def termexpr(self) -> TermExpr:
        term = self.par_term()
        while self.peek().kind == "semi":
            op = self.advance()
            term = SeqTerm(term, self.par_term(), span=op.span)
        return term

    def par_term(self) -> TermExpr:
        term = self.post_term()
        while self.peek().kind == "star":
            op = self.advance()
            term = ParTerm(term, self.post_term(), span=op.span)
        return term

    def post_term(self) -> TermExpr:
        term = self.atom_term()
        while self.peek().kind == "transpose":
            op = self.advance()
            term = TransposeTerm(term, span=op.span)
        return term

    def atom_term(self) -> TermExpr:
        tok = self.peek()
        if tok.kind == "lparen":
            self.advance()
            inner = self.termexpr()
            self.expect("rparen", "')'")
            return inner
        if tok.kind != "ident":
            raise ParseError(f"expected a task term, found {tok.text!r}", tok.span)
        if tok.text in STRUCTURAL_BUILTINS:
            self.advance()
            self.expect("lparen", "'('")
            objects = [self.objexpr()]
            for _ in range(STRUCTURAL_BUILTINS[tok.text] - 1):
                self.expect("comma", "','")
                objects.append(self.objexpr())
            self.expect("rparen", "')'")
            return StructuralTerm(tok.text, tuple(objects), span=tok.span)
        if tok.text in ATTRIBUTE_BUILTINS:
            self.advance()
            self.expect("lparen", "'('")
            attr = self.expect("ident", "an attribute name")
            self.expect("rparen", "')'")
            return AttributeTerm(tok.text, attr.text, span=tok.span)
        if tok.text in KEYWORDS:
            raise ParseError(f"expected a task term, found keyword {tok.text!r}", tok.span)
        self.advance()
        return NamedTerm(tok.text, span=tok.span)


def parse(text: str, filename: str = "<input>") -> Program:
    return _Parser(tokenize(text, filename)).program()


def parse_term(text: str, filename: str = "<term>") -> TermExpr:
    parser = _Parser(tokenize(text, filename))
    term = parser.termexpr()
    parser.expect("eof", "end of input")
    return term


def parse_candidate(text: str, filename: str = "<candidate>") -> tuple[ObjExpr, str, str]:
    """Parse a constructor candidate written as `(substrate, attribute, process)`."""
    parser = _Parser(tokenize(text, filename))
    parser.expect("lparen", "'('")
    constructor = parser.objexpr()
    parser.expect("comma", "','")
    attr = parser.expect("ident", "an attribute name")
    parser.expect("comma", "','")
    proc = parser.expect("ident", "a process name")
    parser.expect("rparen", "')'")
    parser.expect("eof", "end of input")
    return constructor, attr.text, proc.text


def parse_file(path: str) -> Program:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), filename=path)


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

_SEQ_LEVEL, _PAR_LEVEL, _ATOM_LEVEL = 1, 2, 3


def _term_level(term: TermExpr) -> int:
    if isinstance(term, SeqTerm):
        return _SEQ_LEVEL
    if isinstance(term, ParTerm):
        return _PAR_LEVEL
    return _ATOM_LEVEL


def print_term(term: TermExpr, min_level: int = _SEQ_LEVEL) -> str:
    if isinstance(term, SeqTerm):
        body = f"{print_term(term.left, _SEQ_LEVEL)} ; {print_term(term.right, _PAR_LEVEL)}"
    elif isinstance(term, ParTerm):
        body = f"{print_term(term.left, _PAR_LEVEL)} * {print_term(term.right, _ATOM_LEVEL)}"
    elif isinstance(term, TransposeTerm):
        body = f"{print_term(term.inner, _ATOM_LEVEL)}^T"
    elif isinstance(term, StructuralTerm):
        body = f"{term.kind}({', '.join(o.format() for o in term.objects)})"
    elif isinstance(term, AttributeTerm):
        body = f"{term.kind}({term.attribute})"
    else:
        body = term.name
    if _term_level(term) < min_level:
        return f"({body})"
    return body


def _print_maplets(maplets) -> str:
    body = ", ".join(
        f"{relcore.format_elem(x)} |-> {relcore.format_elem(y)}" for x, y in maplets
    )
    return "{ " + body + " }" if body else "{}"


def print_item(item) -> str:
    if isinstance(item, SetDecl):
        return f"set {item.name} = {{{', '.join(item.labels)}}}"
    if isinstance(item, RelDecl):
        return (
            f"rel {item.name} : {item.dom.format()} -> {item.cod.format()} = "
            f"{_print_maplets(item.maplets)}"
        )
    if isinstance(item, AttrDecl):
        members = ", ".join(relcore.format_elem(m) for m in item.members)
        return f"attr {item.name} on {item.carrier.format()} = {{{members}}}"
    if isinstance(item, AntichainDecl):
        families = ", ".join(
            "{" + ", ".join(relcore.format_elem(m) for m in fam) + "}"
            for fam in item.families
        )
        return f"antichain {item.name} on {item.carrier.format()} = {{{families}}}"
    if isinstance(item, SubstrateDecl):
        return f"substrate {item.name} states {item.state_set}"
    if isinstance(item, ProcessDecl):
        return (
            f"process {item.name} : {item.dom.format()} -> {item.cod.format()} = "
            f"{_print_maplets(item.maplets)}"
        )
    if isinstance(item, TaskDecl):
        return f"task {item.name} = {print_term(item.term)}"
    if isinstance(item, CheckPossibleQuery):
        return (
            f"check possible {item.task} with "
            f"({item.constructor.format()}, {item.attribute}, {item.process})"
        )
    if isinstance(item, CoarseQuery):
        return f"coarse {item.task} via {item.dom}, {item.cod}"
    raise TypeError(f"not a program item: {item!r}")


def print_program(program: Program) -> str:
    return "\n".join(print_item(i) for i in program.items) + "\n"


# ---------------------------------------------------------------------------
# Resolution and evaluation
# ---------------------------------------------------------------------------


class Module:
    """A resolved program: every declaration turned into an engine value."""

    def __init__(self, program: Program):
        self.program = program
        self.atoms: dict[str, Atom] = {}
        self.relations: dict[str, Task] = {}
        self.attributes: dict[str, Attribute] = {}
        self.antichains: dict[str, Antichain] = {}
        self.substrates: dict[str, SubstrateAtom] = {}
        self.processes: dict[str, Process] = {}
        self.tasks: dict[str, Task] = {}
        self._decls: dict[str, Declaration] = {}
        self._resolving: set[str] = set()
        self._resolve()

    # -- lookup ------------------------------------------------------------

    def object_named(self, expr: ObjExpr) -> FinObject:
        factors = []
        for name in expr.names:
            atom = self.atoms.get(name)
            if atom is None:
                raise UnknownIdentifier(f"no set named {name!r}", expr.span)
            factors.append(atom)
        return FinObject(tuple(factors))

    def substrate_named(self, expr: ObjExpr) -> Substrate:
        factors = []
        for name in expr.names:
            sa = self.substrates.get(name)
            if sa is None:
                raise UnknownIdentifier(f"no substrate named {name!r}", expr.span)
            factors.append(sa)
        return Substrate(tuple(factors))

    def task_named(self, name: str, span: Optional[SourceSpan] = None) -> Task:
        if name in self.relations:
            return self.relations[name]
        if name in self.tasks:
            return self.tasks[name]
        decl = self._decls.get(name)
        if isinstance(decl, TaskDecl):
            return self._resolve_task(decl)
        if isinstance(decl, RelDecl):
            return self._resolve_rel(decl)
        raise UnknownIdentifier(f"no task or relation named {name!r}", span)

    def attribute_named(self, name: str, span: Optional[SourceSpan] = None) -> Attribute:
        attr = self.attributes.get(name)
        if attr is None:
            raise UnknownIdentifier(f"no attribute named {name!r}", span)
        return attr

    def process_named(self, name: str, span: Optional[SourceSpan] = None) -> Process:
        proc = self.processes.get(name)
        if proc is None:
            raise UnknownIdentifier(f"no process named {name!r}", span)
        return proc

    def antichain_named(self, name: str, span: Optional[SourceSpan] = None) -> Antichain:
        bar = self.antichains.get(name)
        if bar is None:
            raise UnknownIdentifier(f"no antichain named {name!r}", span)
        return bar

    # -- resolution --------------------------------------------------------

    def _resolve(self):
        for decl in self.program.declarations:
            if decl.name in self._decls:
                raise DeclarationError(f"{decl.name!r} is declared twice", decl.span)
            self._decls[decl.name] = decl
        order = [SetDecl, SubstrateDecl, AttrDecl, AntichainDecl, RelDecl, ProcessDecl, TaskDecl]
        for kind in order:
            for decl in self.program.declarations:
                if isinstance(decl, kind):
                    self._resolve_decl(decl)
        for query in self.program.queries:
            self._check_query_names(query)

    def _resolve_decl(self, decl: Declaration):
        if isinstance(decl, SetDecl):
            if len(set(decl.labels)) != len(decl.labels):
                raise DeclarationError(f"set {decl.name!r} repeats a label", decl.span)
            self.atoms[decl.name] = Atom(decl.name, decl.labels)
        elif isinstance(decl, SubstrateDecl):
            atom = self.atoms.get(decl.state_set)
            if atom is None:
                raise UnknownIdentifier(f"no set named {decl.state_set!r}", decl.span)
            self.substrates[decl.name] = SubstrateAtom(decl.name, atom)
        elif isinstance(decl, AttrDecl):
            carrier = self.object_named(decl.carrier)
            self.attributes[decl.name] = self._checked_attribute(
                carrier, decl.members, decl.span
            )
        elif isinstance(decl, AntichainDecl):
            carrier = self.object_named(decl.carrier)
            attrs = frozenset(
                self._checked_attribute(carrier, fam, decl.span) for fam in decl.families
            )
            self.antichains[decl.name] = Antichain(carrier, attrs)
        elif isinstance(decl, RelDecl):
            self._resolve_rel(decl)
        elif isinstance(decl, ProcessDecl):
            dom = self.substrate_named(decl.dom)
            cod = self.substrate_named(decl.cod)
            try:
                self.processes[decl.name] = Process(decl.name, dom, cod, decl.maplets)
            except ValueError as err:
                raise DeclarationError(str(err), decl.span) from err
        elif isinstance(decl, TaskDecl):
            self._resolve_task(decl)

    def _checked_attribute(self, carrier: FinObject, members, span) -> Attribute:
        try:
            return Attribute(carrier, frozenset(members))
        except ValueError as err:
            raise DeclarationError(str(err), span) from err

    def _resolve_rel(self, decl: RelDecl) -> Task:
        if decl.name in self.relations:
            return self.relations[decl.name]
        dom = self.object_named(decl.dom)
        cod = self.object_named(decl.cod)
        try:
            out = Task(dom, cod, frozenset(decl.maplets))
        except ValueError as err:
            raise DeclarationError(str(err), decl.span) from err
        self.relations[decl.name] = out
        return out

    def _resolve_task(self, decl: TaskDecl) -> Task:
        if decl.name in self.tasks:
            return self.tasks[decl.name]
        if decl.name in self._resolving:
            raise DeclarationError(
                f"task {decl.name!r} is defined in terms of itself", decl.span
            )
        self._resolving.add(decl.name)
        try:
            self.term_boundary(decl.term)
            out = self.evaluate_term(decl.term)
        finally:
            self._resolving.discard(decl.name)
        self.tasks[decl.name] = out
        return out

    def _check_query_names(self, query: Query):
        if isinstance(query, CheckPossibleQuery):
            self.task_named(query.task, query.span)
            self.substrate_named(query.constructor)
            self.attribute_named(query.attribute, query.span)
            self.process_named(query.process, query.span)
        else:
            self.task_named(query.task, query.span)
            self.antichain_named(query.dom, query.span)
            self.antichain_named(query.cod, query.span)

    # -- task terms --------------------------------------------------------

    def term_boundary(self, term: TermExpr) -> tuple[FinObject, FinObject]:
        """Infer the boundary of a term, or raise a typing error with the
        span of the offending subterm."""
        if isinstance(term, NamedTerm):
            named = self.task_named(term.name, term.span)
            return named.dom, named.cod
        if isinstance(term, StructuralTerm):
            objects = [self.object_named(o) for o in term.objects]
            if term.kind == "id":
                return objects[0], objects[0]
            if term.kind == "swap":
                return objects[0] * objects[1], objects[1] * objects[0]
            if term.kind == "copy":
                return objects[0], objects[0] * objects[0]
            if term.kind == "discard":
                return objects[0], UNIT
            if term.kind == "match":
                return objects[0] * objects[0], objects[0]
            return UNIT, objects[0]
        if isinstance(term, AttributeTerm):
            carrier = self.attribute_named(term.attribute, term.span).carrier
            if term.kind == "state":
                return UNIT, carrier
            return carrier, UNIT
        if isinstance(term, SeqTerm):
            left = self.term_boundary(term.left)
            right = self.term_boundary(term.right)
            if left[1] != right[0]:
                raise TypecheckError(
                    f"cannot chain {left[1].format()} into {right[0].format()}",
                    term.span,
                )
            return left[0], right[1]
        if isinstance(term, ParTerm):
            left = self.term_boundary(term.left)
            right = self.term_boundary(term.right)
            return left[0] * right[0], left[1] * right[1]
        inner = self.term_boundary(term.inner)
        return inner[1], inner[0]

    def evaluate_term(self, term: TermExpr) -> Task:
        if isinstance(term, NamedTerm):
            return self.task_named(term.name, term.span)
        if isinstance(term, StructuralTerm):
            objects = [self.object_named(o) for o in term.objects]
            if term.kind == "id":
                return relcore.identity(objects[0])
            if term.kind == "swap":
                return relcore.swap(objects[0], objects[1])
            if term.kind == "copy":
                return relcore.copy(objects[0])
            if term.kind == "discard":
                return relcore.discard(objects[0])
            if term.kind == "match":
                return relcore.match(objects[0])
            return relcore.attribute_as_state(relcore.trivial_attribute(objects[0]))
        if isinstance(term, AttributeTerm):
            attr = self.attribute_named(term.attribute, term.span)
            if term.kind == "state":
                return relcore.attribute_as_state(attr)
            return relcore.test_of(attr)
        if isinstance(term, SeqTerm):
            return relcore.seq_compose(
                self.evaluate_term(term.left), self.evaluate_term(term.right)
            )
        if isinstance(term, ParTerm):
            return relcore.par_compose(
                self.evaluate_term(term.left), self.evaluate_term(term.right)
            )
        return relcore.transpose(self.evaluate_term(term.inner))

    # -- queries -----------------------------------------------------------

    def run_query(self, query: Query):
        if isinstance(query, CheckPossibleQuery):
            target = self.task_named(query.task, query.span)
            cand = ConstructorCandidate(
                self.substrate_named(query.constructor),
                self.attribute_named(query.attribute, query.span),
                self.process_named(query.process, query.span),
            )
            return substrate.is_possible_with(target, cand)
        target = self.task_named(query.task, query.span)
        return coarse_mod.coarse_grain(
            target,
            self.antichain_named(query.dom, query.span),
            self.antichain_named(query.cod, query.span),
        )


def resolve(program: Program) -> Module:
    return Module(program)


def load(path: str) -> Module:
    return Module(parse_file(path))
