"""Reader and writer for the line-oriented ``.dlp`` knowledge-base format.

One statement per line, ``#`` comments, OWL functional-style constructor
names::

    0.6 :: SubClassOf(Cat, Pet)
    ClassAssertion(ObjectSomeValuesFrom(hasAnimal, Pet), kevin)
    ObjectPropertyAssertion(hasAnimal, kevin, tom)
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from typing import List, Optional, Tuple

from .kb import (
    BOTTOM,
    TOP,
    And,
    AnnotatedAxiom,
    Atomic,
    Axiom,
    ClassAssertion,
    Concept,
    Exists,
    ForAll,
    IsInstance,
    IsSubClass,
    KnowledgeBase,
    Not,
    Or,
    PropertyAssertion,
    Query,
    SubClassOf,
    render,
)


class ParseError(Exception):
    KINDS = ("syntax", "bad-probability", "arity", "unknown-construct")

    def __init__(self, line: int, column: int, message: str, kind: str = "syntax"):
        assert kind in self.KINDS
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message
        self.kind = kind


_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<number>[-+]?[0-9.][0-9.eE+-]*)"
    r"|(?P<sep>::|[(),])"
)
_DECIMAL = re.compile(r"[0-9]+(\.[0-9]+)?|\.[0-9]+")

_AXIOMS = {"SubClassOf", "EquivalentClasses", "ClassAssertion", "ObjectPropertyAssertion"}
_CONCEPTS = {
    "ObjectIntersectionOf", "ObjectUnionOf", "ObjectComplementOf",
    "ObjectSomeValuesFrom", "ObjectAllValuesFrom",
}


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


@dataclass
class _Term:
    name: str
    col: int
    args: Optional[List["_Term"]]  # None for a bare name


def _tokenize(line: str, lineno: int) -> List[_Tok]:
    toks = []
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None:
            raise ParseError(lineno, pos + 1, f"unexpected character {line[pos]!r}")
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    return toks


class _Reader:
    def __init__(self, toks: List[_Tok], lineno: int, eol: int):
        self.toks = toks
        self.i = 0
        self.lineno = lineno
        self.eol = eol

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def col(self) -> int:
        t = self.peek()
        return t.col if t else self.eol

    def fail(self, message, kind="syntax", col=None):
        raise ParseError(self.lineno, col if col is not None else self.col(), message, kind)

    def expect(self, text: str) -> None:
        t = self.peek()
        if t is None or t.text != text:
            self.fail(f"expected {text!r}, found {t.text!r}" if t else f"expected {text!r} before end of line")
        self.i += 1

    def term(self) -> _Term:
        t = self.peek()
        if t is None or t.kind != "name":
            self.fail(f"expected a name, found {t.text!r}" if t else "expected a name before end of line")
        self.i += 1
        nxt = self.peek()
        if nxt is None or nxt.text != "(":
            return _Term(t.text, t.col, None)
        self.i += 1
        args = [self.term()]
        while self.peek() is not None and self.peek().text == ",":
            self.i += 1
            args.append(self.term())
        self.expect(")")
        return _Term(t.text, t.col, args)


def _arity(term: _Term, n: int, lineno: int, at_least=False) -> None:
    k = len(term.args)
    if (k < n) if at_least else (k != n):
        want = f"at least {n}" if at_least else str(n)
        raise ParseError(lineno, term.col, f"{term.name} takes {want} arguments, got {k}", "arity")


def _name(term: _Term, lineno: int, what: str) -> str:
    if term.args is not None:
        raise ParseError(lineno, term.col, f"expected {what} name, found constructor {term.name}")
    return term.name


def _concept(term: _Term, lineno: int) -> Concept:
    if term.args is None:
        if term.name == "Thing":
            return TOP
        if term.name == "Nothing":
            return BOTTOM
        return Atomic(term.name)
    name = term.name
    if name == "ObjectIntersectionOf":
        _arity(term, 2, lineno, at_least=True)
        return And(tuple(_concept(a, lineno) for a in term.args))
    if name == "ObjectUnionOf":
        _arity(term, 2, lineno, at_least=True)
        return Or(tuple(_concept(a, lineno) for a in term.args))
    if name == "ObjectComplementOf":
        _arity(term, 1, lineno)
        return Not(_concept(term.args[0], lineno))
    if name == "ObjectSomeValuesFrom":
        _arity(term, 2, lineno)
        return Exists(_name(term.args[0], lineno, "role"), _concept(term.args[1], lineno))
    if name == "ObjectAllValuesFrom":
        _arity(term, 2, lineno)
        return ForAll(_name(term.args[0], lineno, "role"), _concept(term.args[1], lineno))
    raise ParseError(lineno, term.col, f"unknown concept constructor {name}", "unknown-construct")


def _axioms(term: _Term, lineno: int) -> List[Axiom]:
    if term.args is None or term.name not in _AXIOMS:
        kind = "syntax" if term.args is None else "unknown-construct"
        raise ParseError(lineno, term.col, f"expected an axiom, found {term.name}", kind)
    if term.name == "SubClassOf":
        _arity(term, 2, lineno)
        return [SubClassOf(_concept(term.args[0], lineno), _concept(term.args[1], lineno))]
    if term.name == "EquivalentClasses":
        _arity(term, 2, lineno)
        a, b = _concept(term.args[0], lineno), _concept(term.args[1], lineno)
        return [SubClassOf(a, b), SubClassOf(b, a)]
    if term.name == "ClassAssertion":
        _arity(term, 2, lineno)
        return [ClassAssertion(_concept(term.args[0], lineno), _name(term.args[1], lineno, "individual"))]
    _arity(term, 3, lineno)
    role, subj, obj = (_name(a, lineno, w) for a, w in zip(term.args, ("role", "individual", "individual")))
    return [PropertyAssertion(role, subj, obj)]


def _parse_probability(tok: _Tok, lineno: int) -> float:
    if tok.kind != "number" or not _DECIMAL.fullmatch(tok.text):
        raise ParseError(lineno, tok.col, f"probability must be a decimal literal, got {tok.text!r}",
                         "bad-probability")
    p = float(tok.text)
    if not 0.0 < p <= 1.0:
        raise ParseError(lineno, tok.col, f"probability {tok.text} is outside (0, 1]", "bad-probability")
    return p


def _statement(line: str, lineno: int) -> Optional[Tuple[Optional[float], List[Axiom]]]:
    code = line.split("#", 1)[0]
    toks = _tokenize(code, lineno)
    if not toks:
        return None
    r = _Reader(toks, lineno, len(code.rstrip()) + 1)
    prob = None
    if len(toks) > 1 and toks[1].text == "::":
        prob = _parse_probability(toks[0], lineno)
        r.i = 2
    elif toks[0].kind == "number":
        r.fail(f"expected an axiom, found {toks[0].text!r}")
    term = r.term()
    if r.peek() is not None:
        r.fail(f"unexpected {r.peek().text!r} after the axiom")
    return prob, _axioms(term, lineno)


def parse_kb(text: str) -> KnowledgeBase:
    axioms = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stmt = _statement(line, lineno)
        if stmt is None:
            continue
        prob, parsed = stmt
        for ax in parsed:
            axioms.append(AnnotatedAxiom(len(axioms) + 1, ax, prob))
    return KnowledgeBase(tuple(axioms))


def parse_query(text: str) -> Query:
    lines = [ln for ln in text.splitlines() if ln.split("#", 1)[0].strip()]
    if len(lines) != 1:
        raise ParseError(1, 1, "a query is exactly one axiom")
    stmt = _statement(lines[0], 1)
    prob, _ = stmt
    if prob is not None:
        raise ParseError(1, 1, "queries carry no probability annotation")
    head = _Reader(_tokenize(lines[0].split("#", 1)[0], 1), 1, 1).term()
    if head.name == "ClassAssertion":
        _arity(head, 2, 1)
        return IsInstance(_concept(head.args[0], 1), _name(head.args[1], 1, "individual"))
    if head.name == "SubClassOf":
        _arity(head, 2, 1)
        return IsSubClass(_concept(head.args[0], 1), _concept(head.args[1], 1))
    raise ParseError(1, head.col, f"{head.name} is not a supported query (use ClassAssertion or SubClassOf)",
                     "unknown-construct")


def format_probability(p: float) -> str:
    # shortest round-tripping decimal, never exponent notation
    return format(Decimal(repr(float(p))), "f")


def render_axiom(ax: Axiom) -> str:
    if isinstance(ax, SubClassOf):
        return f"SubClassOf({render(ax.sub)}, {render(ax.sup)})"
    if isinstance(ax, ClassAssertion):
        return f"ClassAssertion({render(ax.concept)}, {ax.individual})"
    if isinstance(ax, PropertyAssertion):
        return f"ObjectPropertyAssertion({ax.role}, {ax.subject}, {ax.object})"
    raise TypeError(f"not an axiom: {ax!r}")


def render_annotated(a: AnnotatedAxiom) -> str:
    if a.prob is None:
        return render_axiom(a.axiom)
    return f"{format_probability(a.prob)} :: {render_axiom(a.axiom)}"


def render_query(q: Query) -> str:
    if isinstance(q, IsInstance):
        return render_axiom(ClassAssertion(q.concept, q.individual))
    return render_axiom(SubClassOf(q.sub, q.sup))


def serialize_kb(kb: KnowledgeBase) -> str:
    return "".join(render_annotated(a) + "\n" for a in kb.axioms)
