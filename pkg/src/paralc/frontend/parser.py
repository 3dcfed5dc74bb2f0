"""Recursive-descent parser for the textual ontology and query format.

Grammar::

    document   := ["tbox:" {inclusion "."}] "abox:" {assertion "."}
    inclusion  := concept "subclassof" concept
    assertion  := concept "(" IND ")" | ROLE "(" IND "," IND ")"
    concept    := conj {"or" conj}
    conj       := unary {"and" unary}
    unary      := "not" unary | "some" ROLE "." unary | "all" ROLE "." unary | atom
    atom       := "top" | "bot" | NAME | "(" concept ")"

    query      := "consistent" | concept "subsumedby" concept | concept "(" IND ")"

Keywords are lowercase and reserved.  ``#`` starts a comment that runs to the
end of the line.  Binary connectives associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

from ..model import (
    BOTTOM,
    KEYWORDS,
    TOP,
    ABox,
    And,
    Atomic,
    Concept,
    ConceptAssertion,
    Exists,
    Forall,
    Not,
    Ontology,
    Or,
    RoleAssertion,
    TBox,
)
from ..reasoner import Consistency, Instance, Query, Subsumes

__all__ = [
    "ParseError",
    "ReservedIdentifierError",
    "SourceDocument",
    "Token",
    "tokenize",
    "parse_ontology",
    "parse_concept",
    "parse_query",
    "load_ontology",
]


class ParseError(ValueError):
    """Syntax error at a 1-based ``line``/``column``."""

    def __init__(self, message: str, line: int, column: int, token: str = "", expected: Iterable[str] = ()):
        self.line = line
        self.column = column
        self.token = token
        self.expected = tuple(expected)
        detail = message
        if self.expected:
            detail += f" (expected {' or '.join(self.expected)})"
        super().__init__(f"{line}:{column}: {detail}")


class ReservedIdentifierError(ParseError):
    pass


@dataclass(frozen=True)
class SourceDocument:
    text: str
    origin: str = "<string>"


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "keyword", "punct" or "eof"
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


_TOKEN = re.compile(r"(?P<ws>[ \t\r\f\v]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[().,:])")


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        column = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, column, text[pos])
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind == "name":
            word = m.group()
            if word.startswith("_"):
                raise ReservedIdentifierError(
                    f"identifier {word!r} uses the reserved '_' prefix", line, column, word
                )
            tokens.append(Token("keyword" if word in KEYWORDS else "name", word, line, column))
        elif kind == "punct":
            tokens.append(Token("punct", m.group(), line, column))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("keyword", "punct") and self.tok.text == text

    def error(self, expected: Iterable[str], message: Optional[str] = None) -> ParseError:
        t = self.tok
        return ParseError(message or f"unexpected {t.describe()}", t.line, t.column, t.text, expected)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error([repr(text)])
        t = self.tok
        self.pos += 1
        return t

    def name(self, what: str) -> str:
        t = self.tok
        if t.kind == "keyword":
            raise ReservedIdentifierError(f"{t.text!r} is a reserved keyword", t.line, t.column, t.text, [what])
        if t.kind != "name":
            raise self.error([what])
        self.pos += 1
        return t.text

    # -- concepts ---------------------------------------------------------

    def concept(self) -> Concept:
        c = self.conj()
        while self.at("or"):
            self.pos += 1
            c = Or(c, self.conj())
        return c

    def conj(self) -> Concept:
        c = self.unary()
        while self.at("and"):
            self.pos += 1
            c = And(c, self.unary())
        return c

    def unary(self) -> Concept:
        if self.at("not"):
            self.pos += 1
            return Not(self.unary())
        for word, ctor in (("some", Exists), ("all", Forall)):
            if self.at(word):
                self.pos += 1
                role = self.name("role name")
                self.expect(".")
                return ctor(role, self.unary())
        return self.atom()

    def atom(self) -> Concept:
        if self.at("top"):
            self.pos += 1
            return TOP
        if self.at("bot"):
            self.pos += 1
            return BOTTOM
        if self.at("("):
            self.pos += 1
            c = self.concept()
            self.expect(")")
            return c
        if self.tok.kind == "name":
            return Atomic(self.name("concept name"))
        raise self.error(["concept name", "'top'", "'bot'", "'not'", "'some'", "'all'", "'('"])

    # -- assertions and documents ----------------------------------------

    def assertion(self) -> Union[ConceptAssertion, RoleAssertion]:
        start = self.tok
        c = self.concept()
        self.expect("(")
        first = self.name("individual name")
        if self.at(","):
            if not isinstance(c, Atomic) or start.kind != "name" or self.tokens[self.pos - 3] is not start:
                raise self.error(["')'"], "role assertion needs a plain role name")
            self.pos += 1
            second = self.name("individual name")
            self.expect(")")
            return RoleAssertion(c.name, first, second)
        self.expect(")")
        return ConceptAssertion(c, first)

    def section(self, word: str) -> bool:
        if self.at(word) and self.peek().kind == "punct" and self.peek().text == ":":
            self.pos += 2
            return True
        return False

    def document(self) -> Ontology:
        inclusions = []
        if self.section("tbox"):
            while not self.at("abox") and self.tok.kind != "eof":
                sub = self.concept()
                self.expect("subclassof")
                sup = self.concept()
                self.expect(".")
                inclusions.append((sub, sup))
        if not self.section("abox"):
            raise self.error(["'abox:'"])
        assertions = []
        while self.tok.kind != "eof":
            assertions.append(self.assertion())
            self.expect(".")
        return Ontology(TBox(tuple(inclusions)), ABox.of(assertions))

    def query(self) -> Query:
        if self.at("consistent") and self.peek().kind == "eof":
            self.pos += 1
            return Consistency()
        c = self.concept()
        if self.at("subsumedby"):
            self.pos += 1
            return Subsumes(c, self.concept())
        self.expect("(")
        individual = self.name("individual name")
        self.expect(")")
        return Instance(c, individual)

    def finish(self) -> None:
        if self.tok.kind != "eof":
            raise self.error(["end of input"])


def parse_ontology(doc: Union[SourceDocument, str]) -> Ontology:
    text = doc.text if isinstance(doc, SourceDocument) else doc
    p = _Parser(text)
    o = p.document()
    p.finish()
    return o


def parse_concept(text: str) -> Concept:
    p = _Parser(text)
    c = p.concept()
    p.finish()
    return c


def parse_query(text: str) -> Query:
    p = _Parser(text)
    q = p.query()
    p.finish()
    return q


def load_ontology(path: Union[str, Path]) -> Ontology:
    path = Path(path)
    return parse_ontology(SourceDocument(path.read_text(encoding="utf-8"), str(path)))
