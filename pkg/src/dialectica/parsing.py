"""Recursive-descent parser for the surface grammar of both calculi.

Grammar (``\\`` may also be written ``λ``, ``>>=`` as ``⊛``, ``->`` as ``→``,
``*`` as ``×``, and ``<``/``>`` as ``⟨``/``⟩``)::

    term    ::= lambda | sum
    lambda  ::= "\\" binder+ "." term
    binder  ::= ident | "(" ident ":" type ")"
    sum     ::= bind ("+" (bind | lambda))*
    bind    ::= app (">>=" (app | lambda))*
    app     ::= postfix (postfix)* [lambda]
    postfix ::= atom ("^1" | "^2")*
    atom    ::= ident | number | "0" | "(" term ")" | "<" term "," term ">" | "[" term "]"

    type    ::= prod ["->" type]
    prod    ::= tatom ["*" prod]
    tatom   ::= ident | "M" "[" type "]" | "(" type ")"

An identifier bound by an enclosing lambda is a variable; a free identifier
naming a primitive of the signature is that primitive; any other free
identifier is a free variable.  ``0`` is the monoid unit; real literals need a
decimal point or another digit (``0.0``, ``2``, ``-1.5``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional

from .primitives import DEFAULT_SIGNATURE, Signature, UnknownPrimitive
from .syntax import (
    App,
    Arrow,
    Bind,
    Ground,
    Lam,
    Monad,
    Pair,
    Plus,
    Prim,
    Prod,
    Proj,
    Ret,
    Term,
    Type,
    Var,
    ZERO,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_SPEC = [
    ("ws", r"\s+"),
    ("number", r"-?(?:\d+\.\d*|\d*\.\d+|\d+)(?:[eE][-+]?\d+)?"),
    ("bind", r">>=|⊛"),
    ("arrow", r"->|→"),
    ("proj", r"\^[12]"),
    ("lam", r"\\|λ"),
    ("ident", r"[^\W\d]\w*'*"),
    ("lt", r"<|⟨"),
    ("gt", r">|⟩"),
    ("punct", r"[().,:\[\]+*×]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{k}>{p})" for k, p in _TOKEN_SPEC))


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind, chunk = m.lastgroup, m.group()
        if kind != "ws":
            text_ = "*" if chunk == "×" else chunk
            tokens.append(Token(kind if kind != "punct" else text_, text_, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, signature: Signature, target: bool):
        self.tokens = tokenize(text)
        self.i = 0
        self.signature = signature
        self.target = target

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col)

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            self.error(f"expected {kind!r}, found {found!r}")
        return self.advance()

    def need_target(self, what: str, tok: Token):
        if not self.target:
            self.error(f"{what} is not part of the source calculus", tok)

    # -- types
    def type_(self) -> Type:
        left = self.prod()
        if self.tok.kind == "arrow":
            self.advance()
            return Arrow(left, self.type_())
        return left

    def prod(self) -> Type:
        tok = self.tok
        left = self.tatom()
        if self.tok.kind == "*":
            self.need_target("product type", tok)
            self.advance()
            return Prod(left, self.prod())
        return left

    def tatom(self) -> Type:
        tok = self.tok
        if tok.kind == "(":
            self.advance()
            t = self.type_()
            self.expect(")")
            return t
        if tok.kind == "ident":
            self.advance()
            if tok.text == "M" and self.tok.kind == "[":
                self.need_target("monadic type", tok)
                self.advance()
                inner = self.type_()
                self.expect("]")
                return Monad(inner)
            return Ground(tok.text)
        self.error(f"expected a type, found {tok.text or 'end of input'!r}")

    # -- terms
    def term(self, scope: frozenset) -> Term:
        if self.tok.kind == "lam":
            return self.lam(scope)
        return self.sum(scope)

    def lam(self, scope: frozenset) -> Term:
        self.expect("lam")
        binders = []
        while self.tok.kind != ".":
            if self.tok.kind == "ident":
                binders.append((self.advance().text, None))
            elif self.tok.kind == "(":
                self.advance()
                name = self.expect("ident").text
                self.expect(":")
                ty = self.type_()
                self.expect(")")
                binders.append((name, ty))
            else:
                self.error("expected a binder")
        if not binders:
            self.error("lambda without binder")
        self.expect(".")
        body = self.term(scope | {name for name, _ in binders})
        for name, ty in reversed(binders):
            body = Lam(name, body, ty)
        return body

    def sum(self, scope: frozenset) -> Term:
        left = self.bind(scope)
        while self.tok.kind == "+":
            tok = self.advance()
            self.need_target("'+'", tok)
            if self.tok.kind == "lam":
                return Plus(left, self.lam(scope))
            left = Plus(left, self.bind(scope))
        return left

    def bind(self, scope: frozenset) -> Term:
        left = self.app(scope)
        while self.tok.kind == "bind":
            tok = self.advance()
            self.need_target("'>>='", tok)
            if self.tok.kind == "lam":
                return Bind(left, self.lam(scope))
            left = Bind(left, self.app(scope))
        return left

    _ATOM_START = {"ident", "number", "(", "lt", "["}

    def app(self, scope: frozenset) -> Term:
        head = self.postfix(scope)
        while True:
            if self.tok.kind == "lam":
                return App(head, self.lam(scope))
            if self.tok.kind not in self._ATOM_START:
                return head
            head = App(head, self.postfix(scope))

    def postfix(self, scope: frozenset) -> Term:
        t = self.atom(scope)
        while self.tok.kind == "proj":
            tok = self.advance()
            self.need_target("projection", tok)
            t = Proj(int(tok.text[1]), t)
        return t

    def atom(self, scope: frozenset) -> Term:
        tok = self.tok
        if tok.kind == "ident":
            self.advance()
            if tok.text in scope:
                return Var(tok.text)
            try:
                prim = (
                    self.signature.target_prim(tok.text)
                    if self.target
                    else self.signature.source_prim(tok.text)
                )
            except UnknownPrimitive as exc:
                self.error(f"unknown primitive symbol {exc.args[0]}", tok)
            return prim if prim is not None else Var(tok.text)
        if tok.kind == "number":
            self.advance()
            if tok.text == "0":
                if not self.target:
                    self.error("'0' is the monoid unit of the target calculus; write 0.0", tok)
                return ZERO
            return Prim(tok.text, Ground("real"))
        if tok.kind == "(":
            self.advance()
            t = self.term(scope)
            self.expect(")")
            return t
        if tok.kind == "lt":
            self.need_target("pair", tok)
            self.advance()
            a = self.term(scope)
            self.expect(",")
            b = self.term(scope)
            self.expect("gt")
            return Pair(a, b)
        if tok.kind == "[":
            self.need_target("return", tok)
            self.advance()
            t = self.term(scope)
            self.expect("]")
            return Ret(t)
        self.error(f"expected a term, found {tok.text or 'end of input'!r}")

    def finish(self):
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")


def parse_source(text: str, signature: Signature = DEFAULT_SIGNATURE) -> Term:
    p = _Parser(text, signature, target=False)
    t = p.term(frozenset())
    p.finish()
    return t


def parse_target(text: str, signature: Signature = DEFAULT_SIGNATURE) -> Term:
    p = _Parser(text, signature, target=True)
    t = p.term(frozenset())
    p.finish()
    return t


def parse_type(text: str, target: bool = True) -> Type:
    p = _Parser(text, DEFAULT_SIGNATURE, target=target)
    t = p.type_()
    p.finish()
    return t
