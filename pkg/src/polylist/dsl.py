"""Concrete syntax for terms, types and contexts.

::

    term    := atom ("::" term)?
    atom    := ident | numeral | ident "(" [term ("," term)*] ")"
             | "(" term ("," term)* ")" | "[" [term ("," term)*] "]"
    context := [binding ("," binding)*] ["|" eqn ("," eqn)*]
    binding := ident ":" type
    eqn     := term ("=" | "<" | "<=") term
    type    := factor ("*" factor)*
    factor  := "1" | "N" | "L" "(" type ")" | "(" type ")" | set-name

Numerals become ``s(...s(0)...)``, list literals and ``::`` become ``cons``
chains ending in ``nil``.  ``m < n`` abbreviates ``monus(s(m), n) = 0`` and
``m <= n`` abbreviates ``monus(m, n) = 0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .lang import App, Context, EMPTY_SCOPE, Scope, Term, Tuple, Var, list_literal, numeral
from .setmodel import NAT, UNIT, ListOf, ObjExpr, prod


class DslSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # ident, num, sym, end
    text: str
    line: int
    column: int


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>::|<=|[()\[\],:|=<*]))")


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while True:
        # advance over whitespace, tracking lines
        while pos < len(text) and text[pos].isspace():
            if text[pos] == "\n":
                line, line_start = line + 1, pos + 1
            pos += 1
        if pos >= len(text):
            tokens.append(Token("end", "", line, pos - line_start + 1))
            return tokens
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), line, m.start(kind) - line_start + 1))
        pos = m.end()


class _Parser:
    def __init__(self, text: str, scope: Scope = EMPTY_SCOPE):
        self.tokens = tokenize(text)
        self.i = 0
        self.scope = scope

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        where = "end of input" if tok.kind == "end" else repr(tok.text)
        raise DslSyntaxError(f"{message} (found {where})", tok.line, tok.column)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "sym" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.tok
        if not self.accept(text):
            self.fail(f"expected {text!r}")
        return tok

    def done(self):
        if self.tok.kind != "end":
            self.fail("unexpected trailing input")

    # terms

    def term(self) -> Term:
        head = self.atom()
        if self.accept("::"):
            return App("cons", (head, self.term()))
        return head

    def items(self, close: str) -> list[Term]:
        out = []
        if self.accept(close):
            return out
        out.append(self.term())
        while self.accept(","):
            out.append(self.term())
        self.expect(close)
        return out

    def atom(self) -> Term:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return numeral(int(tok.text))
        if tok.kind == "ident":
            self.i += 1
            if self.accept("("):
                return App(tok.text, tuple(self.items(")")))
            if tok.text == "nil":
                return App("nil")
            return Var(tok.text)
        if self.accept("("):
            xs = self.items(")")
            if not xs:
                self.fail("empty parentheses", tok)
            return xs[0] if len(xs) == 1 else Tuple(tuple(xs))
        if self.accept("["):
            return list_literal(self.items("]"))
        self.fail("expected a term")

    # types

    def type_expr(self) -> ObjExpr:
        factors = [self.factor()]
        while self.accept("*"):
            factors.append(self.factor())
        return prod(*factors)

    def factor(self) -> ObjExpr:
        tok = self.tok
        if tok.kind == "num" and tok.text == "1":
            self.i += 1
            return UNIT
        if tok.kind == "ident":
            self.i += 1
            if tok.text == "N":
                return NAT
            if tok.text == "L":
                self.expect("(")
                inner = self.type_expr()
                self.expect(")")
                return ListOf(inner)
            X = self.scope.set_named(tok.text)
            if X is None:
                self.fail(f"unknown type {tok.text}", tok)
            return X
        if self.accept("("):
            inner = self.type_expr()
            self.expect(")")
            return inner
        self.fail("expected a type")

    # contexts

    def context(self) -> Context:
        bindings = []
        if self.tok.kind == "ident":
            bindings.append(self.binding())
            while self.accept(","):
                bindings.append(self.binding())
        constraints = []
        if self.accept("|"):
            constraints.append(self.equation())
            while self.accept(","):
                constraints.append(self.equation())
        return Context(tuple(bindings), tuple(constraints), self.scope)

    def binding(self):
        tok = self.tok
        if tok.kind != "ident":
            self.fail("expected a variable name")
        self.i += 1
        self.expect(":")
        return tok.text, self.type_expr()

    def equation(self):
        lhs = self.term()
        if self.accept("="):
            return lhs, self.term()
        if self.accept("<="):
            return App("monus", (lhs, self.term())), numeral(0)
        if self.accept("<"):
            return App("monus", (App("s", (lhs,)), self.term())), numeral(0)
        self.fail("expected '=', '<' or '<='")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.done()
    return t


def parse_type(text: str, scope: Scope = EMPTY_SCOPE) -> ObjExpr:
    p = _Parser(text, scope)
    ty = p.type_expr()
    p.done()
    return ty


def parse_context(text: str, scope: Scope = EMPTY_SCOPE) -> Context:
    p = _Parser(text, scope)
    ctx = p.context()
    p.done()
    return ctx


# -- printing ---------------------------------------------------------------


def _as_numeral(t: Term) -> int | None:
    n = 0
    while isinstance(t, App) and t.head == "s" and len(t.args) == 1:
        t, n = t.args[0], n + 1
    if isinstance(t, App) and t.head == "0" and not t.args:
        return n
    return None


def _as_list(t: Term) -> list | None:
    items = []
    while isinstance(t, App) and t.head == "cons" and len(t.args) == 2:
        items.append(t.args[0])
        t = t.args[1]
    if isinstance(t, App) and t.head == "nil" and not t.args:
        return items
    return None


def print_term(t: Term) -> str:
    match t:
        case Var(name):
            return name
        case Tuple(items):
            return "(" + ", ".join(print_term(x) for x in items) + ")"
        case App(head, args):
            n = _as_numeral(t)
            if n is not None:
                return str(n)
            xs = _as_list(t)
            if xs is not None:
                return "[" + ", ".join(print_term(x) for x in xs) + "]"
            if head == "cons" and len(args) == 2:
                first = print_term(args[0])
                if isinstance(args[0], App) and args[0].head == "cons" and _as_list(args[0]) is None:
                    first = f"({first})"
                return f"{first} :: {print_term(args[1])}"
            name = head if isinstance(head, str) else (head.label or "f")
            return f"{name}(" + ", ".join(print_term(a) for a in args) + ")"
    raise TypeError(f"not a term: {t!r}")
