"""Tokenizer, parser and printer for the polynomial expression language.

Grammar::

    EXPR   := ['-'] TERM (('+' | '-') TERM)*
    TERM   := FACTOR ('*' FACTOR)*
    FACTOR := BASE ('^' ['-'] INT)?
    BASE   := RATIONAL | 'zeta' | VAR | '(' EXPR ')'
    RATIONAL := INT ('/' INT)?

Parsing yields a small AST that compares structurally (source positions
are ignored), so ``parse(to_text(ast)) == ast``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import SkewlabError


class SpecError(SkewlabError, ValueError):
    """Lexical, syntactic or semantic error with a source position."""

    def __init__(self, message: str, line: int = 0, col: int = 0, kind: str = "syntax"):
        self.message = message
        self.line = line
        self.col = col
        self.kind = kind
        loc = f"line {line}, column {col}: " if line else ""
        super().__init__(f"{loc}{kind} error: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # INT, IDENT, OP, ARROW, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(->)|([-+*/^()\[\],;={}]))")


def tokenize(text: str, line: int = 1, col0: int = 1) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            bad = len(text[pos:]) - len(text[pos:].lstrip())
            raise SpecError(f"unexpected character {text[pos + bad]!r}", line, col0 + pos + bad, "lexical")
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(Token("INT", m.group(1), line, col0 + start))
        elif m.group(2):
            tokens.append(Token("IDENT", m.group(2), line, col0 + start))
        elif m.group(3):
            tokens.append(Token("ARROW", "->", line, col0 + start))
        else:
            tokens.append(Token("OP", m.group(4), line, col0 + start))
        pos = m.end()
    tokens.append(Token("EOF", "", line, col0 + len(text)))
    return tokens


# AST ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Zeta:
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int
    pos: tuple = field(default=(0, 0), compare=False)


Node = Union[Num, Zeta, Var, Neg, BinOp, Pow]


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def accept(self, text: str) -> Token | None:
        tok = self.peek()
        if tok.kind in ("OP", "ARROW") and tok.text == text:
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind in ("OP", "ARROW", "IDENT") and tok.text == text:
            return self.next()
        raise SpecError(f"expected {text!r}, found {tok.text or 'end of line'!r}", tok.line, tok.col)

    def expect_int(self) -> int:
        tok = self.next()
        if tok.kind != "INT":
            raise SpecError(f"expected an integer, found {tok.text or 'end of line'!r}", tok.line, tok.col)
        return int(tok.text)

    def expect_ident(self) -> Token:
        tok = self.next()
        if tok.kind != "IDENT":
            raise SpecError(f"expected a name, found {tok.text or 'end of line'!r}", tok.line, tok.col)
        return tok

    def at_end(self) -> bool:
        return self.peek().kind == "EOF"

    def expect_end(self):
        tok = self.peek()
        if tok.kind != "EOF":
            raise SpecError(f"unexpected {tok.text!r}", tok.line, tok.col)


def parse_expr_tokens(ts: TokenStream) -> Node:
    tok = ts.peek()
    if ts.accept("-"):
        node: Node = Neg(_term(ts), (tok.line, tok.col))
    else:
        node = _term(ts)
    while True:
        tok = ts.peek()
        if ts.accept("+"):
            node = BinOp("+", node, _term(ts), (tok.line, tok.col))
        elif ts.accept("-"):
            node = BinOp("-", node, _term(ts), (tok.line, tok.col))
        else:
            return node


def _term(ts: TokenStream) -> Node:
    node = _factor(ts)
    while True:
        tok = ts.peek()
        if ts.accept("*"):
            node = BinOp("*", node, _factor(ts), (tok.line, tok.col))
        else:
            return node


def _factor(ts: TokenStream) -> Node:
    base = _base(ts)
    tok = ts.peek()
    if ts.accept("^"):
        sign = -1 if ts.accept("-") else 1
        return Pow(base, sign * ts.expect_int(), (tok.line, tok.col))
    return base


def _base(ts: TokenStream) -> Node:
    tok = ts.next()
    pos = (tok.line, tok.col)
    if tok.kind == "INT":
        value = Fraction(int(tok.text))
        if ts.accept("/"):
            den_tok = ts.peek()
            den = ts.expect_int()
            if den == 0:
                raise SpecError("zero denominator", den_tok.line, den_tok.col)
            value = Fraction(int(tok.text), den)
        return Num(value, pos)
    if tok.kind == "IDENT":
        if tok.text == "zeta":
            return Zeta(pos)
        return Var(tok.text, pos)
    if tok.kind == "OP" and tok.text == "(":
        inner = parse_expr_tokens(ts)
        ts.expect(")")
        return inner
    raise SpecError(f"unexpected {tok.text or 'end of line'!r} in expression", tok.line, tok.col)


def parse_expr(text: str, line: int = 1, col0: int = 1) -> Node:
    ts = TokenStream(tokenize(text, line, col0))
    node = parse_expr_tokens(ts)
    ts.expect_end()
    return node


# printing -------------------------------------------------------------------------


def to_text(node: Node) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Zeta):
        return "zeta"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _is_sum(node.operand))
    if isinstance(node, Pow):
        atomic = isinstance(node.base, (Num, Zeta, Var))
        return f"{_wrap(node.base, not atomic)}^{node.exp}"
    if node.op in "+-":
        right_paren = _is_sum(node.right)
        return f"{to_text(node.left)} {node.op} {_wrap(node.right, right_paren)}"
    left = _wrap(node.left, _is_sum(node.left))
    right = _wrap(node.right, _is_sum(node.right) or (isinstance(node.right, BinOp)))
    return f"{left}*{right}"


def _is_sum(node: Node) -> bool:
    return isinstance(node, Neg) or (isinstance(node, BinOp) and node.op in "+-")


def _wrap(node: Node, paren: bool) -> str:
    text = to_text(node)
    return f"({text})" if paren else text


# evaluation -----------------------------------------------------------------------


def evaluate(node: Node, ring):
    """Evaluate an AST inside a :class:`~skewlab.polyring.CoeffRing`."""
    if isinstance(node, Num):
        return ring(node.value)
    if isinstance(node, Zeta):
        if ring.field.kind != "Qzeta":
            raise SpecError("'zeta' needs a cyclotomic field", *node.pos, kind="semantic")
        return ring(ring.field.zeta())
    if isinstance(node, Var):
        if node.name not in ring.names:
            raise SpecError(f"undeclared variable {node.name!r}", *node.pos, kind="semantic")
        return ring.gen(node.name)
    if isinstance(node, Neg):
        return -evaluate(node.operand, ring)
    if isinstance(node, Pow):
        base = evaluate(node.base, ring)
        if node.exp < 0 and not base.is_unit():
            raise SpecError(f"negative power of non-unit {base}", *node.pos, kind="semantic")
        return base**node.exp
    left, right = evaluate(node.left, ring), evaluate(node.right, ring)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    return left * right


def parse_poly(text: str, ring):
    return evaluate(parse_expr(text), ring)
