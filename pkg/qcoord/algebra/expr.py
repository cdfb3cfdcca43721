"""
Expression language for algebra elements.

    expr    := term (('+' | '-') term)*
    term    := factor ('*'? factor)*        juxtaposition needs whitespace
    factor  := '-' factor | power
    power   := primary ('^' '-'? INT)?      negative only on bare q and D,
                                            INT at most MAX_EXPONENT
    primary := INT | 'q' | 'D' | 't[' INT ',' INT ']' | '(' expr ')'

Errors carry the byte offset of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

from qcoord.algebra.coeff import LaurentPoly
from qcoord.algebra.rewrite import AlgebraConfig, Element, Variant
from qcoord.core.config import settings
from qcoord.core.exceptions import ExprSyntaxError
from qcoord.schemas.run_config import RunConfig


############################################################################
# syntax tree
############################################################################
@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class QVar:
    pass


@dataclass(frozen=True)
class DVar:
    pass


@dataclass(frozen=True)
class Gen:
    i: int
    j: int


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class Add:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow:
    base: Expr
    exponent: int


Expr = Union[Num, QVar, DVar, Gen, Neg, Add, Sub, Mul, Pow]


############################################################################
# tokens
############################################################################
@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int
    spaced: bool


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<gen>t\[)|(?P<name>[qD])|(?P<op>[-+*^(),\]]))")
_START = ("int", "q", "D", "t[", "(")


def _byte_offset(src: str, index: int) -> int:
    return len(src[:index].encode("utf-8"))


def tokenize(src: str) -> List[Token]:
    tokens: List[Token] = []
    index = 0
    while True:
        stripped = index + len(src[index:]) - len(src[index:].lstrip())
        if stripped == len(src):
            tokens.append(Token("end", "", _byte_offset(src, len(src)), stripped > index))
            return tokens
        match = _TOKEN.match(src, index)
        if match is None or match.lastgroup is None:
            raise ExprSyntaxError(
                f"unexpected character {src[stripped]!r}",
                _byte_offset(src, stripped),
                _START,
            )
        kind = match.lastgroup
        text = match.group(kind)
        start = match.start(kind)
        if kind in ("name", "op"):
            kind = text
        elif kind == "gen":
            kind = "t["
        tokens.append(Token(kind, text, _byte_offset(src, start), start > index))
        index = match.end()


############################################################################
# parser
############################################################################
class _Parser:
    def __init__(self, src: str, config: AlgebraConfig):
        self.tokens = tokenize(src)
        self.pos = 0
        self.config = config

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, kind: str) -> Token:
        if self.current.kind != kind:
            self.fail([kind])
        return self.advance()

    def fail(self, expected: Sequence[str], message: Optional[str] = None):
        token = self.current
        shown = "end of input" if token.kind == "end" else repr(token.text)
        raise ExprSyntaxError(message or f"unexpected {shown}", token.position, expected)

    def parse(self) -> Expr:
        expr = self.expr()
        if self.current.kind != "end":
            self.fail(["end", "+", "-", "*"])
        return expr

    def expr(self) -> Expr:
        node = self.term()
        while self.current.kind in ("+", "-"):
            op = self.advance().kind
            right = self.term()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            token = self.current
            if token.kind == "*":
                self.advance()
            elif token.kind in _START and token.spaced:
                pass
            elif token.kind in _START:
                self.fail(["*", "+", "-", "end"], "juxtaposed factors must be separated by whitespace")
            else:
                return node
            node = Mul(node, self.factor())

    def factor(self) -> Expr:
        if self.current.kind == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.current.kind != "^":
            return base
        self.advance()
        negative = False
        if self.current.kind == "-":
            sign = self.advance()
            negative = True
            if not isinstance(base, (QVar, DVar)):
                raise ExprSyntaxError(
                    "negative powers are only allowed on q and D", sign.position, ["int"]
                )
        token = self.expect("int")
        exponent = int(token.text)
        if exponent > settings.MAX_EXPONENT:
            raise ExprSyntaxError(
                f"exponent {exponent} exceeds the limit of {settings.MAX_EXPONENT}", token.position, ["int"]
            )
        return Pow(base, -exponent if negative else exponent)

    def primary(self) -> Expr:
        token = self.current
        if token.kind == "int":
            self.advance()
            return Num(int(token.text))
        if token.kind == "q":
            self.advance()
            return QVar()
        if token.kind == "D":
            if self.config.variant == Variant.M:
                self.fail(["int", "q", "t[", "("], "D is not an element of M_n (use --variant gl or sl)")
            self.advance()
            return DVar()
        if token.kind == "t[":
            self.advance()
            i = self.index()
            self.expect(",")
            j = self.index()
            self.expect("]")
            return Gen(i, j)
        if token.kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        self.fail(_START)

    def index(self) -> int:
        token = self.expect("int")
        value = int(token.text)
        if not 1 <= value <= self.config.n:
            raise ExprSyntaxError(
                f"generator index {value} out of range for n={self.config.n}", token.position, ["int"]
            )
        return value


def _algebra(cfg: Union[RunConfig, AlgebraConfig]) -> AlgebraConfig:
    return cfg.algebra_config() if isinstance(cfg, RunConfig) else cfg


def parse(src: str, cfg: Union[RunConfig, AlgebraConfig]) -> Expr:
    return _Parser(src, _algebra(cfg)).parse()


############################################################################
# evaluation
############################################################################
def evaluate(expr: Expr, cfg: Union[RunConfig, AlgebraConfig]) -> Element:
    config = _algebra(cfg)

    def walk(node: Expr) -> Element:
        if isinstance(node, Num):
            return Element.scalar(config, node.value)
        if isinstance(node, QVar):
            return Element.scalar(config, LaurentPoly.q())
        if isinstance(node, DVar):
            return Element.det_power(config, 1)
        if isinstance(node, Gen):
            return Element.generator(config, node.i, node.j)
        if isinstance(node, Neg):
            return -walk(node.operand)
        if isinstance(node, Add):
            return walk(node.left) + walk(node.right)
        if isinstance(node, Sub):
            return walk(node.left) - walk(node.right)
        if isinstance(node, Mul):
            return walk(node.left) * walk(node.right)
        if isinstance(node, Pow):
            if isinstance(node.base, QVar):
                return Element.scalar(config, LaurentPoly.monomial(node.exponent))
            if isinstance(node.base, DVar):
                return Element.det_power(config, node.exponent)
            return walk(node.base) ** node.exponent
        raise TypeError(f"not an expression node: {node!r}")

    return walk(expr)


def parse_element(src: str, cfg: Union[RunConfig, AlgebraConfig]) -> Element:
    return evaluate(parse(src, cfg), cfg)
