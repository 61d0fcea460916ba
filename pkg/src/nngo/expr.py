"""Infix expression language for objectives and constraints.

Grammar (precedence low to high, binary operators left-associative):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INTEGER)*
    atom   := NUMBER | IDENT | IDENT '.' 'y' '[' INTEGER ']'
            | ('exp' | 'tanh') '(' expr ')' | '(' expr ')'

'^' binds tighter than unary minus and takes a literal non-negative integer
exponent. ``net.y[k]`` references output k of a named network.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class NetOut:
    net_id: str
    index: int


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Div:
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class PowInt:
    base: object
    exponent: int


@dataclass(frozen=True)
class Exp:
    operand: object


@dataclass(frozen=True)
class Tanh:
    operand: object


_FUNCTIONS = ("exp", "tanh")
_SYMBOLS = "+-*/^()[]."


def _tokenize(source: str):
    tokens = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            start = i
            while i < n and source[i].isdigit():
                i += 1
            if i < n and source[i] == ".":
                i += 1
                while i < n and source[i].isdigit():
                    i += 1
            if i < n and source[i] in "eE":
                j = i + 1
                if j < n and source[j] in "+-":
                    j += 1
                if j < n and source[j].isdigit():
                    i = j
                    while i < n and source[i].isdigit():
                        i += 1
            tokens.append(("number", source[start:i], start))
            continue
        if c.isalpha() or c == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            tokens.append(("ident", source[start:i], start))
            continue
        if c in _SYMBOLS:
            tokens.append((c, c, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2], (kind,))
        return self.advance()

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing token {tok[1]!r}", tok[2],
                             ("+", "-", "*", "/", "^", "end"))
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self):
        if self.peek()[0] == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        while self.peek()[0] == "^":
            self.advance()
            tok = self.peek()
            if tok[0] != "number" or not tok[1].isdigit():
                raise ParseError("exponent must be an integer literal", tok[2],
                                 ("integer",))
            self.advance()
            node = PowInt(node, int(tok[1]))
        return node

    def atom(self):
        tok = self.peek()
        if tok[0] == "number":
            self.advance()
            return Const(float(tok[1]))
        if tok[0] == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok[0] == "ident":
            self.advance()
            name = tok[1]
            if name in _FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Exp(arg) if name == "exp" else Tanh(arg)
            if self.peek()[0] == ".":
                self.advance()
                member = self.expect("ident")
                if member[1] != "y":
                    raise ParseError(f"unknown member {member[1]!r}", member[2], ("y",))
                self.expect("[")
                idx = self.peek()
                if idx[0] != "number" or not idx[1].isdigit():
                    raise ParseError("output index must be an integer literal",
                                     idx[2], ("integer",))
                self.advance()
                self.expect("]")
                return NetOut(name, int(idx[1]))
            return Var(name)
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2],
                         ("number", "identifier", "(", "-"))


def parse(source: str):
    if not source or not source.strip():
        raise ParseError("empty expression", 0, ("number", "identifier", "(", "-"))
    return _Parser(source).parse()


def to_source(node) -> str:
    """Fully parenthesized form; parse(to_source(e)) reproduces e."""
    match node:
        case Const(value=v):
            # a bare leading minus would rebind under '^', which is tighter
            return f"({v!r})" if v < 0 else repr(v)
        case Var(name=name):
            return name
        case NetOut(net_id=nid, index=k):
            return f"{nid}.y[{k}]"
        case Add(left=l, right=r):
            return f"({to_source(l)} + {to_source(r)})"
        case Sub(left=l, right=r):
            return f"({to_source(l)} - {to_source(r)})"
        case Mul(left=l, right=r):
            return f"({to_source(l)} * {to_source(r)})"
        case Div(left=l, right=r):
            return f"({to_source(l)} / {to_source(r)})"
        case Neg(operand=x):
            return f"(-{to_source(x)})"
        case PowInt(base=b, exponent=k):
            return f"({to_source(b)} ^ {k})"
        case Exp(operand=x):
            return f"exp({to_source(x)})"
        case Tanh(operand=x):
            return f"tanh({to_source(x)})"
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node, ctx, env):
    """Interpret a tree over any context.

    ``env`` resolves leaves: env.var(name) and env.net_output(net_id, index)
    must return context values.
    """
    match node:
        case Const(value=v):
            return ctx.const(v)
        case Var(name=name):
            return env.var(name)
        case NetOut(net_id=nid, index=k):
            return env.net_output(nid, k)
        case Add(left=l, right=r):
            return ctx.add(evaluate(l, ctx, env), evaluate(r, ctx, env))
        case Sub(left=l, right=r):
            return ctx.sub(evaluate(l, ctx, env), evaluate(r, ctx, env))
        case Mul(left=l, right=r):
            return ctx.mul(evaluate(l, ctx, env), evaluate(r, ctx, env))
        case Div(left=l, right=r):
            return ctx.div(evaluate(l, ctx, env), evaluate(r, ctx, env))
        case Neg(operand=x):
            return ctx.neg(evaluate(x, ctx, env))
        case PowInt(base=b, exponent=k):
            return ctx.powint(evaluate(b, ctx, env), k)
        case Exp(operand=x):
            return ctx.exp(evaluate(x, ctx, env))
        case Tanh(operand=x):
            return ctx.tanh(evaluate(x, ctx, env))
    raise TypeError(f"not an expression node: {node!r}")


def walk(node):
    """All nodes of a tree, root first."""
    yield node
    match node:
        case Add(left=l, right=r) | Sub(left=l, right=r) | Mul(left=l, right=r) \
                | Div(left=l, right=r):
            yield from walk(l)
            yield from walk(r)
        case Neg(operand=x) | Exp(operand=x) | Tanh(operand=x):
            yield from walk(x)
        case PowInt(base=b):
            yield from walk(b)


def variable_names(node) -> set:
    return {n.name for n in walk(node) if isinstance(n, Var)}


def network_references(node) -> set:
    return {(n.net_id, n.index) for n in walk(node) if isinstance(n, NetOut)}
