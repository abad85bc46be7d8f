"""Parser and evaluator for bundle expressions.

Grammar (whitespace-insensitive, ``*`` binds tighter than ``+``)::

    expr   := term ('+' term)*
    term   := atom ('*' atom)*
    atom   := 'F' '(' int ')'
            | 'L' '(' int [';' twist] ')'
            | 'I' '(' int ',' int [';' twist] ')'
            | ('S2' | 'W2' | 'dual' | 'det' | 'End') '(' expr ')'
            | 'Sym' '(' int ',' expr ')'
            | '(' expr ')'
    twist  := (name ['^' int])*

``eta1, eta2, eta3`` (2-torsion) and ``tau`` (3-torsion) are predeclared;
any other name becomes a free generator of Pic^0, in order of appearance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import bundle as B
from .picard import AbGroup, GroupElem, PicardClass, default_group, named_torsion

PREDECLARED = ("eta1", "eta2", "eta3", "tau")
FUNCTIONS = ("S2", "W2", "dual", "det", "End")


class ParseError(ValueError):
    def __init__(self, msg: str, src: str, pos: int):
        line = src.count("\n", 0, pos) + 1
        col = pos - (src.rfind("\n", 0, pos) + 1) + 1
        where = "end of input" if pos >= len(src) else f"line {line}, column {col}"
        super().__init__(f"{msg} at {where}")
        self.pos, self.line, self.column = pos, line, col


class UnknownIdentifier(ParseError):
    pass


class EvalError(ValueError):
    pass


# ---------------------------------------------------------------- syntax tree

Twist = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class Unip:
    r: int


@dataclass(frozen=True)
class Line:
    d: int
    twist: Twist = ()


@dataclass(frozen=True)
class Indec:
    r: int
    d: int
    twist: Twist = ()


@dataclass(frozen=True)
class Sum:
    left: object
    right: object


@dataclass(frozen=True)
class Tensor:
    left: object
    right: object


@dataclass(frozen=True)
class Apply:
    fn: str
    arg: object


@dataclass(frozen=True)
class SymN:
    n: int
    arg: object


def _fmt_twist(tw: Twist) -> str:
    return " ".join(name if k == 1 else f"{name}^{k}" for name, k in tw)


def format_expr(node) -> str:
    if isinstance(node, Unip):
        return f"F({node.r})"
    if isinstance(node, Line):
        return f"L({node.d}; {_fmt_twist(node.twist)})" if node.twist else f"L({node.d})"
    if isinstance(node, Indec):
        tw = f"; {_fmt_twist(node.twist)}" if node.twist else ""
        return f"I({node.r}, {node.d}{tw})"
    if isinstance(node, Sum):
        return f"{format_expr(node.left)} + {format_expr(node.right)}"
    if isinstance(node, Tensor):
        wrap = lambda x: f"({format_expr(x)})" if isinstance(x, Sum) else format_expr(x)  # noqa: E731
        return f"{wrap(node.left)} * {wrap(node.right)}"
    if isinstance(node, Apply):
        return f"{node.fn}({format_expr(node.arg)})"
    if isinstance(node, SymN):
        return f"Sym({node.n}, {format_expr(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------- tokenizer / parser

_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[()+*;,^]))")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(src: str) -> list[_Tok]:
    toks, pos = [], 0
    while True:
        m = _TOKEN.match(src, pos)
        if not m:
            rest = src[pos:]
            if rest.strip() == "":
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise ParseError(f"unexpected character {src[bad]!r}", src, bad)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("eof", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.names: list[str] = []

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, self.src, tok.pos)

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if t.text != text or t.kind == "eof":
            self.fail(f"expected {text!r}" + ("" if t.kind == "eof" else f", found {t.text!r}"))
        return self.take()

    def integer(self) -> int:
        t = self.peek()
        if t.kind != "int":
            self.fail("expected an integer")
        return int(self.take().text)

    def parse(self):
        node = self.expr()
        if self.peek().kind != "eof":
            self.fail(f"unexpected {self.peek().text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek().text == "+":
            self.take()
            node = Sum(node, self.term())
        return node

    def term(self):
        node = self.atom()
        while self.peek().text == "*":
            self.take()
            node = Tensor(node, self.atom())
        return node

    def twist(self) -> Twist:
        out: dict[str, int] = {}
        while self.peek().kind == "name":
            name = self.take().text
            k = 1
            if self.peek().text == "^":
                self.take()
                k = self.integer()
            if name not in PREDECLARED and name not in self.names:
                self.names.append(name)
            out[name] = out.get(name, 0) + k
        return tuple((n, k) for n, k in out.items() if k)

    def atom(self):
        t = self.peek()
        if t.text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind != "name":
            self.fail("expected a bundle" if t.kind != "eof" else "unexpected end of input")
        name = self.take().text
        if name == "F":
            self.expect("(")
            r = self.integer()
            self.expect(")")
            if r < 1:
                self.fail("rank must be >= 1", t)
            return Unip(r)
        if name == "L":
            self.expect("(")
            d = self.integer()
            tw: Twist = ()
            if self.peek().text == ";":
                self.take()
                tw = self.twist()
            self.expect(")")
            return Line(d, tw)
        if name == "I":
            self.expect("(")
            r = self.integer()
            self.expect(",")
            d = self.integer()
            tw = ()
            if self.peek().text == ";":
                self.take()
                tw = self.twist()
            self.expect(")")
            if r < 1:
                self.fail("rank must be >= 1", t)
            return Indec(r, d, tw)
        if name in FUNCTIONS:
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Apply(name, arg)
        if name == "Sym":
            self.expect("(")
            n = self.integer()
            self.expect(",")
            arg = self.expr()
            self.expect(")")
            return SymN(n, arg)
        raise UnknownIdentifier(f"unknown constructor {name!r}", self.src, t.pos)


def parse_expr(src: str):
    return _Parser(src).parse()


def identifiers(src: str) -> list[str]:
    """Free twist names of ``src`` in order of first appearance."""
    p = _Parser(src)
    p.parse()
    return p.names


# ---------------------------------------------------------------- evaluation


@dataclass
class Session:
    """A Picard stand-in plus the identifiers that name its elements."""

    group: AbGroup
    names: dict[str, GroupElem] = field(default_factory=dict)

    @classmethod
    def for_names(cls, free_names: list[str]) -> Session:
        g = default_group(tuple(free_names))
        names = {n: g.generator(i) for i, n in enumerate(free_names)}
        for k, v in named_torsion(g).items():
            if k in names:
                raise ValueError(f"identifier {k!r} declared twice")
            names[k] = v
        return cls(g, names)

    def twist(self, tw: Twist) -> GroupElem:
        out = self.group.zero()
        for name, k in tw:
            if name not in self.names:
                raise EvalError(f"unknown identifier {name!r}")
            out = out + self.names[name] * k
        return out


Value = B.Bundle | B.SlopeProfile | PicardClass


def _as_bundle(v: Value) -> B.BundleLike:
    if isinstance(v, PicardClass):
        return B.Bundle((B.line(v.degree, v.cls),))
    return v


def evaluate(node, session: Session) -> Value:
    if isinstance(node, Unip):
        return B.Bundle((B.unipotent(node.r, session.group),))
    if isinstance(node, Line):
        return B.Bundle((B.line(node.d, session.twist(node.twist)),))
    if isinstance(node, Indec):
        return B.Bundle((B.Indecomposable(node.r, node.d, session.twist(node.twist)),))
    if isinstance(node, Sum):
        return B.direct_sum(_as_bundle(evaluate(node.left, session)), _as_bundle(evaluate(node.right, session)))
    if isinstance(node, Tensor):
        return B.tensor(_as_bundle(evaluate(node.left, session)), _as_bundle(evaluate(node.right, session)))
    if isinstance(node, Apply):
        x = _as_bundle(evaluate(node.arg, session))
        if node.fn == "det":
            if not isinstance(x, B.Bundle):
                raise EvalError("det of an undecomposed bundle")
            return B.det(x)
        fn = {"S2": B.sym2, "W2": B.wedge2, "dual": B.dual, "End": B.end_bundle}[node.fn]
        return fn(x)
    if isinstance(node, SymN):
        x = _as_bundle(evaluate(node.arg, session))
        if node.n == 2:
            return B.sym2(x)
        if not isinstance(x, B.Bundle):
            raise EvalError("Sym of an undecomposed bundle")
        try:
            return B.sym_n_rank2(x, node.n)
        except ValueError as exc:
            raise EvalError(str(exc)) from exc
    raise TypeError(f"not an expression node: {node!r}")


def eval_source(src: str) -> tuple[Value, Session]:
    tree = parse_expr(src)
    session = Session.for_names(identifiers(src))
    return evaluate(tree, session), session


def format_value(v: Value) -> str:
    if isinstance(v, PicardClass):
        return B.format_class(v)
    return str(v)
