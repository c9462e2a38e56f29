"""Recursive-descent parser for log-polynomial expressions.

Grammar (whitespace insensitive)::

    sum     := product (("+" | "-") product)*
    product := power (("*" | "/") power)*
    power   := atom ("^" uint)?
    atom    := rational | "x" | "log" "(" "x" ("+" rational)? ")" | "(" sum ")"
    rational:= int ("/" uint)?          int may carry a sign

A ``/`` directly after an integer literal and followed by digits is part of
the literal, so ``1/2*x`` is ``(1/2)*x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactmath import Poly, RatFunc
from .logcalc import LogPolyExpr


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class LoweringError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    kind: str          # num | x | log | add | sub | mul | div | pow
    start: int
    end: int
    value: Fraction | int | None = None
    children: tuple["Node", ...] = ()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.data = text.encode("utf-8")
        self.pos = 0

    # byte offsets are reported, so work on the encoded form
    def _skip(self):
        while self.pos < len(self.data) and self.data[self.pos] in b" \t\r\n":
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return chr(self.data[self.pos]) if self.pos < len(self.data) else ""

    def _expect(self, s: str):
        self._skip()
        if self.data[self.pos:self.pos + len(s)] != s.encode():
            got = self._peek() or "end of input"
            raise ParseError(f"expected {s!r}, found {got!r}", self.pos)
        self.pos += len(s)

    def _digits(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.data) and 48 <= self.data[self.pos] <= 57:
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected digits", start)
        return int(self.data[start:self.pos])

    def _digits_ahead(self) -> bool:
        p = self.pos
        while p < len(self.data) and self.data[p] in b" \t\r\n":
            p += 1
        return p < len(self.data) and 48 <= self.data[p] <= 57

    def parse(self) -> Node:
        node = self.sum()
        self._skip()
        if self.pos != len(self.data):
            raise ParseError(f"unexpected {chr(self.data[self.pos])!r}", self.pos)
        return node

    def sum(self) -> Node:
        left = self.product()
        while self._peek() in ("+", "-"):
            op = self._peek()
            self.pos += 1
            right = self.product()
            left = Node("add" if op == "+" else "sub", left.start, right.end, children=(left, right))
        return left

    def product(self) -> Node:
        left = self.power()
        while self._peek() in ("*", "/"):
            op = self._peek()
            self.pos += 1
            right = self.power()
            left = Node("mul" if op == "*" else "div", left.start, right.end, children=(left, right))
        return left

    def power(self) -> Node:
        base = self.atom()
        if self._peek() == "^":
            self.pos += 1
            k = self._digits()
            return Node("pow", base.start, self.pos, value=k, children=(base,))
        return base

    def rational(self) -> Node:
        self._skip()
        start = self.pos
        sign = 1
        if self._peek() in ("+", "-"):
            sign = -1 if self._peek() == "-" else 1
            self.pos += 1
        num = self._digits()
        den = 1
        save = self.pos
        if self._peek() == "/":
            self.pos += 1
            if self._digits_ahead():
                den = self._digits()
                if den == 0:
                    raise ParseError("zero denominator", save)
            else:
                self.pos = save
        return Node("num", start, self.pos, value=Fraction(sign * num, den))

    def atom(self) -> Node:
        c = self._peek()
        start = self.pos
        if c == "(":
            self.pos += 1
            inner = self.sum()
            self._expect(")")
            return Node(inner.kind, start, self.pos, inner.value, inner.children)
        if c.isdigit() or c in ("+", "-"):
            return self.rational()
        if self.data.startswith(b"log", self.pos):
            self.pos += 3
            self._expect("(")
            self._expect("x")
            shift = Fraction(0)
            if self._peek() == "+":
                self.pos += 1
                shift = self.rational().value
            self._expect(")")
            return Node("log", start, self.pos, value=shift)
        if c == "x":
            self.pos += 1
            return Node("x", start, self.pos)
        raise ParseError(f"unexpected {c!r}" if c else "unexpected end of input", self.pos)


def parse_expression(text: str) -> Node:
    return _Parser(text).parse()


# -- lowering ----------------------------------------------------------------

# intermediate form: log coefficients may be rational functions until the end
_Form = tuple[dict[Fraction, RatFunc], RatFunc]


def _snippet(text: str, node: Node) -> str:
    return text.encode("utf-8")[node.start:node.end].decode("utf-8", "replace").strip()


def _add(f: _Form, g: _Form, sign: int) -> _Form:
    logs = dict(f[0])
    for b, c in g[0].items():
        logs[b] = logs.get(b, RatFunc()) + (c if sign > 0 else -c)
    return {b: c for b, c in logs.items() if not c.is_zero()}, (f[1] + g[1] if sign > 0 else f[1] - g[1])


def _scale(f: _Form, r: RatFunc) -> _Form:
    logs = {b: c * r for b, c in f[0].items()}
    return {b: c for b, c in logs.items() if not c.is_zero()}, f[1] * r


def _lower(node: Node, text: str) -> _Form:
    k = node.kind
    if k == "num":
        return {}, RatFunc(node.value)
    if k == "x":
        return {}, RatFunc(Poly.x())
    if k == "log":
        if node.value < 0:
            raise LoweringError(f"negative shift in {_snippet(text, node)!r}: log(x + b) needs b >= 0")
        return {node.value: RatFunc(1)}, RatFunc()
    if k in ("add", "sub"):
        f, g = (_lower(c, text) for c in node.children)
        return _add(f, g, 1 if k == "add" else -1)
    if k == "mul":
        f, g = (_lower(c, text) for c in node.children)
        if f[0] and g[0]:
            raise LoweringError(f"nonlinear use of log in {_snippet(text, node)!r}")
        if f[0]:
            return _scale(f, g[1])
        return _scale(g, f[1])
    if k == "div":
        f, g = (_lower(c, text) for c in node.children)
        if g[0]:
            raise LoweringError(f"nonlinear use of log in {_snippet(text, node)!r}: log in a divisor")
        if g[1].is_zero():
            raise LoweringError(f"division by zero in {_snippet(text, node)!r}")
        return _scale(f, RatFunc(1) / g[1])
    if k == "pow":
        f = _lower(node.children[0], text)
        if f[0]:
            if node.value != 1:
                raise LoweringError(f"nonlinear use of log in {_snippet(text, node)!r}")
            return f
        return {}, f[1] ** node.value
    raise AssertionError(k)


def lower(node: Node, text: str = "") -> LogPolyExpr:
    logs, rat = _lower(node, text)
    terms = []
    for b, c in logs.items():
        if not c.is_poly():
            raise LoweringError(f"coefficient of log(x + {b}) is not a polynomial: {c}")
        terms.append((b, c.num))
    return LogPolyExpr.make(terms, rat)


def parse_logpoly(text: str) -> LogPolyExpr:
    return lower(parse_expression(text), text)
