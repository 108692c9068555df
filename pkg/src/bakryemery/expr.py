"""A small arithmetic grammar in one variable ``r`` with exact symbolic derivatives.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom (('^' | '**') unary)?
    atom   := NUMBER | 'r' | 'pi' | 'e' | FUNC '(' expr ')' | 'pow' '(' expr ',' expr ')'
            | '(' expr ')'
    FUNC   := exp | log | sin | cos | sinh | cosh
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["ParseError", "Expr", "parse", "derivative", "compile_expr", "to_text"]

FUNCS = ("exp", "log", "sin", "cos", "sinh", "cosh")
CONSTS = {"pi": math.pi, "e": math.e}


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}" + (f" in {text!r}" if text else ""))
        self.offset = offset


@dataclass(frozen=True)
class Expr:
    op: str           # 'num', 'var', '+', '-', '*', '/', '^', 'neg', or a FUNC name
    args: tuple = ()
    value: float = 0.0


R = Expr("var")
ZERO = Expr("num", value=0.0)
ONE = Expr("num", value=1.0)


def num(v: float) -> Expr:
    return Expr("num", value=float(v))


def _is(e: Expr, v: float) -> bool:
    return e.op == "num" and e.value == v


# -- smart constructors (constant folding and unit laws) ---------------------

def add(a, b):
    if a.op == "num" and b.op == "num":
        return num(a.value + b.value)
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    return Expr("+", (a, b))


def sub(a, b):
    if a.op == "num" and b.op == "num":
        return num(a.value - b.value)
    if _is(b, 0):
        return a
    if _is(a, 0):
        return neg(b)
    return Expr("-", (a, b))


def mul(a, b):
    if a.op == "num" and b.op == "num":
        return num(a.value * b.value)
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    return Expr("*", (a, b))


def div(a, b):
    if _is(b, 1):
        return a
    if _is(a, 0):
        return ZERO
    if a.op == "num" and b.op == "num" and b.value != 0:
        return num(a.value / b.value)
    return Expr("/", (a, b))


def power(a, b):
    if _is(b, 0):
        return ONE
    if _is(b, 1):
        return a
    if a.op == "num" and b.op == "num":
        try:
            return num(a.value ** b.value)
        except (OverflowError, ZeroDivisionError):
            pass
    return Expr("^", (a, b))


def neg(a):
    if a.op == "num":
        return num(-a.value)
    if a.op == "neg":
        return a.args[0]
    return Expr("neg", (a,))


def call(fn, a):
    return Expr(fn, (a,))


# -- parser -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|([A-Za-z_]\w*)|(\*\*|[-+*/^(),]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            off = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[off]!r}", off, text)
        start = m.start(m.lastindex)
        kind = ("num", "name", "op")[m.lastindex - 1]
        toks.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {value!r} but found {what}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self):
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            e = Expr("+", (e, rhs)) if op == "+" else Expr("-", (e, rhs))
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            e = Expr("*", (e, rhs)) if op == "*" else Expr("/", (e, rhs))
        return e

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("-", "+"):
            self.take()
            inner = self.unary()
            return Expr("neg", (inner,)) if tok[1] == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] in ("^", "**"):
            self.take()
            return Expr("^", (base, self.unary()))
        return base

    def atom(self):
        kind, val, off = self.peek()
        if kind == "num":
            self.take()
            return num(float(val))
        if kind == "name":
            self.take()
            if val == "r":
                return R
            if val in CONSTS:
                return num(CONSTS[val])
            if val in FUNCS:
                self.take("(")
                arg = self.expr()
                self.take(")")
                return Expr(val, (arg,))
            if val == "pow":
                self.take("(")
                a = self.expr()
                self.take(",")
                b = self.expr()
                self.take(")")
                return Expr("^", (a, b))
            raise ParseError(f"unknown name {val!r}", off, self.text)
        if kind == "op" and val == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        what = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {what}", off, self.text)


def parse(text: str) -> Expr:
    if not isinstance(text, str):
        text = repr(float(text))
    return _Parser(text).parse()


# -- differentiation ----------------------------------------------------------

def derivative(e: Expr) -> Expr:
    """d/dr of ``e``, simplified by constant folding."""
    op, a = e.op, e.args
    if op == "num":
        return ZERO
    if op == "var":
        return ONE
    if op == "+":
        return add(derivative(a[0]), derivative(a[1]))
    if op == "-":
        return sub(derivative(a[0]), derivative(a[1]))
    if op == "neg":
        return neg(derivative(a[0]))
    if op == "*":
        u, v = a
        return add(mul(derivative(u), v), mul(u, derivative(v)))
    if op == "/":
        u, v = a
        return div(sub(mul(derivative(u), v), mul(u, derivative(v))), power(v, num(2)))
    if op == "^":
        u, v = a
        du, dv = derivative(u), derivative(v)
        if dv.op == "num" and dv.value == 0:
            return mul(mul(v, power(u, sub(v, ONE))), du)
        # u^v (v' log u + v u'/u)
        return mul(e, add(mul(dv, call("log", u)), div(mul(v, du), u)))
    u = a[0]
    du = derivative(u)
    inner = {
        "exp": lambda: e,
        "log": lambda: div(ONE, u),
        "sin": lambda: call("cos", u),
        "cos": lambda: neg(call("sin", u)),
        "sinh": lambda: call("cosh", u),
        "cosh": lambda: call("sinh", u),
    }[op]()
    return mul(inner, du)


def simplify(e: Expr) -> Expr:
    op, a = e.op, e.args
    if op in ("num", "var"):
        return e
    s = tuple(simplify(x) for x in a)
    if op == "+":
        return add(*s)
    if op == "-":
        return sub(*s)
    if op == "*":
        return mul(*s)
    if op == "/":
        return div(*s)
    if op == "^":
        return power(*s)
    if op == "neg":
        return neg(s[0])
    if s[0].op == "num":
        fn = getattr(math, op)
        try:
            return num(fn(s[0].value))
        except (ValueError, OverflowError):
            pass
    return call(op, s[0])


# -- evaluation ---------------------------------------------------------------

_NP = {"exp": np.exp, "log": np.log, "sin": np.sin, "cos": np.cos, "sinh": np.sinh, "cosh": np.cosh}


def _int_exponent(e: Expr):
    if e.op == "num" and float(e.value).is_integer() and abs(e.value) <= 64:
        return int(e.value)
    return None


def compile_expr(e: Expr) -> Callable[[np.ndarray], np.ndarray]:
    """Closure evaluating ``e`` on numpy arrays of r."""
    op, a = e.op, e.args
    if op == "num":
        v = e.value
        return lambda r: np.full(np.shape(r), v)
    if op == "var":
        return lambda r: np.asarray(r, dtype=float)
    if op == "neg":
        f = compile_expr(a[0])
        return lambda r: -f(r)
    if op in FUNCS:
        f, g = compile_expr(a[0]), _NP[op]
        return lambda r: g(f(r))
    f, g = compile_expr(a[0]), compile_expr(a[1])
    if op == "+":
        return lambda r: f(r) + g(r)
    if op == "-":
        return lambda r: f(r) - g(r)
    if op == "*":
        return lambda r: f(r) * g(r)
    if op == "/":
        return lambda r: f(r) / g(r)
    k = _int_exponent(a[1])
    if k is not None:
        return lambda r: f(r) ** k
    return lambda r: np.power(f(r), g(r))


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def to_text(e: Expr) -> str:
    """Render ``e`` so that ``parse(to_text(e))`` evaluates identically."""
    op, a = e.op, e.args
    if op == "num":
        return repr(e.value) if e.value >= 0 else f"({e.value!r})"
    if op == "var":
        return "r"
    if op in FUNCS:
        return f"{op}({to_text(a[0])})"
    if op == "neg":
        inner = to_text(a[0])
        return f"-({inner})" if a[0].op not in ("num", "var") and a[0].op not in FUNCS else f"-{inner}"
    p = _PREC[op]

    def wrap(x, right=False):
        t = to_text(x)
        xp = _PREC.get(x.op, 5)
        if xp < p or (right and xp == p and op in ("-", "/", "^")) or (op == "^" and not right and xp <= p):
            return f"({t})"
        return t

    return f"{wrap(a[0])} {op} {wrap(a[1], right=True)}"
