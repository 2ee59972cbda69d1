"""Expression language for the command line: parse, evaluate, differentiate.

Grammar (lowest to highest precedence)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?          # right associative
    primary := NUMBER | 'x' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'

so ``-2^2 == -4`` and ``2^3^2 == 512``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

FUNCTIONS = ("sin", "cos", "ln", "exp", "sqrt", "abs")
CONSTANTS = {"pi": math.pi, "e": math.e}


class ExprSyntaxError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnknownIdentifier(ValueError):
    def __init__(self, name, pos):
        super().__init__(f"unknown identifier {name!r} at position {pos}")
        self.name = name
        self.pos = pos


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


def _tokenize(s):
    pos = 0
    out = []
    while pos < len(s):
        if s[pos:].strip() == "":
            break
        m = _TOKEN.match(s, pos)
        if m is None:
            bad = pos
            while s[bad].isspace():
                bad += 1
            raise ExprSyntaxError(f"unexpected character {s[bad]!r}", bad)
        start = m.start(m.lastgroup)
        out.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    out.append(("end", "", len(s)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ExprSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Bin(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Bin(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return Bin("^", base, self.unary())
        return base

    def primary(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            if val == "x":
                return Var()
            if val in CONSTANTS:
                return Const(val)
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            raise UnknownIdentifier(val, pos)
        if val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected {val or 'end of input'!r}", pos)


def parse_expr(s):
    if not s or not s.strip():
        raise ExprSyntaxError("empty expression", 0)
    p = _Parser(s)
    node = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected {val!r}", pos)
    return node


def unparse(node):
    """Fully parenthesized text that parses back to the same tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        return f"(-{unparse(node.arg)})"
    if isinstance(node, Bin):
        return f"({unparse(node.left)} {node.op} {unparse(node.right)})"
    if isinstance(node, Call):
        return f"{node.fn}({unparse(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


# "sign" appears only in derivative trees; the parser never produces it
_NP = {"sin": np.sin, "cos": np.cos, "ln": np.log, "exp": np.exp, "sqrt": np.sqrt, "abs": np.abs,
       "sign": np.sign}


def evaluate(node, x):
    """Evaluate on a float or array; domain errors yield nan/inf rather than raising."""
    x = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(node, x)
    return np.broadcast_to(out, x.shape).astype(float) if x.ndim else float(out)


def _eval(node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -_eval(node.arg, x)
    if isinstance(node, Call):
        return _NP[node.fn](_eval(node.arg, x))
    a, b = _eval(node.left, x), _eval(node.right, x)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return np.divide(a, b)
    return np.power(np.asarray(a, dtype=float), b)


def depends_on_x(node):
    if isinstance(node, Var):
        return True
    if isinstance(node, (Num, Const)):
        return False
    if isinstance(node, (Neg, Call)):
        return depends_on_x(node.arg)
    return depends_on_x(node.left) or depends_on_x(node.right)


ZERO, ONE = Num(0.0), Num(1.0)


def _add(a, b):
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    return Bin("+", a, b)


def _sub(a, b):
    if b == ZERO:
        return a
    if a == ZERO:
        return _neg(b)
    return Bin("-", a, b)


def _mul(a, b):
    if ZERO in (a, b):
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    return Bin("*", a, b)


def _div(a, b):
    if a == ZERO:
        return ZERO
    if b == ONE:
        return a
    return Bin("/", a, b)


def _neg(a):
    if a == ZERO:
        return ZERO
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def differentiate(node):
    """Symbolic d/dx with light simplification of zeros and ones."""
    if isinstance(node, (Num, Const)):
        return ZERO
    if isinstance(node, Var):
        return ONE
    if isinstance(node, Neg):
        return _neg(differentiate(node.arg))
    if isinstance(node, Call):
        u, du = node.arg, differentiate(node.arg)
        if du == ZERO or node.fn == "sign":
            return ZERO
        outer = {
            "sin": lambda: Call("cos", u),
            "cos": lambda: _neg(Call("sin", u)),
            "ln": lambda: _div(ONE, u),
            "exp": lambda: node,
            "sqrt": lambda: _div(ONE, Bin("*", Num(2.0), node)),
            "abs": lambda: Call("sign", u),
        }[node.fn]()
        return _mul(outer, du)
    a, b = node.left, node.right
    da, db = differentiate(a), differentiate(b)
    if node.op == "+":
        return _add(da, db)
    if node.op == "-":
        return _sub(da, db)
    if node.op == "*":
        return _add(_mul(da, b), _mul(a, db))
    if node.op == "/":
        return _div(_sub(_mul(da, b), _mul(a, db)), Bin("^", b, Num(2.0)))
    # power
    if not depends_on_x(b):
        return _mul(_mul(b, Bin("^", a, _sub(b, ONE))), da)
    return _mul(node, _add(_mul(db, Call("ln", a)), _div(_mul(b, da), a)))


def to_funcspec(text):
    """Build a :class:`~altapprox.operators.FuncSpec` with a symbolic derivative.

    The derivative is flagged endpoint-singular when it is not finite at 0 or 1
    (``sqrt(x)`` at the origin, say).
    """
    from .operators import FuncSpec

    tree = parse_expr(text)
    dtree = differentiate(tree)
    f = lambda x: evaluate(tree, np.asarray(x, dtype=float))
    df = lambda x: evaluate(dtree, np.asarray(x, dtype=float))
    ends = f(np.array([0.0, 1.0]))
    if not np.all(np.isfinite(ends)):
        raise ValueError(f"{text!r} is not finite at both endpoints: f(0)={ends[0]}, f(1)={ends[1]}")
    dends = df(np.array([0.0, 1.0]))
    singular = not bool(np.all(np.isfinite(dends)))
    return FuncSpec(f, df, float(ends[0]), float(ends[1]), singular, text)
