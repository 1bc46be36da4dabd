"""Expression language for curve components.

Grammar (precedence climbing, loosest first)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' unary)?          # right associative
    primary := NUMBER | 't' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus, so ``-t^2`` is ``-(t^2)`` and
``2^3^2`` is ``2^(3^2)``.

A curve file is a sequence of ``;``-separated statements::

    dim 3;
    x = cos(t); y = sin(t); z = t;
    domain [0, 2*pi];
    periodic;
    label "circular helix";
"""

from dataclasses import dataclass
import math
import re

import numpy as np

from ..errors import DimensionError, ParseError

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "atan")
CONSTANTS = {"pi": math.pi, "e": math.e}
PARAMETER = "t"
KEYWORDS = ("dim", "domain", "periodic", "label")


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Param:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


def depends_on_parameter(node):
    if isinstance(node, Param):
        return True
    if isinstance(node, (Num, Const)):
        return False
    if isinstance(node, Neg):
        return depends_on_parameter(node.operand)
    if isinstance(node, Call):
        return depends_on_parameter(node.arg)
    return depends_on_parameter(node.left) or depends_on_parameter(node.right)


def substitute(node, replacement):
    """Replace every occurrence of the parameter by ``replacement``."""
    if isinstance(node, Param):
        return replacement
    if isinstance(node, (Num, Const)):
        return node
    if isinstance(node, Neg):
        return Neg(substitute(node.operand, replacement))
    if isinstance(node, Call):
        return Call(node.fn, substitute(node.arg, replacement))
    return BinOp(node.op, substitute(node.left, replacement), substitute(node.right, replacement))


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<string>"[^"\n]*")
  | (?P<op>[-+*/^()\[\],;=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(source):
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, source):
        self.tokens = tokenize(source)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, expected, message=None):
        t = self.tok
        got = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(message or f"unexpected {got}", t.line, t.column, expected)

    def expect(self, text):
        if self.tok.text != text or self.tok.kind not in ("op", "ident"):
            self.fail({repr(text)})
        return self.advance()

    # expressions

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        if self.tok.kind == "op" and self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        t = self.tok
        if t.kind == "number":
            self.advance()
            return Num(float(t.text))
        if t.kind == "ident":
            if t.text == PARAMETER:
                self.advance()
                return Param()
            if t.text in CONSTANTS:
                self.advance()
                return Const(t.text)
            if t.text in FUNCTIONS:
                self.advance()
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            raise ParseError(f"unknown name {t.text!r}", t.line, t.column,
                             {"number", "'t'", "constant", "function"})
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail({"number", "'t'", "constant", "function", "'('"})

    # statements

    def statement_end(self):
        if self.tok.kind == "op" and self.tok.text == ";":
            self.advance()
        elif self.tok.kind != "eof":
            self.fail({"';'"})

    def constant_expr(self):
        start = self.tok
        node = self.expr()
        if depends_on_parameter(node):
            raise ParseError("domain bounds must not depend on t", start.line, start.column)
        return float(evaluate_float(node, 0.0))

    def curve(self):
        dim = None
        components = {}
        domain = None
        periodic = False
        label = ""
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "op" and t.text == ";":
                self.advance()
                continue
            if t.kind != "ident":
                self.fail({"statement"})
            if t.text == "dim":
                self.advance()
                n = self.tok
                if n.kind != "number" or not float(n.text).is_integer():
                    self.fail({"integer"})
                dim = int(float(self.advance().text))
            elif t.text == "domain":
                self.advance()
                self.expect("[")
                lo = self.constant_expr()
                self.expect(",")
                hi = self.constant_expr()
                self.expect("]")
                if not hi > lo:
                    raise ParseError("empty domain", t.line, t.column)
                domain = (lo, hi)
            elif t.text == "periodic":
                self.advance()
                periodic = True
            elif t.text == "label":
                self.advance()
                if self.tok.kind != "string":
                    self.fail({"string"})
                label = self.advance().text[1:-1]
            else:
                name = self.advance().text
                if name in components:
                    raise ParseError(f"component {name!r} defined twice", t.line, t.column)
                if _component_index(name) is None:
                    raise ParseError(f"invalid component name {name!r}", t.line, t.column,
                                     {"x", "y", "z", "w", "x1..xk"})
                self.expect("=")
                components[name] = (self.expr(), t)
            self.statement_end()
        return dim, components, domain, periodic, label


def _component_index(name):
    if name in ("x", "y", "z", "w"):
        return "xyzw".index(name)
    m = re.fullmatch(r"x([1-9]\d*)", name)
    if m:
        return int(m.group(1)) - 1
    return None


def parse_expr(source):
    p = _Parser(source)
    node = p.expr()
    if p.tok.kind != "eof":
        p.fail({"operator", "end of input"})
    return node


def parse_statements(source):
    """Parse a curve file into its raw parts.

    Returns ``(names, exprs, domain, periodic, label)`` with components
    ordered by coordinate index.
    """
    p = _Parser(source)
    dim, comps, domain, periodic, label = p.curve()
    end = p.tok
    if len(comps) < 2:
        raise DimensionError(f"a curve needs at least 2 components, got {len(comps)}")
    order = sorted(comps, key=_component_index)
    if [_component_index(n) for n in order] != list(range(len(order))):
        raise DimensionError("component names must cover x1..xk (or x, y, z, w) without gaps: "
                             + ", ".join(order))
    if dim is not None and dim != len(order):
        raise DimensionError(f"dim {dim} declared but {len(order)} components given")
    if domain is None:
        raise ParseError("missing domain statement", end.line, end.column, {"domain"})
    return tuple(order), tuple(comps[n][0] for n in order), domain, periodic, label


# ---------------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _fmt(node):
    """Return (text, precedence) of ``node``."""
    if isinstance(node, Num):
        text = repr(node.value)
        if node.value < 0 or text.startswith("-"):
            return text, 3
        return text, 5
    if isinstance(node, Param):
        return PARAMETER, 5
    if isinstance(node, Const):
        return node.name, 5
    if isinstance(node, Call):
        return f"{node.fn}({_fmt(node.arg)[0]})", 5
    if isinstance(node, Neg):
        text, p = _fmt(node.operand)
        if p < 3:
            text = f"({text})"
        return "-" + text, 3
    p = _PREC[node.op]
    lt, lp = _fmt(node.left)
    rt, rp = _fmt(node.right)
    if node.op == "^":
        if lp <= p:
            lt = f"({lt})"
        if rp < 3:
            rt = f"({rt})"
        return f"{lt}^{rt}", p
    if lp < p:
        lt = f"({lt})"
    if rp <= p:
        rt = f"({rt})"
    return f"{lt} {node.op} {rt}", p


def format_expr(node):
    return _fmt(node)[0]


# ---------------------------------------------------------------------------
# evaluation

class _FloatOps:
    sin = staticmethod(np.sin)
    cos = staticmethod(np.cos)
    tan = staticmethod(np.tan)
    exp = staticmethod(np.exp)
    log = staticmethod(np.log)
    sqrt = staticmethod(np.sqrt)
    atan = staticmethod(np.arctan)
    pow = staticmethod(np.power)


def evaluate(node, t, ops):
    """Evaluate ``node`` with the parameter bound to ``t``.

    ``ops`` supplies the elementary functions by name plus ``pow``; the
    arithmetic operators of ``t``'s type do the rest. Parameter-free
    subtrees evaluate to plain floats.
    """
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Param):
        return t
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.operand, t, ops)
    if isinstance(node, Call):
        arg = evaluate(node.arg, t, ops)
        if isinstance(arg, float):
            return float(getattr(_FloatOps, node.fn)(arg))
        return getattr(ops, node.fn)(arg)
    left = evaluate(node.left, t, ops)
    right = evaluate(node.right, t, ops)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        return left / right
    if isinstance(left, float) and isinstance(right, float):
        return float(_FloatOps.pow(left, right))
    return ops.pow(left, right)


def evaluate_float(node, t):
    return evaluate(node, t, _FloatOps)
