"""A small expression language over catalog functions.

Grammar (loosest binding first)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | comp
    comp  := atom ('.' atom)*                 # composition, f.g = f ∘ g
    atom  := NUMBER | 'pi' | NAME | 'x'
           | 'inv' '(' expr ')' | 'd' '(' expr ')'
           | 'iter' '(' expr ',' INT ')'
           | 'int' '(' expr ',' limit ',' limit ')'
           | '(' expr ')'
    limit := ['-'] NUMBER | ['-'] 'pi' | 'x'

Numbers denote constant functions; ``x`` (or ``id``) is the identity. In
``int(e, lo, hi)`` a limit spelled ``x`` is the argument of the resulting
function, so ``int(sin, 0, x)`` is the antiderivative of sine based at 0.
"""

import dataclasses
import math
import re

from .catalog import lookup
from .core import Function, compose, constant, identity, iterate, neg
from .errors import CapabilityError, DomainError, FnAlgError, NotFoundError
from .integration import antiderivative, definite_integral

__all__ = ["ExpressionError", "Node", "build", "evaluate", "parse", "parse_real"]


class ExpressionError(FnAlgError):
    """Parse, capability or domain failure tied to a span of the source text."""

    def __init__(self, kind, message, source, span):
        self.kind = kind
        self.source = source
        self.span = span
        start, end = span
        fragment = source[start:end]
        super().__init__(f"{kind} error at position {start}: {message} (in `{fragment}`)")

    def caret(self):
        start, end = self.span
        return self.source + "\n" + " " * start + "^" * max(1, end - start)


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[.+\-*/(),])"
    r")"
)

_SPECIAL = {"inv", "d", "iter", "int"}


@dataclasses.dataclass
class Token:
    kind: str
    text: str
    start: int
    end: int


@dataclasses.dataclass
class Node:
    kind: str
    args: tuple
    span: tuple


def tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        if source[pos:].strip() == "":
            break
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            bad = len(source) - len(source[pos:].lstrip())
            raise ExpressionError("parse", f"unexpected character {source[bad]!r}", source, (bad, bad + 1))
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind), m.end(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(source), len(source)))
    return tokens


class _Parser:
    def __init__(self, source):
        self.source = source
        self.tokens = tokenize(source)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ExpressionError("parse", message, self.source, (tok.start, max(tok.end, tok.start + 1)))

    def take(self, text=None, kind=None):
        tok = self.tok
        if (text is not None and tok.text != text) or (kind is not None and tok.kind != kind):
            want = repr(text) if text else kind
            got = repr(tok.text) if tok.kind != "end" else "end of input"
            raise self.error(f"expected {want}, found {got}")
        self.i += 1
        return tok

    def at(self, text):
        return self.tok.kind == "op" and self.tok.text == text

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return node

    def _binary(self, sub, ops):
        node = sub()
        while self.tok.kind == "op" and self.tok.text in ops:
            op = self.take().text
            rhs = sub()
            node = Node(op, (node, rhs), (node.span[0], rhs.span[1]))
        return node

    def expr(self):
        return self._binary(self.term, "+-")

    def term(self):
        return self._binary(self.unary, "*/")

    def unary(self):
        if self.at("-"):
            start = self.take().start
            operand = self.unary()
            return Node("neg", (operand,), (start, operand.span[1]))
        return self.comp()

    def comp(self):
        return self._binary(self.atom, ".")

    def atom(self):
        tok = self.tok
        if tok.kind == "number":
            self.take()
            return Node("const", (float(tok.text),), (tok.start, tok.end))
        if tok.kind == "name":
            self.take()
            if tok.text in _SPECIAL and self.at("("):
                return self.special(tok)
            if tok.text == "pi":
                return Node("const", (math.pi,), (tok.start, tok.end))
            return Node("name", (tok.text,), (tok.start, tok.end))
        if self.at("("):
            self.take()
            node = self.expr()
            end = self.take(")").end
            return dataclasses.replace(node, span=(tok.start, end)) if node.kind == "name" else node
        if tok.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.text!r}")

    def special(self, head):
        self.take("(")
        inner = self.expr()
        args = [inner]
        if head.text == "iter":
            self.take(",")
            n = self.take(kind="number")
            if not re.fullmatch(r"\d+", n.text):
                raise self.error("iteration count must be a non-negative integer", n)
            args.append(int(n.text))
        elif head.text == "int":
            self.take(",")
            args.append(self.limit())
            self.take(",")
            args.append(self.limit())
        end = self.take(")").end
        return Node(head.text, tuple(args), (head.start, end))

    def limit(self):
        sign = 1.0
        if self.at("-"):
            self.take()
            sign = -1.0
        tok = self.tok
        if tok.kind == "number":
            self.take()
            return sign * float(tok.text)
        if tok.kind == "name" and tok.text == "pi":
            self.take()
            return sign * math.pi
        if tok.kind == "name" and tok.text == "x" and sign > 0:
            self.take()
            return "x"
        raise self.error("integration limit must be a number, pi or x")


def parse(source):
    return _Parser(source).parse()


class _Builder:
    def __init__(self, source, entries):
        self.source = source
        self.entries = entries
        self.spans = {}

    def fail(self, kind, message, node):
        return ExpressionError(kind, message, self.source, node.span)

    def text(self, node):
        return self.source[node.span[0]:node.span[1]]

    def build(self, node):
        f = self._build(node)
        self.spans.setdefault(f.serial, node.span)
        return f

    def _build(self, node):
        kind, args = node.kind, node.args
        if kind == "const":
            return constant(args[0])
        if kind == "name":
            return self.name(node)
        if kind == "neg":
            return neg(self.build(args[0]))
        if kind in ("+", "-", "*", "/", "."):
            f, g = self.build(args[0]), self.build(args[1])
            if kind == ".":
                return compose(f, g)
            return {"+": f.__add__, "-": f.__sub__, "*": f.__mul__, "/": f.__truediv__}[kind](g)
        inner = self.build(args[0])
        try:
            if kind == "inv":
                return inner.inverse()
            if kind == "d":
                return inner.derivative()
        except CapabilityError as exc:
            message = f"`{self.text(args[0])}` is not {exc.tier}"
            if exc.detail:
                message += f": {exc.detail}"
            raise self.fail("capability", message, args[0]) from exc
        if kind == "iter":
            return iterate(inner, args[1])
        if kind == "int":
            return self.integral(inner, args[1], args[2], node)
        raise AssertionError(kind)

    def name(self, node):
        key = node.args[0]
        if key in ("x", "id"):
            return identity()
        try:
            obj = lookup(key, self.entries).object
        except NotFoundError as exc:
            raise self.fail("parse", str(exc), node) from exc
        if not isinstance(obj, Function):
            raise self.fail("capability", f"`{key}` is not a scalar function", node)
        return obj

    def integral(self, f, lo, hi, node):
        if lo == "x" and hi == "x":
            return constant(0.0)
        if hi == "x":
            return antiderivative(f, lo)
        if lo == "x":
            return neg(antiderivative(f, hi))
        try:
            return constant(definite_integral(f, lo, hi))
        except DomainError as exc:
            raise self.fail("domain", str(exc), node) from exc


def build(source, entries=None):
    """Parse and build ``source``; returns ``(function, spans)``.

    ``spans`` maps the serial of every built subexpression to its source span.
    """
    node = parse(source)
    builder = _Builder(source, tuple(entries) if entries is not None else None)
    return builder.build(node), builder.spans


def domain_error(source, spans, exc):
    """Re-raise a ``DomainError`` as an ``ExpressionError`` pointing at its source."""
    span = spans.get(getattr(exc.function, "serial", None), (0, len(source)))
    return ExpressionError("domain", str(exc), source, span)


def evaluate(source, x, entries=None):
    f, spans = build(source, entries)
    try:
        return f.apply(x)
    except DomainError as exc:
        raise domain_error(source, spans, exc) from exc


def parse_real(text):
    """A real number from ``text``: a float literal or a constant expression like ``pi/2``."""
    try:
        return float(text)
    except ValueError:
        pass
    f, _ = build(text)
    return float(f.apply(0.0))
