"""Parser for polynomial / rational-function expressions.

Grammar (``^`` and ``**`` both mean power, ``i`` is the imaginary unit)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') exponent)?
    atom   := INTEGER | NAME | 'i' | '(' expr ')'
    exponent := INTEGER | '(' '-'? INTEGER ')' | '-' INTEGER
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .gaussian import Gaussian
from .ratfunc import RatFunc


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


@dataclass
class _Tok:
    kind: str  # "num", "name", "op", "end"
    text: str
    col: int


def _tokenize(text: str, line: int) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col - 1]!r}", line, col)
        num, name, op = m.groups()
        start = m.start(m.lastindex) + 1
        if num is not None:
            toks.append(_Tok("num", num, start))
        elif name is not None:
            toks.append(_Tok("name", name, start))
        else:
            toks.append(_Tok("op", op, start))
        pos = m.end()
    toks.append(_Tok("end", "", n + 1))
    return toks


class _Parser:
    def __init__(self, text: str, line: int, allowed):
        self.toks = _tokenize(text, line)
        self.pos = 0
        self.line = line
        self.allowed = allowed

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def take(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok.col)

    def expect(self, text):
        t = self.peek()
        if t.kind != "op" or t.text != text:
            self.error(f"expected {text!r}" + (f", found {t.text!r}" if t.text else ", found end of input"))
        return self.take()

    def parse(self) -> RatFunc:
        if self.peek().kind == "end":
            self.error("empty expression")
        value = self.expr()
        if self.peek().kind != "end":
            self.error(f"unexpected {self.peek().text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek().kind == "op" and self.peek().text in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            if tok.text == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    self.error("division by zero", tok)
                value = value / rhs
        return value

    def unary(self):
        t = self.peek()
        if t.kind == "op" and t.text in "+-":
            self.take()
            v = self.unary()
            return -v if t.text == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t.kind == "op" and t.text in ("^", "**"):
            self.take()
            exp = self.exponent()
            if exp < 0 and base.is_zero():
                self.error("negative power of zero", t)
            return base ** exp
        return base

    def exponent(self) -> int:
        t = self.peek()
        sign = 1
        if t.kind == "op" and t.text == "(":
            self.take()
            if self.peek().kind == "op" and self.peek().text == "-":
                self.take()
                sign = -1
            n = self.integer()
            self.expect(")")
            return sign * n
        if t.kind == "op" and t.text == "-":
            self.take()
            sign = -1
        return sign * self.integer()

    def integer(self) -> int:
        t = self.peek()
        if t.kind != "num":
            self.error("expected an integer exponent")
        self.take()
        return int(t.text)

    def atom(self):
        t = self.peek()
        if t.kind == "num":
            self.take()
            return RatFunc(int(t.text))
        if t.kind == "name":
            self.take()
            if t.text == "i":
                return RatFunc(Gaussian(0, 1))
            if self.allowed is not None and t.text not in self.allowed:
                self.error(f"unknown variable {t.text!r}", t)
            return RatFunc.var(t.text)
        if t.kind == "op" and t.text == "(":
            self.take()
            v = self.expr()
            self.expect(")")
            return v
        if t.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {t.text!r}")


def parse_expr(text: str, allowed=None, line: int = 1) -> RatFunc:
    """Parse one expression into a canonical :class:`RatFunc`.

    ``allowed`` optionally restricts the variable names.
    """
    return _Parser(text, line, allowed).parse()


def parse_lines(text: str, allowed=None) -> list[tuple[int, RatFunc]]:
    """Parse one expression per line, skipping blanks and ``#`` comments.

    Returns ``(line_number, value)`` pairs.
    """
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        out.append((lineno, parse_expr(body, allowed, lineno)))
    return out


def xy_variables(alpha: int) -> set[str]:
    return {f"x{l}" for l in range(1, alpha + 1)} | {f"y{l}" for l in range(1, alpha + 1)}
