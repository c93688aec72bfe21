"""Dirac ket expressions: a small recursive-descent parser and a printer.

Grammar (whitespace is insignificant)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (['*'|'/'] factor)*
    factor := '-' factor | primary ['^' int]
    primary:= number | 'i' | 'w' | 'sqrt' '(' number ')' | ket
            | '(' expr ')' | '[' expr ']'
    ket    := '|' [01]+ ('>' | '⟩')

``w`` is the cube root of unity exp(2 pi i / 3).  A term may hold at most
one ket-valued factor; parenthesized scalar expressions such as
``(0.5+0.5i)`` are coefficients.  Basis strings map to basis indices with
the leftmost character as the most significant bit (party A).
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import KetSyntaxError, MixedKetLength, ZeroVector
from .state import StateVector, from_amplitudes

OMEGA = cmath.exp(2j * math.pi / 3)

_TOKEN = re.compile(
    r"""
    (?P<ket>\|[01]+(?:>|⟩))
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<sqrt>sqrt)
  | (?P<name>[iwω])
  | (?P<op>[-+*/^()\[\]])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


# ------------------------------------------------------------------- AST


@dataclass(frozen=True)
class Ket:
    bits: str


@dataclass(frozen=True)
class Scaled:
    coefficient: complex
    expr: object


@dataclass(frozen=True)
class Group:
    expr: object


@dataclass(frozen=True)
class Sum:
    terms: tuple


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    """Tokens of ``text`` with whitespace removed first, so ``1 2`` reads as ``12``.

    Token positions index the original text.
    """
    where = [i for i, ch in enumerate(text) if not ch.isspace()]
    packed = "".join(text[i] for i in where)
    tokens = []
    pos = 0
    while pos < len(packed):
        m = _TOKEN.match(packed, pos)
        if not m:
            raise KetSyntaxError(f"unexpected character {packed[pos]!r}", _byte_offset(text, where[pos]))
        tokens.append(Token(m.lastgroup, m.group(), where[pos]))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise KetSyntaxError(msg, _byte_offset(self.text, tok.pos))

    def take(self, text: str | None = None) -> Token:
        tok = self.tok
        if text is not None and tok.text != text:
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok

    def at(self, *texts: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in texts

    # each parse_* returns either a complex scalar or an AST node holding kets

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self):
        start = self.tok
        sign = 1
        if self.at("+", "-"):
            sign = -1 if self.take().text == "-" else 1
        terms = [_scale(sign, self.term())]
        while self.at("+", "-"):
            sign = -1 if self.take().text == "-" else 1
            terms.append(_scale(sign, self.term()))
        scalars = [t for t in terms if isinstance(t, complex)]
        if len(scalars) == len(terms):
            return sum(scalars, 0j)
        if scalars:
            self.error("cannot add a bare number to a ket expression", start)
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self):
        start = self.tok
        coeff = 1 + 0j
        vec = None
        first = True
        while True:
            op = None
            if not first and self.at("*", "/"):
                op = self.take()
            elif not first and not self._starts_primary():
                break
            value = self.factor()
            if op is not None and op.text == "/":
                if not isinstance(value, complex):
                    self.error("cannot divide by a ket", op)
                if value == 0:
                    self.error("division by zero", op)
                coeff /= value
            elif isinstance(value, complex):
                coeff *= value
            else:
                if vec is not None:
                    self.error("a term may contain only one ket factor", start)
                vec = value
            first = False
        if vec is None:
            return coeff
        return vec if coeff == 1 else Scaled(coeff, vec)

    def _starts_primary(self) -> bool:
        t = self.tok
        return t.kind in ("num", "name", "sqrt", "ket") or self.at("(", "[")

    def factor(self):
        if self.at("-"):
            self.take()
            return _scale(-1, self.factor())
        base = self.primary()
        if self.at("^"):
            op = self.take()
            if self.tok.kind != "num" or not self.tok.text.isdigit():
                self.error("exponent must be a non-negative integer")
            if not isinstance(base, complex):
                self.error("cannot raise a ket to a power", op)
            base = base ** int(self.take().text)
        return base

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.take()
            return complex(float(t.text))
        if t.kind == "name":
            self.take()
            return 1j if t.text == "i" else OMEGA
        if t.kind == "sqrt":
            self.take()
            self.take("(")
            if self.tok.kind != "num":
                self.error("sqrt expects a number")
            arg = float(self.take().text)
            self.take(")")
            return complex(math.sqrt(arg))
        if t.kind == "ket":
            self.take()
            return Ket(t.text[1:-1])
        if self.at("(", "["):
            close = ")" if self.take().text == "(" else "]"
            inner = self.expr()
            self.take(close)
            return inner if isinstance(inner, complex) else Group(inner)
        self.error(f"unexpected {t.text or 'end of input'!r}")


def _scale(sign: int, value):
    if sign == 1:
        return value
    if isinstance(value, complex):
        return -value
    if isinstance(value, Scaled):
        return Scaled(-value.coefficient, value.expr)
    return Scaled(-1 + 0j, value)


def parse_expr(text: str):
    """Parse ``text`` into an AST (``Ket``/``Scaled``/``Group``/``Sum``)."""
    node = _Parser(text).parse()
    if isinstance(node, complex):
        raise KetSyntaxError("expression contains no ket", _byte_offset(text, len(text)))
    return node


def _collect(node, coeff: complex, out: dict, widths: set):
    if isinstance(node, Ket):
        widths.add(len(node.bits))
        idx = int(node.bits, 2)
        out[(len(node.bits), idx)] = out.get((len(node.bits), idx), 0j) + coeff
    elif isinstance(node, Scaled):
        _collect(node.expr, coeff * node.coefficient, out, widths)
    elif isinstance(node, Group):
        _collect(node.expr, coeff, out, widths)
    elif isinstance(node, Sum):
        for t in node.terms:
            _collect(t, coeff, out, widths)


def evaluate(node) -> tuple[int, np.ndarray]:
    """Unnormalized amplitudes of an AST."""
    acc: dict = {}
    widths: set = set()
    _collect(node, 1 + 0j, acc, widths)
    if len(widths) != 1:
        raise MixedKetLength(f"kets of different lengths {sorted(widths)} in one expression")
    n = widths.pop()
    amps = np.zeros(2**n, dtype=np.complex128)
    for (_, idx), c in acc.items():
        amps[idx] += c
    return n, amps


def parse(text: str, strict: bool = False) -> StateVector:
    n, amps = evaluate(parse_expr(text))
    if not np.any(amps):
        raise ZeroVector(f"{text!r} evaluates to the zero vector")
    return from_amplitudes(n, amps, strict=strict)


def _fmt(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def _coefficient(c: complex) -> tuple[str, str]:
    """(sign, magnitude text) for one printed term."""
    re_, im = c.real, c.imag
    if im == 0.0:
        return ("-" if re_ < 0 else "+", _fmt(abs(re_)))
    if re_ == 0.0:
        return ("-" if im < 0 else "+", _fmt(abs(im)) + "i")
    sign = "-" if im < 0 else "+"
    return ("+", f"({_fmt(re_)}{sign}{_fmt(abs(im))}i)")


def to_text(state: StateVector, threshold: float = 0.0) -> str:
    """Print amplitudes above ``threshold`` in basis order, 12 significant digits."""
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    n = state.n_qubits
    parts = []
    for idx, a in enumerate(state.amplitudes):
        if abs(a) <= threshold:
            continue
        sign, mag = _coefficient(complex(a))
        ket = f"|{idx:0{n}b}>"
        if not parts:
            parts.append(("-" if sign == "-" else "") + mag + ket)
        else:
            parts.append(f" {sign} {mag}{ket}")
    return "".join(parts)
