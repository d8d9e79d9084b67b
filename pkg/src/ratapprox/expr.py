"""Complex-valued expressions in one variable ``z``.

Grammar, loosest binding first::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' ('-')* power)?        right associative
    atom  := number | name | name '(' expr ')' | '(' expr ')'

Numbers may carry an imaginary suffix (``5i``, ``2.5im``). Implicit
multiplication is not supported. Errors report byte offsets into the
UTF-8 encoded text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Expression", "ParseError", "parse_expression", "eval_expression", "FUNCTIONS"]

MAX_DEPTH = 100


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


def _coth(z):
    return 1.0 / np.tanh(z)


def _abs(z):
    return np.abs(z).astype(complex)


FUNCTIONS = {
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "coth": _coth,
    "abs": _abs,
}

CONSTANTS = {"i": 1j, "im": 1j, "pi": complex(math.pi), "e": complex(math.e)}


# AST -------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: complex


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    name: str
    arg: object


# tokens ----------------------------------------------------------------------


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, name, op, end
    text: str
    pos: int
    value: complex = 0j


def _is_digit(b: int) -> bool:
    return 48 <= b <= 57


def _is_alpha(b: int) -> bool:
    return 65 <= b <= 90 or 97 <= b <= 122 or b == 95


def _tokenize(data: bytes) -> list[_Tok]:
    toks = []
    k, n = 0, len(data)
    while k < n:
        b = data[k]
        if b in b" \t\r\n":
            k += 1
        elif _is_digit(b) or (b == 46 and k + 1 < n and _is_digit(data[k + 1])):
            start = k
            while k < n and _is_digit(data[k]):
                k += 1
            if k < n and data[k] == 46:
                k += 1
                while k < n and _is_digit(data[k]):
                    k += 1
            # exponent only when digits follow, so "2e" stays an error below
            if k < n and data[k] in b"eE":
                j = k + 1
                if j < n and data[j] in b"+-":
                    j += 1
                if j < n and _is_digit(data[j]):
                    k = j
                    while k < n and _is_digit(data[k]):
                        k += 1
            text = data[start:k].decode()
            value = complex(float(text))
            if data[k : k + 2] == b"im" and not (k + 2 < n and (_is_alpha(data[k + 2]) or _is_digit(data[k + 2]))):
                value, k = 1j * value.real, k + 2
            elif data[k : k + 1] == b"i" and not (k + 1 < n and (_is_alpha(data[k + 1]) or _is_digit(data[k + 1]))):
                value, k = 1j * value.real, k + 1
            if k < n and (_is_alpha(data[k]) or data[k] == 46):
                raise ParseError("malformed number", start)
            toks.append(_Tok("num", data[start:k].decode(), start, value))
        elif _is_alpha(b):
            start = k
            while k < n and (_is_alpha(data[k]) or _is_digit(data[k])):
                k += 1
            toks.append(_Tok("name", data[start:k].decode(), start))
        elif b in b"+-*/^(),":
            toks.append(_Tok("op", chr(b), k))
            k += 1
        else:
            raise ParseError(f"unexpected character {bytes([b])!r}", k)
    toks.append(_Tok("end", "", n))
    return toks


# parser ----------------------------------------------------------------------


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.k = 0
        self.depth = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.k]

    def _take(self) -> _Tok:
        t = self.toks[self.k]
        self.k += 1
        return t

    def _enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ParseError("expression nested too deeply", self.tok.pos)

    def _expect(self, op):
        t = self.tok
        if t.kind != "op" or t.text != op:
            raise ParseError(f"expected {op!r}", t.pos)
        self.k += 1

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return node

    def expr(self):
        self._enter()
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self._take().text
            node = BinOp(op, node, self.term())
        self.depth -= 1
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self._take().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            self._take()
            self._enter()
            node = Neg(self.unary())
            self.depth -= 1
            return node
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self._take()
            self._enter()
            negs = 0
            while self.tok.kind == "op" and self.tok.text == "-":
                self._take()
                negs += 1
            exp = self.power()
            for _ in range(negs):
                exp = Neg(exp)
            self.depth -= 1
            return BinOp("^", base, exp)
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.k += 1
            return Num(t.value)
        if t.kind == "name":
            self.k += 1
            nxt = self.tok
            if nxt.kind == "op" and nxt.text == "(":
                if t.text not in FUNCTIONS:
                    raise ParseError(f"unknown function {t.text!r}", t.pos)
                self.k += 1
                arg = self.expr()
                self._expect(")")
                return Call(t.text, arg)
            if t.text == "z":
                return Var()
            if t.text in CONSTANTS:
                return Num(CONSTANTS[t.text])
            if t.text in FUNCTIONS:
                raise ParseError(f"function {t.text!r} needs an argument", nxt.pos)
            raise ParseError(f"unknown identifier {t.text!r}", t.pos)
        if t.kind == "op" and t.text == "(":
            self.k += 1
            node = self.expr()
            self._expect(")")
            return node
        if t.kind == "end":
            raise ParseError("unexpected end of input", t.pos)
        raise ParseError(f"unexpected {t.text!r}", t.pos)


# evaluation ------------------------------------------------------------------


def _small_int(node):
    if isinstance(node, Num) and node.value.imag == 0 and node.value.real.is_integer() and abs(node.value.real) <= 64:
        return int(node.value.real)
    return None


def _eval(node, z):
    if isinstance(node, Num):
        return np.full(z.shape, node.value, dtype=complex)
    if isinstance(node, Var):
        return z
    if isinstance(node, Neg):
        # 0 - x keeps +0 imaginary parts, so sqrt(-1) lands on +i
        return 0.0 - _eval(node.arg, z)
    if isinstance(node, Call):
        return FUNCTIONS[node.name](_eval(node.arg, z))
    a = _eval(node.left, z)
    if node.op == "^":
        k = _small_int(node.right)
        if k is not None:
            return a**k if k >= 0 else 1.0 / a ** (-k)
        return np.power(a, _eval(node.right, z))
    b = _eval(node.right, z)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return a / b


class Expression:
    """Parsed expression; calling it evaluates elementwise on complex input."""

    def __init__(self, text: str, root):
        self.text = text
        self.root = root

    def __call__(self, z):
        return eval_expression(self, z)

    def __repr__(self):
        return f"Expression({self.text!r})"


def parse_expression(text) -> Expression:
    """Parse ``text`` (str or bytes); raises ParseError with a byte offset."""
    if isinstance(text, str):
        data = text.encode("utf-8", errors="surrogatepass")
    else:
        data = bytes(text)
    try:
        src = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("invalid UTF-8", exc.start) from None
    root = _Parser(_tokenize(data)).parse()
    return Expression(src, root)


def eval_expression(e: Expression, z):
    """Value of ``e`` at ``z``. Poles give non-finite results rather than errors."""
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    with np.errstate(all="ignore"):
        out = np.asarray(_eval(e.root, zz), dtype=complex)
    out = np.broadcast_to(out, zz.shape).copy()
    return complex(out[0]) if scalar else out
