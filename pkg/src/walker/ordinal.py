"""Ordinals below epsilon_0 in Cantor normal form.

An ordinal is stored as a tuple of ``(exponent, coefficient)`` pairs with
strictly decreasing exponents, where every exponent is itself an
:class:`Ordinal`.  Natural numbers are the ordinals whose only exponent is 0.

Text form::

    ordinal := term ("+" term)*
    term    := "w^" atom "*" nat | "w^" atom | "w*" nat | "w" | nat
    atom    := nat | "w" | "(" ordinal ")"

Whitespace is ignored on input.  Printing always produces the canonical
spelling, e.g. ``w^2*3 + w + 4``.
"""

from __future__ import annotations

import re
from functools import total_ordering
from typing import Iterable, Union

__all__ = [
    "Ordinal",
    "OrdinalParseError",
    "Underflow",
    "INFINITY",
    "ZERO",
    "ONE",
    "OMEGA",
    "ordinal",
    "parse_ordinal",
    "cmp",
    "add",
    "left_sub",
    "successor",
    "is_limit",
    "is_finite",
]


class Underflow(ArithmeticError):
    """Raised by :func:`left_sub` when the left operand is the larger one."""


class OrdinalParseError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        self.text = text
        self.pos = pos
        super().__init__(f"{msg} at position {pos} in {text!r}")


@total_ordering
class Ordinal:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[tuple["Ordinal", int]] = ()):
        terms = tuple(terms)
        prev = None
        for exp, coeff in terms:
            if not isinstance(exp, Ordinal):
                raise TypeError("exponents must be Ordinal instances")
            if not isinstance(coeff, int) or coeff < 1:
                raise ValueError(f"coefficient must be a positive int, got {coeff!r}")
            if prev is not None and not exp < prev:
                raise ValueError("exponents must be strictly decreasing")
            prev = exp
        self.terms = terms
        self._hash = hash(terms)

    @classmethod
    def from_int(cls, n: int) -> "Ordinal":
        if n < 0:
            raise Underflow(f"negative ordinal {n}")
        if n == 0:
            return ZERO
        return cls(((ZERO, n),))

    @classmethod
    def omega_power(cls, exp: "Ordinal | int", coeff: int = 1) -> "Ordinal":
        return cls(((ordinal(exp), coeff),))

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def __int__(self) -> int:
        if not self.is_finite():
            raise ValueError(f"{self} is not finite")
        return self.terms[0][1] if self.terms else 0

    def __index__(self) -> int:
        return int(self)

    # -- comparison -------------------------------------------------------

    def _key(self, other) -> "Ordinal":
        if isinstance(other, Ordinal):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return Ordinal.from_int(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = self._key(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self.is_finite():
            return hash(int(self))
        return self._hash

    def __lt__(self, other) -> bool:
        other = self._key(other)
        if other is NotImplemented:
            return NotImplemented
        return _compare(self, other) < 0

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "Ordinal":
        other = self._key(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, other)

    def __radd__(self, other) -> "Ordinal":
        other = self._key(other)
        if other is NotImplemented:
            return NotImplemented
        return add(other, self)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(_format_term(e, c) for e, c in self.terms)

    def __repr__(self) -> str:
        return f"Ordinal({str(self)!r})"


def _compare(a: Ordinal, b: Ordinal) -> int:
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = _compare(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    return (len(a.terms) > len(b.terms)) - (len(a.terms) < len(b.terms))


def _format_term(exp: Ordinal, coeff: int) -> str:
    if exp.is_zero():
        return str(coeff)
    if exp == ONE:
        base = "w"
    elif exp.is_finite() or exp == OMEGA:
        base = f"w^{exp}"
    else:
        base = f"w^({exp})"
    return base if coeff == 1 else f"{base}*{coeff}"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


class _Infinity:
    """Height of elements lying in every filtration step; above every ordinal."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "INFINITY"

    __str__ = lambda self: "inf"  # noqa: E731

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("walker-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INFINITY = _Infinity()


def ordinal(value: Union[Ordinal, int, str]) -> Ordinal:
    """Coerce an int, a string in the ordinal grammar, or an Ordinal."""
    if isinstance(value, Ordinal):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not an ordinal")
    if isinstance(value, int):
        return Ordinal.from_int(value)
    if isinstance(value, str):
        return parse_ordinal(value)
    raise TypeError(f"cannot make an ordinal from {value!r}")


# -- operations -----------------------------------------------------------


def cmp(a, b) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    return _compare(ordinal(a), ordinal(b))


def add(a, b) -> Ordinal:
    a, b = ordinal(a), ordinal(b)
    if b.is_zero():
        return a
    lead = b.terms[0][0]
    head = []
    for exp, coeff in a.terms:
        c = _compare(exp, lead)
        if c > 0:
            head.append((exp, coeff))
        elif c == 0:
            head.append((exp, coeff + b.terms[0][1]))
            return Ordinal(head + list(b.terms[1:]))
        else:
            break
    return Ordinal(head + list(b.terms))


def left_sub(a, b) -> Ordinal:
    """The unique ``g`` with ``a + g == b``; requires ``a <= b``."""
    a, b = ordinal(a), ordinal(b)
    if _compare(a, b) > 0:
        raise Underflow(f"{a} > {b}")
    for i, (tb, ta) in enumerate(zip(b.terms, a.terms)):
        if tb == ta:
            continue
        (eb, cb), (ea, ca) = tb, ta
        if _compare(ea, eb) == 0:
            # same exponent, smaller coefficient in a
            return Ordinal(((eb, cb - ca),) + b.terms[i + 1:])
        return Ordinal(b.terms[i:])
    return Ordinal(b.terms[len(a.terms):])


def successor(a) -> Ordinal:
    return add(a, ONE)


def is_limit(a) -> bool:
    return ordinal(a).is_limit()


def is_finite(a) -> bool:
    return ordinal(a).is_finite()


# -- parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(w)|(\^)|(\*)|(\+)|(\()|(\)))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise OrdinalParseError(text, pos, "unexpected character")
            kinds = ("nat", "w", "^", "*", "+", "(", ")")
            for kind, group in zip(kinds, m.groups()):
                if group is not None:
                    self.tokens.append((kind, group, m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)

    def take(self, kind: str) -> str:
        if self.peek() != kind:
            raise OrdinalParseError(self.text, self.pos(), f"expected {kind!r}")
        tok = self.tokens[self.i][1]
        self.i += 1
        return tok

    def nat(self) -> int:
        return int(self.take("nat"))

    def ordinal(self) -> Ordinal:
        result = self.term()
        while self.peek() == "+":
            self.take("+")
            result = add(result, self.term())
        return result

    def atom(self) -> Ordinal:
        kind = self.peek()
        if kind == "nat":
            return Ordinal.from_int(self.nat())
        if kind == "w":
            self.take("w")
            return OMEGA
        if kind == "(":
            self.take("(")
            inner = self.ordinal()
            self.take(")")
            return inner
        raise OrdinalParseError(self.text, self.pos(), "expected exponent")

    def term(self) -> Ordinal:
        kind = self.peek()
        if kind == "nat":
            return Ordinal.from_int(self.nat())
        if kind != "w":
            raise OrdinalParseError(self.text, self.pos(), "expected term")
        self.take("w")
        exp = ONE
        if self.peek() == "^":
            self.take("^")
            exp = self.atom()
        coeff = 1
        if self.peek() == "*":
            self.take("*")
            start = self.pos()
            coeff = self.nat()
            if coeff == 0:
                raise OrdinalParseError(self.text, start, "zero coefficient")
        if exp.is_zero():
            return Ordinal.from_int(coeff)
        return Ordinal(((exp, coeff),))


def parse_ordinal(text: str) -> Ordinal:
    p = _Parser(text)
    if not p.tokens:
        raise OrdinalParseError(text, 0, "empty ordinal")
    result = p.ordinal()
    if p.i != len(p.tokens):
        raise OrdinalParseError(text, p.pos(), "trailing input")
    return result
