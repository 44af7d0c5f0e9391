"""Ordinals below epsilon_0 in Cantor normal form.

An :class:`Ordinal` is an immutable, canonical list of ``(exponent, coefficient)``
terms with strictly decreasing exponents, so structural equality is ordinal
equality.  Only the operations needed for tree indices are provided: ordinal
sum, ``omega ** a``, ``a * omega`` and multiplication by a natural number.
"""

from __future__ import annotations

import functools
from typing import Iterable, Union

__all__ = ["Ordinal", "INFINITE", "OrdinalParseError", "ZERO", "ONE", "OMEGA", "cmp", "add",
           "omega_pow", "omega_step", "leading", "parse", "format_ordinal"]


class _Infinite:
    """The value ``infinite``; deliberately not an ordinal."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __str__(self):
        return "infinite"


INFINITE = _Infinite()


class OrdinalParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


@functools.total_ordering
class Ordinal:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[tuple["Ordinal", int]] = ()):
        terms = tuple((e, int(c)) for e, c in terms)
        for i, (e, c) in enumerate(terms):
            if not isinstance(e, Ordinal):
                raise TypeError("exponents must be Ordinal instances")
            if c < 1:
                raise ValueError("coefficients must be positive")
            if i and not e < terms[i - 1][0]:
                raise ValueError("exponents must be strictly decreasing")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", hash(terms))

    def __setattr__(self, name, value):
        raise AttributeError("Ordinal is immutable")

    @classmethod
    def of(cls, n: Union[int, "Ordinal"]) -> "Ordinal":
        if isinstance(n, Ordinal):
            return n
        if n < 0:
            raise ValueError("ordinals are non-negative")
        return cls(((ZERO, n),)) if n else ZERO

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or self.terms[0][0].is_zero()

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def to_int(self) -> int:
        if not self.is_finite():
            raise ValueError(f"{self} is not finite")
        return self.terms[0][1] if self.terms else 0

    def split_finite(self) -> tuple["Ordinal", int]:
        """Return ``(lam, n)`` with ``self == lam + n`` and ``lam`` zero or a limit."""
        if self.is_successor():
            return Ordinal(self.terms[:-1]), self.terms[-1][1]
        return self, 0

    # -- order and arithmetic ---------------------------------------------
    def _cmp(self, other: "Ordinal") -> int:
        for (e1, c1), (e2, c2) in zip(self.terms, other.terms):
            if e1 != e2:
                return e1._cmp(e2)
            if c1 != c2:
                return -1 if c1 < c2 else 1
        return (len(self.terms) > len(other.terms)) - (len(self.terms) < len(other.terms))

    def __eq__(self, other):
        if isinstance(other, int):
            other = Ordinal.of(other) if other >= 0 else None
        return isinstance(other, Ordinal) and self.terms == other.terms

    def __lt__(self, other):
        if isinstance(other, int):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        if isinstance(other, int):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return add(self, other)

    def __radd__(self, other):
        if isinstance(other, int):
            return add(Ordinal.of(other), self)
        return NotImplemented

    def mul_nat(self, k: int) -> "Ordinal":
        """``self * k`` for a natural number ``k`` (repeated ordinal sum)."""
        if k < 0:
            raise ValueError("k must be a natural number")
        if k == 0 or not self.terms:
            return ZERO
        (e, c), rest = self.terms[0], self.terms[1:]
        return Ordinal(((e, c * k),) + rest)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"

    def __str__(self):
        return format_ordinal(self)


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def cmp(a: Ordinal, b: Ordinal) -> str:
    c = a._cmp(b)
    return "less" if c < 0 else "greater" if c > 0 else "equal"


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    if not b.terms:
        return a
    lead = b.terms[0][0]
    kept = [t for t in a.terms if not t[0] < lead]
    if kept and kept[-1][0] == lead:
        e, c = kept.pop()
        return Ordinal(kept + [(e, c + b.terms[0][1])] + list(b.terms[1:]))
    return Ordinal(kept + list(b.terms))


def omega_pow(a: Ordinal) -> Ordinal:
    return Ordinal(((a, 1),))


def omega_step(delta: Ordinal) -> Ordinal:
    """``delta * omega``: the supremum of ``delta * n`` over natural ``n``."""
    if delta.is_zero():
        raise ValueError("omega_step requires a positive ordinal")
    return omega_pow(add(delta.terms[0][0], ONE))


def leading(a: Ordinal) -> tuple[Ordinal, int]:
    if a.is_zero():
        raise ValueError("zero has no leading term")
    return a.terms[0]


# -- text form ------------------------------------------------------------
# ordinal := term ('+' term)* ; term := 'w^(' ordinal ')' ['*' nat] | 'w' ['*' nat] | nat

def format_ordinal(a: Ordinal) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for e, c in a.terms:
        if e.is_zero():
            parts.append(str(c))
            continue
        base = "w" if e == ONE else f"w^({format_ordinal(e)})"
        parts.append(base if c == 1 else f"{base}*{c}")
    return "+".join(parts)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise OrdinalParseError(message, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def nat(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a natural number")
        return int(self.text[start:self.pos])

    def coefficient(self) -> int:
        if self.peek() == "*":
            self.pos += 1
            return self.nat()
        return 1

    def term(self) -> Ordinal:
        ch = self.peek()
        if ch.isdigit():
            return Ordinal.of(self.nat())
        if ch != "w":
            self.error("expected a term")
        self.pos += 1
        if self.peek() == "^":
            self.pos += 1
            self.expect("(")
            exponent = self.ordinal()
            self.expect(")")
        else:
            exponent = ONE
        return omega_pow(exponent).mul_nat(self.coefficient())

    def ordinal(self) -> Ordinal:
        result = self.term()
        while self.peek() == "+":
            self.pos += 1
            result = add(result, self.term())
        return result


def parse(text: str) -> Ordinal:
    """Parse ordinal text such as ``"w^(2)*3+w+1"``.

    Non-normal sums are accepted and normalised by ordinal addition.
    """
    parser = _Parser(text)
    result = parser.ordinal()
    if parser.peek():
        parser.error("unexpected trailing input")
    return result
