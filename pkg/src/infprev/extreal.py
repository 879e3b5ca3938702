"""Extended reals over the rationals.

Finite values are :class:`fractions.Fraction`; the two infinities are
module-level singletons.  ``0 * (+/-inf) == 0``; ``inf - inf`` raises
:class:`UndefinedArithmetic` instead of producing a value.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Union

__all__ = [
    "ExtendedReal",
    "UndefinedArithmetic",
    "POS_INF",
    "NEG_INF",
    "ext",
    "parse_rational",
    "format_rational",
]


class UndefinedArithmetic(ArithmeticError):
    """Raised for ``inf - inf``."""


RationalLike = Union[int, Fraction, str]


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction; floats are rejected."""
    if not isinstance(text, str):
        raise TypeError(f"expected a string, got {type(text).__name__}")
    s = text.strip()
    if not s:
        raise ValueError("empty rational literal")
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


@total_ordering
class ExtendedReal:
    """A rational number or one of the two infinities."""

    __slots__ = ("_sign", "_value")

    def __init__(self, value=None, *, sign: int = 0):
        if sign:
            if value is not None or sign not in (1, -1):
                raise ValueError("infinite ExtendedReal takes only sign=+1/-1")
            self._sign = sign
            self._value = None
        else:
            self._sign = 0
            self._value = _as_fraction(value)

    @property
    def is_finite(self) -> bool:
        return self._sign == 0

    @property
    def sign(self) -> int:
        """-1, 0 or +1 (for finite values, the sign of the number)."""
        if self._sign:
            return self._sign
        return (self._value > 0) - (self._value < 0)

    @property
    def value(self) -> Fraction:
        if self._sign:
            raise ValueError("infinite ExtendedReal has no finite value")
        return self._value

    def __neg__(self) -> ExtendedReal:
        if self._sign:
            return POS_INF if self._sign < 0 else NEG_INF
        return ExtendedReal(-self._value)

    def __add__(self, other) -> ExtendedReal:
        other = ext(other)
        if self._sign and other._sign:
            if self._sign != other._sign:
                raise UndefinedArithmetic("inf - inf is undefined")
            return self
        if self._sign:
            return self
        if other._sign:
            return other
        return ExtendedReal(self._value + other._value)

    __radd__ = __add__

    def __sub__(self, other) -> ExtendedReal:
        return self + (-ext(other))

    def __rsub__(self, other) -> ExtendedReal:
        return ext(other) + (-self)

    def __mul__(self, other) -> ExtendedReal:
        if isinstance(other, ExtendedReal):
            if other.is_finite:
                return self * other._value
            if self.is_finite:
                return other * self._value
            return POS_INF if self._sign == other._sign else NEG_INF
        k = _as_fraction(other)
        if self._sign:
            if k == 0:
                return ExtendedReal(0)
            return POS_INF if (k > 0) == (self._sign > 0) else NEG_INF
        return ExtendedReal(self._value * k)

    __rmul__ = __mul__

    def __truediv__(self, other) -> ExtendedReal:
        k = _as_fraction(other)
        if k == 0:
            raise ZeroDivisionError("division of an extended real by zero")
        return self * (1 / k)

    def _key(self):
        return (self._sign, self._value if self._value is not None else 0)

    def __eq__(self, other) -> bool:
        try:
            other = ext(other)
        except TypeError:
            return NotImplemented
        return self._sign == other._sign and self._value == other._value

    def __lt__(self, other) -> bool:
        other = ext(other)
        if self._sign != other._sign:
            return self._sign < other._sign
        if self._sign:
            return False
        return self._value < other._value

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"ExtendedReal({self})"

    def __str__(self) -> str:
        if self._sign:
            return "+inf" if self._sign > 0 else "-inf"
        return format_rational(self._value)

    @classmethod
    def parse(cls, text: str) -> ExtendedReal:
        s = text.strip()
        if s in ("+inf", "inf"):
            return POS_INF
        if s == "-inf":
            return NEG_INF
        return cls(parse_rational(s))


POS_INF = ExtendedReal(sign=1)
NEG_INF = ExtendedReal(sign=-1)


def ext(value) -> ExtendedReal:
    """Coerce ints, Fractions, ``"p/q"`` / ``"+inf"`` strings to ExtendedReal."""
    if isinstance(value, ExtendedReal):
        return value
    if isinstance(value, str):
        return ExtendedReal.parse(value)
    return ExtendedReal(_as_fraction(value))
