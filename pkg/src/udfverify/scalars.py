"""Scalars: Gaussian rationals (exact mode) and complex doubles (float mode)."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from udfverify.errors import ScalarModeMismatch

EXACT = "exact"
FLOAT = "float"


class GaussQ:
    """A Gaussian rational ``re + im*i`` with ``Fraction`` parts.

    Mixes freely with ``int`` and ``Fraction``. Mixing with ``float`` or
    ``complex`` raises :class:`ScalarModeMismatch`.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussQ):
            return other
        if isinstance(other, (int, Rational)):
            return GaussQ(other, 0)
        if isinstance(other, (float, complex)):
            raise ScalarModeMismatch("cannot mix Gaussian rationals with floating scalars")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussQ(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return GaussQ(self.re * other, self.im * other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussQ(
            (self.re * o.re + self.im * o.im) / den,
            (self.im * o.re - self.re * o.im) / den,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return GaussQ(1) / (self ** (-n))
        out = GaussQ(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return GaussQ(self.re, -self.im)

    def __abs__(self):
        return math.hypot(float(self.re), float(self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussQ):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussQ({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)


def simplify(x):
    """Demote a GaussQ with zero imaginary part to a Fraction/int."""
    if isinstance(x, GaussQ) and x.im == 0:
        r = x.re
        return r.numerator if r.denominator == 1 else r
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def mode_of(x) -> str:
    if isinstance(x, (float, complex)):
        return FLOAT
    return EXACT


def to_complex(x) -> complex:
    if isinstance(x, GaussQ):
        return complex(x)
    return complex(x)


def real_imag(x) -> tuple[Fraction, Fraction]:
    """Exact real and imaginary parts of an exact scalar."""
    if isinstance(x, GaussQ):
        return x.re, x.im
    if isinstance(x, (int, Rational)):
        return Fraction(x), Fraction(0)
    raise ScalarModeMismatch(f"not an exact scalar: {x!r}")


def format_scalar(x) -> str:
    """Render a scalar as ``p/q``, ``p/q+p/qi`` or a float repr."""
    if isinstance(x, (float, complex)):
        return repr(x)
    re, im = real_imag(x)
    if im == 0:
        return str(re)
    mag = "" if abs(im) == 1 else str(abs(im))
    if re == 0:
        return f"{'-' if im < 0 else ''}{mag}i"
    sign = "+" if im > 0 else "-"
    return f"{re}{sign}{mag}i"


def parse_scalar(text):
    """Parse an exact scalar such as ``"3/7"``, ``"3/7+1/5i"`` or ``"3/7 + i/5"``.

    Decimal literals such as ``"0.25"`` are read exactly. A value with zero
    imaginary part comes back as ``int`` or ``Fraction``.
    """
    from udfverify.parsing import evaluate_expression

    if isinstance(text, (int, Fraction, GaussQ)):
        return text
    value = evaluate_expression(str(text), lambda name: None)
    return simplify(value)


def check_same_mode(a, b) -> str:
    ma, mb = mode_of(a), mode_of(b)
    if ma != mb:
        raise ScalarModeMismatch(f"scalar modes differ: {ma} vs {mb}")
    return ma
