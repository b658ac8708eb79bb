"""Exact Gaussian-rational arithmetic (elements of Q(i))."""

from __future__ import annotations

import re
from fractions import Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Fraction")


class GaussianRational:
    """A complex number re + im*i with rational real and imaginary parts.

    Immutable. Arithmetic with int/Fraction stays exact; mixing with float
    or complex falls through to Python complex (used by the float pipeline).
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, *_):
        raise AttributeError("GaussianRational is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(_as_fraction(x))

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    # -- involutions / norms --------------------------------------------

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|z|^2, an exact rational."""
        return self.re * self.re + self.im * self.im

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            if self.im == 0 and other.im == 0:
                return GaussianRational(self.re + other.re)
            return GaussianRational(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re + other, self.im)
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, (GaussianRational, int, Fraction)):
            return self + (-other if isinstance(other, GaussianRational)
                           else GaussianRational(-_as_fraction(other)))
        if isinstance(other, (float, complex)):
            return complex(self) - other
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other - self.re, -self.im)
        if isinstance(other, (float, complex)):
            return other - complex(self)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            if self.im == 0:
                if other.im == 0:
                    return GaussianRational(self.re * other.re)
                return GaussianRational(self.re * other.re, self.re * other.im)
            if other.im == 0:
                return GaussianRational(self.re * other.re, self.im * other.re)
            return GaussianRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re / other, self.im / other)
        if isinstance(other, GaussianRational):
            if other.im == 0:
                if other.re == 0:
                    raise ZeroDivisionError("division by zero GaussianRational")
                return GaussianRational(self.re / other.re, self.im / other.re)
            d = other.abs2()
            if d == 0:
                raise ZeroDivisionError("division by zero GaussianRational")
            num = self * other.conjugate()
            return GaussianRational(num.re / d, num.im / d)
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other) / self
        if isinstance(other, (float, complex)):
            return other / complex(self)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    # -- conversions -------------------------------------------------------

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __float__(self):
        if self.im != 0:
            raise ValueError(f"{self} has a nonzero imaginary part")
        return float(self.re)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_gaussian(self)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def gr(re=0, im=0) -> GaussianRational:
    """Shorthand constructor; accepts ints, Fractions and 'p/q' strings."""
    if isinstance(re, str):
        re = Fraction(re)
    if isinstance(im, str):
        im = Fraction(im)
    return GaussianRational(re, im)


_FRAC = r"[+-]?\d+(?:/\d+)?"
_BOTH_RE = re.compile(
    rf"^\s*(?P<real>{_FRAC})\s*(?P<sign>[+-])\s*(?P<imag>\d+(?:/\d+)?)?\s*i\s*$")
_IMAG_RE = re.compile(rf"^\s*(?P<imag>{_FRAC})?\s*i\s*$")
_REAL_RE = re.compile(rf"^\s*(?P<real>{_FRAC})\s*$")


def parse_gaussian(text: str) -> GaussianRational:
    """Parse 'p/q', 'p/q+r/s i', 'p/q-r/s i', 'r/s i' or 'i' (ASCII minus)."""
    m = _BOTH_RE.match(text)
    if m:
        mag = Fraction(m.group("imag")) if m.group("imag") else Fraction(1)
        if m.group("sign") == "-":
            mag = -mag
        return GaussianRational(Fraction(m.group("real")), mag)
    m = _IMAG_RE.match(text)
    if m:
        raw = m.group("imag")
        mag = Fraction(raw) if raw is not None else Fraction(1)
        return GaussianRational(0, mag)
    m = _REAL_RE.match(text)
    if m:
        return GaussianRational(Fraction(m.group("real")))
    raise ValueError(f"not a Gaussian rational: {text!r}")


def format_gaussian(z: GaussianRational) -> str:
    if z.im == 0:
        return str(z.re)
    if z.re == 0:
        return f"{z.im} i"
    sign = "+" if z.im > 0 else "-"
    return f"{z.re}{sign}{abs(z.im)} i"
