"""Exact complex numbers with rational real and imaginary parts."""
from __future__ import annotations

from fractions import Fraction

from .jet import as_rational


class GaussRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = as_rational(re)
        self.im = as_rational(im)

    @classmethod
    def coerce(cls, value) -> GaussRational:
        return value if isinstance(value, GaussRational) else cls(value)

    def conjugate(self) -> GaussRational:
        return GaussRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        """Squared modulus ``re^2 + im^2`` (exact)."""
        return self.re * self.re + self.im * self.im

    def is_unit(self) -> bool:
        return self.norm2() == 1

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __add__(self, other) -> GaussRational:
        other = GaussRational.coerce(other)
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> GaussRational:
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other) -> GaussRational:
        return self + (-GaussRational.coerce(other))

    def __rsub__(self, other) -> GaussRational:
        return GaussRational.coerce(other) - self

    def __mul__(self, other) -> GaussRational:
        other = GaussRational.coerce(other)
        return GaussRational(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def inverse(self) -> GaussRational:
        n = self.norm2()
        if not n:
            raise ZeroDivisionError("division by zero Gauss rational")
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, other) -> GaussRational:
        return self * GaussRational.coerce(other).inverse()

    def __rtruediv__(self, other) -> GaussRational:
        return GaussRational.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> GaussRational:
        if k < 0:
            return self.inverse() ** (-k)
        out, base = GaussRational(1), self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        im = "i" if abs(self.im) == 1 else f"{abs(self.im)}*i"
        if not self.re:
            return im if self.im > 0 else f"-{im}"
        return f"{self.re} {'+' if self.im > 0 else '-'} {im}"

    def __repr__(self) -> str:
        return f"GaussRational({self.re}, {self.im})"


I = GaussRational(0, 1)
