"""Gaussian rationals: the base field Q(i)."""

from __future__ import annotations

from gmpy2 import is_square, isqrt, mpq

_NUMERIC = (int, type(mpq(0)))


class Gaussian:
    """An element ``re + im*i`` of Q(i) with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Gaussian):
            self.re, self.im = re.re, re.im + mpq(im)
            return
        self.re = mpq(re)
        self.im = mpq(im)

    @classmethod
    def coerce(cls, value) -> Gaussian:
        if isinstance(value, Gaussian):
            return value
        if isinstance(value, _NUMERIC):
            return cls(value)
        if hasattr(value, "numerator") and hasattr(value, "denominator"):
            return cls(mpq(value.numerator, value.denominator))
        raise TypeError(f"cannot interpret {value!r} as an element of Q(i)")

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    def is_rational(self) -> bool:
        return not self.im

    def __eq__(self, other):
        if isinstance(other, Gaussian):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _NUMERIC):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, _NUMERIC):
            return Gaussian(self.re + other, self.im)
        if not isinstance(other, Gaussian):
            return NotImplemented
        return Gaussian(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, _NUMERIC):
            return Gaussian(self.re - other, self.im)
        if not isinstance(other, Gaussian):
            return NotImplemented
        return Gaussian(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _NUMERIC):
            return Gaussian(self.re * other, self.im * other)
        if not isinstance(other, Gaussian):
            return NotImplemented
        if not other.im:
            return Gaussian(self.re * other.re, self.im * other.re)
        if not self.im:
            return Gaussian(self.re * other.re, self.re * other.im)
        return Gaussian(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def norm(self):
        return self.re * self.re + self.im * self.im

    def conjugate(self):
        return Gaussian(self.re, -self.im)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(i)")
        if not self.im:
            return Gaussian(1 / self.re)
        n = self.norm()
        return Gaussian(self.re / n, -self.im / n)

    def __truediv__(self, other):
        other = Gaussian.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Gaussian.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Gaussian(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sqrt(self) -> Gaussian | None:
        """Exact square root in Q(i), or None when this is not a square."""
        if self.is_zero():
            return Gaussian(0)
        a, b = self.re, self.im
        n = a * a + b * b
        modulus = _rational_sqrt(n)
        if modulus is None:
            return None
        u2 = (a + modulus) / 2
        v2 = (modulus - a) / 2
        u = _rational_sqrt(u2)
        v = _rational_sqrt(v2)
        if u is None or v is None:
            return None
        # fix the relative sign so that 2uv = b
        if b < 0:
            v = -v
        root = Gaussian(u, v)
        return root if root * root == self else None

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return _fmt(self.re)
        if not self.re:
            return f"{_fmt(self.im)}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{_fmt(self.re)}{sign}{_fmt(abs(self.im))}*i"


def _fmt(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _rational_sqrt(q) -> mpq | None:
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    if not (is_square(num) and is_square(den)):
        return None
    return mpq(isqrt(num), isqrt(den))


ZERO = Gaussian(0)
ONE = Gaussian(1)
I = Gaussian(0, 1)
