"""Rational functions over Q(i) in canonical reduced form."""

from __future__ import annotations

from .gaussian import Gaussian
from .poly import MultiPoly, cofactors, mono_div, mono_gcd


class RatFunc:
    """``num / den`` with coprime parts and a monic (grlex) denominator.

    Every constructor path normalizes, so two equal rational functions
    always have identical ``num`` and ``den``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1, *, normalize=True):
        num = MultiPoly.coerce(num)
        den = MultiPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if normalize:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @staticmethod
    def coerce(value) -> RatFunc:
        if isinstance(value, RatFunc):
            return value
        return RatFunc(value)

    @classmethod
    def var(cls, name: str) -> RatFunc:
        return cls(MultiPoly.var(name), normalize=False)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.is_constant()

    def is_monomial(self) -> bool:
        """Nonzero constant times a Laurent monomial."""
        return self.num.is_monomial() and self.den.is_monomial()

    def laurent_monomial(self):
        """``(coefficient, {var: exponent})`` for a monomial quotient."""
        if not self.is_monomial():
            raise ValueError("not a monomial")
        (mn, cn), = self.num.terms.items()
        (md, cd), = self.den.terms.items()
        exps = dict(mn)
        for v, e in md:
            exps[v] = exps.get(v, 0) - e
        return cn / cd, {v: e for v, e in exps.items() if e}

    def variables(self) -> set[str]:
        return self.num.variables() | self.den.variables()

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Gaussian, MultiPoly)):
            return self == RatFunc(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __neg__(self):
        return RatFunc(-self.num, self.den, normalize=False)

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = RatFunc.coerce(other)
            except TypeError:
                return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            if self.den.is_one():
                return RatFunc(self.num + other.num, self.den, normalize=False)
            return RatFunc(self.num + other.num, self.den)
        g, da, db = cofactors(self.den, other.den)
        num = self.num * db + other.num * da
        return RatFunc(num, da * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = RatFunc.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = RatFunc.coerce(other)
            except TypeError:
                return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return RatFunc()
        if self.den.is_one() and other.den.is_one():
            return RatFunc(self.num * other.num, normalize=False)
        # cross-cancel before multiplying keeps the parts small
        _, n1, d2 = cofactors(self.num, other.den)
        _, n2, d1 = cofactors(other.num, self.den)
        return RatFunc(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = RatFunc.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, normalize=False)

    def set_zero(self, name: str) -> RatFunc:
        den = self.den.set_zero(name)
        if den.is_zero():
            raise ZeroDivisionError(f"denominator vanishes at {name}=0")
        return RatFunc(self.num.set_zero(name), den)

    def split_by(self, names) -> dict:
        """Coefficients of the monomials in ``names`` (which must not occur
        in the denominator)."""
        if self.den.variables() & set(names):
            raise ValueError("split variables occur in the denominator")
        return {k: RatFunc(v, self.den) for k, v in self.num.split_by(names).items()}

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1 or num.startswith("-") or "i" in num:
            num = f"({num})"
        return f"{num}/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


def _normalize(num: MultiPoly, den: MultiPoly):
    if num.is_zero():
        return num, MultiPoly.const(1)
    if den.is_constant():
        c = den.constant_value()
        if c == 1:
            return num, den
        return num.scale(c.inverse()), MultiPoly.const(1)
    if den.is_monomial():
        (md, cd), = den.terms.items()
        g = mono_gcd(md, num.monomial_content())
        if g:
            num = num.div_monomial(g)
            md = mono_div(md, g)
        inv = cd.inverse()
        return num.scale(inv), MultiPoly.monomial(md)
    _, num, den = cofactors(num, den)
    _, lc = den.leading_term()
    if lc != 1:
        inv = lc.inverse()
        num, den = num.scale(inv), den.scale(inv)
    return num, den
