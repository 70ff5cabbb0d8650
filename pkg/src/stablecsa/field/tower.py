"""The square-root tower K = F[sqrt(x_1), ..., sqrt(x_a)].

Elements are stored on the basis ``sqrt(x_S) = prod_{l in S} sqrt(x_l)``,
with the subset ``S`` encoded as a bitmask (bit ``l-1`` for ``sqrt(x_l)``).
"""

from __future__ import annotations

from .gaussian import Gaussian
from .poly import MultiPoly
from .ratfunc import RatFunc


class NotInvertible(ZeroDivisionError):
    pass


def x_name(l: int) -> str:
    return f"x{l}"


def y_name(l: int) -> str:
    return f"y{l}"


def mask_indices(mask: int) -> list[int]:
    out = []
    l = 1
    while mask:
        if mask & 1:
            out.append(l)
        mask >>= 1
        l += 1
    return out


def indices_mask(indices) -> int:
    mask = 0
    for l in indices:
        if l < 1:
            raise ValueError("square-root indices start at 1")
        mask |= 1 << (l - 1)
    return mask


_X_CACHE: dict = {}


def _x_product(mask: int) -> RatFunc:
    # (sqrt x_S)^2 = x_S
    r = _X_CACHE.get(mask)
    if r is None:
        mono = tuple((x_name(l), 1) for l in mask_indices(mask))
        r = RatFunc(MultiPoly.monomial(mono), normalize=False)
        _X_CACHE[mask] = r
    return r


class TowerElement:
    """Immutable element of K, a 2^alpha-dimensional F-vector space."""

    __slots__ = ("coeffs", "alpha", "_hash")

    def __init__(self, coeffs=None, alpha: int | None = None):
        coeffs = {} if coeffs is None else coeffs
        clean = {}
        for mask, c in coeffs.items():
            c = RatFunc.coerce(c)
            if c:
                clean[mask] = c
        top = max((m.bit_length() for m in clean), default=0)
        self.alpha = top if alpha is None else max(alpha, top)
        self.coeffs = clean
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: dict, alpha: int) -> TowerElement:
        e = object.__new__(cls)
        e.coeffs = coeffs
        e.alpha = alpha
        e._hash = None
        return e

    # -- constructors ---------------------------------------------------
    @staticmethod
    def coerce(value) -> TowerElement:
        if isinstance(value, TowerElement):
            return value
        c = RatFunc.coerce(value)
        return TowerElement._raw({0: c} if c else {}, 0)

    @classmethod
    def const(cls, value) -> TowerElement:
        return cls.coerce(value)

    @classmethod
    def sqrt_x(cls, l: int, coeff=1) -> TowerElement:
        return cls({1 << (l - 1): RatFunc.coerce(coeff)})

    @classmethod
    def sqrt_mask(cls, mask: int, coeff=1) -> TowerElement:
        return cls({mask: RatFunc.coerce(coeff)})

    @classmethod
    def x(cls, l: int) -> TowerElement:
        return cls.coerce(RatFunc.var(x_name(l)))

    @classmethod
    def y(cls, l: int) -> TowerElement:
        return cls.coerce(RatFunc.var(y_name(l)))

    @classmethod
    def var(cls, name: str) -> TowerElement:
        return cls.coerce(RatFunc.var(name))

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs.get(0) == 1

    def in_base_field(self) -> bool:
        return not self.coeffs or set(self.coeffs) == {0}

    def base_value(self) -> RatFunc:
        if not self.in_base_field():
            raise ValueError("element involves square roots")
        return self.coeffs.get(0, RatFunc())

    def is_monomial(self) -> bool:
        """Single basis slot with a constant-times-Laurent-monomial coefficient."""
        return len(self.coeffs) == 1 and next(iter(self.coeffs.values())).is_monomial()

    def coefficient(self, mask: int) -> RatFunc:
        return self.coeffs.get(mask, RatFunc())

    def variables(self) -> set[str]:
        out = set()
        for mask, c in self.coeffs.items():
            out |= c.variables()
            out |= {x_name(l) for l in mask_indices(mask)}
        return out

    # -- arithmetic -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, TowerElement):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == TowerElement.coerce(other).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.coeffs.items()))
        return self._hash

    def __neg__(self):
        return TowerElement._raw({m: -c for m, c in self.coeffs.items()}, self.alpha)

    def __add__(self, other):
        if not isinstance(other, TowerElement):
            try:
                other = TowerElement.coerce(other)
            except TypeError:
                return NotImplemented
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return TowerElement._raw(out, max(self.alpha, other.alpha))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, TowerElement):
            try:
                other = TowerElement.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return TowerElement.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TowerElement):
            try:
                other = TowerElement.coerce(other)
            except TypeError:
                return NotImplemented
        if not self.coeffs or not other.coeffs:
            return TowerElement._raw({}, max(self.alpha, other.alpha))
        out: dict = {}
        for ma, ca in self.coeffs.items():
            for mb, cb in other.coeffs.items():
                c = ca * cb
                common = ma & mb
                if common:
                    c = c * _x_product(common)
                m = ma ^ mb
                s = out.get(m)
                out[m] = c if s is None else s + c
        return TowerElement._raw({m: c for m, c in out.items() if c},
                                 max(self.alpha, other.alpha))

    __rmul__ = __mul__

    def scale(self, c) -> TowerElement:
        c = RatFunc.coerce(c)
        if not c:
            return TowerElement._raw({}, self.alpha)
        return TowerElement._raw({m: v * c for m, v in self.coeffs.items()}, self.alpha)

    def conjugate(self, l: int) -> TowerElement:
        """The automorphism sqrt(x_l) -> -sqrt(x_l)."""
        bit = 1 << (l - 1)
        return TowerElement._raw(
            {m: (-c if m & bit else c) for m, c in self.coeffs.items()}, self.alpha)

    def inverse(self) -> TowerElement:
        if not self.coeffs:
            raise NotInvertible("zero is not invertible in K")
        top = max(self.coeffs).bit_length()
        if top == 0:
            return TowerElement._raw({0: self.coeffs[0].inverse()}, self.alpha)
        # a * conj_l(a) is free of sqrt(x_l); recurse on it
        conj = self.conjugate(top)
        norm = self * conj
        if not norm.coeffs:
            raise NotInvertible(f"{self} is a zero divisor")
        return conj * norm.inverse()

    def __truediv__(self, other):
        other = TowerElement.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return TowerElement.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = TowerElement.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def map_coeffs(self, fn) -> TowerElement:
        return TowerElement({m: fn(c) for m, c in self.coeffs.items()}, self.alpha)

    # -- display / serialization ---------------------------------------
    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for mask in sorted(self.coeffs):
            c = self.coeffs[mask]
            if mask == 0:
                parts.append(str(c))
                continue
            root = "*".join(f"sqrt({x_name(l)})" for l in mask_indices(mask))
            if c == 1:
                parts.append(root)
            elif c == -1:
                parts.append("-" + root)
            else:
                cs = str(c)
                if not (c.is_polynomial() and len(c.num.terms) == 1):
                    cs = f"({cs})"
                parts.append(f"{cs}*{root}")
        out = parts[0]
        for p in parts[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out

    def __repr__(self):
        return f"TowerElement({self})"

    def to_json(self) -> list:
        return [{"sqrt": mask_indices(m), "coeff": str(self.coeffs[m])}
                for m in sorted(self.coeffs)]

    @classmethod
    def from_json(cls, data) -> TowerElement:
        from .expr import parse_expr

        out = {}
        for entry in data:
            out[indices_mask(entry["sqrt"])] = parse_expr(entry["coeff"])
        return cls(out)


ZERO = TowerElement()
ONE = TowerElement.const(1)


def tower(value) -> TowerElement:
    return TowerElement.coerce(value)


def gaussian(re=0, im=0) -> TowerElement:
    return TowerElement.const(Gaussian(re, im))
