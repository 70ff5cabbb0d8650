"""Sparse multivariate polynomials over Q(i).

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by
:func:`var_key`, with positive exponents only; ``()`` is the constant
monomial.  Polynomials map monomials to nonzero :class:`Gaussian`
coefficients.  The general gcd is delegated to sympy's sparse
polynomial rings over ``QQ_I``; monomial and constant cases never leave
this module.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .gaussian import Gaussian, ONE

Monomial = tuple

_NAME_RE = re.compile(r"^([A-Za-z_]+?)(\d*)$")


@lru_cache(maxsize=None)
def var_key(name: str):
    """Sort key for variable names: ``x1 < x2 < ... < y1 < ...``."""
    m = _NAME_RE.match(name)
    if m is None:
        return (name, -1)
    prefix, digits = m.groups()
    return (prefix, int(digits) if digits else -1)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif var_key(va) < var_key(vb):
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """``a / b`` when ``b`` divides ``a``, else None."""
    if not b:
        return a
    da = dict(a)
    for v, e in b:
        have = da.get(v, 0)
        if have < e:
            return None
        if have == e:
            del da[v]
        else:
            da[v] = have - e
    return tuple(sorted(da.items(), key=lambda t: var_key(t[0])))


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    db = dict(b)
    return tuple((v, min(e, db[v])) for v, e in a if v in db)


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_str(m: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


class MultiPoly:
    """Immutable sparse polynomial in named variables over Q(i)."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        self.terms = {m: c for m, c in terms.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> MultiPoly:
        # terms already free of zero coefficients
        p = object.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> MultiPoly:
        c = Gaussian.coerce(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> MultiPoly:
        if exp < 0:
            raise ValueError("negative exponent in a polynomial")
        if exp == 0:
            return cls.const(1)
        return cls._raw({((name, exp),): ONE})

    @classmethod
    def monomial(cls, mono: Monomial, coeff=1) -> MultiPoly:
        coeff = Gaussian.coerce(coeff)
        mono = tuple(sorted(((v, e) for v, e in mono if e), key=lambda t: var_key(t[0])))
        return cls._raw({mono: coeff} if coeff else {})

    @staticmethod
    def coerce(value) -> MultiPoly:
        if isinstance(value, MultiPoly):
            return value
        return MultiPoly.const(value)

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(()) == 1

    def constant_value(self) -> Gaussian:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((), Gaussian(0))

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self.terms), default=0)

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    # -- ordering -------------------------------------------------------
    def leading_term(self):
        """Leading ``(monomial, coefficient)`` under graded lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        if len(self.terms) == 1:
            return next(iter(self.terms.items()))
        names = sorted(self.variables(), key=var_key)

        def key(m):
            d = dict(m)
            return (mono_degree(m), tuple(d.get(v, 0) for v in names))

        lead = max(self.terms, key=key)
        return lead, self.terms[lead]

    def monic(self) -> MultiPoly:
        if not self.terms:
            return self
        _, c = self.leading_term()
        if c == 1:
            return self
        inv = c.inverse()
        return MultiPoly._raw({m: v * inv for m, v in self.terms.items()})

    # -- arithmetic -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Gaussian)):
            return self.terms == MultiPoly.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.coerce(other)
            except TypeError:
                return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return MultiPoly.coerce(other) - self

    def scale(self, c) -> MultiPoly:
        c = Gaussian.coerce(c)
        if not c:
            return MultiPoly()
        if c == 1:
            return self
        return MultiPoly._raw({m: v * c for m, v in self.terms.items()})

    def mul_monomial(self, mono: Monomial, c=ONE) -> MultiPoly:
        return MultiPoly._raw({mono_mul(m, mono): v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.coerce(other)
            except TypeError:
                return NotImplemented
        if not self.terms or not other.terms:
            return MultiPoly()
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (mb, cb), = b.items()
            if not mb:
                return MultiPoly._raw({m: c * cb for m, c in a.items()})
            return MultiPoly._raw({mono_mul(m, mb): c * cb for m, c in a.items()})
        out: dict = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = mono_mul(ma, mb)
                c = ca * cb
                s = out.get(m)
                out[m] = c if s is None else s + c
        return MultiPoly({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- substitution / reduction --------------------------------------
    def set_zero(self, name: str) -> MultiPoly:
        """Reduction modulo the variable ``name``."""
        return MultiPoly._raw({m: c for m, c in self.terms.items()
                               if all(v != name for v, _ in m)})

    def subs(self, values: dict) -> MultiPoly:
        """Substitute polynomials (or scalars) for some variables."""
        result = MultiPoly()
        cache: dict = {}
        for m, c in self.terms.items():
            term = MultiPoly.const(c)
            rest = []
            for v, e in m:
                if v in values:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = MultiPoly.coerce(values[v]) ** e
                    term = term * cache[key]
                else:
                    rest.append((v, e))
            if rest:
                term = term.mul_monomial(tuple(rest))
            result = result + term
        return result

    def split_by(self, names) -> dict:
        """Group terms by their exponent pattern in ``names``.

        Returns ``{monomial in names: polynomial in the other variables}``.
        """
        names = set(names)
        groups: dict = {}
        for m, c in self.terms.items():
            inner = tuple((v, e) for v, e in m if v in names)
            outer = tuple((v, e) for v, e in m if v not in names)
            groups.setdefault(inner, {})[outer] = c
        return {k: MultiPoly._raw(v) for k, v in groups.items()}

    def monomial_content(self) -> Monomial:
        """Largest monomial dividing every term."""
        it = iter(self.terms)
        try:
            g = next(it)
        except StopIteration:
            return ()
        for m in it:
            if not g:
                break
            g = mono_gcd(g, m)
        return g

    def div_monomial(self, mono: Monomial, c=ONE) -> MultiPoly:
        inv = Gaussian.coerce(c).inverse()
        out = {}
        for m, v in self.terms.items():
            q = mono_div(m, mono)
            if q is None:
                raise ArithmeticError("monomial does not divide polynomial")
            out[q] = v * inv
        return MultiPoly._raw(out)

    def exquo(self, other: MultiPoly) -> MultiPoly:
        """Exact quotient; raises ArithmeticError if ``other`` does not divide."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if other.is_monomial():
            (m, c), = other.terms.items()
            return self.div_monomial(m, c)
        names = sorted(self.variables() | other.variables(), key=var_key)
        ring = _sympy_ring(tuple(names))
        q, r = _to_sympy(ring, names, self).div(_to_sympy(ring, names, other))
        if r:
            raise ArithmeticError("polynomial does not divide exactly")
        return _from_sympy(names, q)

    # -- display --------------------------------------------------------
    def sorted_terms(self):
        names = sorted(self.variables(), key=var_key)

        def key(item):
            d = dict(item[0])
            return (-mono_degree(item[0]), tuple(-d.get(v, 0) for v in names))

        return sorted(self.terms.items(), key=key)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            ms = mono_str(m)
            if not m:
                body = _coeff_str(c)
            elif c == 1:
                body = ms
            elif c == -1:
                body = "-" + ms
            else:
                body = f"{_coeff_str(c)}*{ms}"
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out

    def __repr__(self):
        return f"MultiPoly({self})"


def _coeff_str(c: Gaussian) -> str:
    if c.is_rational():
        return str(c)
    return f"({c})"


# -- gcd ---------------------------------------------------------------

@lru_cache(maxsize=256)
def _sympy_ring(names: tuple):
    from sympy.polys.domains import QQ_I
    from sympy.polys.rings import ring

    r, *_ = ring(",".join(names) if names else "_z", QQ_I)
    return r


def _to_sympy(ring, names, p: MultiPoly):
    from sympy.polys.domains import QQ_I

    idx = {v: k for k, v in enumerate(names)}
    n = len(names) or 1
    terms = {}
    for m, c in p.terms.items():
        exps = [0] * n
        for v, e in m:
            exps[idx[v]] = e
        terms[tuple(exps)] = QQ_I(c.re, c.im)
    return ring(terms)


def _from_sympy(names, sp) -> MultiPoly:
    terms = {}
    for exps, c in sp.terms():
        mono = tuple((names[k], e) for k, e in enumerate(exps) if e)
        terms[mono] = Gaussian(c.x, c.y)
    return MultiPoly(terms)


# Coprimality pre-check. Substituting values for all variables but one and
# reducing mod a prime (i -> a square root of -1) is a ring map; when it keeps
# the leading coefficient in v, deg_v gcd(a, b) is bounded by the degree of the
# image gcd. Constant image gcds in every variable prove a and b coprime.
_CHECK_P = 2305843009213693973
_CHECK_I = 1035093963448091331
_CHECK_VALUES = (982451653, 715827883, 433494437, 2971215073, 1500450271, 1073807359,
                 1297, 1871, 56687, 87178291199, 5915587277, 99194853094755497)


def _coeff_mod(c: Gaussian) -> int | None:
    p = _CHECK_P
    re_d, im_d = int(c.re.denominator) % p, int(c.im.denominator) % p
    if re_d == 0 or im_d == 0:
        return None
    re = int(c.re.numerator) * pow(re_d, -1, p)
    im = int(c.im.numerator) * pow(im_d, -1, p)
    return (re + im * _CHECK_I) % p


def _image(poly: MultiPoly, v: str, values: dict) -> list[int] | None:
    p = _CHECK_P
    out = {}
    for m, c in poly.terms.items():
        t = _coeff_mod(c)
        if t is None:
            return None
        k = 0
        for name, e in m:
            if name == v:
                k = e
            else:
                t = t * pow(values[name], e, p) % p
        out[k] = (out.get(k, 0) + t) % p
    deg = max(out)
    if out[deg] == 0:
        return None
    return [out.get(k, 0) for k in range(deg + 1)]


def _gcd_degree_mod(f: list[int], g: list[int]) -> int:
    p = _CHECK_P

    def trim(h):
        while h and h[-1] == 0:
            h.pop()
        return h

    f, g = trim(list(f)), trim(list(g))
    while g:
        inv = pow(g[-1], -1, p)
        while len(f) >= len(g):
            q = f[-1] * inv % p
            shift = len(f) - len(g)
            for k, c in enumerate(g):
                f[shift + k] = (f[shift + k] - q * c) % p
            trim(f)
            if not f:
                break
        f, g = g, f
    return len(f) - 1


def _provably_coprime(a: MultiPoly, b: MultiPoly) -> bool:
    names = sorted(a.variables() | b.variables(), key=var_key)
    values = {n: _CHECK_VALUES[k % len(_CHECK_VALUES)] + k for k, n in enumerate(names)}
    for v in names:
        da, db = a.degree_in(v), b.degree_in(v)
        if da == 0 or db == 0:
            continue
        fa, fb = _image(a, v, values), _image(b, v, values)
        if fa is None or fb is None or _gcd_degree_mod(fa, fb) != 0:
            return False
    return True


def cofactors(a: MultiPoly, b: MultiPoly):
    """Return ``(g, a/g, b/g)`` with ``g`` the monic gcd of ``a`` and ``b``."""
    if a.is_zero() and b.is_zero():
        return MultiPoly(), a, b
    if a.is_zero():
        g = b.monic()
        return g, MultiPoly(), b.exquo(g)
    if b.is_zero():
        g = a.monic()
        return g, a.exquo(g), MultiPoly()
    if a.is_monomial() or b.is_monomial():
        g = MultiPoly.monomial(mono_gcd(a.monomial_content(), b.monomial_content()))
        if g.is_one():
            return g, a, b
        (gm, _), = g.terms.items()
        return g, a.div_monomial(gm), b.div_monomial(gm)
    if _provably_coprime(a, b):
        return MultiPoly.const(1), a, b
    names = sorted(a.variables() | b.variables(), key=var_key)
    ring = _sympy_ring(tuple(names))
    h, qa, qb = _to_sympy(ring, names, a).cofactors(_to_sympy(ring, names, b))
    g, fa, fb = _from_sympy(names, h), _from_sympy(names, qa), _from_sympy(names, qb)
    _, lc = g.leading_term()
    if lc != 1:
        g = g.scale(lc.inverse())
        fa = fa.scale(lc)
        fb = fb.scale(lc)
    return g, fa, fb


def gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return cofactors(a, b)[0]


def gcd_all(polys) -> MultiPoly:
    g = MultiPoly()
    for p in polys:
        if g.is_one():
            break
        g = gcd(g, p)
    return g
