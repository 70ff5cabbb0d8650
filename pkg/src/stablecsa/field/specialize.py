"""Specialization homomorphisms K -> GF(p)."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import is_prime

from .gaussian import Gaussian
from .poly import MultiPoly
from .ratfunc import RatFunc
from .tower import TowerElement, mask_indices, x_name, y_name

DEFAULT_PRIME = 10009


class DenominatorVanishes(ArithmeticError):
    """The specialization is undefined at this point; resample."""


class MissingRoot(KeyError):
    pass


class MissingValue(KeyError):
    pass


def sqrt_minus_one(p: int) -> int:
    """A square root of -1 modulo a prime ``p = 1 (mod 4)``."""
    if p % 4 != 1:
        raise ValueError(f"-1 is not a square modulo {p}")
    for g in range(2, p):
        if pow(g, (p - 1) // 2, p) == p - 1:
            return pow(g, (p - 1) // 4, p)
    raise ValueError(f"{p} is not prime")


@dataclass(frozen=True)
class SpecializationMap:
    """Assignment of prime-field values to the variables of K.

    ``values`` maps variable names (``x1``, ``y1``, ...) to residues,
    ``roots`` maps ``l`` to the chosen square root of ``x_l``, and
    ``i_unit`` is the image of ``i``.
    """

    p: int
    values: dict = field(default_factory=dict)
    roots: dict = field(default_factory=dict)
    i_unit: int | None = None

    def __post_init__(self):
        p = self.p
        if not is_prime(p) or p % 4 != 1:
            raise ValueError(f"specialization prime must be a prime = 1 (mod 4), got {p}")
        i_unit = self.i_unit if self.i_unit is not None else sqrt_minus_one(p)
        if (i_unit * i_unit + 1) % p:
            raise ValueError("i_unit is not a square root of -1")
        object.__setattr__(self, "i_unit", i_unit % p)
        values = {k: v % p for k, v in self.values.items()}
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "roots", {int(l): r % p for l, r in self.roots.items()})
        for l, r in self.roots.items():
            a = values.get(x_name(l))
            if a is None or (r * r - a) % p or a == 0:
                raise ValueError(f"root for x{l} is not a square root of a nonzero value")
        for name, v in values.items():
            if name.startswith("y") and v == 0:
                raise ValueError(f"{name} must specialize to a nonzero value")

    # -- evaluation -----------------------------------------------------
    def scalar(self, c: Gaussian) -> int:
        p = self.p
        out = 0
        for part, unit in ((c.re, 1), (c.im, self.i_unit)):
            if not part:
                continue
            den = int(part.denominator) % p
            if den == 0:
                raise DenominatorVanishes("rational constant has denominator divisible by p")
            out += int(part.numerator) * pow(den, -1, p) * unit
        return out % p

    def poly(self, f: MultiPoly) -> int:
        p = self.p
        total = 0
        for mono, c in f.terms.items():
            term = self.scalar(c)
            for v, e in mono:
                try:
                    term = term * pow(self.values[v], e, p) % p
                except KeyError:
                    raise MissingValue(v) from None
            total += term
        return total % p

    def ratfunc(self, r: RatFunc) -> int:
        d = self.poly(r.den)
        if d == 0:
            raise DenominatorVanishes(f"denominator {r.den} vanishes")
        return self.poly(r.num) * pow(d, -1, self.p) % self.p

    def root_product(self, mask: int) -> int:
        out = 1
        for l in mask_indices(mask):
            if l not in self.roots:
                raise MissingRoot(f"no recorded square root for x{l}")
            out = out * self.roots[l] % self.p
        return out

    def __call__(self, a) -> int:
        return specialize(a, self)

    def to_json(self) -> dict:
        return {"p": self.p, "values": dict(sorted(self.values.items())),
                "roots": {str(l): r for l, r in sorted(self.roots.items())},
                "i_unit": self.i_unit}

    @classmethod
    def from_json(cls, data) -> SpecializationMap:
        return cls(p=int(data["p"]), values={k: int(v) for k, v in data["values"].items()},
                   roots={int(k): int(v) for k, v in data["roots"].items()},
                   i_unit=int(data["i_unit"]))


def specialize(a, s: SpecializationMap) -> int:
    """Image of ``a`` (TowerElement, RatFunc, MultiPoly or scalar) in GF(p)."""
    if isinstance(a, TowerElement):
        total = 0
        for mask, c in a.coeffs.items():
            total += s.ratfunc(c) * s.root_product(mask)
        return total % s.p
    if isinstance(a, RatFunc):
        return s.ratfunc(a)
    if isinstance(a, MultiPoly):
        return s.poly(a)
    return s.scalar(Gaussian.coerce(a))


def sample_specialization(alpha: int, rng: random.Random, p: int = DEFAULT_PRIME,
                          extra=()) -> SpecializationMap:
    """Random map with x_l = r_l^2 for nonzero r_l and nonzero y_l."""
    values = {}
    roots = {}
    for l in range(1, alpha + 1):
        r = rng.randrange(1, p)
        roots[l] = r
        values[x_name(l)] = r * r % p
        values[y_name(l)] = rng.randrange(1, p)
    for name in extra:
        values.setdefault(name, rng.randrange(1, p))
    return SpecializationMap(p=p, values=values, roots=roots, i_unit=sqrt_minus_one(p))
