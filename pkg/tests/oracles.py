"""Independent reference computations (sympy) used to cross-check the package."""

from __future__ import annotations

import random

from fractions import Fraction

import sympy

from stablecsa.field import Gaussian, MultiPoly, RatFunc, TowerElement
from stablecsa.moduli import UNDETERMINED, ParabolicDatum, ParabolicPoint, epsilon, existence_check
from stablecsa.pfister import IsotropyCandidate
from stablecsa.field.tower import mask_indices


def u(l):
    return sympy.Symbol(f"u{l}")


def sym_ratfunc(r: RatFunc, sqrt_vars: bool = True):
    expr = sympy.sympify(str(r).replace("^", "**"), locals={"i": sympy.I})
    if sqrt_vars:
        subs = {s: u(int(s.name[1:])) ** 2 for s in expr.free_symbols if s.name.startswith("x")}
        expr = expr.subs(subs)
    return expr


def sym_tower(a: TowerElement):
    """a as a rational function of u_l = sqrt(x_l) and y_l."""
    total = sympy.Integer(0)
    for mask, c in a.coeffs.items():
        term = sym_ratfunc(c)
        for l in mask_indices(mask):
            term *= u(l)
        total += term
    return total


def sym_is_zero(a: TowerElement) -> bool:
    return sympy.cancel(sympy.together(sym_tower(a))) == 0


def random_gaussian(rng: random.Random) -> Gaussian:
    return Gaussian(rng.randint(-4, 4), rng.choice([0, 0, 1, -1, 2])) / rng.randint(1, 3)


def random_poly_rat(rng: random.Random, names, terms=3) -> RatFunc:
    out = RatFunc(0)
    for _ in range(rng.randint(1, terms)):
        t = RatFunc(Gaussian(rng.randint(-3, 3), rng.choice([0, 0, 1, -1])))
        for n in names:
            e = rng.choice([0, 0, 1, 2])
            if e:
                t = t * RatFunc.var(n) ** e
        out = out + t
    return out


def random_ratfunc(rng: random.Random, names, general=False) -> RatFunc:
    """Random quotient. By default the denominator is a monomial times at most one
    linear factor, which keeps products cheap to normalize."""
    num = random_poly_rat(rng, names)
    if general:
        den = random_poly_rat(rng, names, 2)
        if den.is_zero():
            den = RatFunc(1)
        return num / den
    den = RatFunc(Gaussian(rng.randint(1, 3)))
    for n in rng.sample(list(names), rng.randint(0, 2)):
        den = den * RatFunc.var(n)
    if rng.random() < 0.5:
        den = den * (RatFunc.var(rng.choice(list(names))) + RatFunc(random_gaussian(rng) or 1))
    return num / den


def random_tower(rng: random.Random, alpha: int, rational=True) -> TowerElement:
    names = [f"x{l}" for l in range(1, alpha + 1)] + [f"y{l}" for l in range(1, alpha + 1)]
    coeffs = {}
    for mask in range(1 << alpha):
        if rng.random() < 0.6:
            coeffs[mask] = (random_ratfunc(rng, names) if rational and rng.random() < 0.3
                            else random_poly_rat(rng, names))
    return TowerElement(coeffs, alpha)


def sym_matrix(m):
    return sympy.Matrix([[sym_tower(e) for e in row] for row in m.rows])


# -- Pfister candidates ------------------------------------------------------

def random_poly(rng, n, degree=3, terms=3):
    out = MultiPoly()
    for _ in range(rng.randint(0, terms)):
        mono = MultiPoly.const(Gaussian(rng.randint(-3, 3), rng.choice([0, 0, 1, -2])))
        budget = rng.randint(0, degree)
        for _ in range(budget):
            mono = mono * MultiPoly.var(f"t{rng.randint(1, n)}") if n else mono
        out = out + mono
    return out


def random_candidate(rng, n):
    while True:
        vals = [random_poly(rng, n) for _ in range(1 << n)]
        # sometimes plant a common factor so stripping has work to do
        if rng.random() < 0.3 and n:
            f = MultiPoly.var(f"t{rng.randint(1, n)}") + rng.randint(-2, 2)
            vals = [v * f for v in vals]
        cand = IsotropyCandidate(vals)
        if not cand.is_zero():
            return cand


# -- parabolic data -----------------------------------------------------------

def random_valid_datum(rng):
    """Weights closed under w -> 1 - w with matching multiplicities, integral degree."""
    group = rng.choice(["sp", "so"])
    half = rng.randint(2 if group == "so" else 1, 8)
    rank = 2 * half
    points = []
    total = Fraction(0)
    for _ in range(rng.randint(0, 2)):
        mults = {}
        remaining = rank
        while remaining:
            kind = rng.choice(["zero", "half", "pair", "pair"])
            if kind == "zero":
                m = rng.randint(1, remaining)
                mults[Fraction(0)] = mults.get(Fraction(0), 0) + m
            elif kind == "half":
                m = rng.randint(1, remaining)
                mults[Fraction(1, 2)] = mults.get(Fraction(1, 2), 0) + m
            else:
                if remaining < 2:
                    continue
                m = rng.randint(1, remaining // 2)
                w = Fraction(rng.randint(1, 5), 12)
                if w in mults or (1 - w) in mults:
                    continue
                mults[w] = m
                mults[1 - w] = m
                m *= 2
            remaining -= m
        ws = sorted(mults)
        points.append((tuple(ws), tuple(mults[w] for w in ws)))
        total += sum(w * mults[w] for w in ws)
    if total.denominator != 1:
        return None
    degree = -int(total)
    return ParabolicDatum(group, rank, degree,
                          tuple(ParabolicPoint(w, m) for w, m in points))


def expected_period_index(d):
    """The case table, written out independently of the moduli module."""
    e = epsilon(d)
    if e.epsilon % 2:
        return 1, (1,)
    if d.group.value == "Sp":
        return 2, (2 ** e.alpha,)
    if e.s > 1:
        return 2, (2 ** e.alpha,)
    if e.alpha >= 2:
        return 2, (2 ** (e.alpha - 1), 2 ** e.alpha)
    if d.rank % 4 == 0:
        return 2, (2,)
    return UNDETERMINED, ()


def datum_grid(n=200, seed=2023):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        d = random_valid_datum(rng)
        if d is not None and existence_check(d):
            out.append(d)
    return out
