from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_tower, sym_is_zero, sym_tower
from stablecsa.field import (
    DenominatorVanishes,
    Gaussian,
    MissingRoot,
    MultiPoly,
    NotInvertible,
    ParseError,
    RatFunc,
    SpecializationMap,
    TowerElement,
    parse_expr,
    parse_lines,
    sample_specialization,
    specialize,
)

T = TowerElement


def x(l):
    return T.x(l)


def y(l):
    return T.y(l)


def r(l):
    return T.sqrt_x(l)


# -- Gaussian rationals ------------------------------------------------------

def test_gaussian_i_squared():
    i = Gaussian(0, 1)
    assert i * i == Gaussian(-1)
    assert Gaussian(1, 1) * Gaussian(1, -1) == 2


def test_gaussian_division_and_reduction():
    a = Gaussian(2, 4) / 6
    assert a == Gaussian(1, 2) / 3
    assert str(a) == "1/3+2/3*i"
    assert (Gaussian(3, 4) * Gaussian(3, 4).inverse()).is_one()
    with pytest.raises(ZeroDivisionError):
        Gaussian(0).inverse()


def test_gaussian_sqrt():
    assert Gaussian(0, 2).sqrt() in (Gaussian(1, 1), Gaussian(-1, -1))
    assert Gaussian(2).sqrt() is None


# -- the examples ----------------------------------------------------------------

def test_sqrt_squared_is_x():
    assert r(1) * r(1) == x(1)


def test_sqrt_product_is_basis_element():
    p = r(1) * r(2)
    assert set(p.coeffs) == {0b11}
    assert p.coeffs[0b11] == 1


def test_difference_of_squares():
    assert (1 + r(1)) * (1 - r(1)) == 1 - x(1)


def test_is_zero_examples():
    assert T().is_zero()
    assert (x(1) / x(1) - 1).is_zero()
    assert not (r(1) - r(2)).is_zero()


def test_specialize_examples():
    s = SpecializationMap(13, {"x1": 4, "y1": 3}, {1: 2})
    assert specialize(r(1), s) == 2
    assert specialize(x(1) * y(1), s) == 12
    with pytest.raises(DenominatorVanishes):
        specialize(T.const(1) / (x(1) - 4), s)


def test_specialize_missing_root():
    s = SpecializationMap(13, {"x1": 4, "x2": 9, "y1": 3}, {1: 2})
    with pytest.raises(MissingRoot):
        specialize(r(2), s)


def test_specialization_map_validation():
    with pytest.raises(ValueError):
        SpecializationMap(11, {"x1": 4}, {1: 2})  # 11 = 3 mod 4
    with pytest.raises(ValueError):
        SpecializationMap(13, {"x1": 5}, {1: 2})  # 2^2 != 5
    with pytest.raises(ValueError):
        SpecializationMap(13, {"x1": 4, "y1": 0}, {1: 2})
    s = SpecializationMap(13, {"x1": 4, "y1": 3}, {1: 2})
    assert SpecializationMap.from_json(s.to_json()) == s


def test_division_by_zero_and_zero_divisor_report():
    with pytest.raises(ZeroDivisionError):
        RatFunc(1) / RatFunc(0)
    with pytest.raises(NotInvertible):
        T().inverse()


def test_inverse_in_tower():
    a = 1 + r(1) + y(2) * r(1) * r(2)
    assert (a * a.inverse()).is_one()
    assert (a / a).is_one()


def test_conjugate_is_automorphism():
    rng = random.Random(3)
    for _ in range(20):
        a, b = random_tower(rng, 2), random_tower(rng, 2)
        assert (a * b).conjugate(1) == a.conjugate(1) * b.conjugate(1)


def test_ratfunc_canonical_form():
    f = RatFunc(MultiPoly.var("x1") ** 2 - 1, MultiPoly.var("x1") - 1)
    assert f == RatFunc(MultiPoly.var("x1") + 1)
    g = RatFunc(MultiPoly.var("y1"), MultiPoly.var("x1").scale(2))
    # denominator is monic
    assert g.den.leading_term()[1] == 1


def test_tower_json_round_trip():
    a = (x(1) + Gaussian(1, 2)) * r(1) * r(3) - y(2) / (x(1) + 1)
    assert T.from_json(a.to_json()) == a


# -- parser ---------------------------------------------------------------------

def test_parse_round_trip():
    rng = random.Random(11)
    for _ in range(50):
        a = random_tower(rng, 2)
        for c in a.coeffs.values():
            assert parse_expr(str(c)) == c


def test_parse_forms():
    assert parse_expr("x1^2 - 2*x1*y1 + y1**2") == parse_expr("(x1 - y1)^2")
    assert parse_expr("x1^-1") == RatFunc(1) / RatFunc.var("x1")
    assert parse_expr("i*i") == RatFunc(-1)
    assert parse_expr("-(x1)") == -RatFunc.var("x1")


@pytest.mark.parametrize("text,col", [("x1 + * 2", 6), ("(x1 + 1", 8), ("x1 $ 2", 4), ("", 1)])
def test_parse_errors_report_position(text, col):
    with pytest.raises(ParseError) as exc:
        parse_expr(text, line=3)
    assert exc.value.line == 3
    assert exc.value.column == col


def test_parse_restricts_variables():
    with pytest.raises(ParseError) as exc:
        parse_expr("x1 + z", allowed={"x1"})
    assert "z" in str(exc.value)


def test_parse_lines_skips_comments():
    got = parse_lines("# header\n\nx1\n  y1 # trailing\n")
    assert [n for n, _ in got] == [3, 4]


def test_parse_division_by_zero():
    with pytest.raises(ParseError):
        parse_expr("1/(x1 - x1)")


# -- properties -----------------------------------------------------------------

def test_ring_axioms_on_random_triples():
    rng = random.Random(2024)
    for _ in range(500):
        alpha = rng.randint(1, 2)
        a, b, c = (random_tower(rng, alpha, rational=False) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)


def test_normalization_idempotent():
    rng = random.Random(7)
    names = ["x1", "y1", "x2"]
    from oracles import random_ratfunc

    for _ in range(500):
        f = random_ratfunc(rng, names, general=True)
        again = RatFunc(f.num, f.den)
        assert again == f
        assert again.num == f.num and again.den == f.den


def test_specialize_is_homomorphism():
    rng = random.Random(99)
    checked = 0
    while checked < 500:
        alpha = rng.randint(1, 2)
        a, b = random_tower(rng, alpha), random_tower(rng, alpha)
        s = sample_specialization(alpha, rng)
        try:
            sa, sb, sab, ssum = s(a), s(b), s(a * b), s(a + b)
        except DenominatorVanishes:
            continue
        assert sab == sa * sb % s.p
        assert ssum == (sa + sb) % s.p
        checked += 1


def test_basis_has_2_alpha_slots():
    rng = random.Random(5)
    for alpha in (1, 2, 3):
        full = T({m: RatFunc(1) for m in range(1 << alpha)}, alpha)
        assert len(full.coeffs) == 1 << alpha
        for _ in range(10):
            p = random_tower(rng, alpha) * random_tower(rng, alpha)
            assert all(0 <= m < 1 << alpha for m in p.coeffs)


def test_is_zero_matches_sympy():
    rng = random.Random(123)
    for k in range(120):
        a = random_tower(rng, 2)
        b = random_tower(rng, 2)
        # half the cases are built to vanish
        expr = (a * b - b * a) if k % 2 else (a * b - a * (b + r(1)) + a * r(1))
        if k % 4 == 3:
            expr = a - b
        assert expr.is_zero() == sym_is_zero(expr)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_sqrt_linear_combination_squares(cs):
    a = cs[0] + cs[1] * r(1) + cs[2] * r(2) + cs[3] * r(1) * r(2)
    import sympy

    assert sympy.expand(sym_tower(a * a) - sym_tower(a) ** 2) == 0


def test_gcd_matches_sympy_with_planted_factors():
    import sympy

    from oracles import random_poly_rat, sym_ratfunc
    from stablecsa.field.poly import cofactors

    rng = random.Random(31)
    names = ["x1", "y1", "x2"]
    for k in range(30):
        a = random_poly_rat(rng, names, 4).num
        b = random_poly_rat(rng, names, 4).num
        if k % 2:
            c = random_poly_rat(rng, names, 2).num
            a, b = a * c, b * c
        if a.is_zero() or b.is_zero():
            continue
        g, fa, fb = cofactors(a, b)
        assert g * fa == a and g * fb == b
        want = sympy.gcd(sym_ratfunc(RatFunc(a), False), sym_ratfunc(RatFunc(b), False),
                         extension=sympy.I)
        ratio = sympy.cancel(want / sym_ratfunc(RatFunc(g), False))
        assert not ratio.free_symbols
