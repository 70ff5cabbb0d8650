from __future__ import annotations

import copy
import json
import random

import numpy as np
import pytest
import sympy

from stablecsa.algebra import GramMatrix, SqMatrix, delta_gram, identity_gram, sigma_gram
from stablecsa.constructions import ConstructionParams, StableTupleCandidate, build_tuple
from stablecsa.field import Gaussian, SpecializationMap, TowerElement
from stablecsa.stability import (
    AnisotropyFailure,
    DependentBasis,
    DiagonalQuadraticForm,
    NotDiagonalizable,
    certify_anisotropic,
    eigen_system,
    generic_pairing,
    is_isotropic_subspace,
    pairing_quadratic_form,
    planted_block_tuple,
    specialized_stability,
    square_class,
    symbolic_certificate,
    verify_specialized,
    verify_symbolic,
)
from stablecsa.stability import modp
from stablecsa.stability.oracle import analyze, reduce_tuple
from stablecsa.stability.symbolic import expected_so_coefficient, y_exponents

T = TowerElement

SMALL = [("sp", 1, 1), ("sp", 1, 3), ("sp", 2, 1), ("sp", 2, 3),
         ("so", 1, 3), ("so", 2, 1), ("so", 2, 3)]


def tup(g, a, s):
    return build_tuple(ConstructionParams(g, a, s))


def sqrt_prod(alpha):
    r = T.const(1)
    for l in range(1, alpha + 1):
        r = r * T.sqrt_x(l)
    return r


# -- eigen structure --------------------------------------------------------------

def test_eigen_sp_1_1():
    es = eigen_system(tup("sp", 1, 1))
    r = T.sqrt_x(1)
    assert es.eigenvalues == [r, -r]
    assert es.space(r).indices == [0] and es.space(-r).indices == [1]


def test_eigen_sp_2_1_two_dimensional():
    sp = eigen_system(tup("sp", 2, 1)).space(T.sqrt_x(1) * T.sqrt_x(2))
    assert sp.dim == 2
    assert [l[:-1] for l in sp.labels] == [(1, 1), (2, 2)]


@pytest.mark.parametrize("g,a,s", SMALL + [("sp", 3, 1), ("so", 3, 3)])
def test_eigen_multiplicities_and_vectors(g, a, s):
    t = tup(g, a, s)
    es = eigen_system(t)
    q = t.quaternion_factors
    assert sum(e.dim for e in es.spaces) == t.epsilon
    assert all(e.dim == 1 << max(q - 1, 0) for e in es.spaces)
    for e in es.spaces:
        for k in e.indices:
            v = [T()] * t.epsilon
            v[k] = T.const(1)
            assert t.A.apply(v) == tuple(e.eigenvalue * c for c in v)
    # eigenvalues are +-m * sqrt of the adjoined x's
    root = sqrt_prod(q)
    want = {m * sign * root for m in range(1, t.matrix_size + 1) for sign in (1, -1)}
    assert set(es.eigenvalues) == want


def test_non_diagonal_A_is_rejected():
    t = tup("sp", 1, 1)
    bad = StableTupleCandidate(2, t.gram, [t.B, t.A])
    with pytest.raises(NotDiagonalizable):
        eigen_system(bad)


# -- pairing forms ---------------------------------------------------------------

def test_pairing_sp_1_1():
    f = pairing_quadratic_form(tup("sp", 1, 1), T.sqrt_x(1))
    assert f.pairing == "Q(v,Bv)"
    assert f.coefficients == [-T.y(1)]


def test_pairing_so_1_3_carries_minus_four():
    t = tup("so", 1, 3)
    r = T.sqrt_x(1)
    f = pairing_quadratic_form(t, r)
    assert f.pairing == "Q(Bv,Bv)"
    # 2(1 - s) = -4, times y1 for the label with i_1 = 1, times the eigenvalue
    assert f.coefficients == [-4 * T.y(1) * r]
    assert pairing_quadratic_form(t, -r).coefficients == [4 * r]


def test_pairing_sp_2_1_denominators():
    t = tup("sp", 2, 1)
    f = pairing_quadratic_form(t, T.sqrt_x(1) * T.sqrt_x(2))
    assert len(f.coefficients) == 2
    ys = []
    for c in f.coefficients:
        (mask, coeff), = c.coeffs.items()
        _, exps = coeff.laurent_monomial()
        ys.append(exps.get("y1", 0))
        # the tau factor contributes 1/sqrt(x2) or 1/(y2 sqrt(x2))
        assert exps.get("y2", 0) in (0, -1)
    assert sorted(ys) == [0, 1]


@pytest.mark.parametrize("g,a,s", SMALL)
def test_generic_pairing_has_no_cross_terms(g, a, s):
    t = tup(g, a, s)
    for ev in eigen_system(t).eigenvalues[:2]:
        form = pairing_quadratic_form(t, ev)
        value, names = generic_pairing(t, ev)
        lams = [T.var(n) for n in names]
        assert value == form.value(lams)


@pytest.mark.parametrize("a,s", [(1, 3), (2, 3)])
def test_so_pairing_formula(a, s):
    t = tup("so", a, s)
    es = eigen_system(t)
    root = sqrt_prod(t.quaternion_factors)
    for ev in (root, -root):
        space = es.space(ev)
        form = pairing_quadratic_form(t, ev)
        for label, c in zip(space.labels, form.coefficients):
            assert c == expected_so_coefficient(t, space, label)


def test_y_exponents_convention():
    t = tup("so", 1, 3)
    assert y_exponents(t, (1, 1)) == [1]
    assert y_exponents(t, (2, 1)) == [0]


# -- anisotropy certificates ----------------------------------------------------

def test_certify_examples():
    ok = certify_anisotropic(DiagonalQuadraticForm([1, T.y(1)]))
    assert isinstance(ok, dict) and ok["classes"] == ["1", "y1"]
    assert isinstance(certify_anisotropic(DiagonalQuadraticForm([-T.y(1)])), dict)
    bad = certify_anisotropic(DiagonalQuadraticForm([T.y(1), T.y(1)]))
    assert isinstance(bad, AnisotropyFailure) and bad.pair == (0, 1)


def test_certify_rejects_zero_and_non_monomials():
    assert isinstance(certify_anisotropic(DiagonalQuadraticForm([1, 0])), AnisotropyFailure)
    assert isinstance(certify_anisotropic(DiagonalQuadraticForm([1 + T.y(1)])), AnisotropyFailure)


def test_square_classes():
    assert square_class(T.x(1), 1) == (Gaussian(1), frozenset())
    assert square_class(T.x(2), 1)[1] == frozenset({"x2"})
    assert square_class(-3 * T.sqrt_x(1) * T.y(2) ** 3, 2) == (Gaussian(-3), frozenset({"sqrt(x1)", "y2"}))


@pytest.mark.parametrize("g,a,s", SMALL)
def test_every_eigenvalue_certifies(g, a, s):
    t = tup(g, a, s)
    res = symbolic_certificate(t)
    assert res.verdict == "Stable", res.failures
    assert len(res.entries) == len(eigen_system(t).spaces)
    ok, why = verify_symbolic(t, json.loads(json.dumps(res.to_json())))
    assert ok, why


def test_tampered_symbolic_certificate():
    t = tup("sp", 1, 3)
    data = symbolic_certificate(t).to_json()
    bad = copy.deepcopy(data)
    bad["eigenvalues"][0]["classes"][0] = "y9"
    assert not verify_symbolic(t, bad)[0]
    bad = copy.deepcopy(data)
    bad["eigenvalues"].pop()
    assert not verify_symbolic(t, bad)[0]
    bad = copy.deepcopy(data)
    bad["eigenvalues"][1]["coefficients"][0] = "17"
    assert not verify_symbolic(t, bad)[0]


# -- isotropic subspaces ---------------------------------------------------------

def test_isotropic_subspace_examples():
    e1 = [T.const(1), T()]
    assert is_isotropic_subspace(sigma_gram(), [e1])
    assert not is_isotropic_subspace(identity_gram(2), [e1])
    assert is_isotropic_subspace(identity_gram(2), [[T.const(1), T.const(Gaussian(0, 1))]])
    assert is_isotropic_subspace(delta_gram(), [e1])
    with pytest.raises(DependentBasis):
        is_isotropic_subspace(identity_gram(2), [e1, e1])


# -- specialization oracle ---------------------------------------------------------

def test_sp_1_1_fixed_specialization_is_stable():
    t = tup("sp", 1, 1)
    smap = SpecializationMap(10009, {"x1": 4, "y1": 3}, {1: 2})
    gens, gram = reduce_tuple(t, smap)
    assert gens[0].tolist() == [[2, 0], [0, 10009 - 2]]
    assert gens[1].tolist() == [[0, 1], [3, 0]]
    rec = analyze(gens, gram, 10009, random.Random(0))
    assert rec["outcome"] == "stable"


@pytest.mark.parametrize("g,a,s", SMALL)
def test_symbolic_and_specialized_agree(g, a, s):
    t = tup(g, a, s)
    assert symbolic_certificate(t).verdict == "Stable"
    cert = specialized_stability(t, trials=5, seed=0)
    assert cert.verdict == "Stable"
    ok, why = verify_specialized(t, json.loads(json.dumps(cert.to_json())))
    assert ok, why


def test_so_1_3_stable_within_three_trials():
    for seed in range(5):
        cert = specialized_stability(tup("so", 1, 3), trials=3, seed=seed)
        assert cert.verdict == "Stable"


def test_planted_block_has_witness():
    t = planted_block_tuple()
    exact = specialized_stability(t, trials=2, seed=1, exact=True)
    assert exact.verdict == "Unstable-witness"
    assert is_isotropic_subspace(t.gram, exact.witness)
    assert verify_specialized(t, json.loads(json.dumps(exact.to_json())))[0]
    modular = specialized_stability(t, trials=3, seed=1)
    assert modular.verdict == "Inconclusive"
    assert all(r.outcome == "witness" for r in modular.trials)
    assert verify_specialized(t, json.loads(json.dumps(modular.to_json())))[0]


def test_oracle_is_deterministic():
    t = tup("sp", 2, 3)
    a = specialized_stability(t, trials=5, seed=42).to_json()
    b = specialized_stability(t, trials=5, seed=42).to_json()
    assert a == b
    c = specialized_stability(t, trials=5, seed=42, workers=4).to_json()
    assert a == c


def test_tampered_specialized_certificate():
    t = tup("sp", 2, 1)
    data = specialized_stability(t, trials=5, seed=0).to_json()
    bad = copy.deepcopy(data)
    bad["trials"][-1]["algebra_dim"] += 1
    assert not verify_specialized(t, bad)[0]
    bad = copy.deepcopy(data)
    bad["verdict"] = "Inconclusive"
    assert not verify_specialized(t, bad)[0]
    bad = copy.deepcopy(data)
    bad["seed"] = 1
    assert not verify_specialized(t, bad)[0]


def test_fake_witness_is_rejected():
    t = planted_block_tuple()
    data = specialized_stability(t, trials=1, seed=0, exact=True).to_json()
    bad = copy.deepcopy(data)
    one, zero = T.const(1).to_json(), T().to_json()
    bad["witness"] = [[one, zero, zero, zero]]
    assert not verify_specialized(t, bad)[0]


def test_trials_must_be_positive():
    with pytest.raises(ValueError):
        specialized_stability(tup("sp", 1, 1), trials=0)


# -- modular linear algebra ---------------------------------------------------------

P = 10009


def rand_mod(rng, n, rank=None):
    m = np.array([[rng.randrange(P) for _ in range(n)] for _ in range(n)], dtype=np.int64)
    if rank is not None:
        left = np.array([[rng.randrange(P) for _ in range(rank)] for _ in range(n)], dtype=np.int64)
        right = np.array([[rng.randrange(P) for _ in range(n)] for _ in range(rank)], dtype=np.int64)
        m = modp.matmul(left, right, P)
    return m


def test_modp_charpoly_matches_sympy():
    rng = random.Random(3)
    X = sympy.Symbol("X")
    for n in (1, 3, 5):
        m = rand_mod(rng, n)
        want = sympy.Matrix(m.tolist()).charpoly(X).all_coeffs()[::-1]
        assert modp.charpoly(m, P) == [int(c) % P for c in want]


def test_modp_rank_nullspace_inverse():
    rng = random.Random(4)
    for n, r in ((4, 2), (5, 5), (6, 3)):
        m = rand_mod(rng, n, r)
        assert modp.rank(m, P) == r
        ns = modp.nullspace(m, P)
        assert ns.shape[0] == n - r
        assert not modp.matmul(m, ns.T, P).any()
        inv = modp.inverse(m, P)
        if r == n:
            assert (modp.matmul(m, inv, P) == np.eye(n, dtype=np.int64)).all()
        else:
            assert inv is None


def test_modp_roots_and_spin():
    # (X - 3)(X - 5) = X^2 - 8X + 15
    assert sorted(modp.poly_roots([15, P - 8, 1], P)) == [3, 5]
    a = np.array([[0, 1, 0], [0, 0, 0], [0, 0, 1]], dtype=np.int64)
    sub = modp.spin([a], [np.array([0, 1, 0], dtype=np.int64)], P)
    assert sub.shape[0] == 2 and modp.is_invariant(sub, [a], P)
