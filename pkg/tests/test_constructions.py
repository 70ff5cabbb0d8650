from __future__ import annotations

import itertools

import pytest

from stablecsa.algebra import (
    InvolutionKind,
    SqMatrix,
    charpoly,
    delta_gram,
    identity_gram,
    kron,
    kron_grams,
    poly_mul,
    quaternion_split,
    sigma_gram,
)
from stablecsa.constructions import (
    Case,
    ConstructionParams,
    Group,
    InvalidCase,
    StableTupleCandidate,
    aux_matrices,
    build_tuple,
    expected_kind,
    verify_skew,
)
from stablecsa.field import TowerElement

T = TowerElement

VALID = [(g, a, s) for g, a, s in itertools.product(["sp", "so"], [1, 2, 3], [1, 3])
         if not (g == "so" and a == 1 and s == 1)]


def test_sp_1_1_example():
    t = build_tuple(ConstructionParams("sp", 1, 1))
    r = T.sqrt_x(1)
    assert t.A == SqMatrix.diag([r, -r])
    assert t.B == SqMatrix([[0, 1], [T.y(1), 0]])
    assert t.gram == sigma_gram()
    assert t.kind is InvolutionKind.SYMPLECTIC
    assert t.case is Case.SP_ODD


def test_so_1_3_example():
    t = build_tuple(ConstructionParams("so", 1, 3))
    q = quaternion_split(1)
    aux = aux_matrices(3)
    assert t.epsilon == 6
    assert t.A == kron(q.Mi, SqMatrix.diag([1, 2, 3]))
    assert t.B == kron(q.Mi, aux.M1) + kron(q.Mj, aux.M2)
    assert t.gram == kron_grams([delta_gram(), identity_gram(3)])
    assert t.kind is InvolutionKind.ORTHOGONAL


def test_so_s1_alpha1_is_rejected():
    # degree 2 orthogonal: A would be diag(1, 2), which is not skew for the transpose
    with pytest.raises(InvalidCase):
        ConstructionParams("so", 1, 1)


@pytest.mark.parametrize("kw", [
    dict(group="sp", alpha=0, s=3),
    dict(group="so", alpha=0, s=3),
    dict(group="sp", alpha=1, s=2),
    dict(group="sp", alpha=1, s=-1),
    dict(group="sp", alpha=-1, s=1),
    dict(group="sp", alpha=1, s=1, g=1),
    dict(group="gl", alpha=1, s=1),
])
def test_invalid_params(kw):
    with pytest.raises(InvalidCase):
        ConstructionParams(**kw)


def test_case_dispatch():
    assert ConstructionParams("sp", 3, 1).case is Case.SP_ODD
    assert ConstructionParams("sp", 2, 3).case is Case.SP_EVEN
    assert ConstructionParams("so", 3, 3).case is Case.SO_ODD
    assert ConstructionParams("so", 2, 3).case is Case.SO_EVEN
    p = ConstructionParams("so", 2, 1)
    assert p.case is Case.SO_SPLIT
    assert (p.quaternion_factors, p.matrix_size) == (1, 2)


@pytest.mark.parametrize("group,alpha,s", VALID)
@pytest.mark.parametrize("g", [2, 3])
def test_every_case_is_skew_and_classified(group, alpha, s, g):
    p = ConstructionParams(group, alpha, s, g)
    t = build_tuple(p)
    assert verify_skew(t)
    assert t.kind is expected_kind(p.group)
    assert t.epsilon == (1 << alpha) * s
    assert t.gram.dim == t.epsilon
    assert len(t.elements) == g
    assert all(m == t.B for m in t.elements[1:])


def test_sp_even_gram_uses_tau():
    t = build_tuple(ConstructionParams("sp", 2, 1))
    # T^-1 has entries -1/sqrt(x2) and -1/(y2 sqrt(x2)) on the second factor
    inv_root = T.sqrt_x(2).inverse()
    tau_inv = SqMatrix.diag([-inv_root, -(inv_root * T.y(2).inverse())])
    assert t.gram.matrix == kron(sigma_gram().matrix, tau_inv)


def test_verify_skew_failures():
    t = build_tuple(ConstructionParams("sp", 1, 3))
    bad = StableTupleCandidate(t.epsilon, t.gram, [SqMatrix.identity(t.epsilon), t.B])
    r = verify_skew(bad)
    assert not r and r.index == 1
    u = build_tuple(ConstructionParams("so", 1, 3))
    bad = StableTupleCandidate(u.epsilon, u.gram, [u.A, u.gram.matrix])
    r = verify_skew(bad)
    assert not r and r.index == 2


def test_candidate_validation():
    t = build_tuple(ConstructionParams("sp", 1, 1))
    with pytest.raises(InvalidCase):
        StableTupleCandidate(2, t.gram, [])
    with pytest.raises(InvalidCase):
        StableTupleCandidate(2, t.gram, [SqMatrix.identity(3)])
    with pytest.raises(InvalidCase):
        StableTupleCandidate(4, t.gram, [t.A])


@pytest.mark.parametrize("s", [1, 2, 3, 5])
def test_aux_matrices(s):
    aux = aux_matrices(s)
    assert aux.M1.transpose() == aux.M1
    assert aux.M2.transpose() == -aux.M2
    for k in range(s):
        assert aux.M1[0, k] == 1 and aux.M1[k, 0] == 1
        if k:
            assert aux.M2[0, k] == 1 and aux.M2[k, 0] == -1
    for i in range(1, s):
        for j in range(1, s):
            assert aux.M1[i, j] == 0 and aux.M2[i, j] == 0


def _expected_charpoly(alpha, s):
    prod_x = T.const(1)
    for l in range(1, alpha + 1):
        prod_x = prod_x * T.x(l)
    out = [T.const(1)]
    for m in range(1, s + 1):
        factor = [-(prod_x * (m * m)), T(), T.const(1)]
        for _ in range(1 << (alpha - 1)):
            out = poly_mul(out, factor)
    return out


@pytest.mark.parametrize("group,alpha,s",
                         [(g, a, s) for g, a, s in VALID if a <= 2 and g == "sp"]
                         + [("so", a, s) for a in (1, 2) for s in (3,)])
def test_charpoly_of_A(group, alpha, s):
    t = build_tuple(ConstructionParams(group, alpha, s))
    assert charpoly(t.A) == _expected_charpoly(alpha, s)


def test_A_squared_is_scalar_times_diag():
    t = build_tuple(ConstructionParams("sp", 2, 3))
    prod_x = T.x(1) * T.x(2)
    want = kron(SqMatrix.identity(4), SqMatrix.diag([1, 4, 9])).scale(prod_x)
    assert t.A.matmul(t.A) == want


def test_describe_fields():
    d = build_tuple(ConstructionParams(Group.SO, 2, 1, 3)).describe()
    assert d["case"] == "so-split" and d["epsilon"] == 4 and d["g"] == 3
    assert d["kind"] == "Orthogonal"
