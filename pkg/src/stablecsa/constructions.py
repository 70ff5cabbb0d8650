"""Explicit skew tuples (A, B, ..., B) for split symplectic and orthogonal algebras."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .algebra import (
    GramMatrix,
    InvolutionKind,
    SqMatrix,
    apply_involution,
    classify_involution,
    delta_gram,
    identity_gram,
    kron_all,
    kron_grams,
    quaternion_split,
    sigma_gram,
    tau_gram,
)


class InvalidCase(ValueError):
    pass


class Group(str, enum.Enum):
    SP = "Sp"
    SO = "SO"

    @classmethod
    def parse(cls, text) -> Group:
        if isinstance(text, Group):
            return text
        t = str(text).strip().lower()
        if t == "sp":
            return cls.SP
        if t == "so":
            return cls.SO
        raise InvalidCase(f"unknown group {text!r}; expected 'sp' or 'so'")


class Case(str, enum.Enum):
    SP_ODD = "sp-odd"
    SP_EVEN = "sp-even"
    SO_ODD = "so-odd"
    SO_EVEN = "so-even"
    SO_SPLIT = "so-split"  # s = 1: last quaternion factor replaced by M_2(F)
    CUSTOM = "custom"


@dataclass(frozen=True)
class ConstructionParams:
    group: Group
    alpha: int
    s: int
    g: int = 2

    def __post_init__(self):
        object.__setattr__(self, "group", Group.parse(self.group))
        for name in ("alpha", "s", "g"):
            if not isinstance(getattr(self, name), int):
                raise InvalidCase(f"{name} must be an integer")
        if self.alpha < 0:
            raise InvalidCase("alpha must be non-negative")
        if self.s < 1 or self.s % 2 == 0:
            raise InvalidCase(f"s must be an odd positive integer, got {self.s}")
        if self.g < 2:
            raise InvalidCase(f"g must be at least 2, got {self.g}")
        if self.alpha == 0:
            raise InvalidCase(f"{self.group.value} with alpha=0 has odd degree; "
                              "no quaternion factor to build from")
        if self.group is Group.SO and self.s == 1 and self.alpha < 2:
            raise InvalidCase("SO with s=1 needs alpha >= 2: in degree 2 the skew elements "
                              "commute and share an isotropic eigenline")

    @property
    def epsilon(self) -> int:
        return (1 << self.alpha) * self.s

    @property
    def case(self) -> Case:
        if self.group is Group.SP:
            return Case.SP_ODD if self.alpha % 2 else Case.SP_EVEN
        if self.s == 1:
            return Case.SO_SPLIT
        return Case.SO_ODD if self.alpha % 2 else Case.SO_EVEN

    @property
    def quaternion_factors(self) -> int:
        return self.alpha - 1 if self.case is Case.SO_SPLIT else self.alpha

    @property
    def matrix_size(self) -> int:
        return 2 if self.case is Case.SO_SPLIT else self.s


@dataclass(frozen=True)
class AuxMatrices:
    M1: SqMatrix
    M2: SqMatrix


def aux_matrices(s: int) -> AuxMatrices:
    """M1: ones on the first row and column; M2: ones right of (1,1), -1 below it."""
    if s < 1:
        raise InvalidCase("matrix size must be positive")
    m1 = [[0] * s for _ in range(s)]
    m2 = [[0] * s for _ in range(s)]
    for k in range(s):
        m1[0][k] = m1[k][0] = 1
        if k:
            m2[0][k] = 1
            m2[k][0] = -1
    return AuxMatrices(SqMatrix(m1), SqMatrix(m2))


@dataclass
class StableTupleCandidate:
    epsilon: int
    gram: GramMatrix
    elements: list
    case: Case = Case.CUSTOM
    params: ConstructionParams | None = None
    quaternion_factors: int = 0
    matrix_size: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.elements:
            raise InvalidCase("a tuple needs at least one element")
        for m in self.elements:
            if m.dim != self.gram.dim:
                raise InvalidCase("tuple element dimension differs from Gram matrix")
        if self.epsilon != self.gram.dim:
            raise InvalidCase("epsilon differs from the Gram matrix dimension")
        if not self.matrix_size:
            self.matrix_size = self.epsilon >> self.quaternion_factors

    @property
    def kind(self) -> InvolutionKind:
        return classify_involution(self.gram)

    @property
    def A(self) -> SqMatrix:
        return self.elements[0]

    @property
    def B(self) -> SqMatrix:
        return self.elements[1] if len(self.elements) > 1 else self.elements[0]

    @property
    def g(self) -> int:
        return len(self.elements)

    @property
    def alpha(self) -> int:
        """Number of square roots of K the entries may involve."""
        if self.params is not None:
            return self.params.alpha
        return self.quaternion_factors

    def describe(self) -> dict:
        return {
            "case": self.case.value,
            "epsilon": self.epsilon,
            "kind": self.kind.value,
            "gram_kind": self.gram.kind.value,
            "g": self.g,
            "quaternion_factors": self.quaternion_factors,
            "matrix_size": self.matrix_size,
        }


def build_tuple(p: ConstructionParams) -> StableTupleCandidate:
    """Build lambda_1 = A, lambda_2 = ... = lambda_g = B with its Gram matrix."""
    case = p.case
    q = p.quaternion_factors
    size = p.matrix_size
    quats = [quaternion_split(l) for l in range(1, q + 1)]
    eye2 = SqMatrix.identity(2)
    eye_s = SqMatrix.identity(size)
    diag_s = SqMatrix.diag(list(range(1, size + 1)))

    i_all = [qq.Mi for qq in quats]
    A = kron_all(i_all + [diag_s])

    if case in (Case.SP_ODD, Case.SP_EVEN):
        if q % 2:
            B = kron_all([qq.Mj for qq in quats] + [eye_s])
            gram = kron_grams([sigma_gram()] * q + [identity_gram(size)])
        else:
            B = kron_all([qq.Mj for qq in quats[:-1]] + [eye2, eye_s])
            gram = kron_grams([sigma_gram()] * (q - 1) + [tau_gram(q), identity_gram(size)])
    else:
        aux = aux_matrices(size)
        left = kron_all(i_all + [aux.M1])
        if q % 2:
            right = kron_all([qq.Mj for qq in quats] + [aux.M2])
            gram = kron_grams([delta_gram()] * q + [identity_gram(size)])
        else:
            right = kron_all([qq.Mj for qq in quats[:-1]] + [eye2, aux.M2])
            gram = kron_grams([delta_gram()] * (q - 1) + [identity_gram(2), identity_gram(size)])
        B = left + right

    return StableTupleCandidate(
        epsilon=p.epsilon,
        gram=gram,
        elements=[A] + [B] * (p.g - 1),
        case=case,
        params=p,
        quaternion_factors=q,
        matrix_size=size,
    )


@dataclass(frozen=True)
class SkewCheck:
    passed: bool
    index: int | None = None  # 1-based index of the first failing element

    def __bool__(self):
        return self.passed


def verify_skew(t: StableTupleCandidate) -> SkewCheck:
    for k, m in enumerate(t.elements, start=1):
        if apply_involution(t.gram, m) != -m:
            return SkewCheck(False, k)
    return SkewCheck(True)


def expected_kind(group: Group) -> InvolutionKind:
    return InvolutionKind.SYMPLECTIC if Group.parse(group) is Group.SP else InvolutionKind.ORTHOGONAL
