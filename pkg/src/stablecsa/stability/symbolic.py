"""Eigenspaces of A, the pairing forms on them, and their anisotropy certificates."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra import GramMatrix, SqMatrix, bilinear
from ..constructions import Case, StableTupleCandidate
from ..field.gaussian import Gaussian
from ..field.poly import var_key
from ..field.ratfunc import RatFunc
from ..field.tower import TowerElement, mask_indices, x_name
from ..pfister import (
    DuplicateClass,
    MonomialDiagonalForm,
    class_str as monomial_class_str,
    find_duplicate,
    monomial_form_anisotropy,
    verify_monomial_certificate,
)


class NotDiagonalizable(ValueError):
    pass


class CrossTermsPresent(ValueError):
    pass


class DependentBasis(ValueError):
    pass


class NotMonomial(ValueError):
    pass


@dataclass
class EigenSpace:
    eigenvalue: TowerElement
    indices: list  # positions in the Kronecker basis
    labels: list  # (i_1, ..., i_q, m) per index, 1-based digits

    @property
    def dim(self) -> int:
        return len(self.indices)


@dataclass
class EigenSystem:
    spaces: list

    @property
    def eigenvalues(self) -> list[TowerElement]:
        return [e.eigenvalue for e in self.spaces]

    def space(self, ev) -> EigenSpace:
        ev = TowerElement.coerce(ev)
        for e in self.spaces:
            if e.eigenvalue == ev:
                return e
        raise KeyError(f"{ev} is not an eigenvalue")


def kron_label(index: int, q: int, size: int) -> tuple:
    """Digits (i_1, ..., i_q, m) of a Kronecker basis position, all 1-based."""
    m = index % size + 1
    rest = index // size
    digits = []
    for _ in range(q):
        digits.append(rest % 2 + 1)
        rest //= 2
    return tuple(reversed(digits)) + (m,)


def eigen_system(t: StableTupleCandidate) -> EigenSystem:
    A = t.A
    if not A.is_diagonal():
        raise NotDiagonalizable("A is not diagonal in the Kronecker basis")
    groups: dict = {}
    order = []
    for k, d in enumerate(A.diagonal()):
        if d not in groups:
            groups[d] = []
            order.append(d)
        groups[d].append(k)
    q, size = t.quaternion_factors, t.matrix_size
    if (1 << q) * size != t.epsilon:
        q, size = 0, t.epsilon
    spaces = [EigenSpace(ev, groups[ev], [kron_label(k, q, size) for k in groups[ev]])
              for ev in order]
    # +m before -m, then by m
    spaces.sort(key=lambda e: (e.labels[0][-1], e.labels[0][:-1]))
    return EigenSystem(spaces)


def _unit(n: int, k: int) -> list:
    v = [TowerElement()] * n
    v[k] = TowerElement.const(1)
    return v


@dataclass
class DiagonalQuadraticForm:
    coefficients: list
    labels: list = field(default_factory=list)
    pairing: str = ""
    eigenvalue: TowerElement | None = None

    def __post_init__(self):
        self.coefficients = [TowerElement.coerce(c) for c in self.coefficients]
        if not self.labels:
            self.labels = list(range(len(self.coefficients)))

    def value(self, lams) -> TowerElement:
        acc = TowerElement()
        for c, l in zip(self.coefficients, lams):
            acc = acc + c * TowerElement.coerce(l) * TowerElement.coerce(l)
        return acc


def pairing_kind(t: StableTupleCandidate) -> str:
    return "Q(v,Bv)" if t.gram.kind.value == "Skew" else "Q(Bv,Bv)"


def pairing_matrix(t: StableTupleCandidate, space: EigenSpace, pairing: str | None = None):
    """Matrix P with q(sum lam_a e_a) = sum_{a,b} lam_a lam_b P[a][b]."""
    pairing = pairing or pairing_kind(t)
    n = t.epsilon
    B = t.B
    vecs = [_unit(n, k) for k in space.indices]
    bvecs = [B.apply(v) for v in vecs]
    if pairing == "Q(v,Bv)":
        left, right = vecs, bvecs
    elif pairing == "Q(Bv,Bv)":
        left, right = bvecs, bvecs
    else:
        raise ValueError(f"unknown pairing {pairing!r}")
    return [[bilinear(t.gram, u, w) for w in right] for u in left]


def pairing_quadratic_form(t: StableTupleCandidate, ev) -> DiagonalQuadraticForm:
    space = eigen_system(t).space(ev)
    pairing = pairing_kind(t)
    P = pairing_matrix(t, space, pairing)
    d = space.dim
    for a in range(d):
        for b in range(a + 1, d):
            if P[a][b] + P[b][a]:
                raise CrossTermsPresent(
                    f"cross term lam_{a}*lam_{b} = {P[a][b] + P[b][a]} at eigenvalue {space.eigenvalue}")
    return DiagonalQuadraticForm([P[a][a] for a in range(d)], space.labels, pairing,
                                 space.eigenvalue)


def generic_pairing(t: StableTupleCandidate, ev) -> tuple[TowerElement, list[str]]:
    """The pairing on v = sum lam_k e_k with fresh symbols lam_k, computed directly."""
    space = eigen_system(t).space(ev)
    names = [f"lam{k}" for k in range(space.dim)]
    v = [TowerElement()] * t.epsilon
    for name, k in zip(names, space.indices):
        v[k] = TowerElement.var(name)
    bv = t.B.apply(v)
    if pairing_kind(t) == "Q(v,Bv)":
        return bilinear(t.gram, v, bv), names
    return bilinear(t.gram, bv, bv), names


# -- square classes in K ----------------------------------------------------

def square_class(c: TowerElement, alpha: int | None = None) -> tuple[Gaussian, frozenset]:
    """(constant, class) for c = const * sqrt(x_S) * Laurent monomial.

    K is rational in sqrt(x_l) and y_l, so x_l is a square for l <= alpha and
    the class records sqrt(x_l) for l in S and every other variable with an
    odd exponent.
    """
    if not c.is_monomial():
        raise NotMonomial(f"{c} is not a monomial of K")
    (mask, coeff), = c.coeffs.items()
    const, exps = coeff.laurent_monomial()
    alpha = c.alpha if alpha is None else alpha
    roots = set(mask_indices(mask))
    cls = {f"sqrt({x_name(l)})" for l in roots}
    for v, e in exps.items():
        if e % 2 == 0:
            continue
        if v.startswith("x") and v[1:].isdigit() and int(v[1:]) <= alpha:
            continue
        cls.add(v)
    return const, frozenset(cls)


def class_str(cls) -> str:
    return "*".join(sorted(cls, key=_class_key)) or "1"


def _class_key(name: str):
    if name.startswith("sqrt("):
        return (0, var_key(name[5:-1]))
    return (1, var_key(name))


def normalize_classes(classes: list) -> list:
    """Divide by the first coefficient: symmetric difference with its class."""
    if not classes:
        return []
    base = classes[0]
    return [frozenset(c ^ base) for c in classes]


@dataclass
class AnisotropyFailure:
    reason: str
    pair: tuple | None = None


def certify_anisotropic(form: DiagonalQuadraticForm, alpha: int | None = None):
    """Certificate dict on success, AnisotropyFailure otherwise (never a verdict of isotropy)."""
    consts, classes = [], []
    for k, c in enumerate(form.coefficients):
        if c.is_zero():
            return AnisotropyFailure(f"coefficient {k} vanishes")
        try:
            const, cls = square_class(c, alpha)
        except NotMonomial as exc:
            return AnisotropyFailure(f"coefficient {k}: {exc}")
        consts.append(const)
        classes.append(cls)
    normal = normalize_classes(classes)
    dup = find_duplicate(normal)
    if dup is not None:
        return AnisotropyFailure(
            f"coefficients {dup[0]} and {dup[1]} share the square class {class_str(classes[dup[0]])}",
            dup)
    try:
        tree = monomial_form_anisotropy(MonomialDiagonalForm(normal, consts))
    except DuplicateClass as exc:  # pragma: no cover - caught above
        return AnisotropyFailure(str(exc), exc.pair)
    return {
        "coefficients": [str(c) for c in form.coefficients],
        "classes": [class_str(c) for c in classes],
        "normalized": [class_str(c) for c in normal],
        "tree": tree["tree"],
    }


def verify_anisotropy_certificate(cert: dict, coefficients: list, alpha: int | None = None) -> bool:
    """Recompute the classes of ``coefficients`` and re-check the split tree."""
    try:
        classes = [square_class(TowerElement.coerce(c), alpha)[1] for c in coefficients]
    except NotMonomial:
        return False
    if [class_str(c) for c in classes] != cert.get("classes"):
        return False
    normal = normalize_classes(classes)
    if [class_str(c) for c in normal] != cert.get("normalized"):
        return False
    return bool(verify_monomial_certificate(
        {"classes": [monomial_class_str(c) for c in normal], "tree": cert.get("tree")}))


# -- isotropic subspaces ------------------------------------------------------

def _rank_exact(vectors: list) -> int:
    rows = [[TowerElement.coerce(e) for e in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col] * inv
                rows[r] = [a - f * b if b else a for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def is_isotropic_subspace(gram: GramMatrix | SqMatrix, basis: list) -> bool:
    if not basis:
        raise DependentBasis("empty basis")
    if _rank_exact(basis) < len(basis):
        raise DependentBasis("basis vectors are linearly dependent")
    return all(bilinear(gram, u, w).is_zero() for u in basis for w in basis)


# -- certificate over all eigenvalues ----------------------------------------

@dataclass
class SymbolicResult:
    verdict: str  # "Stable" | "Inconclusive"
    entries: list
    failures: list

    def to_json(self) -> dict:
        return {"mode": "Symbolic", "verdict": self.verdict, "eigenvalues": self.entries,
                "failures": self.failures}


def symbolic_certificate(t: StableTupleCandidate) -> SymbolicResult:
    entries, failures = [], []
    alpha = t.quaternion_factors if t.case is not Case.CUSTOM else None
    for space in eigen_system(t).spaces:
        try:
            form = pairing_quadratic_form(t, space.eigenvalue)
        except CrossTermsPresent as exc:
            failures.append({"eigenvalue": str(space.eigenvalue), "reason": str(exc)})
            continue
        cert = certify_anisotropic(form, alpha)
        if isinstance(cert, AnisotropyFailure):
            failures.append({"eigenvalue": str(space.eigenvalue), "reason": cert.reason})
            continue
        cert["eigenvalue"] = space.eigenvalue.to_json()
        cert["eigenvalue_text"] = str(space.eigenvalue)
        cert["pairing"] = form.pairing
        cert["labels"] = [list(l) for l in form.labels]
        cert["coefficients_json"] = [c.to_json() for c in form.coefficients]
        entries.append(cert)
    verdict = "Stable" if not failures else "Inconclusive"
    return SymbolicResult(verdict, entries, failures)


def verify_symbolic(t: StableTupleCandidate, data: dict) -> tuple[bool, str]:
    """Recompute every pairing form of ``t`` and re-check the recorded certificates."""
    alpha = t.quaternion_factors if t.case is not Case.CUSTOM else None
    entries = data.get("eigenvalues")
    if not isinstance(entries, list):
        return False, "malformed symbolic certificate"
    if data.get("verdict") == "Stable" and data.get("failures"):
        return False, "Stable verdict with recorded failures"
    system = eigen_system(t)
    if data.get("verdict") == "Stable" and len(entries) != len(system.spaces):
        return False, "not every eigenvalue is certified"
    for k, entry in enumerate(entries):
        try:
            ev = TowerElement.from_json(entry["eigenvalue"])
            form = pairing_quadratic_form(t, ev)
        except (KeyError, TypeError, ValueError) as exc:
            return False, f"eigenvalue entry {k}: {exc}"
        if [str(c) for c in form.coefficients] != entry.get("coefficients"):
            return False, f"eigenvalue entry {k}: pairing coefficients differ"
        if not verify_anisotropy_certificate(entry, form.coefficients, alpha):
            return False, f"eigenvalue entry {k}: square classes or split tree rejected"
    return True, ""


def y_exponents(t: StableTupleCandidate, label: tuple) -> list[int]:
    """b_k = 1 where B's j-factor moves e_{i_k} with a factor y_k (i_k = 1).

    Only factors carrying a j_k in B count; the last factor of the even
    cases carries the identity instead.
    """
    q = t.quaternion_factors
    moved = q if q % 2 else q - 1
    return [1 if (k < moved and label[k] == 1) else 0 for k in range(q)]


def expected_so_coefficient(t: StableTupleCandidate, space: EigenSpace, label: tuple) -> TowerElement:
    """2(1-s) * y^b * (eigenvalue) for the m = 1 eigenvalues of the orthogonal cases."""
    s = t.matrix_size
    y = TowerElement.const(1)
    for k, b in enumerate(y_exponents(t, label), start=1):
        if b:
            y = y * TowerElement.y(k)
    return space.eigenvalue * y * (2 * (1 - s))


__all__ = [
    "AnisotropyFailure",
    "CrossTermsPresent",
    "DependentBasis",
    "DiagonalQuadraticForm",
    "EigenSpace",
    "EigenSystem",
    "NotDiagonalizable",
    "NotMonomial",
    "SymbolicResult",
    "certify_anisotropic",
    "eigen_system",
    "expected_so_coefficient",
    "generic_pairing",
    "is_isotropic_subspace",
    "pairing_matrix",
    "pairing_quadratic_form",
    "square_class",
    "symbolic_certificate",
    "verify_symbolic",
    "y_exponents",
]
