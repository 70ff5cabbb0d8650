"""Pfister forms, replayable anisotropy descents, and diagonal monomial forms.

Two kinds of certificate live here.

*Descent chains* show that a concrete vector ``(f_I)`` is not an isotropic
vector of the Pfister form <<t_1, ..., t_n>>.  Each step divides out the
common factor, then passes to ``t_k = 0``: either the low half (indices
without ``k``) survives, or it is divisible by ``t_k`` and the high half
survives.  Either way a zero of the level-``k`` form would give a nonzero
zero of the level-``k-1`` form, and at level 0 the form is ``f^2``.

*Split trees* show that a diagonal form whose coefficients are nonzero
constants times pairwise distinct squarefree monomials is anisotropic over
the rational function field.  The same descent, run on the last variable,
splits the coefficients into two halves with distinct classes, and a leaf
holding at most one class is trivially anisotropic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .field.expr import parse_expr
from .field.gaussian import Gaussian
from .field.poly import MultiPoly, gcd_all, var_key
from .field.ratfunc import RatFunc
from .field.tower import mask_indices


class CertificateFailure(ValueError):
    def __init__(self, message: str, step: int | None = None):
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


class DuplicateClass(ValueError):
    def __init__(self, first: int, second: int, cls):
        names = "*".join(sorted(cls, key=var_key)) or "1"
        super().__init__(f"coefficients {first} and {second} share the square class {names}")
        self.pair = (first, second)
        self.square_class = frozenset(cls)


# -- Pfister forms ------------------------------------------------------

@dataclass(frozen=True)
class PfisterForm:
    n: int
    variables: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Pfister arity must be non-negative")
        if not self.variables:
            object.__setattr__(self, "variables", tuple(f"t{k}" for k in range(1, self.n + 1)))
        if len(self.variables) != self.n:
            raise ValueError("need exactly n variable names")

    @property
    def size(self) -> int:
        return 1 << self.n

    def coefficient(self, mask: int) -> MultiPoly:
        """t_I for the index set I encoded by ``mask``; t_{} = 1."""
        mono = tuple((self.variables[l - 1], 1) for l in mask_indices(mask))
        return MultiPoly.monomial(tuple(sorted(mono, key=lambda m: var_key(m[0]))))

    def coefficients(self) -> list[MultiPoly]:
        return [self.coefficient(m) for m in range(self.size)]


@dataclass
class IsotropyCandidate:
    """Vector ``(f_I)`` indexed by bitmask ``I``."""

    values: list

    def __post_init__(self):
        vals = []
        for v in self.values:
            if isinstance(v, str):
                v = parse_expr(v)
            if isinstance(v, RatFunc):
                if not v.is_polynomial():
                    raise ValueError("candidate entries must be polynomials; use from_ratfuncs")
                v = v.num
            vals.append(MultiPoly.coerce(v))
        n = len(vals)
        if n == 0 or n & (n - 1):
            raise ValueError(f"candidate length {n} is not a power of two")
        self.values = vals

    @property
    def n(self) -> int:
        return len(self.values).bit_length() - 1

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    @classmethod
    def from_ratfuncs(cls, values) -> IsotropyCandidate:
        """Clear denominators (a common multiple, so isotropy is unchanged)."""
        rats = [parse_expr(v) if isinstance(v, str) else RatFunc.coerce(v) for v in values]
        den = MultiPoly.const(1)
        for r in rats:
            g = gcd_all([den, r.den])
            den = den * r.den.exquo(g)
        return cls([(r * RatFunc(den)).num for r in rats])


def evaluate(form: PfisterForm, cand: IsotropyCandidate) -> MultiPoly:
    if cand.n != form.n:
        raise ValueError(f"candidate has {cand.n} variables, form has {form.n}")
    total = MultiPoly()
    for mask, f in enumerate(cand.values):
        if not f.is_zero():
            total = total + form.coefficient(mask) * f * f
    return total


def _strip(values: list[MultiPoly]) -> tuple[MultiPoly, list[MultiPoly]]:
    nz = [v for v in values if not v.is_zero()]
    g = gcd_all(nz)
    if g.is_one():
        return g, list(values)
    return g, [v.exquo(g) for v in values]


def _descent_step(level: int, var: str, values: list[MultiPoly]):
    half = 1 << (level - 1)
    low = [values[m].set_zero(var) for m in range(half)]
    if any(not v.is_zero() for v in low):
        return "low", low
    return "high", [values[m + half].set_zero(var) for m in range(half)]


def descent_certificate(form: PfisterForm, cand: IsotropyCandidate) -> dict:
    """Certificate that ``evaluate(form, cand) != 0``."""
    if cand.n != form.n:
        raise ValueError(f"candidate has {cand.n} variables, form has {form.n}")
    if cand.is_zero():
        raise CertificateFailure("candidate is the zero vector")
    values = list(cand.values)
    steps = []
    for level in range(form.n, 0, -1):
        g, values = _strip(values)
        branch, reduced = _descent_step(level, form.variables[level - 1], values)
        if all(v.is_zero() for v in reduced):
            # impossible once the common factor is removed
            raise CertificateFailure("both halves vanish after reduction", len(steps))
        steps.append({"level": level, "variable": form.variables[level - 1],
                      "common_factor": str(g), "branch": branch,
                      "reduced": [str(v) for v in reduced]})
        values = reduced
    return {
        "kind": "pfister-descent",
        "n": form.n,
        "variables": list(form.variables),
        "candidate": [str(v) for v in cand.values],
        "steps": steps,
        "final": str(values[0]),
    }


@dataclass
class VerifyResult:
    ok: bool
    step: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_descent(cert: dict) -> VerifyResult:
    """Re-execute every step of a descent chain."""
    try:
        n = int(cert["n"])
        names = list(cert["variables"])
        values = [parse_expr(s).num for s in cert["candidate"]]
        steps = cert["steps"]
    except (KeyError, TypeError, ValueError) as exc:
        return VerifyResult(False, None, f"malformed certificate: {exc}")
    if len(values) != 1 << n or len(steps) != n or len(names) != n:
        return VerifyResult(False, None, "malformed certificate: wrong sizes")
    if all(v.is_zero() for v in values):
        return VerifyResult(False, None, "candidate is zero")
    for idx, step in enumerate(steps):
        level = n - idx
        try:
            g = parse_expr(step["common_factor"])
            recorded = [parse_expr(s) for s in step["reduced"]]
        except (KeyError, TypeError, ValueError) as exc:
            return VerifyResult(False, idx, f"malformed step: {exc}")
        if int(step.get("level", -1)) != level or step.get("variable") != names[level - 1]:
            return VerifyResult(False, idx, "level or variable out of order")
        if not g.is_polynomial() or g.is_zero():
            return VerifyResult(False, idx, "common factor is not a nonzero polynomial")
        g = g.num
        try:
            values = [v.exquo(g) for v in values]
        except ArithmeticError:
            return VerifyResult(False, idx, "common factor does not divide every entry")
        # the branch rule must be applied as stated, not merely claimed
        branch, reduced = _descent_step(level, names[level - 1], values)
        if branch != step.get("branch"):
            return VerifyResult(False, idx, f"branch should be {branch}")
        if [RatFunc(r) for r in reduced] != recorded:
            return VerifyResult(False, idx, "reduced vector does not match")
        if all(v.is_zero() for v in reduced):
            return VerifyResult(False, idx, "reduced vector vanishes")
        values = reduced
    if values[0].is_zero() or str(values[0]) != cert.get("final"):
        return VerifyResult(False, len(steps), "final entry mismatch")
    return VerifyResult(True)


# -- diagonal forms with monomial coefficients ------------------------------

@dataclass
class MonomialDiagonalForm:
    """sum_k c_k * m_k * X_k^2 with constants c_k != 0 and squarefree monomials m_k."""

    classes: list
    constants: list = field(default_factory=list)

    def __post_init__(self):
        self.classes = [frozenset(c) for c in self.classes]
        if not self.constants:
            self.constants = [Gaussian(1)] * len(self.classes)
        self.constants = [Gaussian.coerce(c) for c in self.constants]
        if len(self.constants) != len(self.classes):
            raise ValueError("one constant per coefficient")
        if any(c.is_zero() for c in self.constants):
            raise ValueError("diagonal coefficients must be nonzero")

    @classmethod
    def from_monomials(cls, coeffs) -> MonomialDiagonalForm:
        """From RatFunc/str coefficients that are constant times a Laurent monomial.

        Even exponents are squares and drop out of the class.
        """
        classes, consts = [], []
        for c in coeffs:
            r = parse_expr(c) if isinstance(c, str) else RatFunc.coerce(c)
            if r.is_zero() or not r.is_monomial():
                raise ValueError(f"{r} is not a nonzero monomial")
            const, exps = r.laurent_monomial()
            classes.append(frozenset(v for v, e in exps.items() if e % 2))
            consts.append(const)
        return cls(classes, consts)

    def variables(self) -> list[str]:
        return sorted(set().union(*self.classes) if self.classes else set(), key=var_key)


def find_duplicate(classes) -> tuple[int, int] | None:
    seen: dict = {}
    for k, c in enumerate(classes):
        c = frozenset(c)
        if c in seen:
            return seen[c], k
        seen[c] = k
    return None


def _split_tree(classes: list[frozenset]) -> dict:
    if len(classes) <= 1:
        return {"leaf": [class_str(c) for c in classes]}
    names = sorted(set().union(*classes), key=var_key)
    var = names[-1]
    low = [c for c in classes if var not in c]
    high = [c - {var} for c in classes if var in c]
    return {"split": var, "low": _split_tree(low), "high": _split_tree(high)}


def class_str(c) -> str:
    return "*".join(sorted(c, key=var_key)) or "1"


def _class_parse(s: str) -> frozenset:
    return frozenset() if s == "1" else frozenset(s.split("*"))


def monomial_form_anisotropy(form: MonomialDiagonalForm) -> dict:
    dup = find_duplicate(form.classes)
    if dup is not None:
        raise DuplicateClass(dup[0], dup[1], form.classes[dup[0]])
    return {
        "kind": "monomial-split",
        "classes": [class_str(c) for c in form.classes],
        "tree": _split_tree(form.classes),
    }


def _check_tree(node, classes: list[frozenset], path: str) -> VerifyResult:
    if not isinstance(node, dict):
        return VerifyResult(False, None, f"malformed node at {path or 'root'}")
    if "leaf" in node:
        if len(classes) > 1:
            return VerifyResult(False, None, f"leaf at {path or 'root'} holds {len(classes)} classes")
        if [class_str(c) for c in classes] != node["leaf"]:
            return VerifyResult(False, None, f"leaf at {path or 'root'} does not match")
        return VerifyResult(True)
    var = node.get("split")
    if not isinstance(var, str) or "low" not in node or "high" not in node:
        return VerifyResult(False, None, f"malformed node at {path or 'root'}")
    if any(var in c for c in classes) is False and classes:
        return VerifyResult(False, None, f"split variable {var} unused at {path or 'root'}")
    low = [c for c in classes if var not in c]
    high = [c - {var} for c in classes if var in c]
    r = _check_tree(node["low"], low, path + "L")
    if not r:
        return r
    return _check_tree(node["high"], high, path + "H")


def verify_monomial_certificate(cert: dict) -> VerifyResult:
    try:
        classes = [_class_parse(s) for s in cert["classes"]]
        tree = cert["tree"]
    except (KeyError, TypeError, AttributeError) as exc:
        return VerifyResult(False, None, f"malformed certificate: {exc}")
    return _check_tree(tree, classes, "")


# -- quaternion norm form -----------------------------------------------------

def quaternion_norm_coefficients(l: int) -> list[RatFunc]:
    """<1, -x_l, -y_l, x_l y_l>, the reduced norm of (x_l, y_l) on 1, i, j, k."""
    x = RatFunc.var(f"x{l}")
    y = RatFunc.var(f"y{l}")
    return [RatFunc(1), -x, -y, x * y]


def quaternion_division_certificate(l: int = 1) -> dict:
    """The norm form of (x_l, y_l) is anisotropic over F, so the algebra is division.

    Since -1 = i^2 is a square, <1,-x,-y,xy> is isometric to <<x,y>>.
    """
    form = MonomialDiagonalForm.from_monomials(quaternion_norm_coefficients(l))
    cert = monomial_form_anisotropy(form)
    cert["norm_form"] = [str(c) for c in quaternion_norm_coefficients(l)]
    return cert
