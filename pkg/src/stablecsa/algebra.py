"""Square matrices over K, Gram-matrix involutions and split quaternions."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce

from .field.tower import TowerElement, tower

_ZERO = TowerElement()
_ONE = TowerElement.const(1)


class DimensionMismatch(ValueError):
    pass


class SingularMatrix(ZeroDivisionError):
    pass


class FormKind(str, enum.Enum):
    SYMMETRIC = "Symmetric"
    SKEW = "Skew"


class InvolutionKind(str, enum.Enum):
    ORTHOGONAL = "Orthogonal"
    SYMPLECTIC = "Symplectic"


class SqMatrix:
    """Dense immutable square matrix with TowerElement entries."""

    __slots__ = ("rows", "dim", "_hash")

    def __init__(self, rows):
        rows = tuple(tuple(tower(e) for e in row) for row in rows)
        n = len(rows)
        if n == 0:
            raise ValueError("matrix dimension must be positive")
        if any(len(r) != n for r in rows):
            raise ValueError("matrix is not square")
        self.rows = rows
        self.dim = n
        self._hash = None

    @classmethod
    def _raw(cls, rows) -> SqMatrix:
        m = object.__new__(cls)
        m.rows = rows
        m.dim = len(rows)
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int) -> SqMatrix:
        return cls.diag([_ONE] * n)

    @classmethod
    def zeros(cls, n: int) -> SqMatrix:
        return cls._raw(tuple((_ZERO,) * n for _ in range(n)))

    @classmethod
    def diag(cls, entries) -> SqMatrix:
        entries = [tower(e) for e in entries]
        n = len(entries)
        return cls._raw(tuple(tuple(entries[i] if i == j else _ZERO for j in range(n))
                              for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, SqMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def is_diagonal(self) -> bool:
        return all(e.is_zero() for i, row in enumerate(self.rows)
                   for j, e in enumerate(row) if i != j)

    def diagonal(self) -> list[TowerElement]:
        return [self.rows[i][i] for i in range(self.dim)]

    def _check(self, other: SqMatrix):
        if self.dim != other.dim:
            raise DimensionMismatch(f"dimensions {self.dim} and {other.dim} differ")

    def __add__(self, other):
        self._check(other)
        return SqMatrix._raw(tuple(tuple(a + b for a, b in zip(ra, rb))
                                   for ra, rb in zip(self.rows, other.rows)))

    def __sub__(self, other):
        self._check(other)
        return SqMatrix._raw(tuple(tuple(a - b for a, b in zip(ra, rb))
                                   for ra, rb in zip(self.rows, other.rows)))

    def __neg__(self):
        return SqMatrix._raw(tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, c) -> SqMatrix:
        c = tower(c)
        return SqMatrix._raw(tuple(tuple(a * c if a else a for a in r) for r in self.rows))

    def __mul__(self, other):
        if isinstance(other, SqMatrix):
            return self.matmul(other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        return self.scale(other)

    def matmul(self, other: SqMatrix) -> SqMatrix:
        self._check(other)
        n = self.dim
        b_rows = [[(j, e) for j, e in enumerate(row) if e] for row in other.rows]
        out = []
        for row in self.rows:
            acc: dict = {}
            for k, a in enumerate(row):
                if not a:
                    continue
                for j, b in b_rows[k]:
                    t = a * b
                    s = acc.get(j)
                    acc[j] = t if s is None else s + t
            out.append(tuple(acc.get(j, _ZERO) for j in range(n)))
        return SqMatrix._raw(tuple(out))

    def apply(self, vec) -> tuple:
        """Matrix times column vector."""
        if len(vec) != self.dim:
            raise DimensionMismatch("vector length does not match matrix dimension")
        vec = [tower(v) for v in vec]
        out = []
        for row in self.rows:
            acc = _ZERO
            for a, v in zip(row, vec):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return tuple(out)

    def transpose(self) -> SqMatrix:
        return SqMatrix._raw(tuple(zip(*self.rows)))

    @property
    def T(self) -> SqMatrix:
        return self.transpose()

    def inverse(self) -> SqMatrix:
        """Gauss-Jordan inverse over K."""
        n = self.dim
        a = [list(r) for r in self.rows]
        inv = [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                raise SingularMatrix("matrix is singular")
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            p_inv = a[col][col].inverse()
            a[col] = [e * p_inv if e else e for e in a[col]]
            inv[col] = [e * p_inv if e else e for e in inv[col]]
            for r in range(n):
                f = a[r][col]
                if r == col or not f:
                    continue
                a[r] = [e - f * c if c else e for e, c in zip(a[r], a[col])]
                inv[r] = [e - f * c if c else e for e, c in zip(inv[r], inv[col])]
        return SqMatrix._raw(tuple(tuple(r) for r in inv))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = SqMatrix.identity(self.dim)
        base = self
        while n:
            if n & 1:
                result = result.matmul(base)
            base = base.matmul(base)
            n >>= 1
        return result

    def __str__(self):
        return "[" + ",\n ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows) + "]"

    def __repr__(self):
        return f"SqMatrix({self.dim}x{self.dim})"

    def to_json(self) -> list:
        return [[e.to_json() for e in r] for r in self.rows]

    @classmethod
    def from_json(cls, data) -> SqMatrix:
        return cls([[TowerElement.from_json(e) for e in r] for r in data])


def kron(a: SqMatrix, b: SqMatrix) -> SqMatrix:
    """Kronecker product; row index ``i*dim(b) + k``."""
    nb = b.dim
    rows = []
    for ra in a.rows:
        for k in range(nb):
            rb = b.rows[k]
            rows.append(tuple(x * y if (x and y) else _ZERO for x in ra for y in rb))
    return SqMatrix._raw(tuple(rows))


def kron_all(mats) -> SqMatrix:
    return reduce(kron, mats)


def form_kind(m: SqMatrix) -> FormKind | None:
    t = m.transpose()
    if t == m:
        return FormKind.SYMMETRIC
    if t == -m:
        return FormKind.SKEW
    return None


class GramMatrix:
    """Invertible symmetric or skew Gram matrix of a bilinear form."""

    __slots__ = ("matrix", "kind", "_inverse")

    def __init__(self, matrix: SqMatrix, kind: FormKind | str | None = None, inverse=None):
        actual = form_kind(matrix)
        if actual is None:
            raise ValueError("Gram matrix is neither symmetric nor skew-symmetric")
        if kind is not None and FormKind(kind) != actual:
            raise ValueError(f"Gram matrix is {actual.value}, not {FormKind(kind).value}")
        self.matrix = matrix
        self.kind = actual
        if inverse is None:
            inverse = matrix.inverse()
        self._inverse = inverse

    @property
    def dim(self) -> int:
        return self.matrix.dim

    @property
    def inverse(self) -> SqMatrix:
        return self._inverse

    def __eq__(self, other):
        if not isinstance(other, GramMatrix):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"GramMatrix({self.kind.value}, dim={self.dim})"


def kron_gram(a: GramMatrix, b: GramMatrix) -> GramMatrix:
    kind = FormKind.SYMMETRIC if a.kind == b.kind else FormKind.SKEW
    return GramMatrix(kron(a.matrix, b.matrix), kind, kron(a.inverse, b.inverse))


def kron_grams(grams) -> GramMatrix:
    return reduce(kron_gram, grams)


@dataclass(frozen=True)
class InvolutionSpec:
    """The adjoint involution ``m -> gram^-1 m^T gram``."""

    gram: GramMatrix

    def __call__(self, m: SqMatrix) -> SqMatrix:
        return apply_involution(self, m)

    @property
    def kind(self) -> InvolutionKind:
        return classify_involution(self.gram)


def apply_involution(inv: InvolutionSpec | GramMatrix, m: SqMatrix) -> SqMatrix:
    gram = inv.gram if isinstance(inv, InvolutionSpec) else inv
    if m.dim != gram.dim:
        raise DimensionMismatch(f"matrix of dimension {m.dim} vs Gram matrix of dimension {gram.dim}")
    return gram.inverse.matmul(m.transpose()).matmul(gram.matrix)


def classify_involution(gram: GramMatrix) -> InvolutionKind:
    if gram.kind == FormKind.SYMMETRIC:
        return InvolutionKind.ORTHOGONAL
    return InvolutionKind.SYMPLECTIC


def bilinear(gram: GramMatrix | SqMatrix, u, v) -> TowerElement:
    """``u^T G v``."""
    g = gram.matrix if isinstance(gram, GramMatrix) else gram
    if len(u) != g.dim or len(v) != g.dim:
        raise DimensionMismatch("vector length does not match Gram matrix dimension")
    gv = g.apply(v)
    acc = _ZERO
    for a, b in zip(u, gv):
        a = tower(a)
        if a and b:
            acc = acc + a * b
    return acc


# -- Appendix matrices ----------------------------------------------------

def sigma_matrix() -> SqMatrix:
    """Sigma; the canonical involution is Int(Sigma) o t."""
    return SqMatrix([[0, 1], [-1, 0]])


def sigma_gram() -> GramMatrix:
    """Sigma^-1, the Gram matrix of the canonical (symplectic) involution."""
    return GramMatrix(SqMatrix([[0, -1], [1, 0]]), FormKind.SKEW, sigma_matrix())


def tau_matrix(l: int) -> SqMatrix:
    r = TowerElement.sqrt_x(l)
    return SqMatrix.diag([-r, -(TowerElement.y(l) * r)])


def tau_gram(l: int) -> GramMatrix:
    """T^-1 = diag(-1/sqrt(x_l), -1/(y_l sqrt(x_l)))."""
    inv_root = TowerElement.sqrt_x(l).inverse()
    g = SqMatrix.diag([-inv_root, -(inv_root * TowerElement.y(l).inverse())])
    return GramMatrix(g, FormKind.SYMMETRIC, tau_matrix(l))


def delta_matrix() -> SqMatrix:
    return SqMatrix([[0, 1], [1, 0]])


def delta_gram() -> GramMatrix:
    d = delta_matrix()
    return GramMatrix(d, FormKind.SYMMETRIC, d)


def identity_gram(n: int) -> GramMatrix:
    i = SqMatrix.identity(n)
    return GramMatrix(i, FormKind.SYMMETRIC, i)


@dataclass(frozen=True)
class QuaternionGenerators:
    index: int
    Mi: SqMatrix
    Mj: SqMatrix

    @property
    def Mk(self) -> SqMatrix:
        return self.Mi.matmul(self.Mj)

    def element(self, a=0, b=0, c=0, d=0) -> SqMatrix:
        """Image of ``a + b i + c j + d k``."""
        one = SqMatrix.identity(2)
        return (one.scale(a) + self.Mi.scale(b) + self.Mj.scale(c) + self.Mk.scale(d))


def quaternion_split(l: int, alpha: int | None = None) -> QuaternionGenerators:
    """Split images of i_l, j_l in M_2(K)."""
    if l < 1 or (alpha is not None and l > alpha):
        raise ValueError(f"quaternion index {l} outside 1..{alpha}")
    r = TowerElement.sqrt_x(l)
    mi = SqMatrix.diag([r, -r])
    mj = SqMatrix([[0, 1], [TowerElement.y(l), 0]])
    return QuaternionGenerators(l, mi, mj)


# -- characteristic polynomial -----------------------------------------

def charpoly(m: SqMatrix) -> list[TowerElement]:
    """Coefficients ``[c_0, ..., c_n]`` of ``det(X I - m)`` (Berkowitz, division free)."""
    n = m.dim
    a = [list(r) for r in m.rows]
    # vect holds the char poly of the leading r x r block, highest degree first
    vect = [_ONE, -a[0][0]]
    for r in range(1, n):
        # Toeplitz column built from a[r][:r], a[:r][:r], a[:r][r]
        R = a[r][:r]
        C = [a[i][r] for i in range(r)]
        A = [row[:r] for row in a[:r]]
        col = [_ONE, -a[r][r]]
        v = C
        for _ in range(r):
            col.append(-_dot(R, v))
            v = [_dot(row, v) for row in A]
        # multiply the (r+2) x (r+1) lower-triangular Toeplitz matrix by vect
        new = []
        for i in range(r + 2):
            acc = _ZERO
            for j in range(min(i, r) + 1):
                if j < len(vect):
                    t = col[i - j]
                    if t and vect[j]:
                        acc = acc + t * vect[j]
            new.append(acc)
        vect = new
    return list(reversed(vect))


def _dot(u, v) -> TowerElement:
    acc = _ZERO
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def poly_mul(p: list, q: list) -> list:
    out = [_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return out
