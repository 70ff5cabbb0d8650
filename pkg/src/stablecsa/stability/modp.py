"""Dense linear algebra over GF(p) on int64 numpy arrays (p < 2**31)."""

from __future__ import annotations

import numpy as np

from ..algebra import SqMatrix
from ..field.specialize import SpecializationMap, specialize


def reduce_matrix(m: SqMatrix, smap: SpecializationMap) -> np.ndarray:
    """Entrywise specialization; raises DenominatorVanishes."""
    n = m.dim
    out = np.zeros((n, n), dtype=np.int64)
    for i, row in enumerate(m.rows):
        for j, e in enumerate(row):
            if e:
                out[i, j] = specialize(e, smap)
    return out


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # entries < p, inner dimension small enough that int64 sums cannot overflow
    return (a @ b) % p


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of ``{v : a v = 0}``."""
    n = a.shape[1]
    r, piv = rref(a, p)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, pc in enumerate(piv):
            out[k, pc] = (-r[i, f]) % p
    return out


def inverse(a: np.ndarray, p: int) -> np.ndarray | None:
    n = a.shape[0]
    r, piv = rref(np.hstack([a % p, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)) or len(piv) < n:
        return None
    return r[:n, n:]


def charpoly(a: np.ndarray, p: int) -> list[int]:
    """Coefficients (constant first) of det(X I - a), Faddeev-LeVerrier mod p (n < p)."""
    n = a.shape[0]
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = np.zeros_like(a)
    eye = np.eye(n, dtype=np.int64)
    for k in range(1, n + 1):
        mk = (matmul(a, mk, p) + coeffs[n - k + 1] * eye) % p
        tr = int(np.trace(matmul(a, mk, p))) % p
        coeffs[n - k] = (-tr * pow(k, -1, p)) % p
    return coeffs


def poly_roots(coeffs: list[int], p: int) -> list[int]:
    """All roots in GF(p), by evaluating at every residue."""
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * xs + c) % p
    return [int(r) for r in np.nonzero(acc == 0)[0]]


class EchelonSpace:
    """Incrementally grown subspace of GF(p)^n kept in reduced row echelon form."""

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = p
        self.rows = np.zeros((0, n), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        if self.pivots:
            v = (v - v[self.pivots] @ self.rows) % self.p
        return v

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def add(self, v) -> bool:
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = v * pow(int(v[c]), -1, self.p) % self.p
        if self.pivots:
            col = self.rows[:, c].copy()
            self.rows = (self.rows - np.outer(col, v)) % self.p
        self.rows = np.vstack([self.rows, v])
        self.pivots.append(c)
        return True


def spin(gens: list[np.ndarray], seeds, p: int) -> np.ndarray:
    """Basis (rows) of the smallest subspace containing the seeds and stable under gens."""
    seeds = list(seeds)
    n = gens[0].shape[0] if gens else len(seeds[0])
    space = EchelonSpace(n, p)
    queue = []
    for s in seeds:
        if space.add(s):
            queue.append(np.asarray(s, dtype=np.int64) % p)
    while queue:
        v = queue.pop()
        for g in gens:
            w = g @ v % p
            if space.add(w):
                queue.append(w)
    return space.rows


def algebra_basis(gens: list[np.ndarray], p: int) -> list[np.ndarray]:
    """Basis of the unital algebra generated by ``gens``, by spinning the identity."""
    n = gens[0].shape[0]
    space = EchelonSpace(n * n, p)
    basis = []
    eye = np.eye(n, dtype=np.int64)
    space.add(eye.ravel())
    basis.append(eye)
    queue = [eye]
    while queue:
        m = queue.pop()
        for g in gens:
            w = matmul(g, m, p)
            if space.add(w.ravel()):
                basis.append(w)
                queue.append(w)
    return basis


def is_invariant(basis: np.ndarray, gens: list[np.ndarray], p: int) -> bool:
    n = basis.shape[1]
    space = EchelonSpace(n, p)
    for row in basis:
        space.add(row)
    return all(space.contains(g @ row % p) for g in gens for row in basis)


def is_totally_isotropic(basis: np.ndarray, gram: np.ndarray, p: int) -> bool:
    return not (matmul(matmul(basis, gram, p), basis.T, p)).any()
