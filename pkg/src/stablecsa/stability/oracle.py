"""Finite-field search for invariant totally isotropic subspaces.

A trial specializes the tuple to GF(p) and decides whether some subspace
stable under the generated algebra is totally isotropic.  If no such subspace
exists the trial certifies stability of the generic tuple, because the stable
locus is open.  The converse never holds: a witness at a special point says
nothing about the generic one.

Deciding a trial: if the generated algebra is all of M_n(GF(p)) there is no
proper invariant subspace at all.  Otherwise pick an element M of the algebra
that is diagonalizable over GF(p).  Every invariant subspace W then contains
an eigenvector w of M, and W contains the cyclic module Aw, so it suffices to
ask whether some eigenvector has Aw totally isotropic.  Since the algebra is
closed under the involution, that means w^T G m w = 0 for every m in a basis
of the algebra.  Eigenspaces of dimension at most 2 are searched line by
line, which is exhaustive; larger ones are only sampled.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..algebra import GramMatrix, SqMatrix, bilinear
from ..constructions import Case, StableTupleCandidate
from ..field.gaussian import Gaussian
from ..field.specialize import (
    DEFAULT_PRIME,
    DenominatorVanishes,
    SpecializationMap,
    sample_specialization,
)
from ..field.tower import TowerElement, mask_indices
from . import modp

MAX_RESAMPLES = 64
SAMPLES_LARGE_EIGENSPACE = 512
RANDOM_SEEDS = 4
PIVOT_COMBOS = 6


class ResamplingExhausted(RuntimeError):
    pass


class NotSkew(ValueError):
    pass


# -- reduction ------------------------------------------------------------------

def _variables(t: StableTupleCandidate) -> tuple[int, list[str]]:
    alpha = 0
    extra = set()
    mats = list(t.elements) + [t.gram.matrix, t.gram.inverse]
    for m in mats:
        for row in m.rows:
            for e in row:
                for mask in e.coeffs:
                    if mask:
                        alpha = max(alpha, max(mask_indices(mask)))
                for v in e.variables():
                    if v[:1] in "xy" and v[1:].isdigit():
                        alpha = max(alpha, int(v[1:]))
                    else:
                        extra.add(v)
    return alpha, sorted(extra)


def _distinct(elements) -> list[SqMatrix]:
    out = []
    for m in elements:
        if m not in out:
            out.append(m)
    return out


def reduce_tuple(t: StableTupleCandidate, smap: SpecializationMap):
    gens = [modp.reduce_matrix(m, smap) for m in _distinct(t.elements)]
    gram = modp.reduce_matrix(t.gram.matrix, smap)
    return gens, gram


def _sample(t: StableTupleCandidate, rng: random.Random, p: int):
    alpha, extra = _variables(t)
    for attempt in range(MAX_RESAMPLES):
        smap = sample_specialization(alpha, rng, p, extra)
        try:
            gens, gram = reduce_tuple(t, smap)
        except DenominatorVanishes:
            continue
        if modp.rank(gram, p) < gram.shape[0]:
            continue
        return smap, gens, gram, attempt
    raise ResamplingExhausted(f"no usable specialization in {MAX_RESAMPLES} attempts")


# -- one trial --------------------------------------------------------------

def _pivot(gens, basis, p, rng):
    n = gens[0].shape[0]
    candidates = [(f"lambda{k + 1}", g) for k, g in enumerate(gens)]
    for c in range(PIVOT_COMBOS):
        coeffs = [rng.randrange(p) for _ in basis]
        m = np.zeros((n, n), dtype=np.int64)
        for a, b in zip(coeffs, basis):
            m = (m + a * b) % p
        candidates.append((f"combo{c + 1}", m))
    best = None
    for name, m in candidates:
        roots = modp.poly_roots(modp.charpoly(m, p), p)
        spaces = []
        for r in roots:
            spaces.append((r, modp.nullspace((m - r * np.eye(n, dtype=np.int64)) % p, p)))
        if sum(u.shape[0] for _, u in spaces) != n:
            continue
        width = max(u.shape[0] for _, u in spaces)
        if best is None or width < best[0]:
            best = (width, name, spaces)
        if width <= 1:
            break
    return best


def _common_zero_lines(forms: np.ndarray, p: int):
    """forms: (K, 2, 2). Return a nonzero (a, b) killing every form, or None."""
    a = forms[:, 0, 0] % p
    b = (forms[:, 0, 1] + forms[:, 1, 0]) % p
    c = forms[:, 1, 1] % p
    if not c.any():
        return (0, 1)
    ts = np.arange(p, dtype=np.int64)
    t2 = ts * ts % p
    for k in range(forms.shape[0]):
        ts_vals = (a[k] + b[k] * ts + c[k] * t2) % p
        keep = ts_vals == 0
        ts, t2 = ts[keep], t2[keep]
        if ts.size == 0:
            return None
    return (1, int(ts[0]))


def _kills_all(w, gm, p) -> bool:
    return all(int(w @ (m @ w % p) % p) == 0 for m in gm)


def analyze(gens: list[np.ndarray], gram: np.ndarray, p: int, rng: random.Random) -> dict:
    n = gram.shape[0]
    for k, g in enumerate(gens, start=1):
        if ((g.T @ gram + gram @ g) % p).any():
            raise NotSkew(f"element {k} is not skew for the involution")
    basis = modp.algebra_basis(gens, p)
    rec: dict = {"algebra_dim": len(basis), "pivot": None, "eigenspaces": [], "witness": None}
    if len(basis) == n * n:
        rec["method"] = "full-matrix-algebra"
        rec["outcome"] = "stable"
        return rec

    def record_witness(w, how):
        sub = modp.spin(gens, [w], p)
        assert modp.is_totally_isotropic(sub, gram, p)
        rec["witness"] = {"found_by": how, "vector": [int(x) for x in w],
                          "subspace": [[int(x) for x in row] for row in sub]}
        rec["outcome"] = "witness"

    seeds = [np.eye(n, dtype=np.int64)[j] for j in range(n)]
    seeds += [np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)
              for _ in range(RANDOM_SEEDS)]
    for j, s in enumerate(seeds):
        sub = modp.spin(gens, [s], p)
        if sub.shape[0] < n and modp.is_totally_isotropic(sub, gram, p):
            rec["method"] = "spinning"
            record_witness(s, f"seed{j}")
            return rec

    rec["method"] = "eigenlines"
    best = _pivot(gens, basis, p, rng)
    if best is None:
        rec["outcome"] = "unresolved"
        return rec
    _, name, spaces = best
    rec["pivot"] = name
    gm = np.array([gram @ m % p for m in basis], dtype=np.int64)
    exhaustive = True
    for r, U in spaces:
        d = U.shape[0]
        entry = {"eigenvalue": r, "dim": d, "exhaustive": d <= 2}
        rec["eigenspaces"].append(entry)
        w = None
        if d == 1:
            if _kills_all(U[0], gm, p):
                w = U[0]
        elif d == 2:
            forms = _restrict(U, gm, p)
            line = _common_zero_lines(forms, p)
            if line is not None:
                w = (line[0] * U[0] + line[1] * U[1]) % p
        else:
            exhaustive = False
            for _ in range(SAMPLES_LARGE_EIGENSPACE):
                cand = sum(rng.randrange(p) * U[k] for k in range(d)) % p
                if cand.any() and _kills_all(cand, gm, p):
                    w = cand
                    break
        if w is not None:
            record_witness(w, f"eigenvalue {r}")
            return rec
    rec["outcome"] = "stable" if exhaustive else "unresolved"
    return rec


def _restrict(U: np.ndarray, gm: np.ndarray, p: int) -> np.ndarray:
    left = np.einsum("ia,kab->kib", U, gm) % p
    return np.einsum("kib,jb->kij", left, U) % p


@dataclass
class TrialResult:
    index: int
    specialization: dict
    resamples: int
    record: dict

    @property
    def outcome(self) -> str:
        return self.record["outcome"]

    def to_json(self) -> dict:
        return {"trial": self.index, "specialization": self.specialization,
                "resamples": self.resamples, **self.record}


def _trial_rngs(seed, index: int):
    return random.Random(f"{seed}:{index}:sample"), random.Random(f"{seed}:{index}:search")


def run_trial(t: StableTupleCandidate, index: int, seed, p: int = DEFAULT_PRIME) -> TrialResult:
    sample_rng, search_rng = _trial_rngs(seed, index)
    smap, gens, gram, attempts = _sample(t, sample_rng, p)
    return TrialResult(index, smap.to_json(), attempts, analyze(gens, gram, p, search_rng))


def replay_trial(t: StableTupleCandidate, data: dict, seed) -> tuple[bool, str]:
    """Re-run a recorded trial from its specialization map and compare."""
    try:
        smap = SpecializationMap.from_json(data["specialization"])
        index = int(data["trial"])
    except (KeyError, TypeError, ValueError) as exc:
        return False, f"malformed trial: {exc}"
    try:
        gens, gram = reduce_tuple(t, smap)
    except DenominatorVanishes:
        return False, f"trial {index}: specialization hits a pole"
    sample_rng, search_rng = _trial_rngs(seed, index)
    try:
        drawn, _, _, attempts = _sample(t, sample_rng, smap.p)
    except ResamplingExhausted:
        return False, f"trial {index}: seed yields no usable specialization"
    if drawn != smap or attempts != data.get("resamples"):
        return False, f"trial {index}: specialization does not come from the recorded seed"
    rec = analyze(gens, gram, smap.p, search_rng)
    expected = {"trial": index, "specialization": smap.to_json(),
                "resamples": data.get("resamples"), **rec}
    if expected != data:
        return False, f"trial {index}: recomputation differs"
    w = rec.get("witness")
    if w is not None:
        sub = np.array(w["subspace"], dtype=np.int64)
        if not (modp.is_invariant(sub, gens, smap.p) and modp.is_totally_isotropic(sub, gram, smap.p)):
            return False, f"trial {index}: witness is not an invariant isotropic subspace"
    return True, ""


# -- exact witnesses over K ----------------------------------------------------

class _ExactSpace:
    def __init__(self, n: int):
        self.n = n
        self.rows: list = []
        self.pivots: list = []

    def add(self, v) -> bool:
        v = list(v)
        for piv, row in zip(self.pivots, self.rows):
            f = v[piv]
            if f:
                v = [a - f * b if b else a for a, b in zip(v, row)]
        piv = next((k for k, e in enumerate(v) if e), None)
        if piv is None:
            return False
        inv = v[piv].inverse()
        v = [e * inv if e else e for e in v]
        self.rows.append(v)
        self.pivots.append(piv)
        return True


def exact_spin(elements: list[SqMatrix], seed) -> list:
    n = elements[0].dim
    space = _ExactSpace(n)
    out = []
    queue = []
    if space.add(seed):
        queue.append(seed)
        out.append(seed)
    while queue:
        v = queue.pop()
        for m in elements:
            w = m.apply(v)
            if space.add(w):
                queue.append(w)
                out.append(w)
    return out


def exact_witness_search(t: StableTupleCandidate):
    """Spin e_j, e_a +- e_b, e_a +- i e_b over K; return an isotropic invariant span or None."""
    n = t.epsilon
    gens = _distinct(t.elements)
    zero, one, iu = TowerElement(), TowerElement.const(1), TowerElement.const(Gaussian(0, 1))

    def vec(pairs):
        v = [zero] * n
        for k, c in pairs:
            v[k] = c
        return v

    seeds = [vec([(j, one)]) for j in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            for c in (one, -one, iu, -iu):
                seeds.append(vec([(a, one), (b, c)]))
    for seed in seeds:
        span = exact_spin(gens, seed)
        if len(span) >= n:
            continue
        if all(not bilinear(t.gram, u, w) for u in span for w in span):
            return span
    return None


# -- driver -------------------------------------------------------------------

@dataclass
class StabilityCertificate:
    mode: str
    verdict: str  # Stable | Inconclusive | Unstable-witness
    prime: int | None = None
    seed: object = None
    trials: list = field(default_factory=list)
    witness: list | None = None
    stable_trial: int | None = None

    def to_json(self) -> dict:
        out = {"mode": self.mode, "verdict": self.verdict, "prime": self.prime,
               "seed": self.seed, "stable_trial": self.stable_trial,
               "trials": [tr.to_json() for tr in self.trials]}
        if self.witness is not None:
            out["witness"] = [[e.to_json() for e in v] for v in self.witness]
        return out


def specialized_stability(t: StableTupleCandidate, trials: int = 5, seed=0,
                          p: int = DEFAULT_PRIME, workers: int = 1,
                          exact: bool = False) -> StabilityCertificate:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if exact:
        span = exact_witness_search(t)
        if span is not None:
            return StabilityCertificate("Specialized", "Unstable-witness", p, seed, [], span)
    results: list[TrialResult] = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda k: run_trial(t, k, seed, p), range(trials)))
        cut = next((k for k, r in enumerate(results) if r.outcome == "stable"), None)
        if cut is not None:
            results = results[:cut + 1]
    else:
        for k in range(trials):
            r = run_trial(t, k, seed, p)
            results.append(r)
            if r.outcome == "stable":
                break
    stable = next((r.index for r in results if r.outcome == "stable"), None)
    verdict = "Stable" if stable is not None else "Inconclusive"
    return StabilityCertificate("Specialized", verdict, p, seed, results, None, stable)


def verify_specialized(t: StableTupleCandidate, data: dict) -> tuple[bool, str]:
    verdict = data.get("verdict")
    trials = data.get("trials")
    if not isinstance(trials, list):
        return False, "malformed specialized certificate"
    if verdict == "Unstable-witness":
        try:
            span = [[TowerElement.from_json(e) for e in v] for v in data["witness"]]
        except (KeyError, TypeError, ValueError) as exc:
            return False, f"malformed witness: {exc}"
        gens = _distinct(t.elements)
        if not span or len(span) >= t.epsilon:
            return False, "witness is not a proper subspace"
        if any(bilinear(t.gram, u, w) for u in span for w in span):
            return False, "witness is not totally isotropic"
        space = _ExactSpace(t.epsilon)
        for v in span:
            space.add(v)
        for m in gens:
            for v in span:
                if space.add(m.apply(v)):
                    return False, "witness is not invariant"
        return True, ""
    for k, tr in enumerate(trials):
        ok, why = replay_trial(t, tr, data.get("seed"))
        if not ok:
            return False, why
    outcomes = [tr.get("outcome") for tr in trials]
    if verdict == "Stable":
        if "stable" not in outcomes or data.get("stable_trial") != outcomes.index("stable"):
            return False, "Stable verdict without a stable trial"
    elif verdict == "Inconclusive":
        if "stable" in outcomes:
            return False, "a stable trial was recorded but the verdict is Inconclusive"
    else:
        return False, f"unknown verdict {verdict!r}"
    return True, ""


def planted_block_tuple(g: int = 2) -> StableTupleCandidate:
    """lambda_i = diag(m_i, m_i) on K^2 + K^2 with Gram diag(1, 1, -1, -1).

    The diagonal copy {(u, u)} is invariant and totally isotropic.
    """
    y = TowerElement.y(1)
    ms = [SqMatrix([[0, 1], [-1, 0]]), SqMatrix([[0, y], [-y, 0]])]
    z = TowerElement()
    elements = []
    for k in range(g):
        m = ms[k % 2]
        rows = [[m[i, j] if (i < 2 and j < 2) else z for j in range(2)] + [z, z] for i in range(2)]
        rows += [[z, z] + [m[i, j] for j in range(2)] for i in range(2)]
        elements.append(SqMatrix(rows))
    gram = GramMatrix(SqMatrix.diag([1, 1, -1, -1]))
    return StableTupleCandidate(4, gram, elements, Case.CUSTOM, quaternion_factors=0, matrix_size=4)
