"""Parabolic data: epsilon, existence conditions, and period/index of the gerbe."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .constructions import Group


class InvalidDatum(ValueError):
    pass


class NonexistentDatum(ValueError):
    def __init__(self, violations: list[str]):
        super().__init__("datum violates: " + "; ".join(violations))
        self.violations = violations


UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class ParabolicPoint:
    weights: tuple
    multiplicities: tuple

    def __post_init__(self):
        ws = tuple(Fraction(w) for w in self.weights)
        ms = tuple(int(m) for m in self.multiplicities)
        if len(ws) != len(ms) or not ws:
            raise InvalidDatum("each point needs matching, non-empty weight and multiplicity lists")
        if any(not (0 <= w < 1) for w in ws):
            raise InvalidDatum("parabolic weights must lie in [0, 1)")
        if any(b <= a for a, b in zip(ws, ws[1:])):
            raise InvalidDatum("weights at a point must be distinct and increasing")
        if any(m <= 0 for m in ms):
            raise InvalidDatum("multiplicities must be positive")
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "multiplicities", ms)

    def to_json(self) -> dict:
        return {"weights": [str(w) for w in self.weights],
                "multiplicities": list(self.multiplicities)}


@dataclass(frozen=True)
class ParabolicDatum:
    group: Group
    rank: int
    degree: int
    points: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "group", Group.parse(self.group))
        if not isinstance(self.rank, int) or self.rank <= 0:
            raise InvalidDatum("rank must be a positive integer")
        if not isinstance(self.degree, int):
            raise InvalidDatum("degree must be an integer")
        pts = tuple(p if isinstance(p, ParabolicPoint) else ParabolicPoint(*p) for p in self.points)
        for k, p in enumerate(pts):
            if sum(p.multiplicities) != self.rank:
                raise InvalidDatum(f"multiplicities at point {k + 1} sum to "
                                   f"{sum(p.multiplicities)}, not the rank {self.rank}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_json(cls, data) -> ParabolicDatum:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            points = []
            for p in data.get("points", []):
                ws = [Fraction(str(w)) for w in p["weights"]]
                points.append(ParabolicPoint(tuple(ws), tuple(p["multiplicities"])))
            return cls(data["group"], data["rank"], data["degree"], tuple(points))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, InvalidDatum):
                raise
            raise InvalidDatum(f"malformed datum: {exc}") from None

    def to_json(self) -> dict:
        return {"group": self.group.value.lower(), "rank": self.rank, "degree": self.degree,
                "points": [p.to_json() for p in self.points]}


@dataclass(frozen=True)
class EpsilonDecomposition:
    epsilon: int
    alpha: int
    s: int

    @property
    def m(self) -> int | None:
        return self.epsilon // 2 if self.epsilon % 2 == 0 else None

    def to_json(self) -> dict:
        return {"epsilon": self.epsilon, "alpha": self.alpha, "s": self.s, "m": self.m}


def decompose(eps: int) -> EpsilonDecomposition:
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    alpha, s = 0, eps
    while s % 2 == 0:
        s //= 2
        alpha += 1
    return EpsilonDecomposition(eps, alpha, s)


def epsilon(d: ParabolicDatum) -> EpsilonDecomposition:
    g = gcd(abs(d.degree), d.rank)
    for p in d.points:
        for m in p.multiplicities:
            g = gcd(g, m)
    return decompose(g)


@dataclass
class ExistenceResult:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def parabolic_degree(d: ParabolicDatum) -> Fraction:
    return d.degree + sum((w * m for p in d.points for w, m in zip(p.weights, p.multiplicities)),
                          Fraction(0))


def existence_check(d: ParabolicDatum) -> ExistenceResult:
    bad = []
    pdeg = parabolic_degree(d)
    if pdeg != 0:
        bad.append(f"parabolic degree is {pdeg}, not 0")
    for k, p in enumerate(d.points, start=1):
        mult = dict(zip(p.weights, p.multiplicities))
        for w, m in mult.items():
            partner = (1 - w) if w else Fraction(0)
            if partner not in mult:
                bad.append(f"point {k}: weight {w} has no partner {partner}")
            elif mult[partner] != m:
                bad.append(f"point {k}: weights {w} and {partner} have multiplicities "
                           f"{m} and {mult[partner]}")
    if d.rank % 2:
        bad.append(f"rank {d.rank} is odd")
    if d.group is Group.SO and d.rank < 4:
        bad.append("orthogonal rank must be at least 4")
    return ExistenceResult(not bad, bad)


def _require(d: ParabolicDatum):
    r = existence_check(d)
    if not r:
        raise NonexistentDatum(r.violations)


def period(d: ParabolicDatum):
    return _period(d)[0]


def _period(d: ParabolicDatum):
    _require(d)
    e = epsilon(d)
    if e.epsilon % 2:
        return 1, "odd-epsilon: a Poincare bundle exists"
    if d.group is Group.SP:
        return 2, "symplectic, even epsilon: no Poincare bundle"
    if e.epsilon >= 4:
        return 2, "orthogonal, even epsilon >= 4: no Poincare bundle"
    if d.rank % 4 == 0:
        return 2, "orthogonal rank 0 mod 4, epsilon 2: no Poincare bundle"
    return UNDETERMINED, "orthogonal rank 2 mod 4, epsilon 2: left open"


@dataclass(frozen=True)
class IndexValue:
    kind: str  # exact | candidates | undetermined
    values: tuple = ()

    @classmethod
    def exact(cls, v: int) -> IndexValue:
        return cls("exact", (v,))

    @property
    def determined(self) -> bool:
        return self.kind == "exact"

    @property
    def value(self) -> int:
        if self.kind != "exact":
            raise ValueError(f"index is {self.kind}")
        return self.values[0]

    def to_json(self):
        if self.kind == "exact":
            return self.values[0]
        if self.kind == "candidates":
            return list(self.values)
        return UNDETERMINED

    def __str__(self):
        if self.kind == "exact":
            return str(self.values[0])
        if self.kind == "candidates":
            return "{" + ", ".join(map(str, self.values)) + "}"
        return UNDETERMINED


def index(d: ParabolicDatum) -> IndexValue:
    return _index(d)[0]


def _index(d: ParabolicDatum):
    _require(d)
    e = epsilon(d)
    if e.epsilon % 2:
        return IndexValue.exact(1), "odd-epsilon: trivial gerbe"
    if d.group is Group.SP:
        return IndexValue.exact(2 ** e.alpha), "symplectic: index 2^alpha"
    if e.s > 1:
        return IndexValue.exact(2 ** e.alpha), "orthogonal, s > 1: index 2^alpha"
    if e.alpha >= 2:
        return (IndexValue("candidates", (2 ** (e.alpha - 1), 2 ** e.alpha)),
                "orthogonal, epsilon = 2^alpha: index is 2^(alpha-1) or 2^alpha")
    if d.rank % 4 == 0:
        return IndexValue.exact(2), "orthogonal rank 0 mod 4, epsilon 2: period and index 2"
    return IndexValue("undetermined"), "orthogonal rank 2 mod 4, epsilon 2: left open"


def _prime_support(n: int) -> set[int]:
    out, k = set(), 2
    while k * k <= n:
        while n % k == 0:
            out.add(k)
            n //= k
        k += 1
    if n > 1:
        out.add(n)
    return out


@dataclass
class PeriodIndexReport:
    decomposition: EpsilonDecomposition
    period: object
    index: IndexValue
    justification: dict

    @property
    def determined(self) -> bool:
        return self.period != UNDETERMINED and self.index.determined

    def consistency(self) -> list[str]:
        """Divisibility relations that must hold; returns the broken ones."""
        eps = self.decomposition.epsilon
        bad = []
        for v in self.index.values:
            if eps % v:
                bad.append(f"index candidate {v} does not divide epsilon {eps}")
        if self.period != UNDETERMINED and self.index.determined:
            p, i = self.period, self.index.value
            if i % p:
                bad.append(f"period {p} does not divide index {i}")
            if _prime_support(p) != _prime_support(i):
                bad.append(f"period {p} and index {i} have different prime factors")
        return bad

    def to_json(self) -> dict:
        return {"epsilon": self.decomposition.to_json(),
                "period": self.period, "index": self.index.to_json(),
                "justification": dict(self.justification)}

    @classmethod
    def from_json(cls, data) -> PeriodIndexReport:
        e = data["epsilon"]
        dec = EpsilonDecomposition(int(e["epsilon"]), int(e["alpha"]), int(e["s"]))
        raw = data["index"]
        if isinstance(raw, int):
            idx = IndexValue.exact(raw)
        elif isinstance(raw, list):
            idx = IndexValue("candidates", tuple(int(v) for v in raw))
        else:
            idx = IndexValue("undetermined")
        return cls(dec, data["period"], idx, dict(data["justification"]))


def period_index(d: ParabolicDatum) -> PeriodIndexReport:
    p, pj = _period(d)
    i, ij = _index(d)
    e = epsilon(d)
    return PeriodIndexReport(e, p, i, {"epsilon": "gcd of |degree|, rank and multiplicities",
                                       "period": pj, "index": ij})
