"""Serializable command reports and offline certificate verification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__
from .algebra import apply_involution
from .constructions import ConstructionParams, InvalidCase, build_tuple
from .moduli import (
    InvalidDatum,
    NonexistentDatum,
    ParabolicDatum,
    epsilon,
    existence_check,
    period_index,
)
from .pfister import verify_descent, verify_monomial_certificate
from .stability.oracle import verify_specialized
from .stability.symbolic import verify_symbolic

TOOL = "stablecsa"


class MalformedCertificate(ValueError):
    pass


@dataclass
class Report:
    command: dict
    result: dict
    timing: float = 0.0
    version: str = __version__
    tool: str = TOOL

    def to_json(self) -> dict:
        return {"tool": self.tool, "version": self.version, "command": self.command,
                "result": self.result, "timing": {"seconds": round(self.timing, 6)}}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def deterministic_json(self) -> str:
        """Serialization without the timing field."""
        data = self.to_json()
        data.pop("timing")
        return json.dumps(data, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, data) -> Report:
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise MalformedCertificate(f"not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise MalformedCertificate("report must be a JSON object")
        try:
            return cls(command=data["command"], result=data["result"],
                       timing=float(data.get("timing", {}).get("seconds", 0.0)),
                       version=data["version"], tool=data["tool"])
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise MalformedCertificate(f"missing report field: {exc}") from None

    def __eq__(self, other):
        if not isinstance(other, Report):
            return NotImplemented
        return self.deterministic_json() == other.deterministic_json()


@dataclass
class Verification:
    ok: bool
    step: object = None
    reason: str = ""
    checked: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _params(cmd: dict) -> ConstructionParams:
    return ConstructionParams(cmd["group"], int(cmd["alpha"]), int(cmd["s"]), int(cmd["g"]))


def verify_report(report: Report) -> Verification:
    if report.tool != TOOL:
        raise MalformedCertificate(f"not a {TOOL} report")
    name = report.command.get("command")
    res = report.result
    try:
        if name == "certify":
            return _verify_certify(report.command, res)
        if name == "pfister-check":
            return _verify_pfister(res)
        if name == "construct":
            t = build_tuple(_params(report.command))
            summary = construct_summary(t)
            if summary != res:
                return Verification(False, "summary", "rebuilt tuple differs from the report")
            return Verification(True, checked=["construct"])
        if name in ("epsilon", "period-index"):
            datum = ParabolicDatum.from_json(report.command["datum"])
            fresh = epsilon_result(datum) if name == "epsilon" else period_index_result(datum)
            if fresh != res:
                return Verification(False, "result", "recomputed result differs")
            return Verification(True, checked=[name])
    except (KeyError, TypeError, InvalidCase, InvalidDatum, NonexistentDatum) as exc:
        raise MalformedCertificate(f"cannot rebuild the request: {exc}") from None
    raise MalformedCertificate(f"unknown command {name!r}")


def _verify_certify(cmd: dict, res: dict) -> Verification:
    t = build_tuple(_params(cmd))
    checked = []
    if not isinstance(res, dict) or not ({"symbolic", "specialized"} & set(res)):
        raise MalformedCertificate("certify report carries no certificate")
    if "symbolic" in res:
        ok, why = verify_symbolic(t, res["symbolic"])
        if not ok:
            return Verification(False, "symbolic", why)
        checked.append("symbolic")
    if "specialized" in res:
        ok, why = verify_specialized(t, res["specialized"])
        if not ok:
            return Verification(False, "specialized", why)
        checked.append("specialized")
    return Verification(True, checked=checked)


def _verify_pfister(res: dict) -> Verification:
    checked = []
    if "descent" not in res and "division" not in res:
        raise MalformedCertificate("pfister report carries no certificate")
    if "descent" in res:
        r = verify_descent(res["descent"])
        if not r:
            return Verification(False, r.step, r.reason)
        checked.append("descent")
    if "division" in res:
        r = verify_monomial_certificate(res["division"])
        if not r:
            return Verification(False, "division", r.reason)
        checked.append("division")
    return Verification(True, checked=checked)


def verify_certificate(path) -> Verification:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedCertificate(f"cannot read {path}: {exc}") from None
    return verify_report(Report.from_json(text))


# -- result builders shared by the CLI and the verifier --------------------------

def construct_summary(t) -> dict:
    out = t.describe()
    checks = [apply_involution(t.gram, m) == -m for m in t.elements]
    out["skew_checks"] = [{"element": k, "passed": ok} for k, ok in enumerate(checks, start=1)]
    out["skew_passed"] = all(checks)
    out["A_diagonal"] = [str(e) for e in t.A.diagonal()] if t.A.is_diagonal() else None
    out["B"] = [[str(e) for e in row] for row in t.B.rows]
    out["gram"] = [[str(e) for e in row] for row in t.gram.matrix.rows]
    return out


def epsilon_result(datum: ParabolicDatum) -> dict:
    e = epsilon(datum)
    ex = existence_check(datum)
    return {**e.to_json(), "exists": ex.ok, "violations": list(ex.violations)}


def period_index_result(datum: ParabolicDatum) -> dict:
    rep = period_index(datum)
    out = rep.to_json()
    out["consistency_violations"] = rep.consistency()
    return out
