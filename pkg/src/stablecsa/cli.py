"""Command-line front end.

Exit codes: 0 determinate success, 2 undetermined result, 3 certificate
failure or non-Stable verdict, 4 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .constructions import ConstructionParams, InvalidCase, build_tuple
from .field.expr import ParseError, parse_lines
from .field.specialize import DEFAULT_PRIME
from .moduli import (
    UNDETERMINED,
    InvalidDatum,
    NonexistentDatum,
    ParabolicDatum,
)
from .pfister import (
    CertificateFailure,
    IsotropyCandidate,
    PfisterForm,
    descent_certificate,
    evaluate,
    quaternion_division_certificate,
)
from .report import (
    MalformedCertificate,
    Report,
    construct_summary,
    epsilon_result,
    period_index_result,
    verify_certificate,
)
from .stability.oracle import ResamplingExhausted, specialized_stability
from .stability.symbolic import NotDiagonalizable, symbolic_certificate

EXIT_OK = 0
EXIT_UNDETERMINED = 2
EXIT_FAILURE = 3
EXIT_INPUT = 4

TRIALS_ENV = "STABLECSA_TRIALS"


class InputError(ValueError):
    pass


def _default_trials() -> int:
    raw = os.environ.get(TRIALS_ENV)
    if raw is None:
        return 5
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"{TRIALS_ENV}={raw!r} is not an integer") from None
    if n < 1:
        raise InputError(f"{TRIALS_ENV} must be at least 1")
    return n


def _load_datum(args) -> ParabolicDatum:
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.file}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return ParabolicDatum.from_json(data)
    if args.group is None or args.rank is None or args.degree is None:
        raise InputError("give --file, or all of --group, --rank and --degree")
    return ParabolicDatum(args.group, args.rank, args.degree, ())


def _params(args) -> ConstructionParams:
    return ConstructionParams(args.group, args.alpha, args.s, args.g)


# -- commands -------------------------------------------------------------------

def cmd_epsilon(args):
    datum = _load_datum(args)
    res = epsilon_result(datum)
    return {"command": "epsilon", "datum": datum.to_json()}, res, EXIT_OK


def cmd_period_index(args):
    datum = _load_datum(args)
    res = period_index_result(datum)
    code = EXIT_OK
    if res["period"] == UNDETERMINED or not isinstance(res["index"], int):
        code = EXIT_UNDETERMINED
    if res["consistency_violations"]:
        code = EXIT_FAILURE
    return {"command": "period-index", "datum": datum.to_json()}, res, code


def cmd_construct(args):
    p = _params(args)
    t = build_tuple(p)
    res = construct_summary(t)
    echo = {"command": "construct", "group": p.group.value, "alpha": p.alpha, "s": p.s, "g": p.g}
    return echo, res, EXIT_OK if res["skew_passed"] else EXIT_FAILURE


def cmd_certify(args):
    p = _params(args)
    mode = args.mode
    trials = args.trials if args.trials is not None else _default_trials()
    if trials < 1:
        raise InputError("--trials must be at least 1")
    if mode in ("specialize", "both") and args.seed is None:
        raise InputError("--seed is required for specialize mode")
    t = build_tuple(p)
    res = {}
    verdicts = []
    if mode in ("symbolic", "both"):
        sym = symbolic_certificate(t).to_json()
        res["symbolic"] = sym
        verdicts.append(sym["verdict"])
    if mode in ("specialize", "both"):
        spec = specialized_stability(t, trials, args.seed, args.prime, args.workers).to_json()
        res["specialized"] = spec
        verdicts.append(spec["verdict"])
    res["verdict"] = "Stable" if all(v == "Stable" for v in verdicts) else "Inconclusive"
    echo = {"command": "certify", "group": p.group.value, "alpha": p.alpha, "s": p.s, "g": p.g,
            "mode": mode}
    if mode != "symbolic":
        echo.update({"trials": trials, "seed": args.seed, "prime": args.prime})
    return echo, res, EXIT_OK if res["verdict"] == "Stable" else EXIT_FAILURE


def cmd_pfister(args):
    if not args.file and args.division is None:
        raise InputError("give a candidate --file and/or --division L")
    res = {}
    echo = {"command": "pfister-check"}
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc}") from None
        entries = parse_lines(text)
        size = len(entries)
        if size == 0 or size & (size - 1):
            raise InputError(f"{args.file}: {size} entries; need a power of two (one per subset)")
        n = size.bit_length() - 1
        allowed = {f"t{k}" for k in range(1, n + 1)}
        entries = parse_lines(text, allowed)
        cand = IsotropyCandidate.from_ratfuncs([v for _, v in entries])
        form = PfisterForm(n)
        res["value"] = str(evaluate(form, cand))
        res["descent"] = descent_certificate(form, cand)
        echo["file"] = os.path.basename(args.file)
    if args.division is not None:
        if args.division < 1:
            raise InputError("--division needs a quaternion index >= 1")
        res["division"] = quaternion_division_certificate(args.division)
        echo["division"] = args.division
    return echo, res, EXIT_OK


def cmd_verify(args):
    v = verify_certificate(args.path)
    res = {"verified": v.ok, "checked": v.checked}
    if not v.ok:
        res["step"] = v.step
        res["reason"] = v.reason
    return {"command": "verify", "path": os.path.basename(args.path)}, res, \
        EXIT_OK if v.ok else EXIT_FAILURE


# -- text rendering -------------------------------------------------------------

def render_text(report: Report) -> str:
    cmd = report.command.get("command")
    r = report.result
    lines = []
    if cmd == "epsilon":
        lines.append(f"epsilon = {r['epsilon']} (alpha = {r['alpha']}, s = {r['s']}"
                     + (f", m = {r['m']})" if r["m"] is not None else ")"))
        lines.append("datum exists" if r["exists"] else "datum does not exist:")
        lines += [f"  - {v}" for v in r["violations"]]
    elif cmd == "period-index":
        e = r["epsilon"]
        lines.append(f"epsilon = {e['epsilon']} (alpha = {e['alpha']}, s = {e['s']})")
        idx = r["index"]
        idx_text = "{" + ", ".join(map(str, idx)) + "}" if isinstance(idx, list) else str(idx)
        lines.append(f"period = {r['period']}    [{r['justification']['period']}]")
        lines.append(f"index  = {idx_text}    [{r['justification']['index']}]")
        lines += [f"inconsistent: {v}" for v in r["consistency_violations"]]
    elif cmd == "construct":
        c = report.command
        lines.append(f"{c['group']} alpha={c['alpha']} s={c['s']} g={c['g']}: case {r['case']}, "
                     f"epsilon = {r['epsilon']}, involution {r['kind']}")
        for chk in r["skew_checks"]:
            lines.append(f"  sigma(lambda_{chk['element']}) = -lambda_{chk['element']}: "
                         + ("passed" if chk["passed"] else "FAILED"))
        if r["A_diagonal"] is not None:
            lines.append("  A = diag(" + ", ".join(r["A_diagonal"]) + ")")
    elif cmd == "certify":
        if "symbolic" in r:
            s = r["symbolic"]
            lines.append(f"symbolic: {s['verdict']}")
            for e in s["eigenvalues"]:
                lines.append(f"  eigenvalue {e['eigenvalue_text']}: {e['pairing']} classes "
                             + ", ".join(e["classes"]))
            for f in s["failures"]:
                lines.append(f"  eigenvalue {f['eigenvalue']}: FAILED ({f['reason']})")
        if "specialized" in r:
            s = r["specialized"]
            lines.append(f"specialized (p = {s['prime']}, seed = {s['seed']}): {s['verdict']}")
            for tr in s["trials"]:
                lines.append(f"  trial {tr['trial']}: {tr['outcome']} via {tr['method']}, "
                             f"algebra dimension {tr['algebra_dim']}")
        lines.append(f"verdict: {r['verdict']}")
    elif cmd == "pfister-check":
        if "descent" in r:
            d = r["descent"]
            lines.append(f"form value: {r['value']}")
            lines.append(f"nonzero, certified by a {len(d['steps'])}-step descent:")
            for st in d["steps"]:
                lines.append(f"  level {st['level']}: divide by {st['common_factor']}, "
                             f"keep {st['branch']} half at {st['variable']}=0")
        if "division" in r:
            lines.append("norm form " + ", ".join(r["division"]["norm_form"])
                         + " is anisotropic: the quaternion algebra is division")
    elif cmd == "verify":
        if r["verified"]:
            lines.append("certificate verified (" + ", ".join(r["checked"]) + ")")
        else:
            lines.append(f"certificate REJECTED at step {r['step']}: {r['reason']}")
    return "\n".join(lines)


# -- entry point ----------------------------------------------------------------

def _int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stablecsa", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--out", help="also write the JSON report to this path")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, helptext in (("epsilon", "gcd decomposition of a parabolic datum"),
                           ("period-index", "period and index of the canonical gerbe")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--file", help="datum JSON file")
        p.add_argument("--group", choices=["sp", "so", "Sp", "SO"])
        p.add_argument("--rank", type=_int)
        p.add_argument("--degree", type=_int)

    def tuple_args(p):
        p.add_argument("--group", required=True, choices=["sp", "so", "Sp", "SO"])
        p.add_argument("--alpha", required=True, type=_int)
        p.add_argument("--s", required=True, type=_int)
        p.add_argument("--g", type=_int, default=2)

    p = sub.add_parser("construct", parents=[common], help="build an explicit skew tuple")
    tuple_args(p)

    p = sub.add_parser("certify", parents=[common], help="certify stability of a built tuple")
    tuple_args(p)
    p.add_argument("--mode", choices=["symbolic", "specialize", "both"], default="both")
    p.add_argument("--trials", type=_int)
    p.add_argument("--seed", type=_int)
    p.add_argument("--prime", type=_int, default=DEFAULT_PRIME)
    p.add_argument("--workers", type=_int, default=1)

    p = sub.add_parser("pfister-check", parents=[common],
                       help="certify a vector is not a zero of a Pfister form")
    p.add_argument("--file", help="one expression per line; line k is f_I for I = bits of k")
    p.add_argument("--division", type=_int, metavar="L",
                   help="also certify the quaternion algebra (x_L, y_L) is division")

    p = sub.add_parser("verify", parents=[common], help="re-check a saved report")
    p.add_argument("path")
    return ap


COMMANDS = {
    "epsilon": cmd_epsilon,
    "period-index": cmd_period_index,
    "construct": cmd_construct,
    "certify": cmd_certify,
    "pfister-check": cmd_pfister,
    "verify": cmd_verify,
}


def run(args) -> tuple[Report, int]:
    start = time.perf_counter()
    echo, result, code = COMMANDS[args.command](args)
    return Report(echo, result, time.perf_counter() - start), code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        report, code = run(args)
    except ParseError as exc:
        print(f"error: parse error at {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, InvalidCase, InvalidDatum, NonexistentDatum, MalformedCertificate) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CertificateFailure, NotDiagonalizable, ResamplingExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(report.dumps() + "\n")
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    print(report.dumps() if args.json else render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
