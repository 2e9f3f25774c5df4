"""Command-line front end.

    untwist invariants KNOT        classical, Jones and Blanchfield data
    untwist obstruct-u1 KNOT       Miyazawa congruence (or --literal v1,a4,sigma,det)
    untwist family F -p P -q Q     gap-family instance with certificates
    untwist verify-paper           re-run the reference numeric checks

KNOT is a file path, ``-`` for stdin, a table name (``3_1``, ``trefoil``,
...) or the presentation text itself.  Exit codes: 0 success, 1 internal
contradiction, 2 input error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from pathlib import Path

from . import corpus
from .bounds import (
    ContradictionError,
    TauFact,
    consolidate,
    load_tau_facts,
    lower_from_alexander,
    lower_tu_from_sigma,
    lower_u_from_tau,
    miyazawa_certificate,
    miyazawa_test,
    replay,
    tau_cable,
    tau_torus,
)
from .classical import (
    alexander_of,
    conway,
    knot_determinant,
    seifert_matrix,
    signature,
    torus_alexander,
    tristram_levine,
)
from .families import BASES, GAP_COLUMNS, BaseKnot, FamilySpec, build_family, whitehead_double_diagram
from .jones import BudgetExceeded, jones, miyazawa_left_side
from .knotio import BraidWord, DiagramError, PDCode, cable_braid, parse_braid, parse_knot
from .laurent import ONE, LaurentPoly, derivative, evaluate, parse_poly

EXIT_OK, EXIT_CONTRADICTION, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

# omega = exp(2 pi i k/n) sample points for Tristram-Levine signatures
TL_SAMPLES = ((1, 6), (1, 4), (1, 3), (5, 12), (1, 2))

# reference data checked by verify-paper
PUBLISHED_JONES = "q - q^2 + 2q^3 - q^4 + q^6 - q^7 + q^8 - q^9 - q^12 + q^13"
PUBLISHED_CONWAY = "1 + z^2"
PUBLISHED_DET = 3
LITERAL_MIYAZAWA = (8, 0, 2, 3)


class InputError(ValueError):
    """Bad command-line input."""


@dataclass
class RunConfig:
    inputs: list[str]
    fmt: str | None = None
    budget: int = 200
    replay: bool = False
    out: str = "json"
    tau_facts: str | None = None

    def __post_init__(self):
        if self.budget <= 0:
            raise InputError("--budget must be positive")
        if self.tau_facts is not None and not Path(self.tau_facts).is_file():
            raise InputError(f"tau facts file {self.tau_facts!r} is not readable")

    def facts(self) -> dict[str, TauFact]:
        return load_tau_facts(self.tau_facts) if self.tau_facts else {}


# ---------------------------------------------------------------------------
# Input
# ---------------------------------------------------------------------------

def load_knot(arg: str, fmt: str | None = None) -> tuple[str, BraidWord | PDCode]:
    """Resolve KNOT to (name, presentation)."""
    if arg == "-":
        return "stdin", parse_knot(sys.stdin.read().strip(), fmt)
    if arg in BASES:
        return arg, BASES[arg].braid
    if arg in corpus.BRAIDS:
        return arg, corpus.corpus_knot(arg, fmt or "braid")
    p = Path(arg)
    if p.is_file():
        return p.stem, parse_knot(p.read_text().strip(), fmt)
    return arg, parse_knot(arg, fmt)


def load_base(name: str, letter: int | None) -> BaseKnot:
    if name in BASES:
        return BASES[name]
    b = parse_braid(corpus.BRAIDS.get(name, name))
    return BaseKnot(name, b, letter, None)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _flatten(obj, prefix="") -> dict:
    out = {}
    if isinstance(obj, dict):
        for k in sorted(obj):
            out.update(_flatten(obj[k], f"{prefix}{k}."))
    elif isinstance(obj, list) and not any(isinstance(x, (dict, list)) for x in obj):
        out[prefix[:-1]] = " ".join(str(x) for x in obj)
    elif isinstance(obj, list):
        for i, x in enumerate(obj):
            out.update(_flatten(x, f"{prefix}{i}."))
    else:
        out[prefix[:-1]] = obj
    return out


def render(report: dict, out: str, rows: list[dict] | None = None, columns=None) -> str:
    if out == "json":
        return dump_json(report)
    if out == "csv":
        buf = io.StringIO()
        if rows is None:
            rows = [_flatten({k: v for k, v in report.items() if k != "certificates"})]
        cols = list(columns) if columns else list(rows[0])
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow(r)
        return buf.getvalue().rstrip("\n")
    flat = _flatten({k: v for k, v in report.items() if k != "certificates"})
    lines = [f"{k}: {v}" for k, v in flat.items()]
    for c in report.get("certificates", []):
        op = ">=" if c["kind"] == "lower" else "<="
        name = f"tu_{c['p']}" if c["target"] == "tu_p" else c["target"]
        rules = ", ".join(s["rule"] for s in c["derivation"])
        lines.append(f"certificate: {name} {op} {c['value']} [{c['grade']}] via {rules}")
    return "\n".join(lines)


def _check_replay(certs, deep: bool) -> None:
    for c in certs:
        replay(c, deep=deep)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def invariants_report(name: str, knot, cfg: RunConfig) -> dict:
    from .blanchfield import blanchfield_matrix, n_upper_bound

    if isinstance(knot, PDCode) and knot.n > cfg.budget:
        raise BudgetExceeded(f"{knot.n} crossings exceeds the budget of {cfg.budget}")
    v = seifert_matrix(knot)
    delta = alexander_of(knot)
    nabla = conway(delta)
    det = knot_determinant(v)
    sigma = signature(v)
    tl = {}
    for k, n in TL_SAMPLES:
        try:
            tl[f"{k}/{n}"] = tristram_levine(v, k, n)
        except ValueError:
            tl[f"{k}/{n}"] = None
    vj = jones(knot, budget=cfg.budget)
    v1 = miyazawa_left_side(vj)
    a4 = nabla.coeff(4)
    bm = blanchfield_matrix(knot)
    a1 = bm.at_one()
    a1_det = int(round(_det_int(a1)))
    certs = [lower_from_alexander(str(delta)), lower_tu_from_sigma(sigma)]
    mz = miyazawa_certificate(v1, a4, sigma, det)
    if mz is not None:
        certs.append(mz)
    ub = n_upper_bound(v=v)
    if ub is not None:
        certs.append(ub)
    fact = cfg.facts().get(name)
    if fact is not None:
        certs.append(lower_u_from_tau(fact))
    _check_replay(certs, cfg.replay)
    cons = consolidate(certs)
    return {
        "knot": name,
        "presentation": knot.to_text(),
        "alexander": str(delta),
        "conway": nabla.format("z"),
        "conway_coefficients": {f"a{e}": nabla.coeff(e) for e in range(0, max(nabla.max_exp, 0) + 1, 2)},
        "determinant": det,
        "signature": sigma,
        "tristram_levine": tl,
        "jones": vj.format("q"),
        "jones_derivative_at_minus1": v1,
        "blanchfield": {
            "size": bm.size,
            "k": bm.k,
            "A_at_1": a1,
            "det_A_at_1": a1_det,
            "det_A": str(bm.det()),
            "det_matches_alexander": bm.det().equals_up_to_unit(delta),
        },
        "miyazawa": _miyazawa_json(miyazawa_test(v1, a4, sigma, det)),
        "certificates": [c.to_json() for c in certs],
        **cons.to_json(),
    }


def _det_int(m) -> int:
    from .classical import _rational_det

    return int(_rational_det([[Fraction(x) for x in r] for r in m])) if m else 1


def _miyazawa_json(r) -> dict:
    return {"verdict": r.verdict, "lhs": r.lhs, "rhs": r.rhs,
            "rhs_mod_48": None if r.rhs is None else r.rhs % 48,
            "lhs_mod_48": r.lhs % 48}


def obstruct_report(args, cfg: RunConfig) -> dict:
    if args.literal:
        try:
            v1, a4, sigma, det = (int(x) for x in args.literal.split(","))
        except ValueError as exc:
            raise InputError("--literal expects four integers v1,a4,sigma,det") from exc
        source = "literal"
    else:
        if not cfg.inputs:
            raise InputError("give a knot or --literal")
        name, knot = load_knot(cfg.inputs[0], cfg.fmt)
        v = seifert_matrix(knot)
        delta = alexander_of(knot)
        v1 = miyazawa_left_side(jones(knot, budget=cfg.budget))
        a4, sigma, det = conway(delta).coeff(4), signature(v), knot_determinant(v)
        source = name
    r = miyazawa_test(v1, a4, sigma, det)
    cert = miyazawa_certificate(v1, a4, sigma, det)
    if cert is not None:
        replay(cert)
    return {
        "source": source,
        "inputs": {"v1": v1, "a4": a4, "sigma": sigma, "det": det},
        **_miyazawa_json(r),
        "conclusion": "u >= 2" if r.obstructed else "no obstruction",
        "certificates": [] if cert is None else [cert.to_json()],
    }


def family_report(args, cfg: RunConfig):
    base = load_base(args.base, args.unknotting_letter)
    facts = cfg.facts()
    tau = facts.get(base.name)
    spec = FamilySpec(args.family, base, args.p, args.q, tau)
    res = build_family(spec, args.jones_budget)
    _check_replay(res.certificates, cfg.replay)
    return res.to_json(), [res.gap_row()]


# -- verify-paper ---------------------------------------------------------------

def _check(name, ok, detail) -> dict:
    return {"check": name, "ok": bool(ok), "detail": detail}


def _verify_miyazawa():
    r = miyazawa_test(*LITERAL_MIYAZAWA)
    ok = r.lhs == 8 and r.rhs == -8 and r.obstructed
    return _check("miyazawa_literal", ok, f"LHS {r.lhs}, RHS {r.rhs} = {r.rhs % 48} mod 48, {r.verdict}")


def _verify_jones_derivative():
    v = parse_poly(PUBLISHED_JONES)
    d = evaluate(derivative(v), -1)
    return _check("jones_derivative", d == 8 and evaluate(v, 1) == 1, f"V'(-1) = {d}, V(1) = {evaluate(v, 1)}")


def _verify_conway():
    nabla = parse_poly(PUBLISHED_CONWAY)
    # Delta(t) = nabla(t^(1/2) - t^(-1/2)): z^2 -> t - 2 + t^-1
    z2 = LaurentPoly.from_dict({1: 1, 0: -2, -1: 1})
    delta = sum((z2 ** (e // 2) * c for e, c in nabla.to_dict().items()), LaurentPoly())
    det = abs(evaluate(delta, -1))
    ok = nabla.coeff(4) == 0 and conway(delta) == nabla and det == PUBLISHED_DET
    return _check("conway_a4", ok, f"a4 = {nabla.coeff(4)}, Delta = {delta}, det = {det}")


def _verify_torus_grid():
    bad = []
    count = 0
    for p in range(2, 8):
        for q in range(2, 8):
            if gcd(p, q) != 1:
                continue
            count += 1
            # tau = genus for positive torus knots; genus read off Delta
            if tau_torus(p, q) != torus_alexander(p, q).max_exp:
                bad.append((p, q))
    return _check("tau_torus_grid", not bad, f"{count} torus knots checked, mismatches {bad}")


def _verify_hom_cases():
    right = TauFact("T(2,3)", 1, 1, 1)
    left = TauFact("T(2,-3)", -1, -1, 1)
    zero = TauFact("unknot", 0, 0, 0)
    bad = []
    expect = [(right, 2, 1, 2), (right, 3, 1, 3), (left, 2, 1, -1), (left, 3, -1, -3),
              (zero, 2, 3, 1), (zero, 2, -3, -1)]
    for f, p, q, want in expect:
        if tau_cable(f, p, q).tau != want:
            bad.append((f.id, p, q))
    # mirror symmetry tau(-K_{p,-q}) = -tau(K_{p,q})
    for p in (2, 3, 4):
        for q in (-5, -1, 1, 5):
            if tau_cable(left, p, -q).tau != -tau_cable(right, p, q).tau:
                bad.append(("mirror", p, q))
    # positive braid closures have tau = genus = (crossings - strands + 1)/2
    trefoil = BASES["trefoil"].braid
    for p, q in ((2, 7), (2, 9), (3, 10)):
        b = cable_braid(trefoil, p, q)
        if min(b.letters) < 0 or tau_cable(right, p, q).tau != (len(b.letters) - b.strand_count + 1) // 2:
            bad.append(("positive", p, q))
    return _check("hom_cases", not bad, f"failures {bad}")


def _verify_litherland():
    trefoil = BASES["trefoil"].braid
    v = seifert_matrix(trefoil)
    out = []
    ok = True
    for p in (2, 3):
        direct = signature(seifert_matrix(cable_braid(trefoil, p, 1)))
        # sigma at omega = (-1)^p; sigma(U_{p,1}) = 0 since U_{p,1} is the unknot
        predicted = tristram_levine(v, 1 if p % 2 else 0, 2)
        ok &= direct == predicted
        out.append(f"p={p}: {direct} vs {predicted}")
    return _check("litherland", ok, "; ".join(out))


def _verify_cabling_identity():
    trefoil = BASES["trefoil"].braid
    d = alexander_of(trefoil)
    out = []
    ok = True
    for p in (2, 3):
        lhs = alexander_of(cable_braid(trefoil, p, 1))
        rhs = d.substitute_power(p)
        ok &= lhs.equals_up_to_unit(rhs)
        out.append(f"p={p}: {lhs}")
    return _check("cabling_identity", ok, "; ".join(out))


def _verify_whitehead():
    d = whitehead_double_diagram(BASES["trefoil"].braid).diagram
    delta = alexander_of(d)
    return _check("whitehead_double", delta == ONE, f"{d.n} crossings, Delta = {delta}")


def gap_grid(max_q_s: int = 3):
    trefoil = BASES["trefoil"]
    specs = []
    for p in range(2, 5):
        specs += [FamilySpec("cable", trefoil, p, q) for q in range(1, 5) if gcd(p, q) == 1]
    specs += [FamilySpec("Jpq", trefoil, p, q) for p in range(1, 5) for q in range(1, 5)]
    specs += [FamilySpec("Spq", trefoil, p, q) for p in range(1, 5) for q in range(1, max_q_s + 1)]
    return specs


def _expected_gap(spec: FamilySpec) -> int:
    return spec.p - 1 if spec.family == "cable" else spec.p * (spec.q - 1)


def verify_report(args) -> tuple[dict, list[dict]]:
    checks = [_verify_miyazawa(), _verify_jones_derivative(), _verify_conway(), _verify_torus_grid(),
              _verify_hom_cases(), _verify_litherland(), _verify_cabling_identity(), _verify_whitehead()]
    rows = []
    for spec in gap_grid(4 if args.full else 3):
        t0 = time.perf_counter()
        res = build_family(spec)
        row = res.gap_row()
        ok = row["gap"] is not None and row["gap"] >= _expected_gap(spec)
        if spec.family != "cable":
            ok &= row["lower_u"] >= spec.p * spec.q and row["upper_tu_p"] <= spec.p
        if spec.family == "Jpq" and spec.p % 2 and spec.q % 2:
            ok &= res.consolidation.exact(f"tu_{spec.q}") == spec.p
        row["ok"] = bool(ok)
        row["seconds"] = round(time.perf_counter() - t0, 2)
        rows.append(row)
        checks.append(_check(f"gap_{spec.family}_{spec.p}_{spec.q}", ok,
                             f"u >= {row['lower_u']}, tu_{spec.width} <= {row['upper_tu_p']}, gap {row['gap']}"))
    report = {"checks": checks, "passed": sum(c["ok"] for c in checks), "total": len(checks),
              "ok": all(c["ok"] for c in checks)}
    return report, rows


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=["pd", "braid"], default=None,
                        help="input format (sniffed when omitted)")
    common.add_argument("--budget", type=int, default=200, help="crossing budget for Jones computations")
    common.add_argument("--tau-facts", default=None, help="JSONL file of tau/epsilon facts")
    common.add_argument("--replay", action="store_true", help="deep-replay every certificate")

    ap = argparse.ArgumentParser(prog="untwist", description="Exact knot invariants and untwisting bounds.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", parents=[common], help="classical, Jones and Blanchfield invariants")
    p.add_argument("knots", nargs="+")
    p.add_argument("--out", choices=["json", "csv", "text"], default="json")

    p = sub.add_parser("obstruct-u1", parents=[common], help="Miyazawa u = 1 obstruction")
    p.add_argument("knots", nargs="*")
    p.add_argument("--literal", default=None, metavar="V1,A4,SIGMA,DET")
    p.add_argument("--out", choices=["json", "text"], default="json")

    p = sub.add_parser("family", parents=[common], help="gap family instance")
    p.add_argument("family", choices=["cable", "Jpq", "Spq"])
    p.add_argument("--base", default="trefoil", help="base knot name or braid text")
    p.add_argument("--unknotting-letter", type=int, default=None,
                   help="index of a crossing whose change unknots a custom base braid")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-q", type=int, required=True)
    p.add_argument("--jones-budget", type=int, default=None, help="crossing budget for witness Jones checks")
    p.add_argument("--out", choices=["json", "csv", "text"], default="json")

    p = sub.add_parser("verify-paper", parents=[common], help="re-run the reference numeric checks")
    p.add_argument("--full", action="store_true", help="include S family rows with q = 4 (slow)")
    p.add_argument("--out", choices=["json", "csv", "text"], default="text")
    return ap


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = RunConfig(getattr(args, "knots", []) or [], args.fmt, args.budget, args.replay,
                        args.out, args.tau_facts)
        if args.command == "invariants":
            reports = [invariants_report(*load_knot(k, cfg.fmt), cfg) for k in cfg.inputs]
            if cfg.out == "csv":
                rows = [_flatten({k: v for k, v in r.items() if k != "certificates"}) for r in reports]
                text = render({}, "csv", rows, rows[0].keys())
            elif len(reports) == 1:
                text = render(reports[0], cfg.out)
            else:
                text = dump_json(reports) if cfg.out == "json" else "\n\n".join(render(r, cfg.out) for r in reports)
            print(text, file=stdout)
        elif args.command == "obstruct-u1":
            print(render(obstruct_report(args, cfg), cfg.out), file=stdout)
        elif args.command == "family":
            report, rows = family_report(args, cfg)
            print(render(report, cfg.out, rows, GAP_COLUMNS), file=stdout)
        else:
            report, rows = verify_report(args)
            if cfg.out == "json":
                print(dump_json({**report, "gap_table": rows}), file=stdout)
            elif cfg.out == "csv":
                print(render(report, "csv", rows, GAP_COLUMNS + ("ok",)), file=stdout)
            else:
                for c in report["checks"]:
                    print(f"{'PASS' if c['ok'] else 'FAIL'} {c['check']}: {c['detail']}", file=stdout)
                print(f"{report['passed']}/{report['total']} checks passed", file=stdout)
            return EXIT_OK if report["ok"] else EXIT_CONTRADICTION
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ContradictionError, ArithmeticError) as exc:
        print(f"error: contradiction: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION
    except (InputError, DiagramError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
