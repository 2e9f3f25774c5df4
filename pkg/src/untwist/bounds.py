"""Certified bounds on unknotting and untwisting numbers.

A BoundCertificate is a lower or upper bound on one of

    u        unknotting number (= tu_1)
    tu       untwisting number (any width)
    tu_p     untwisting number with twists on at most 2p strands
    u_a      algebraic unknotting number (= tu_a)
    tu_a     algebraic untwisting number

together with the rule applications that produced it.  Every rule is
re-executable, so ``replay`` recomputes the value from the recorded inputs.
``consolidate`` folds certificates along the order relations

    tu_a <= tu <= ... <= tu_{p+1} <= tu_p <= ... <= tu_1 = u,   u_a = tu_a

into intervals and gap statements.

tau and epsilon values of base knots only enter through TauFact records;
everything else about tau is derived from them by the cabling, doubling
and connected-sum formulas below.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Any, Iterable, Sequence

__all__ = [
    "ContradictionError",
    "TauFact",
    "Step",
    "BoundCertificate",
    "MiyazawaResult",
    "Consolidation",
    "miyazawa_test",
    "miyazawa_certificate",
    "tau_torus",
    "tau_torus_fact",
    "tau_cable",
    "tau_whitehead",
    "tau_connected_sum",
    "lower_u_from_tau",
    "lower_tu_from_sigma",
    "lower_from_alexander",
    "upper_from_witness",
    "apply_twists",
    "replay",
    "consolidate",
    "load_tau_facts",
    "PROOF",
    "EVIDENCE",
]

PROOF = "proof"
EVIDENCE = "evidence"


class ContradictionError(RuntimeError):
    """Certificates disagree: some lower bound exceeds an upper bound."""


# ---------------------------------------------------------------------------
# tau facts
# ---------------------------------------------------------------------------

def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class TauFact:
    id: str
    tau: int
    epsilon: int | None = None
    genus: int | None = None
    source: str = ""

    def __post_init__(self):
        if self.epsilon not in (None, -1, 0, 1):
            raise ValueError(f"epsilon must be -1, 0, 1 or unknown, got {self.epsilon}")
        if self.epsilon == 0 and self.tau != 0:
            raise ValueError(f"{self.id}: epsilon = 0 forces tau = 0")
        if self.genus is not None:
            if self.genus < 0 or abs(self.tau) > self.genus:
                raise ValueError(f"{self.id}: |tau| cannot exceed the genus")
            if abs(self.tau) == self.genus and self.tau != 0:
                if self.epsilon is None:
                    object.__setattr__(self, "epsilon", _sgn(self.tau))
                elif self.epsilon != _sgn(self.tau):
                    raise ValueError(f"{self.id}: |tau| = genus forces epsilon = sgn tau")
            if self.genus == 0 and self.epsilon not in (None, 0):
                raise ValueError(f"{self.id}: genus 0 knot has epsilon 0")
            if self.genus == 0:
                object.__setattr__(self, "epsilon", 0)

    def to_json(self) -> dict:
        return asdict(self)


def load_tau_facts(path: str | Path) -> dict[str, TauFact]:
    """Read line-delimited JSON records {id, tau, epsilon, genus, source}."""
    facts = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rec = json.loads(line)
            fact = TauFact(
                id=str(rec["id"]),
                tau=int(rec["tau"]),
                epsilon=None if rec.get("epsilon") is None else int(rec["epsilon"]),
                genus=None if rec.get("genus") is None else int(rec["genus"]),
                source=str(rec.get("source", "")),
            )
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ValueError(f"{path}:{lineno}: bad tau fact record ({exc})") from exc
        facts[fact.id] = fact
    return facts


def tau_torus(p: int, q: int) -> int:
    """tau of the positive (p, q) torus knot: its genus (p-1)(q-1)/2."""
    if p <= 0 or q <= 0:
        raise ValueError("torus knot parameters must be positive")
    return (p - 1) * (q - 1) // 2


def tau_torus_fact(p: int, q: int) -> TauFact:
    g = tau_torus(p, q)
    return TauFact(f"T({p},{q})", g, None, g, "torus knot: tau equals genus")


def tau_cable(f: TauFact, p: int, q: int) -> TauFact:
    """tau of the (p, q)-cable from tau and epsilon of the companion."""
    if f.epsilon is None:
        raise ValueError(f"epsilon of {f.id} is unknown; cabling formula needs it")
    if p < 1:
        raise ValueError("cable needs p >= 1")
    if gcd(p, q) != 1:
        raise ValueError(f"({p}, {q}) cable is not a knot")
    if p == 1:
        return TauFact(f"{f.id}_(1,{q})", f.tau, f.epsilon, f.genus, f"cable (1,{q}) of {f.id} is {f.id}")
    cid = f"{f.id}_({p},{q})"
    if f.epsilon == 1:
        return TauFact(cid, p * f.tau + (p - 1) * (q - 1) // 2, None, None, f"cable formula, epsilon = 1, of {f.id}")
    if f.epsilon == -1:
        return TauFact(cid, p * f.tau + (p - 1) * (q + 1) // 2, None, None, f"cable formula, epsilon = -1, of {f.id}")
    # epsilon 0: same tau as the torus knot T(p, q)
    if q > 0:
        g = (p - 1) * (q - 1) // 2
        return TauFact(cid, g, None, None, f"cable formula, epsilon = 0, of {f.id}")
    return TauFact(cid, (p - 1) * (q + 1) // 2, None, None, f"cable formula, epsilon = 0, of {f.id}")


def tau_whitehead(f: TauFact, twists: int = 0) -> TauFact:
    """tau of the positive-clasped t-twisted Whitehead double (genus 1)."""
    tau = 1 if twists < 2 * f.tau else 0
    return TauFact(f"D+({f.id},{twists})", tau, None, 1, f"Whitehead double formula applied to {f.id}")


def tau_connected_sum(facts: Sequence[TauFact]) -> TauFact:
    """tau adds under connected sum; epsilon is kept only when trivially
    derivable (empty or single summand)."""
    facts = list(facts)
    if not facts:
        return TauFact("unknot", 0, 0, 0, "empty connected sum")
    if len(facts) == 1:
        return facts[0]
    return TauFact("#".join(f.id for f in facts), sum(f.tau for f in facts), None, None, "tau is additive")


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    rule: str
    inputs: dict
    value: int
    note: str = ""

    def to_json(self) -> dict:
        out = {"rule": self.rule, "inputs": self.inputs, "value": self.value}
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Step":
        return cls(d["rule"], d["inputs"], d["value"], d.get("note", ""))


_TARGETS = ("u", "tu", "tu_p", "u_a", "tu_a")


@dataclass(frozen=True)
class BoundCertificate:
    target: str
    p: int | None
    kind: str
    value: int
    derivation: tuple[Step, ...]
    grade: str = PROOF

    def __post_init__(self):
        if self.target not in _TARGETS:
            raise ValueError(f"unknown target {self.target}")
        if (self.target == "tu_p") != (self.p is not None):
            raise ValueError("p is given exactly for tu_p targets")
        if self.kind not in ("lower", "upper"):
            raise ValueError("kind is lower or upper")
        if self.value < 0:
            raise ValueError("bounds are nonnegative")
        object.__setattr__(self, "derivation", tuple(self.derivation))

    @property
    def name(self) -> str:
        return f"tu_{self.p}" if self.target == "tu_p" else self.target

    def describe(self) -> str:
        op = ">=" if self.kind == "lower" else "<="
        return f"{self.name} {op} {self.value} [{self.grade}]"

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "p": self.p,
            "kind": self.kind,
            "value": self.value,
            "grade": self.grade,
            "derivation": [s.to_json() for s in self.derivation],
        }

    @classmethod
    def from_json(cls, d: dict) -> "BoundCertificate":
        return cls(d["target"], d["p"], d["kind"], d["value"],
                   tuple(Step.from_json(s) for s in d["derivation"]), d["grade"])


# -- Miyazawa ---------------------------------------------------------------

@dataclass(frozen=True)
class MiyazawaResult:
    verdict: str          # obstructed | consistent | inapplicable
    lhs: int
    rhs: int | None

    @property
    def obstructed(self) -> bool:
        return self.verdict == "obstructed"


def miyazawa_test(v1_at_minus1: int, a4: int, sigma: int, det: int) -> MiyazawaResult:
    """For u = 1 knots with sigma = +-2, V'(-1) = 24 a4 - (sigma/8)(det+1)(det+5)
    modulo 48.  A mismatch proves u >= 2."""
    if det <= 0 or det % 2 == 0:
        raise ValueError("knot determinant must be a positive odd integer")
    if sigma not in (2, -2):
        return MiyazawaResult("inapplicable", v1_at_minus1, None)
    rhs = 24 * a4 - Fraction(sigma, 8) * (det + 1) * (det + 5)
    if rhs.denominator != 1:
        raise ValueError("right-hand side is not an integer; inconsistent input")
    rhs = int(rhs)
    verdict = "consistent" if (v1_at_minus1 - rhs) % 48 == 0 else "obstructed"
    return MiyazawaResult(verdict, v1_at_minus1, rhs)


def miyazawa_certificate(v1: int, a4: int, sigma: int, det: int) -> BoundCertificate | None:
    r = miyazawa_test(v1, a4, sigma, det)
    if not r.obstructed:
        return None
    step = Step("miyazawa", {"v1": v1, "a4": a4, "sigma": sigma, "det": det}, 2,
                "u = 1 ruled out; |sigma|/2 = 1 gives u >= 1")
    return BoundCertificate("u", None, "lower", 2, (step,), PROOF)


# -- lower bounds -----------------------------------------------------------

def _tau_steps(f: TauFact) -> list[Step]:
    return [Step("tau_fact", f.to_json(), f.tau)]


def lower_u_from_tau(f: TauFact, steps: Sequence[Step] | None = None) -> BoundCertificate:
    """u >= |tau|."""
    chain = list(steps) if steps is not None else _tau_steps(f)
    chain.append(Step("tau_lower_bound", {"tau": f.tau}, abs(f.tau)))
    return BoundCertificate("u", None, "lower", abs(f.tau), tuple(chain), PROOF)


def lower_tu_from_sigma(sigma: int, p: int | None = None, steps: Sequence[Step] = ()) -> BoundCertificate:
    """tu_p >= |sigma|/2 for every p (so also for tu)."""
    if sigma % 2:
        raise ValueError("knot signatures are even")
    chain = list(steps) + [Step("sigma_lower_bound", {"sigma": sigma}, abs(sigma) // 2,
                                "signature bound for generalized crossing changes (cited rule)")]
    if p is None:
        return BoundCertificate("tu", None, "lower", abs(sigma) // 2, tuple(chain), PROOF)
    return BoundCertificate("tu_p", p, "lower", abs(sigma) // 2, tuple(chain), PROOF)


def lower_from_alexander(alexander_text: str) -> BoundCertificate:
    """Delta != 1 means at least one move is needed to reach Delta = 1."""
    from .laurent import ONE, parse_poly

    val = 0 if parse_poly(alexander_text) == ONE else 1
    return BoundCertificate("tu_a", None, "lower", val,
                            (Step("alexander_nontrivial", {"alexander": alexander_text}, val),), PROOF)


# -- witnesses ----------------------------------------------------------------

def apply_twists(braid, regions) -> Any:
    """Insert all twists (positions refer to the original word), then
    free-reduce once."""
    from .knotio import BraidWord, free_reduce, twist_word

    letters = list(braid.letters)
    for r in sorted(regions, key=lambda r: -(len(letters) if r.position is None else r.position)):
        hi = r.first + 2 * r.k - 1
        if hi > braid.strand_count:
            raise ValueError(f"twist interval {r.strand_interval} exceeds {braid.strand_count} strands")
        pos = len(braid.letters) if r.position is None else r.position
        letters[pos:pos] = twist_word(r)
    return free_reduce(BraidWord(braid.strand_count, tuple(letters)))


def _witness_checks(result, jones_budget: int | None, torus: tuple[int, int] | None = None) -> dict:
    """Alexander (always) and Jones (under budget) comparison of the replay
    result with the unknot, or with the torus knot ``torus``."""
    from .classical import alexander_of, torus_alexander
    from .jones import BudgetExceeded, jones
    from .laurent import ONE

    delta = alexander_of(result)
    if torus is None:
        checks = {"alexander_trivial": delta == ONE}
    else:
        checks = {"alexander_torus": delta.equals_up_to_unit(torus_alexander(*torus))}
    n = len(result.letters)
    key = "jones_trivial" if torus is None else "jones_torus"
    if jones_budget is not None and n > jones_budget:
        checks[key] = None
        checks["jones_note"] = f"skipped: {n} crossings over budget {jones_budget}"
        return checks
    try:
        v = jones(result, budget=jones_budget)
    except BudgetExceeded as exc:
        checks[key] = None
        checks["jones_note"] = f"skipped: {exc}"
        return checks
    if torus is None:
        checks[key] = v == ONE
    else:
        from .knotio import BraidWord

        p, q = torus
        checks[key] = v == jones(BraidWord(p, tuple(range(1, p)) * q))
    return checks


def upper_from_witness(braid, regions, jones_budget: int | None = 400,
                       torus: tuple[int, int] | None = None) -> list[BoundCertificate]:
    """Replay a twist sequence.

    Without ``torus``: if the result has Delta = 1 this proves
    tu_a <= len(regions); if Jones is also trivial (when it could be
    computed) it is evidence for tu_p <= len(regions), p the widest twist.

    With ``torus = (p, q)`` the result should be the torus knot T(p, q),
    which (p-1)(q-1)/2 crossing changes unknot; the evidence-grade bound is
    then len(regions) + (p-1)(q-1)/2.  Raises if the Alexander check fails.
    """
    regions = list(regions)
    result = apply_twists(braid, regions)
    checks = _witness_checks(result, jones_budget, torus)
    inputs = {
        "braid": braid.to_text(),
        "twists": [[r.first, r.k, r.sign, r.position] for r in regions],
        "result": result.to_text(),
        "checks": checks,
        "jones_budget": jones_budget,
    }
    count = len(regions)
    width = max((r.k for r in regions), default=1)
    if torus is not None:
        if not checks["alexander_torus"]:
            raise ValueError(f"witness replay does not reach the Alexander polynomial of T{torus}")
        if checks.get("jones_torus") is False:
            raise ValueError(f"witness replay has the wrong Jones polynomial for T{torus}")
        inputs["torus"] = list(torus)
        extra = tau_torus(*torus)
        return [BoundCertificate("tu_p", width, "upper", count + extra,
                                 (Step("witness_torus", inputs, count + extra,
                                       "result matches T(p,q) in Alexander and Jones; "
                                       "u(T(p,q)) = (p-1)(q-1)/2 is cited"),),
                                 EVIDENCE)]
    if not checks["alexander_trivial"]:
        raise ValueError("witness replay does not reach an Alexander-trivial knot")
    certs = [BoundCertificate("tu_a", None, "upper", count,
                              (Step("witness_alexander", inputs, count),), PROOF)]
    if checks.get("jones_trivial") is False:
        return certs
    certs.append(BoundCertificate("tu_p", width, "upper", count,
                                  (Step("witness_unknot", inputs, count,
                                        "trivial Alexander and Jones polynomials; not a proof of unknotting"),),
                                  EVIDENCE))
    return certs


# -- replay -----------------------------------------------------------------

def _replay_step(step: Step, deep: bool) -> int:
    i = step.inputs
    r = step.rule
    if r == "tau_fact":
        return TauFact(i["id"], i["tau"], i.get("epsilon"), i.get("genus"), i.get("source", "")).tau
    if r == "tau_torus":
        return tau_torus(i["p"], i["q"])
    if r == "tau_cable":
        return tau_cable(TauFact("K", i["tau"], i["epsilon"]), i["p"], i["q"]).tau
    if r == "tau_whitehead":
        return tau_whitehead(TauFact("K", i["tau"]), i["twists"]).tau
    if r == "tau_connected_sum":
        return sum(i["taus"])
    if r == "tau_lower_bound":
        return abs(i["tau"])
    if r == "sigma_lower_bound":
        return abs(i["sigma"]) // 2
    if r == "signature":
        if deep:
            from .classical import seifert_matrix, signature
            from .knotio import parse_knot

            return signature(seifert_matrix(parse_knot(i["knot"])))
        return i["sigma"]
    if r == "signature_additivity":
        return sum(i["sigmas"])
    if r == "miyazawa":
        res = miyazawa_test(i["v1"], i["a4"], i["sigma"], i["det"])
        if not res.obstructed:
            raise ValueError("Miyazawa congruence is not violated")
        return 2
    if r == "alexander_nontrivial":
        from .laurent import ONE, parse_poly

        return 0 if parse_poly(i["alexander"]) == ONE else 1
    if r == "alexander_trivial_presentation":
        return 0
    if r in ("witness_alexander", "witness_unknot", "witness_torus"):
        torus = tuple(i["torus"]) if r == "witness_torus" else None
        if deep:
            from .knotio import TwistRegion, parse_braid

            b = parse_braid(i["braid"])
            regions = [TwistRegion(*t) for t in i["twists"]]
            result = apply_twists(b, regions)
            if result.to_text() != i["result"]:
                raise ValueError("witness replay produced a different braid")
            checks = _witness_checks(result, i.get("jones_budget"), torus)
            if checks != i["checks"]:
                raise ValueError("witness replay checks differ from the record")
            if not checks.get("alexander_trivial", checks.get("alexander_torus")):
                raise ValueError("witness replay fails the Alexander check")
            if checks.get("jones_trivial", checks.get("jones_torus")) is False:
                raise ValueError("witness replay fails the Jones check")
        return len(i["twists"]) + (tau_torus(*torus) if torus else 0)
    if r == "blanchfield_witness":
        from .blanchfield import CongruenceWitness

        w = CongruenceWitness(tuple(map(tuple, i["P"])), tuple(i["diagonal"]))
        if not w.verify(i["A_at_1"]):
            raise ValueError("congruence witness does not verify")
        return i["size"]
    raise ValueError(f"unknown rule {r!r}")


def replay(cert: BoundCertificate, deep: bool = True) -> int:
    """Recompute every step; the last step's value must equal the bound."""
    value = None
    for step in cert.derivation:
        got = _replay_step(step, deep)
        if got != step.value:
            raise ValueError(f"step {step.rule} replays to {got}, recorded {step.value}")
        value = got
    if value != cert.value:
        raise ValueError(f"derivation ends at {value}, certificate claims {cert.value}")
    return value


# -- consolidation ------------------------------------------------------------

@dataclass
class Consolidation:
    intervals: dict[str, tuple[int, int | None]]
    grades: dict[str, dict[str, str]]
    gaps: list[dict]
    max_p: int

    def lower(self, name: str) -> int:
        return self.intervals[name][0]

    def upper(self, name: str) -> int | None:
        return self.intervals[name][1]

    def exact(self, name: str) -> int | None:
        lo, hi = self.intervals[name]
        return lo if hi == lo else None

    def to_json(self) -> dict:
        return {
            "intervals": {k: {"lower": lo, "upper": hi, **self.grades.get(k, {})}
                          for k, (lo, hi) in self.intervals.items()},
            "gaps": self.gaps,
        }


def consolidate(certs: Iterable[BoundCertificate], max_p: int | None = None) -> Consolidation:
    certs = list(certs)
    ps = [c.p for c in certs if c.p is not None]
    top = max(ps + [max_p or 1, 1])
    names = ["u", "tu", "u_a", "tu_a"] + [f"tu_{p}" for p in range(1, top + 1)]
    lo = {n: 0 for n in names}
    hi: dict[str, int | None] = {n: None for n in names}
    lo_grade = {n: PROOF for n in names}
    hi_grade: dict[str, str | None] = {n: None for n in names}
    for c in certs:
        n = c.name
        if c.kind == "lower" and c.value > lo[n]:
            lo[n], lo_grade[n] = c.value, c.grade
        if c.kind == "upper" and (hi[n] is None or c.value < hi[n]
                                  or (c.value == hi[n] and c.grade == PROOF)):
            hi[n], hi_grade[n] = c.value, c.grade
    # X <= Y relations
    le = [("tu_a", "tu"), ("u_a", "tu_a"), ("tu_a", "u_a"), ("tu", f"tu_{top}"),
          ("tu_1", "u"), ("u", "tu_1")]
    le += [(f"tu_{p + 1}", f"tu_{p}") for p in range(1, top)]
    changed = True
    while changed:
        changed = False
        for x, y in le:
            if lo[x] > lo[y]:
                lo[y], lo_grade[y] = lo[x], lo_grade[x]
                changed = True
            if hi[y] is not None and (hi[x] is None or hi[y] < hi[x]):
                hi[x], hi_grade[x] = hi[y], hi_grade[y]
                changed = True
    for n in names:
        if hi[n] is not None and lo[n] > hi[n]:
            raise ContradictionError(f"{n}: lower bound {lo[n]} exceeds upper bound {hi[n]}")
    gaps = []
    for p in range(1, top + 1):
        h = hi[f"tu_{p}"]
        if h is not None and p > 1 and any(c.p == p for c in certs):
            gaps.append({
                "statement": f"u - tu_{p} >= {lo['u'] - h}",
                "p": p,
                "value": lo["u"] - h,
                "grades": f"lower:{lo_grade['u']},upper:{hi_grade[f'tu_{p}']}",
            })
    grades = {n: {"lower_grade": lo_grade[n], "upper_grade": hi_grade[n]} for n in names}
    return Consolidation({n: (lo[n], hi[n]) for n in names}, grades, gaps, top)
