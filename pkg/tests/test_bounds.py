import json
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from untwist.bounds import (
    EVIDENCE,
    PROOF,
    BoundCertificate,
    ContradictionError,
    Step,
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
    tau_connected_sum,
    tau_torus,
    tau_torus_fact,
    tau_whitehead,
    upper_from_witness,
)
from untwist.knotio import TwistRegion, parse_braid

RIGHT = TauFact("T(2,3)", 1, 1, 1)
LEFT = TauFact("T(2,-3)", -1, -1, 1)


def test_tau_fact_validation():
    with pytest.raises(ValueError):
        TauFact("k", 1, 0)
    with pytest.raises(ValueError):
        TauFact("k", 2, None, 1)
    with pytest.raises(ValueError):
        TauFact("k", 1, -1, 1)
    with pytest.raises(ValueError):
        TauFact("k", 0, 1, 0)
    # |tau| = genus fixes epsilon
    assert TauFact("k", -2, None, 2).epsilon == -1
    assert TauFact("k", 0, None, 0).epsilon == 0


def test_load_tau_facts(tmp_path):
    p = tmp_path / "facts.jsonl"
    p.write_text('# comment\n{"id": "trefoil", "tau": 1, "epsilon": 1, "genus": 1, "source": "table"}\n'
                 '{"id": "8_20", "tau": 0, "epsilon": null}\n')
    facts = load_tau_facts(p)
    assert facts["trefoil"] == TauFact("trefoil", 1, 1, 1, "table")
    assert facts["8_20"].epsilon is None
    p.write_text('{"tau": 1}\n')
    with pytest.raises(ValueError):
        load_tau_facts(p)


def test_torus_tau():
    assert tau_torus(2, 3) == 1 and tau_torus(3, 4) == 3 and tau_torus(5, 7) == 12
    assert tau_torus_fact(3, 5).epsilon == 1
    with pytest.raises(ValueError):
        tau_torus(-2, 3)


def test_cable_formula_cases():
    assert tau_cable(RIGHT, 2, 1).tau == 2
    assert tau_cable(RIGHT, 3, 2).tau == 4
    assert tau_cable(LEFT, 2, 1).tau == -1
    same = tau_cable(RIGHT, 1, 7)
    assert (same.tau, same.epsilon, same.genus) == (1, 1, 1)
    unknot = TauFact("U", 0, 0, 0)
    for p, q in ((2, 3), (3, 4), (4, 5)):
        assert tau_cable(unknot, p, q).tau == tau_torus(p, q)
    assert tau_cable(unknot, 2, -3).tau == -1
    with pytest.raises(ValueError):
        tau_cable(TauFact("k", 1), 2, 1)


@given(st.integers(2, 6), st.integers(-9, 9).filter(bool))
def test_cable_formula_mirror_symmetry(p, q):
    if gcd(p, q) != 1:
        with pytest.raises(ValueError):
            tau_cable(RIGHT, p, q)
        return
    assert tau_cable(LEFT, p, -q).tau == -tau_cable(RIGHT, p, q).tau


def test_whitehead_and_sums():
    assert tau_whitehead(RIGHT, 0).tau == 1
    assert tau_whitehead(RIGHT, 2).tau == 0
    assert tau_whitehead(LEFT, 0).tau == 0
    d = tau_whitehead(RIGHT, 0)
    assert d.epsilon == 1
    parts = [tau_cable(d, 3, 1)] * 2
    assert tau_connected_sum(parts).tau == 6
    assert tau_connected_sum([]).tau == 0
    # grouping does not matter
    left = tau_connected_sum([tau_connected_sum(parts), parts[0]])
    right = tau_connected_sum([parts[0], tau_connected_sum(parts)])
    assert left.tau == right.tau == 9


def test_miyazawa():
    r = miyazawa_test(8, 0, 2, 3)
    assert (r.lhs, r.rhs, r.verdict) == (8, -8, "obstructed")
    assert r.rhs % 48 == 40
    assert miyazawa_test(8, 0, -2, 3).verdict == "consistent"
    assert miyazawa_test(0, 0, 0, 5).verdict == "inapplicable"
    with pytest.raises(ValueError):
        miyazawa_test(0, 0, 2, 4)
    cert = miyazawa_certificate(8, 0, 2, 3)
    assert cert.value == 2 and cert.target == "u" and replay(cert) == 2
    assert miyazawa_certificate(8, 0, -2, 3) is None


def _roundtrip(cert):
    return BoundCertificate.from_json(json.loads(json.dumps(cert.to_json(), sort_keys=True)))


def test_certificate_round_trip_and_replay():
    certs = [
        lower_u_from_tau(tau_cable(RIGHT, 3, 1)),
        lower_tu_from_sigma(-4, 2),
        lower_from_alexander("t^-1 - 1 + t"),
        miyazawa_certificate(8, 0, 2, 3),
    ]
    certs += upper_from_witness(parse_braid("2: 1 1 1"), [TwistRegion(1, 1, -1, 0)])
    for c in certs:
        c2 = _roundtrip(c)
        assert c2 == c
        assert replay(c2) == replay(c) == c.value
        assert json.dumps(c.to_json(), sort_keys=True) == json.dumps(c2.to_json(), sort_keys=True)
    assert {c.grade for c in certs} == {PROOF, EVIDENCE}


def test_tampered_certificate_fails_replay():
    c = lower_u_from_tau(tau_cable(RIGHT, 3, 1))
    d = c.to_json()
    d["value"] = 4
    d["derivation"][-1]["value"] = 4
    with pytest.raises(ValueError):
        replay(BoundCertificate.from_json(d))
    w = upper_from_witness(parse_braid("2: 1 1 1"), [TwistRegion(1, 1, -1, 0)])[0].to_json()
    w["derivation"][0]["inputs"]["twists"] = [[1, 1, 1, 0]]
    with pytest.raises(ValueError):
        replay(BoundCertificate.from_json(w))


def test_witness_must_unknot():
    with pytest.raises(ValueError):
        upper_from_witness(parse_braid("2: 1 1 1"), [TwistRegion(1, 1, 1, 0)])


def test_witness_torus_remainder():
    b = parse_braid("2: 1 1 1 1 1 1 1")
    certs = upper_from_witness(b, [TwistRegion(1, 1, -1, 0)], torus=(2, 5))
    assert len(certs) == 1 and certs[0].value == 1 + 2 and certs[0].grade == EVIDENCE
    assert replay(certs[0]) == 3


def _cert(name, kind, value):
    step = Step("sigma_lower_bound", {"sigma": 2 * value}, value)
    if name.startswith("tu_") and name != "tu_a":
        return BoundCertificate("tu_p", int(name[3:]), kind, value, (step,))
    return BoundCertificate(name, None, kind, value, (step,))


@st.composite
def truth_and_certs(draw):
    top = draw(st.integers(1, 4))
    # u = tu_1 >= tu_2 >= ... >= tu_top >= tu >= tu_a = u_a
    vals = sorted(draw(st.lists(st.integers(0, 9), min_size=top + 2, max_size=top + 2)), reverse=True)
    truth = {f"tu_{p}": vals[p - 1] for p in range(1, top + 1)}
    truth["u"] = truth["tu_1"]
    truth["tu"], truth["tu_a"] = vals[top], vals[top + 1]
    truth["u_a"] = truth["tu_a"]
    certs = []
    for _ in range(draw(st.integers(0, 8))):
        name = draw(st.sampled_from(sorted(truth)))
        if draw(st.booleans()):
            certs.append(_cert(name, "lower", draw(st.integers(0, truth[name]))))
        else:
            certs.append(_cert(name, "upper", truth[name] + draw(st.integers(0, 3))))
    return top, truth, certs


@settings(max_examples=200)
@given(truth_and_certs())
def test_consolidation_intervals_are_sound_and_monotone(data):
    top, truth, certs = data
    cons = consolidate(certs, top)
    for name, value in truth.items():
        lo, hi = cons.intervals[name]
        assert lo <= value and (hi is None or value <= hi)
    chain = ["tu_a", "tu"] + [f"tu_{p}" for p in range(top, 0, -1)]
    for small, big in zip(chain, chain[1:]):
        assert cons.lower(small) <= cons.lower(big)
        if cons.upper(small) is not None and cons.upper(big) is not None:
            assert cons.upper(small) <= cons.upper(big)
    assert cons.intervals["u"] == cons.intervals["tu_1"]
    assert cons.intervals["u_a"] == cons.intervals["tu_a"]
    # order of certificates does not matter
    assert consolidate(list(reversed(certs)), top).intervals == cons.intervals


def test_consolidation_contradiction():
    with pytest.raises(ContradictionError):
        consolidate([_cert("u", "upper", 1), _cert("tu_a", "lower", 2)])
    with pytest.raises(ContradictionError):
        consolidate([_cert("tu_2", "lower", 3), _cert("tu_1", "upper", 2)])


def test_consolidation_gap():
    cons = consolidate([_cert("u", "lower", 3), _cert("tu_3", "upper", 1)], 3)
    assert cons.gaps == [{"statement": "u - tu_3 >= 2", "p": 3, "value": 2, "grades": "lower:proof,upper:proof"}]
    assert cons.upper("tu") == 1
