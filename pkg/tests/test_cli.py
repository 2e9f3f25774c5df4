import io
import json

import pytest

from untwist.cli import EXIT_BUDGET, EXIT_CONTRADICTION, EXIT_INPUT, EXIT_OK, run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def test_literal_obstruction():
    code, out = call("obstruct-u1", "--literal", "8,0,2,3")
    r = json.loads(out)
    assert code == EXIT_OK
    assert (r["lhs"], r["rhs"], r["rhs_mod_48"], r["verdict"]) == (8, -8, 40, "obstructed")
    assert r["certificates"][0]["value"] == 2


def test_obstruction_from_diagram():
    code, out = call("obstruct-u1", "2: 1 1 1")
    assert code == EXIT_OK and json.loads(out)["verdict"] == "consistent"
    code, out = call("obstruct-u1", "4_1")
    assert code == EXIT_OK and json.loads(out)["verdict"] == "inapplicable"


def test_bad_literal():
    assert call("obstruct-u1", "--literal", "8,0,2")[0] == EXIT_INPUT
    assert call("obstruct-u1")[0] == EXIT_INPUT


def test_invariants_trefoil():
    code, out = call("invariants", "2: 1 1 1")
    r = json.loads(out)
    assert code == EXIT_OK
    assert r["determinant"] == 3 and abs(r["signature"]) == 2
    assert r["alexander"] == "t^-1 - 1 + t" and r["conway"] == "1 + z^2"
    assert r["jones_derivative_at_minus1"] == 8
    assert r["blanchfield"]["det_matches_alexander"]
    assert r["intervals"]["tu"]["lower"] == 1


def test_invariants_unknot():
    code, out = call("invariants", "1: ")
    r = json.loads(out)
    assert code == EXIT_OK
    assert (r["alexander"], r["jones"], r["determinant"], r["signature"]) == ("1", "1", 1, 0)
    assert r["intervals"]["u"]["lower"] == 0


def test_invariants_from_file_and_pd(tmp_path):
    p = tmp_path / "k.pd"
    p.write_text("X[4,2,5,1], X[8,6,1,5], X[6,3,7,4], X[2,7,3,8]\n")
    code, out = call("invariants", str(p), "--format", "pd")
    assert code == EXIT_OK and json.loads(out)["determinant"] == 5


def test_invariants_text_and_csv():
    code, out = call("invariants", "3_1", "--out", "text")
    assert code == EXIT_OK and "determinant: 3" in out and "certificate:" in out
    code, out = call("invariants", "3_1", "4_1", "--out", "csv")
    lines = out.splitlines()
    assert code == EXIT_OK and len(lines) == 3 and "determinant" in lines[0]


def test_malformed_input():
    assert call("invariants", "X[1,2,3]")[0] == EXIT_INPUT
    assert call("invariants", "3: 1 4")[0] == EXIT_INPUT
    assert call("invariants", "2: 1 1")[0] == EXIT_INPUT  # a link
    assert call("nonsense")[0] == EXIT_INPUT
    assert call("invariants", "3_1", "--budget", "0")[0] == EXIT_INPUT


def test_budget_exceeded():
    assert call("invariants", "7_1", "--budget", "5")[0] == EXIT_BUDGET


def test_family_rows():
    code, out = call("family", "cable", "--base", "trefoil", "-p", "3", "-q", "1", "--out", "csv")
    header, row = out.splitlines()
    assert code == EXIT_OK
    assert header == "family,p,q,lower_u,upper_tu_p,gap,grades"
    assert row == "cable,3,1,3,1,2,u:proof;tu_3:evidence"
    code, out = call("family", "Jpq", "-p", "3", "-q", "3")
    r = json.loads(out)
    assert r["intervals"]["tu_3"]["lower"] == r["intervals"]["tu_3"]["upper"] == 3


def test_family_replay_flag():
    code, out = call("family", "Jpq", "-p", "2", "-q", "2", "--replay")
    assert code == EXIT_OK and json.loads(out)["row"]["gap"] == 2


def test_tau_facts_file(tmp_path):
    facts = tmp_path / "facts.jsonl"
    facts.write_text('{"id": "figure-eight", "tau": 0, "epsilon": 0, "genus": 1}\n')
    code, out = call("family", "cable", "--base", "figure-eight", "-p", "2", "-q", "1", "--tau-facts", str(facts))
    r = json.loads(out)
    assert code == EXIT_OK and r["tau"]["tau"] == 0
    # a false fact is caught by the consolidation
    facts.write_text('{"id": "trefoil", "tau": 3, "epsilon": 1}\n')
    assert call("family", "Jpq", "-p", "1", "-q", "1", "--tau-facts", str(facts))[0] == EXIT_CONTRADICTION
    assert call("family", "Jpq", "-p", "1", "-q", "1", "--tau-facts", str(tmp_path / "missing"))[0] == EXIT_INPUT


def test_deterministic_output():
    a = call("family", "Jpq", "-p", "2", "-q", "3")
    b = call("family", "Jpq", "-p", "2", "-q", "3")
    assert a == b
    assert call("invariants", "5_2") == call("invariants", "5_2")


@pytest.mark.parametrize("argv", [("family", "Spq", "--base", "figure-eight", "-p", "1", "-q", "2")])
def test_missing_tau_is_input_error(argv):
    assert call(*argv)[0] == EXIT_INPUT
