import pytest
from hypothesis import given, settings

from oracles import brute_bracket
from strategies import knot_braids
from untwist.classical import classical_invariants
from untwist.corpus import BRAIDS, PDS, corpus_knot
from untwist.jones import BudgetExceeded, bracket_states, jones, kauffman_bracket, miyazawa_left_side
from untwist.knotio import BraidWord, braid_closure_to_pd, parse_braid
from untwist.laurent import ONE, LaurentPoly, evaluate, parse_poly


@pytest.mark.parametrize("name", list(BRAIDS))
def test_bracket_matches_state_enumeration(name):
    d = braid_closure_to_pd(corpus_knot(name))
    assert kauffman_bracket(d) == brute_bracket(d)


@pytest.mark.parametrize("name", list(PDS))
def test_pd_bracket_matches_state_enumeration(name):
    d = corpus_knot(name, "pd")
    assert kauffman_bracket(d) == brute_bracket(d)


@settings(max_examples=40, deadline=None)
@given(knot_braids(max_strands=4, max_len=10))
def test_random_bracket_and_jones(b):
    d = braid_closure_to_pd(b)
    assert kauffman_bracket(d) == brute_bracket(d)
    v = jones(b)
    assert evaluate(v, 1) == 1
    # |V(-1)| is the determinant
    assert abs(evaluate(v, -1)) == classical_invariants(b).determinant


def test_bracket_states_sum():
    d = braid_closure_to_pd(parse_braid("2: 1 1 1"))
    total = LaurentPoly()
    for s in bracket_states(d):
        total = total + s.weight
    assert total == kauffman_bracket(d)


def test_known_values():
    assert jones(parse_braid("2: 1 1 1")) == parse_poly("t + t^3 - t^4")
    assert jones(parse_braid("2: -1 -1 -1")) == parse_poly("t^-1 + t^-3 - t^-4")
    assert jones(parse_braid("3: 1 -2 1 -2")) == parse_poly("t^-2 - t^-1 + 1 - t + t^2")
    assert jones(BraidWord(1, ())) == ONE


def test_miyazawa_left_side():
    assert miyazawa_left_side(jones(parse_braid("2: 1 1 1"))) == 8
    assert miyazawa_left_side(ONE) == 0


def test_budget():
    b = parse_braid("2: 1 1 1 1 1 1 1")
    with pytest.raises(BudgetExceeded):
        jones(b, budget=5)
    with pytest.raises(BudgetExceeded):
        jones(b, max_states=1)
    assert jones(b, budget=7) == jones(b)
