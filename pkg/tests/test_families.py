import pytest

from untwist.bounds import TauFact, replay, tau_cable, tau_connected_sum, tau_whitehead
from untwist.classical import alexander_of, knot_determinant, seifert_matrix
from untwist.families import (
    BASES,
    GAP_COLUMNS,
    BaseKnot,
    FamilySpec,
    build_family,
    whitehead_double,
    whitehead_double_diagram,
)
from untwist.jones import jones
from untwist.knotio import BraidWord, braid_closure_to_pd, parse_braid
from untwist.laurent import ONE

TREFOIL = BASES["trefoil"]


def run(family, p, q, base=TREFOIL, **kw):
    res = build_family(FamilySpec(family, base, p, q, **kw))
    assert res.braid.is_knot()
    braid_closure_to_pd(res.braid)
    for c in res.certificates:
        assert replay(c) == c.value
    return res


def test_whitehead_double_of_unknot():
    d = whitehead_double(BraidWord(1, ()))
    assert alexander_of(d) == ONE
    assert jones(d) == ONE


def test_whitehead_double_of_trefoil():
    w = whitehead_double_diagram(TREFOIL.braid)
    assert all(w.diagram.sign(c) == 1 for c in w.clasp)
    assert alexander_of(w.diagram) == ONE
    assert knot_determinant(seifert_matrix(w.diagram)) == 1
    # nontrivial despite the trivial Alexander polynomial
    assert jones(w.diagram) != ONE


@pytest.mark.parametrize("error", [1, -1, 2])
def test_wrong_framing_is_caught(error):
    with pytest.raises(ArithmeticError):
        whitehead_double_diagram(TREFOIL.braid, framing_error=error)


def test_cable_family():
    res = run("cable", 3, 1)
    assert res.lower_u >= 3 and res.upper_tu == 1 and res.gap >= 2
    assert res.consolidation.lower("tu") >= 1
    assert run("cable", 2, 1).gap >= 1
    assert list(res.gap_row()) == list(GAP_COLUMNS)


def test_cable_with_torus_remainder():
    res = run("cable", 2, 3)
    assert res.lower_u == 3 and res.upper_tu == 2


def test_cable_of_unknot_is_vacuous():
    res = run("cable", 3, 1, base=BASES["unknot"])
    assert res.gap is None and res.lower_u == 0 and not res.consolidation.gaps


def test_missing_witness():
    base = BaseKnot("5_1", parse_braid("2: 1 1 1 1 1"), None, TauFact("5_1", 2, 1, 2))
    with pytest.raises(ValueError):
        build_family(FamilySpec("cable", base, 2, 1))


def test_J_family():
    res = run("Jpq", 3, 2)
    assert res.lower_u >= 6 and res.upper_tu <= 3 and res.gap >= 3
    odd = run("Jpq", 3, 3)
    assert odd.consolidation.exact("tu_3") == 3
    one = run("Jpq", 1, 1)
    assert one.consolidation.exact("u") == 1


def test_J_family_tau_grouping():
    res = run("Jpq", 3, 2)
    cable = tau_cable(TREFOIL.tau, 2, 1)
    nested = tau_connected_sum([cable, tau_connected_sum([cable, cable])])
    assert res.tau.tau == nested.tau == 3 * cable.tau


def test_S_family():
    res = run("Spq", 2, 2)
    assert res.lower_u >= 4 and res.upper_tu <= 2 and res.gap >= 2
    assert res.tau.tau == 4
    assert any("slice" in n for n in res.notes)
    single = run("Spq", 1, 1)
    assert single.tau.tau == 1


def test_S_family_tau_order():
    # summing doubles first, then reading off the cable formula per summand
    d = tau_whitehead(TREFOIL.tau)
    for p, q in ((1, 2), (2, 2), (3, 2)):
        assert tau_connected_sum([tau_cable(d, q, 1)] * p).tau == p * tau_cable(d, q, 1).tau == p * q


def test_S_family_empty_sum():
    res = run("Spq", 0, 2)
    assert res.braid == BraidWord(1, ()) and res.lower_u == 0


def test_S_family_needs_tau():
    with pytest.raises(ValueError):
        build_family(FamilySpec("Spq", BASES["figure-eight"], 1, 2))


def test_spec_validation():
    with pytest.raises(ValueError):
        FamilySpec("other", TREFOIL, 1, 1)
    with pytest.raises(ValueError):
        FamilySpec("cable", TREFOIL, 0, 1)
