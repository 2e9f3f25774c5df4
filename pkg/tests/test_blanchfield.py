import itertools

import pytest
from hypothesis import given, settings

from strategies import knot_braids
from untwist.blanchfield import (
    CongruenceWitness,
    blanchfield_matrix,
    diagonal_pm1_witness,
    n_upper_bound,
    pairing,
)
from untwist.bounds import replay
from untwist.classical import _rational_det, alexander_of, seifert_matrix
from untwist.corpus import BRAIDS, corpus_knot
from untwist.laurent import LaurentPoly


def block_identity(bm):
    """A(1) = [[B, -I], [-I, 0]]."""
    k = bm.k
    want = [[0] * (2 * k) for _ in range(2 * k)]
    for i in range(k):
        for j in range(k):
            want[i][j] = bm.B[i][j]
        want[i][k + i] = -1
        want[k + i][i] = -1
    return bm.at_one() == want


def check_properties(knot):
    bm = blanchfield_matrix(knot)
    assert bm.A.entries_in_lambda()
    assert bm.A.is_hermitian()
    assert block_identity(bm)
    assert _rational_det(bm.A.at(1)) == (-1) ** bm.k
    assert bm.det().equals_up_to_unit(alexander_of(knot))


@pytest.mark.parametrize("name", [n for n in BRAIDS if n != "0_1"])
def test_corpus_properties(name):
    check_properties(corpus_knot(name))


@settings(max_examples=25, deadline=None)
@given(knot_braids(max_strands=4, max_len=9))
def test_random_properties(b):
    if not seifert_matrix(b):
        return
    check_properties(b)


def test_pairing_is_hermitian_and_kills_image():
    bm = blanchfield_matrix(corpus_knot("5_2"))
    n = bm.size
    t = LaurentPoly.monomial(1)
    vecs = [[1, 0], [0, 1], [t, 1 - t], [2, t * t]]
    vecs = [v + [0] * (n - 2) for v in vecs]
    for a, b in itertools.product(vecs, repeat=2):
        ab, ba = pairing(bm, a, b), pairing(bm, b, a)
        assert ab == ba.involute()
    # vectors in the image of A pair to zero
    for j in range(n):
        col = [bm.A[i, j] for i in range(n)]
        for a in vecs:
            assert pairing(bm, a, col).is_zero()


def test_pairing_nondegenerate_on_trefoil():
    bm = blanchfield_matrix(corpus_knot("3_1"))
    values = [pairing(bm, [1, 0], [1, 0]), pairing(bm, [0, 1], [0, 1]), pairing(bm, [1, 0], [0, 1])]
    assert not all(v.is_zero() for v in values)


def test_diagonal_witness():
    m = [[2, 1], [1, 1]]
    w = diagonal_pm1_witness(m)
    assert w is not None and w.verify(m)
    assert sorted(w.diagonal) == [1, 1]
    # an even unimodular form is never congruent to a diagonal +-1 form
    assert diagonal_pm1_witness([[0, -1], [-1, 0]]) is None


def test_witness_verify_rejects_wrong_data():
    w = CongruenceWitness(((1, 0), (0, 1)), (1, 1))
    assert not w.verify([[2, 1], [1, 1]])
    assert w.verify([[1, 0], [0, 1]])


@pytest.mark.parametrize("name", ["3_1", "4_1", "5_1", "5_2", "6_1"])
def test_n_upper_bound_certificates_replay(name):
    cert = n_upper_bound(corpus_knot(name))
    assert cert is not None and cert.target == "tu_a" and cert.kind == "upper"
    assert replay(cert) == cert.value
    assert cert.value >= 1


def test_n_upper_bound_unknot():
    cert = n_upper_bound(v=[])
    assert cert.value == 0

