import pytest

import oracles
from conftest import kh, word
from khtorsion.braid import BraidWord
from khtorsion.homology import (
    BigradedGroup,
    FieldTable,
    LaurentPoly,
    homology_of_word,
    jones_polynomial,
    les_consistency,
    mirror_duality_check,
    tables_equal,
    torsion_primes,
    uct_check,
)
from khtorsion.linalg import GF, QQ, ZZ


def as_oracle(z: BigradedGroup) -> dict:
    return {k: (r, sorted(t)) for k, (r, t) in z.table.items() if r or t}


def test_unknot():
    assert kh("", 1, "Q").table == {(0, 1): 1, (0, -1): 1}
    assert as_oracle(kh("", 1)) == {(0, 1): (1, []), (0, -1): (1, [])}


def test_reidemeister_one():
    assert kh("1", 2, "Q") == kh("", 1, "Q")
    assert kh("-1", 2, "Q") == kh("", 1, "Q")


def test_delta_table():
    assert kh("D", 3, "Q").table == {(0, 0): 1, (0, -2): 1, (-2, -4): 1, (-2, -6): 1}


def test_trefoil_frozen_table():
    assert as_oracle(kh("1 2 1 2")) == oracles.TREFOIL_Z


@pytest.mark.parametrize(
    "text, strands",
    [("1 2 1 2", 3), ("1 -2 1 -2", 3), ("1 1", 2), ("-1 -1 -1", 2), ("D 1", 3), ("1 2 -1 2 2", 3), ("1 -2 3 2", 4)],
)
def test_integral_homology_against_dense_cube(text, strands):
    w = word(text, strands)
    assert as_oracle(homology_of_word(w, ZZ)) == oracles.integral_homology(w.letters, strands)


@pytest.mark.parametrize("text, strands", [("", 1), ("", 2), ("D", 3), ("1 2 1 2", 3), ("1 -2 1 -2", 3)])
def test_jones_against_bracket(text, strands):
    w = word(text, strands)
    assert jones_polynomial(kh(text, strands, "Q")).coeffs == oracles.jones_q(w.letters, strands)


def test_jones_examples():
    assert jones_polynomial(kh("", 1, "Q")) == LaurentPoly({1: 1, -1: 1})
    assert jones_polynomial(kh("", 2, "Q")) == LaurentPoly({2: 1, 0: 2, -2: 1})
    assert str(jones_polynomial(kh("D"))) == "1+q^-2+q^-4+q^-6"


def test_uct_trefoil():
    z = kh("1 2 1 2")
    f2 = kh("1 2 1 2", 3, "Z2")
    assert uct_check(z, f2).ok
    assert f2[(-2, -7)] == 1 and f2[(-3, -7)] == 1
    f3 = kh("1 2 1 2", 3, "Z3")
    assert f3 == z.free_table()
    assert uct_check(z, kh("", 1, "Z2")).ok is False


def test_uct_unknot():
    assert uct_check(kh("", 1), kh("", 1, "Z2")).ok


@pytest.mark.parametrize("field", [QQ, GF(2), GF(3)])
@pytest.mark.parametrize("text, strands", [("1", 2), ("1 2 1 2", 3), ("D 2 -1", 3)])
def test_mirror_duality(text, strands, field):
    assert mirror_duality_check(word(text, strands), field).ok


def test_mirror_trefoil_reflects():
    left = kh("1 2 1 2", 3, "Q").table
    right = kh("-1 -2 -1 -2", 3, "Q").table
    assert right == {(-i, -j): v for (i, j), v in left.items()}


@pytest.mark.parametrize("field", [QQ, GF(2)])
@pytest.mark.parametrize(
    "text, strands, r", [("D", 3, 2), ("1", 2, 0), ("D^2 1 2", 3, 7), ("1 -2 1 -2", 3, 1), ("-1 -1 2", 3, 0)]
)
def test_les(text, strands, r, field):
    rep = les_consistency(word(text, strands), r, field)
    assert rep.ok, rep.violations


def test_les_delta_shift_constant():
    assert les_consistency(word("D"), 2, QQ).details["c"] == -2


def test_table_algebra_and_json():
    z = kh("1 2 1 2")
    moved = z.shift(1, 2)
    assert moved.torsion(-1, -5) == (2,)
    both = z + kh("", 1)
    assert both.rank(0, -1) == 2
    assert BigradedGroup.from_json(z.to_json()) == z
    groups = z.to_json()["groups"]
    assert {"i": -2, "j": -7, "rank": 0, "torsion": [2]} in groups
    f = FieldTable(GF(2), {(0, 1): 1})
    assert f.shift(-2, -5).table == {(-2, -4): 1}
    assert (f + f)[(0, 1)] == 2
    assert f.to_json()["field"] == "Z2"
    assert torsion_primes(z) == [2]
    assert tables_equal(kh("1", 2, "Q"), kh("", 1, "Q"))


def test_window():
    z = homology_of_word(word("D^2"), ZZ, i_range=(-4, -4))
    full = kh("D^2")
    assert {k: v for k, v in full.table.items() if k[0] == -4} == {k: v for k, v in z.table.items() if v[0] or v[1]}


def test_four_strand_braid():
    w = BraidWord(4, (1, 2, 3))
    assert homology_of_word(w, QQ).table == {(0, 1): 1, (0, -1): 1}
