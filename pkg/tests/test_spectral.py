from collections import defaultdict

import numpy as np
import pytest

from conftest import kh, word
from khtorsion.complex import Theory, build_complex
from khtorsion.diagram import braid_closure
from khtorsion.homology import field_homology
from khtorsion.linalg import GF, QQ, ZZ, RingError, SparseMat, rank
from khtorsion.spectral import (
    barnatan_dimensions,
    bockstein_pages,
    bockstein_prediction,
    e1_matches,
    filtered_pages,
    free_mod_p,
    induced_map,
    infinity_predictions,
    nu_acyclicity,
    page_checks,
    spectral_of_word,
    tbv_check,
)


def pages(text, theory, ring, strands=3):
    return spectral_of_word(word(text, strands), theory, ring)


def cube(text, ring=GF(2), strands=3, theory=Theory.KHOVANOV):
    return build_complex(braid_closure(word(text, strands)), theory, ring)


def total_homology_by_i(text, theory, ring, strands=3):
    """Homology of the unfiltered complex ``d + d_F``, by homological grading."""
    c = cube(text, ring, strands, theory)
    p = ring.characteristic
    entries = defaultdict(int)
    for th in (Theory.KHOVANOV, theory):
        s, t, v = c.edge_coo(th)
        for a, b, x in zip(s.tolist(), t.tolist(), v.tolist()):
            entries[(b, a)] += x
    gi = c.gen_i
    idx = {i: np.flatnonzero(gi == i) for i in set(gi.tolist())}
    local = {int(g): k for i, gs in idx.items() for k, g in enumerate(gs)}
    rk = {}
    for i in idx:
        if i + 1 not in idx:
            continue
        block = {
            (local[b], local[a]): x
            for (b, a), x in entries.items()
            if gi[a] == i and (x % p if p else x)
        }
        rk[i] = rank(SparseMat.from_dict(len(idx[i + 1]), len(idx[i]), block), ring)
    out = {i: len(g) - rk.get(i, 0) - rk.get(i - 1, 0) for i, g in idx.items()}
    return {i: v for i, v in sorted(out.items()) if v}


def test_unknot_lee():
    ps = pages("", Theory.LEE, QQ, strands=1)
    assert len(ps) == 1 and ps[0].total == 2 and not ps[0].ranks


def test_single_crossing_lee():
    ps = pages("1", Theory.LEE, QQ, strands=2)
    assert ps[0].table == ps[-1].table and ps[-1].total == 2


def test_delta_lee():
    ps = pages("D", Theory.LEE, QQ)
    assert ps[0].total == 4 and ps[-1].total == 4
    assert all(not p.ranks for p in ps)


def test_trefoil_lee():
    ps = pages("1 2 1 2", Theory.LEE, QQ)
    assert ps[0].total == 4
    assert ps[0].ranks == {(-3, -9): 1}
    assert ps[0].bidegree == (1, 4)
    assert ps[-1].total == 2 and len(ps) == 2


@pytest.mark.parametrize("text", ["D", "D^2", "1 2 1 2", "1 -2 1 -2", "D^2 2"])
def test_infinity_pages_equal_total_homology(text):
    lee = pages(text, Theory.LEE, QQ)[-1]
    assert lee.by_i() == total_homology_by_i(text, Theory.LEE, QQ)
    turner = pages(text, Theory.TURNER, GF(2))[-1]
    assert turner.by_i() == total_homology_by_i(text, Theory.TURNER, GF(2))
    assert turner.by_i() == barnatan_dimensions(cube(text))


def test_predictions():
    assert infinity_predictions(word("", 1))[0] == {0: 2}
    assert infinity_predictions(word("D^2"))[1] == {0: 2, -4: 6}
    assert infinity_predictions(word("D"))[0] == {0: 2, -2: 2}
    assert pages("D", Theory.LEE, QQ)[-1].by_i() == {0: 2, -2: 2}


@pytest.mark.parametrize("text", ["D^2", "1 2 1 2 1 2 1 2"])
def test_recursion_and_e1(text):
    for theory, ring in [(Theory.LEE, QQ), (Theory.LEE, GF(3)), (Theory.TURNER, GF(2))]:
        ps = pages(text, theory, ring)
        assert page_checks(ps).ok
        assert e1_matches(ps, kh(text, 3, str(ring)))
        assert not ps[-1].ranks


def test_filtered_pages_rejects():
    with pytest.raises(RingError):
        filtered_pages(cube("D"))
    d = braid_closure(word("D"))
    with pytest.raises(RingError):
        filtered_pages(build_complex(d, Theory.TURNER, GF(2), heights=(0, 1)))


@pytest.mark.parametrize("text", ["1 2 1 2", "D^2", "1 -2 1 -2", "D 1 1"])
def test_induced_ranks_match_first_pages(text):
    c2 = cube(text)
    assert induced_map(c2, "dT_star").ranks() == pages(text, Theory.TURNER, GF(2))[0].ranks
    c0 = cube(text, QQ)
    assert induced_map(c0, "dL_star").ranks() == pages(text, Theory.LEE, QQ)[0].ranks


def test_induced_map_validation():
    c = cube("1 2 1 2")
    with pytest.raises(ValueError):
        induced_map(c, "bogus")
    with pytest.raises(RingError):
        induced_map(c, "dL_star")
    with pytest.raises(RingError):
        induced_map(cube("1 2 1 2", QQ), "nu_star", QQ)
    with pytest.raises(RingError):
        induced_map(cube("1 2 1 2", theory=Theory.TURNER), "nu_star")


def test_tbv_trefoil():
    rep = tbv_check(cube("1 2 1 2"))
    assert rep.ok
    assert rep.details["rank_dT"] == rep.details["rank_rhs"] == 2


@pytest.mark.parametrize("text, strands", [("", 1), ("1 2 1 2 1 2 1 2", 3), ("D 2", 3)])
def test_tbv_and_nu(text, strands):
    c = cube(text, strands=strands)
    assert tbv_check(c).ok
    assert nu_acyclicity(c).ok


def test_bockstein_unknot():
    ps = bockstein_pages(cube("", ZZ, strands=1), 2)
    assert len(ps) == 1 and ps[0].table == free_mod_p(kh("", 1))


def test_bockstein_trefoil():
    z = kh("1 2 1 2")
    ps = bockstein_pages(cube("1 2 1 2", ZZ), 2, z)
    assert ps[0].total == 6 and ps[0].rank_total() == 1
    assert ps[0].ranks == {(-3, -7): 1}
    assert ps[1].total == 4 and ps[-1].table == free_mod_p(z)
    for r, pg in enumerate(ps, start=1):
        assert (pg.table, pg.ranks) == bockstein_prediction(z, 2, r)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_bockstein_no_three_torsion(q):
    text = " ".join(["1 2"] * q)
    z = kh(text)
    ps = bockstein_pages(cube(text, ZZ), 3, z)
    assert len(ps) == 1 and ps[0].table == free_mod_p(z)


def test_bockstein_from_field_complex():
    ps = bockstein_pages(cube("1 2 1 2", GF(2)), 2)
    assert ps[-1].table == free_mod_p(kh("1 2 1 2"))


def test_page_json():
    js = pages("1 2 1 2", Theory.LEE, QQ)[0].to_json()
    assert js["r"] == 1 and {"i": -3, "j": -9, "rank": 1} in js["ranks"]
